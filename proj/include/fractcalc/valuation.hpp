/*
 * valuation.hpp — renormalized asymptotic valuations and duality structure
 *
 * A vanishing quantity x, measured against a reference scale delta in (0,1),
 * carries the finite effective value
 *
 *     v(x) = | log_delta( x / delta ) |
 *
 * which is zero at x = delta and grows as x leaves the scale in either
 * direction.  The normal forms x = delta * delta^{-v} (above the scale) and
 * x = delta * delta^{+v} (below it) recover v exactly.
 *
 * v is a discretely valued ultrametric norm up to an explicit finite-delta
 * slack:  v(x1+x2) <= max(v(x1),v(x2)) + ln 2 / ln(1/delta).  All "up to
 * o(1)" statements of the underlying theory are exposed here as bounds of
 * the form C / ln(1/delta) with C computable from the inputs.
 *
 * A dual pairing links a fast null asymptotic x^- to a slow one x^+ through
 *
 *     x^- x^+ = lambda * delta^2,     v(x^-) v(x^+) = mu,
 *
 * and the shape of lambda(delta) classifies the pair: constant -> self dual,
 * log-power -> weakly self dual, delta-power -> strictly dual.  The strictly
 * dual valuation solves v^2 + kappa v - mu = 0.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace fractcalc {

// Reference infinitesimal; log_recip() = ln(1/delta) > 0.
struct Scale {
    double delta;

    explicit Scale(double d);
    double log_recip() const;
};

double valuation(double x, const Scale& scale);

// Normal forms: value with valuation v above the scale (delta^{1-v}) and
// below it (delta^{1+v}).
double normal_form_plus(double v, const Scale& scale);
double normal_form_minus(double v, const Scale& scale);

struct UltrametricSlack {
    double lhs;    // v(x1 + x2)
    double bound;  // max(v(x1), v(x2)) + ln 2 / ln(1/delta)
};

// Strong triangle inequality in its exact finite-delta form.  Requires x1,
// x2 and x1+x2 inside the asymptotic window (0, 1).
UltrametricSlack ultrametric_slack(double x1, double x2, const Scale& scale);

struct InvarianceResiduals {
    double scale_multiple;   // | v(k x)          - v(x) |   <= |ln k|  / ln(1/delta)
    double scale_reparam;    // | v_{k delta}(x)  - v(x) |
    double inversion;        // | v_{1/delta}(1/x) - v(x) |   (exact zero)
    double translation;      // | v(x + x0)       - v(x) |   <= ln 2    / ln(1/delta)
};

InvarianceResiduals invariance_residuals(double x, double k, double x0, const Scale& scale);

// --- refined classification of sequences against a scale sequence --------

struct SequenceSpec {
    std::function<double(double)> generator;  // n -> value, n integral
    std::uint64_t n0 = 1024;                  // first sample
    int levels = 20;                          // J: samples at n0 * 2^j, j = 0..J

    std::vector<std::uint64_t> schedule() const;
};

enum class SequenceLabel {
    IrrelevantNull,       // exponent offset -> 0
    IrrelevantDivergent,  // offset oscillates or diverges
    RelevantPlus,         // |a_n| = scale^{1 - k+},  k+ in (0,1)
    RelevantMinus,        // |a_n| = scale^{1 + k-},  k- > 1
    Boundary,             // offset in (0,1] or exactly -1
};

enum class DecayRate { Constant, SlowlyVarying, FastNull };

struct SequenceClass {
    SequenceLabel label;
    double exponent_estimate;  // limit of v_n; NaN when divergent
    DecayRate rate;
};

const char* to_string(SequenceLabel label);
const char* to_string(DecayRate rate);

SequenceClass classify_sequence(const SequenceSpec& seq, const SequenceSpec& scale_seq);

// --- duality structure ----------------------------------------------------

enum class DualityMode { SelfDual, WeaklySelfDual, CriticallySelfDual, StrictlyDual };

const char* to_string(DualityMode mode);

struct DualityParams {
    double lambda0 = 1.0;  // > 0
    double kappa = 0.0;    // >= 0; > 0 for strictly dual
    double mu = 0.0;       // > 0
    double alpha = 1.0;    // > 0; ratio for weakly self dual pairs
    DualityMode mode = DualityMode::SelfDual;
    // mu must vary slower than the scale: mu >= delta^a for this a in (0,1).
    double slow_variation_exponent = 0.5;

    void validate(const Scale& scale) const;
};

struct DualPair {
    double v_minus;            // mu / v_plus
    double x_minus;            // lambda0 * delta^{1 + v_minus}
    double lambda;             // lambda0 * delta^{v_minus - v_plus}
    DualityMode lambda_class;  // SelfDual or StrictlyDual from the exponent
};

DualPair dual_pair(double v_plus, const DualityParams& params, const Scale& scale,
                   double consistency_tol = 1e-9);

// Positive root of v^2 + kappa v - mu = 0, evaluated cancellation-free.
double solve_duality_quadratic(double kappa, double mu);

struct ArithmeticalFixedPoints {
    double phi1, phi2;      // roots of phi^2 - (p/q) phi - 1 = 0
    double alpha1, alpha2;  // phi^2
    bool is_quadratic_irrational;
};

ArithmeticalFixedPoints arithmetical_fixed_points(long long p, long long q);

// Universal weakly self dual value gamma * |lnln(1/delta) / ln delta| with
// gamma = k/(alpha-1) > 0.  At alpha = 1 the critical limit gamma must be
// supplied explicitly.
double weakly_self_dual_valuation(double k, double alpha, const Scale& scale,
                                  std::optional<double> critical_gamma = std::nullopt);

// Renormalized product delta * delta^{-v(x1) v(x2)}; v is multiplicative on it.
double renormalized_product(double x1, double x2, const Scale& scale);

// --- renormalization-group bookkeeping ------------------------------------

// Z = delta^{-v_plus}
double rg_renormalization_constant(double v_plus, const Scale& scale);

struct RgPhenomenologicalValue {
    double value;    // xi^v with xi = delta/x, v = valuation(x)
    double z_route;  // same quantity through x^{-v} and the constant Z
};

RgPhenomenologicalValue rg_phenomenological_value(double x, const Scale& scale);

// Central finite difference in ln(delta) of the scale-free combination
// X_ph / delta^v at fixed x.  With v frozen at valuation(x, scale) the
// combination is analytically constant and the residual is pure noise; a
// supplied v_of_delta (e.g. a staircase) turns the residual into the flow
// beta-term, which is reported rather than asserted zero.
double rg_callan_symanzik_residual(double x, const Scale& scale, double h = 1e-4,
                                   const std::function<double(double)>& v_of_delta = {});

}  // namespace fractcalc
