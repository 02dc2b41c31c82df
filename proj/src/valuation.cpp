#include "fractcalc/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fractcalc {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::domain_error(what);
}

// Linear fit of y against x; returns the slope.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / double(n);
    double my = std::accumulate(y.begin(), y.end(), 0.0) / double(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Scale::Scale(double d) : delta(d) {
    require(d > 0.0 && d < 1.0, "Scale: delta must lie strictly in (0,1)");
}

double Scale::log_recip() const { return -std::log(delta); }

double valuation(double x, const Scale& scale) {
    require(x > 0.0, "valuation: x must be positive");
    return std::abs(std::log(x / scale.delta) / std::log(scale.delta));
}

double normal_form_plus(double v, const Scale& scale) { return std::pow(scale.delta, 1.0 - v); }

double normal_form_minus(double v, const Scale& scale) { return std::pow(scale.delta, 1.0 + v); }

UltrametricSlack ultrametric_slack(double x1, double x2, const Scale& scale) {
    const bool in_window =
        x1 > 0.0 && x2 > 0.0 && x1 < 1.0 && x2 < 1.0 && (x1 + x2) < 1.0;
    require(in_window, "ultrametric_slack: x1, x2, x1+x2 must lie in the window (0,1)");
    UltrametricSlack r;
    r.lhs = valuation(x1 + x2, scale);
    r.bound = std::max(valuation(x1, scale), valuation(x2, scale)) +
              std::log(2.0) / scale.log_recip();
    return r;
}

InvarianceResiduals invariance_residuals(double x, double k, double x0, const Scale& scale) {
    require(x > 0.0 && k > 0.0 && k * x < 1.0 && x < 1.0,
            "invariance_residuals: x and kx must lie in the window (0,1)");
    require(std::abs(x0) >= scale.delta && std::abs(x0) <= std::abs(x) && x + x0 > 0.0,
            "invariance_residuals: need delta <= |x0| <= |x| and x + x0 > 0");
    const double v = valuation(x, scale);

    InvarianceResiduals r;
    r.scale_multiple = std::abs(valuation(k * x, scale) - v);
    r.scale_reparam = std::abs(valuation(x, Scale(k * scale.delta)) - v);
    // Inversion pairs the reciprocal scale 1/delta, which an ordinary Scale
    // cannot carry; evaluate |log_{1/delta}((1/x)/(1/delta))| directly.
    const double v_inv = std::abs(std::log((1.0 / x) * scale.delta) / scale.log_recip());
    r.inversion = std::abs(v_inv - v);
    r.translation = std::abs(valuation(x + x0, scale) - v);
    return r;
}

std::vector<std::uint64_t> SequenceSpec::schedule() const {
    if (levels < 1 || n0 == 0) throw std::domain_error("SequenceSpec: need n0 >= 1, levels >= 1");
    // Samples must stay exactly representable as doubles for the generator.
    if (levels > 40 || n0 > (std::uint64_t(1) << 40))
        throw std::domain_error("SequenceSpec: schedule exceeds 2^40 doublings");
    std::vector<std::uint64_t> out;
    out.reserve(std::size_t(levels) + 1);
    for (int j = 0; j <= levels; ++j) out.push_back(n0 << j);
    return out;
}

const char* to_string(SequenceLabel label) {
    switch (label) {
        case SequenceLabel::IrrelevantNull: return "IrrelevantNull";
        case SequenceLabel::IrrelevantDivergent: return "IrrelevantDivergent";
        case SequenceLabel::RelevantPlus: return "RelevantPlus";
        case SequenceLabel::RelevantMinus: return "RelevantMinus";
        case SequenceLabel::Boundary: return "Boundary";
    }
    return "?";
}

const char* to_string(DecayRate rate) {
    switch (rate) {
        case DecayRate::Constant: return "Constant";
        case DecayRate::SlowlyVarying: return "SlowlyVarying";
        case DecayRate::FastNull: return "FastNull";
    }
    return "?";
}

SequenceClass classify_sequence(const SequenceSpec& seq, const SequenceSpec& scale_seq) {
    const auto ns = seq.schedule();
    if (scale_seq.schedule() != ns)
        throw std::domain_error("classify_sequence: sequence and scale must share a schedule");

    // Signed exponent offsets e_n with |a_n| = scale_n^{1 + e_n}; v_n = |e_n|.
    std::vector<double> ln_n, e, v;
    ln_n.reserve(ns.size());
    for (std::uint64_t n : ns) {
        const double a = scale_seq.generator(double(n));
        require(a > 0.0 && a < 1.0 && std::isfinite(a),
                "classify_sequence: scale sequence must be strictly positive and null");
        const double s = seq.generator(double(n));
        require(std::isfinite(s) && s != 0.0,
                "classify_sequence: sequence must be finite and nonzero on the schedule");
        const double en = std::log(std::abs(s)) / std::log(a) - 1.0;
        ln_n.push_back(std::log(double(n)));
        e.push_back(en);
        v.push_back(std::abs(en));
    }
    const double a_first = scale_seq.generator(double(ns.front()));
    const double a_last = scale_seq.generator(double(ns.back()));
    require(a_last < a_first, "classify_sequence: scale sequence must be null (decreasing)");

    // Trivial case: the sequence coincides with the scale to working precision.
    const double v_max = *std::max_element(v.begin(), v.end());
    if (v_max <= 1e-12) return {SequenceLabel::IrrelevantNull, 0.0, DecayRate::Constant};

    // Oscillation: count sign alternations of v_n - median beyond a noise
    // threshold; more than ceil(J/4) of them means no limit exists.
    const double med = median_of(v);
    const double osc_threshold = 1e-6 * std::max(med, 1e-12);
    int alternations = 0, prev_sign = 0;
    for (double vi : v) {
        const double d = vi - med;
        if (std::abs(d) <= osc_threshold) continue;
        const int s = d > 0.0 ? 1 : -1;
        if (prev_sign != 0 && s != prev_sign) ++alternations;
        prev_sign = s;
    }
    const int max_alt = (seq.levels + 3) / 4;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (alternations > max_alt)
        return {SequenceLabel::IrrelevantDivergent, nan, DecayRate::Constant};

    // Rate of v_n from the log-log slope over the whole grid.
    std::vector<double> ln_v, ln_n_used, ln_v_tail, ln_n_tail;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] <= 0.0) continue;
        ln_n_used.push_back(ln_n[i]);
        ln_v.push_back(std::log(v[i]));
    }
    const double slope = ln_v.size() >= 2 ? ls_slope(ln_n_used, ln_v) : 0.0;
    DecayRate rate = DecayRate::FastNull;
    if (std::abs(slope) < 0.01) rate = DecayRate::Constant;
    else if (slope >= -0.99 && slope < -0.01) rate = DecayRate::SlowlyVarying;

    // Tail slope over the last quarter of the samples decides divergence:
    // v_n rising at the tail has no finite limit.
    const std::size_t tail = std::max<std::size_t>(5, v.size() / 4);
    for (std::size_t i = v.size() - std::min(tail, v.size()); i < v.size(); ++i) {
        if (v[i] <= 0.0) continue;
        ln_n_tail.push_back(ln_n[i]);
        ln_v_tail.push_back(std::log(v[i]));
    }
    const double tail_slope = ln_v_tail.size() >= 2 ? ls_slope(ln_n_tail, ln_v_tail) : 0.0;
    if (tail_slope > 0.01) return {SequenceLabel::IrrelevantDivergent, nan, rate};

    if (slope < -0.01)  // v_n -> 0: redressed null sequence
        return {SequenceLabel::IrrelevantNull, 0.0, rate};

    // Constant v_n: slowly varying prefactors M_n shift the offsets by
    // log M / log n, so fit e_j against 1/ln n_j over the tail half and
    // keep the intercept as the limit.
    const std::size_t half = e.size() / 2;
    std::vector<double> inv_ln(e.begin() + half, e.end());
    std::vector<double> e_tail(e.begin() + half, e.end());
    for (std::size_t i = 0; i < inv_ln.size(); ++i) inv_ln[i] = 1.0 / ln_n[half + i];
    const double fit_slope = ls_slope(inv_ln, e_tail);
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < inv_ln.size(); ++i) {
        mean_x += inv_ln[i];
        mean_y += e_tail[i];
    }
    mean_x /= double(inv_ln.size());
    mean_y /= double(inv_ln.size());
    const double e_est = mean_y - fit_slope * mean_x;
    const double snap = 1e-9;

    if (e_est < -1.0 - snap)
        throw std::domain_error("classify_sequence: sequence is not null relative to the scale");
    if (std::abs(e_est) <= snap) return {SequenceLabel::IrrelevantNull, 0.0, rate};
    if (std::abs(e_est + 1.0) <= snap) return {SequenceLabel::Boundary, 1.0, rate};
    if (e_est > -1.0 && e_est < 0.0) return {SequenceLabel::RelevantPlus, -e_est, rate};
    if (e_est > 1.0 + snap) return {SequenceLabel::RelevantMinus, e_est, rate};
    return {SequenceLabel::Boundary, e_est, rate};
}

const char* to_string(DualityMode mode) {
    switch (mode) {
        case DualityMode::SelfDual: return "SelfDual";
        case DualityMode::WeaklySelfDual: return "WeaklySelfDual";
        case DualityMode::CriticallySelfDual: return "CriticallySelfDual";
        case DualityMode::StrictlyDual: return "StrictlyDual";
    }
    return "?";
}

void DualityParams::validate(const Scale& scale) const {
    require(lambda0 > 0.0, "DualityParams: lambda0 must be positive");
    require(kappa >= 0.0, "DualityParams: kappa must be nonnegative");
    require(mu > 0.0, "DualityParams: mu must be positive");
    require(alpha > 0.0, "DualityParams: alpha must be positive");
    if (mode == DualityMode::StrictlyDual)
        require(kappa > 0.0, "DualityParams: strictly dual needs kappa > 0");
    if (mode == DualityMode::SelfDual)
        require(kappa == 0.0 && alpha == 1.0, "DualityParams: self dual needs kappa = 0, alpha = 1");
    require(slow_variation_exponent > 0.0 && slow_variation_exponent < 1.0,
            "DualityParams: slow variation exponent must lie in (0,1)");
    require(mu >= std::pow(scale.delta, slow_variation_exponent),
            "DualityParams: mu must vary slower than the scale (mu >= delta^a)");
}

DualPair dual_pair(double v_plus, const DualityParams& params, const Scale& scale,
                   double consistency_tol) {
    params.validate(scale);
    if (v_plus == 0.0) throw std::domain_error("dual_pair: v_plus must be nonzero");
    require(v_plus > 0.0, "dual_pair: v_plus must be positive");

    DualPair r;
    r.v_minus = params.mu / v_plus;
    r.x_minus = params.lambda0 * std::pow(scale.delta, 1.0 + r.v_minus);
    const double exponent = r.v_minus - v_plus;
    r.lambda = params.lambda0 * std::pow(scale.delta, exponent);
    r.lambda_class = std::abs(exponent) <= consistency_tol ? DualityMode::SelfDual
                                                           : DualityMode::StrictlyDual;

    // Consistency with the declared mode through its defining relation.
    bool ok = true;
    switch (params.mode) {
        case DualityMode::SelfDual:
        case DualityMode::CriticallySelfDual:
            ok = std::abs(r.v_minus - v_plus) <= consistency_tol * std::max(1.0, v_plus);
            break;
        case DualityMode::WeaklySelfDual:
            ok = std::abs(r.v_minus - params.alpha * v_plus) <=
                 consistency_tol * std::max(1.0, params.alpha * v_plus);
            break;
        case DualityMode::StrictlyDual: {
            // One of the two valuations must be a root of v^2 + kappa v - mu.
            const auto q = [&](double v) { return v * v + params.kappa * v - params.mu; };
            const double res = std::min(std::abs(q(v_plus)), std::abs(q(r.v_minus)));
            ok = res <= consistency_tol * std::max(1.0, params.mu);
            break;
        }
    }
    if (!ok) {
        std::ostringstream msg;
        msg << "dual_pair: lambda classification " << to_string(r.lambda_class)
            << " is inconsistent with declared mode " << to_string(params.mode)
            << " (v+ = " << v_plus << ", v- = " << r.v_minus << ")";
        throw std::domain_error(msg.str());
    }
    return r;
}

double solve_duality_quadratic(double kappa, double mu) {
    require(kappa >= 0.0, "solve_duality_quadratic: kappa must be nonnegative");
    require(mu > 0.0, "solve_duality_quadratic: mu must be positive");
    return 2.0 * mu / (kappa + std::sqrt(kappa * kappa + 4.0 * mu));
}

ArithmeticalFixedPoints arithmetical_fixed_points(long long p, long long q) {
    if (q == 0) throw std::domain_error("arithmetical_fixed_points: q must be nonzero");
    const long long g = std::gcd(p < 0 ? -p : p, q < 0 ? -q : q);
    if (g > 1) { p /= g; q /= g; }
    if (q < 0) { p = -p; q = -q; }

    const double r = double(p) / double(q);
    const double root = std::sqrt(r * r + 4.0);
    ArithmeticalFixedPoints out;
    out.phi1 = 0.5 * (r + root);
    out.phi2 = 0.5 * (r - root);
    out.alpha1 = out.phi1 * out.phi1;
    out.alpha2 = out.phi2 * out.phi2;

    const long long disc = p * p + 4 * q * q;
    const long long s = std::llround(std::sqrt(double(disc)));
    out.is_quadratic_irrational = !(s * s == disc || (s + 1) * (s + 1) == disc ||
                                    (s > 0 && (s - 1) * (s - 1) == disc));
    return out;
}

double weakly_self_dual_valuation(double k, double alpha, const Scale& scale,
                                  std::optional<double> critical_gamma) {
    double gamma;
    if (std::abs(alpha - 1.0) <= 1e-15) {
        if (!critical_gamma)
            throw std::domain_error(
                "weakly_self_dual_valuation: alpha = 1 is singular without a critical gamma");
        gamma = *critical_gamma;
    } else {
        gamma = k / (alpha - 1.0);
        require(gamma > 0.0,
                "weakly_self_dual_valuation: need k/(alpha-1) > 0 (sign of k must follow alpha-1)");
    }
    const double L = scale.log_recip();
    return gamma * std::abs(std::log(L) / std::log(scale.delta));
}

double renormalized_product(double x1, double x2, const Scale& scale) {
    require(x1 > 0.0 && x1 < 1.0 && x2 > 0.0 && x2 < 1.0,
            "renormalized_product: factors must lie in the window (0,1)");
    const double v = valuation(x1, scale) * valuation(x2, scale);
    return std::pow(scale.delta, 1.0 - v);
}

double rg_renormalization_constant(double v_plus, const Scale& scale) {
    require(v_plus >= 0.0, "rg_renormalization_constant: v_plus must be nonnegative");
    return std::pow(scale.delta, -v_plus);
}

RgPhenomenologicalValue rg_phenomenological_value(double x, const Scale& scale) {
    require(x > scale.delta, "rg_phenomenological_value: need delta < x");
    const double v = valuation(x, scale);
    RgPhenomenologicalValue r;
    r.value = std::pow(scale.delta / x, v);
    r.z_route = std::pow(x, -v) / rg_renormalization_constant(v, scale);
    return r;
}

double rg_callan_symanzik_residual(double x, const Scale& scale, double h,
                                   const std::function<double(double)>& v_of_delta) {
    require(h > 0.0 && h < 1.0, "rg_callan_symanzik_residual: need 0 < h < 1");
    const double frozen_v = v_of_delta ? 0.0 : valuation(x, scale);
    const auto combo = [&](double d) {
        require(d > 0.0 && d < x, "rg_callan_symanzik_residual: scale stepped outside (0, x)");
        const double v = v_of_delta ? v_of_delta(d) : frozen_v;
        // X_ph / Z_abs = (d/x)^v * d^{-v}; the d-dependence cancels only when
        // v is held fixed, which is exactly what the residual probes.
        return std::pow(d / x, v) * std::pow(d, -v);
    };
    const double lo = scale.delta * std::exp(-h);
    const double hi = scale.delta * std::exp(h);
    return (combo(hi) - combo(lo)) / (2.0 * h);
}

}  // namespace fractcalc
