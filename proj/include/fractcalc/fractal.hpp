/*
 * fractal.hpp — IFS attractors, mass functions, and staircase valuations
 *
 * A curve IFS is a chain of planar contracting similarities whose attractor
 * is parametrized by base-m digits of xi in [0,1].  The s-mass of a stretch
 * of the attractor is the limit of sum |F(xi_{k+1}) - F(xi_k)|^s over the
 * natural m-adic partitions; at s equal to the similarity dimension it is
 * exactly level-independent for equal-ratio maps.
 *
 * A Cantor seed (m equal pieces of length `ratio`, equally spaced) carries
 * the normalized mass staircase v with v(xi) = H^s(F cap (0,xi)) / H^s(F):
 * constant on gaps, equal increments 1/m^n across the m^n surviving
 * intervals.  Evaluation walks base-m digits of xi, so it is exact to the
 * configured depth; the degenerate seed with m * ratio = 1 gives v(x) = x.
 * Beyond [0,1] the staircase extends additively, v(x+1) = v(x) + 1, and
 * oddly, v(-x) = -v(x).
 */
#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fractcalc {

struct SimilarityMap {
    double scale_factor;  // in (0,1)
    double rotation;      // radians
    std::complex<double> translation;
    bool conjugate = false;

    std::complex<double> apply(std::complex<double> z) const;
};

struct IfsSpec {
    std::vector<SimilarityMap> maps;
    std::string name;

    void validate() const;
    // Largest |map_i(1) - map_{i+1}(0)| plus the unit-interval endpoint
    // mismatch; zero for a proper curve chain.
    double max_chain_gap() const;
    // Root s of sum_i scale_i^s = 1 (Moran equation).
    double similarity_dimension() const;
};

// The four-map Koch family with angle alpha in (0, pi/2); contraction
// L = 1 / (2 + 2 cos alpha).
IfsSpec koch_ifs(double alpha);

struct FractalCurve {
    std::vector<std::complex<double>> polyline;  // m^level segments
    int level = 0;
    double dimension_s = 1.0;
    IfsSpec ifs;

    double length() const;
    // Attractor point at parameter xi in [0,1] through its base-m address.
    std::complex<double> point_at(double xi) const;
};

inline constexpr std::size_t kDefaultSegmentCap = std::size_t(1) << 22;

FractalCurve hutchinson_iterate(const IfsSpec& ifs,
                                const std::vector<std::complex<double>>& initiator, int n,
                                std::size_t segment_cap = kDefaultSegmentCap);
FractalCurve hutchinson_iterate(const IfsSpec& ifs, int n,
                                std::size_t segment_cap = kDefaultSegmentCap);

// Partition sum Sum |F(xi_k) - F(xi_{k+1})|^s over the level-n m-adic
// partition of [a,b], endpoints included.
double mass_sum_at_level(const FractalCurve& curve, double s, double a, double b, int level);

// Refines mass_sum_at_level until the relative change drops below tol;
// throws on non-convergence, reporting the last two iterates.
double mass_function(const FractalCurve& curve, double s, double a, double b,
                     double tol = 1e-9, int level_cap = 8);

struct CantorSeed {
    int pieces;    // m >= 2
    double ratio;  // in (0, 1/m]; m * ratio = 1 degenerates to the identity

    void validate() const;
    double dimension() const;      // ln m / ln(1/ratio)
    bool is_identity() const;      // no gaps
    double gap_width() const;      // (1 - m*ratio) / (m-1)
    double piece_offset(int i) const;
};

struct Staircase {
    std::vector<std::pair<double, double>> breakpoints;  // (xi, value), sorted
    double dimension_s = 1.0;
    int level = 1;  // digit budget for evaluation
    std::optional<CantorSeed> seed;
    std::string seed_name;

    double eval(double x) const;      // [0,1] -> [0,1]
    double extend(double x) const;    // additive-periodic and odd extension
    double inverse(double u) const;   // [0,1] -> a support point x with v(x)=u
    // Depth at which x falls into a gap, if it does within the budget.
    std::optional<int> gap_depth(double x) const;
};

inline constexpr int kStaircaseLevelCap = 60;

Staircase staircase_from_cantor(const CantorSeed& seed, int level);

double staircase_eval(const Staircase& st, double x);
double extend_staircase(const Staircase& st, double x);

// Level-j surviving interval around a point of the seed set, with its
// staircase values; nullopt when x sits in a gap at depth <= level_j.
struct SupportInterval {
    double x_lo, x_hi;
    double u_lo, u_hi;
};
std::optional<SupportInterval> survivor_at(const Staircase& st, double x, int level_j);

// Gap midpoints of the seed construction in (level, left-to-right) order.
std::vector<double> gap_midpoints(const CantorSeed& seed, std::size_t count);

// Squares circumscribing the quadratic Koch (type 2) boundary:
// 4 a_{2k} = a_{2k-1}, a_{2k+1} = 1 + a_{2k}, a_{-1} = 1, and the square
// -a_{2k} <= x,y <= a_{2k+1}.  a_{2k} -> 1/3 while a_{2k+1} -> 4/3.
struct BoundarySquare {
    double a_even;   // a_{2k}
    double a_odd;    // a_{2k+1}
    double lo, hi;   // square extent per axis: [lo, hi] = [-a_even, a_odd]
};

BoundarySquare quadratic_koch_boundary(int k);

}  // namespace fractcalc
