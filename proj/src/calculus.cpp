#include "fractcalc/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fractcalc {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::domain_error(what);
}

// Recursive descent over the seed construction, accumulating the midpoint
// contribution of every level-L surviving interval that meets [a, b].
void stieltjes_cell(const std::function<double(double)>& g, const Staircase& st,
                    const CantorSeed& seed, double x0, double width, double u0, double du,
                    int depth, double a, double b, double& sum) {
    const double x1 = x0 + width;
    if (x1 <= a || x0 >= b) return;
    if (depth == 0) {
        double u_lo = u0, u_hi = u0 + du;
        if (x0 < a) u_lo = st.extend(a);
        if (x1 > b) u_hi = st.extend(b);
        if (u_hi > u_lo) sum += g(0.5 * (u_lo + u_hi)) * (u_hi - u_lo);
        return;
    }
    for (int i = 0; i < seed.pieces; ++i)
        stieltjes_cell(g, st, seed, x0 + seed.piece_offset(i) * width, width * seed.ratio,
                       u0 + i * du / seed.pieces, du / seed.pieces, depth - 1, a, b, sum);
}

double adaptive_simpson(const std::function<double(double)>& g, double a, double fa, double m,
                        double fm, double b, double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = g(lm), frm = g(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(g, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(g, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_smooth(const std::function<double(double)>& g, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = g(a), fm = g(m), fb = g(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(g, a, fa, m, fm, b, fb, whole, tol, 40);
}

FractalDerivative local_fractional_derivative(const FractalFunction& ff, double x, int level,
                                              double tol) {
    require(x >= 0.0 && x <= ff.domain_length,
            "local_fractional_derivative: x outside the domain [0, l]");
    require(level >= 2 && level <= ff.staircase.level,
            "local_fractional_derivative: level must lie in [2, staircase level]");

    // Work inside the unit cell containing x; the extension is additive.
    const double cell = std::floor(std::min(x, std::nextafter(ff.domain_length, 0.0)));
    const double frac = std::min(std::max(x - cell, 0.0), 1.0);

    const auto gap = ff.staircase.gap_depth(frac);
    if (gap && *gap <= level) return {0.0, false};

    const int m = ff.staircase.seed ? ff.staircase.seed->pieces : 2;
    double prev_q = 0.0, accelerated = 0.0, prev_accelerated = 0.0;
    bool have_prev = false, have_acc = false;
    for (int j = 2; j <= level; ++j) {
        const auto iv = survivor_at(ff.staircase, frac, j);
        if (!iv) return {0.0, false};
        const double fu_hi = ff.outer(cell + iv->u_hi);
        const double fu_lo = ff.outer(cell + iv->u_lo);
        const double q = (fu_hi - fu_lo) / (iv->u_hi - iv->u_lo);
        if (!std::isfinite(q) || std::abs(q) > 1e12)
            throw std::runtime_error(
                "local_fractional_derivative: increment quotient diverges; limit does not exist");
        if (have_prev) {
            // Richardson step for the leading O(m^-j) error term.  The
            // accelerated value alone can sit on a false fixed point during
            // a run of equal digits, so the raw quotient increment (which
            // scales with the remaining error) must be small as well.
            accelerated = (m * q - prev_q) / double(m - 1);
            const double norm = std::max(1.0, std::abs(accelerated));
            if (have_acc && std::abs(q - prev_q) <= tol * norm &&
                std::abs(accelerated - prev_accelerated) <= tol * norm)
                return {accelerated, true};
            prev_accelerated = accelerated;
            have_acc = true;
        }
        prev_q = q;
        have_prev = true;
    }
    return {have_acc ? accelerated : prev_q, true};
}

StieltjesResult stieltjes_integral(const std::function<double(double)>& g, const Staircase& st,
                                   double a, double b, int level) {
    require(a < b, "stieltjes_integral: need a < b");
    require(a >= 0.0, "stieltjes_integral: the accumulated measure starts at 0");
    require(level >= 1, "stieltjes_integral: level must be >= 1");

    double sum = 0.0;
    if (!st.seed) throw std::domain_error("stieltjes_integral: staircase must be seed-backed");
    if (level > st.level)
        throw std::domain_error(
            "stieltjes_integral: partition level exceeds the staircase construction level");
    const CantorSeed& seed = *st.seed;
    const int depth = level;
    for (double cell = std::floor(a); cell < b; cell += 1.0) {
        const auto shifted = [&](double u) { return g(cell + u); };
        double cell_sum = 0.0;
        const double lo = std::max(a - cell, 0.0), hi = std::min(b - cell, 1.0);
        if (seed.is_identity()) {
            // Uniform cells: plain composite midpoint rule on [lo, hi].
            const double n = std::pow(double(seed.pieces), depth);
            const long long k0 = (long long)std::floor(lo * n), k1 = (long long)std::ceil(hi * n);
            for (long long k = k0; k < k1; ++k) {
                const double ulo = std::max(lo, double(k) / n), uhi = std::min(hi, double(k + 1) / n);
                if (uhi > ulo) cell_sum += shifted(0.5 * (ulo + uhi)) * (uhi - ulo);
            }
        } else {
            stieltjes_cell(shifted, st, seed, 0.0, 1.0, 0.0, 1.0, depth, lo, hi, cell_sum);
        }
        sum += cell_sum;
    }

    StieltjesResult r;
    r.value = sum;
    r.ordinary_value = integrate_smooth(g, st.extend(a), st.extend(b));
    r.discrepancy = std::abs(r.value - r.ordinary_value);
    return r;
}

RenormalizabilityCheck derivative_renormalizability_check(
    const std::function<double(double)>& f, double x0, const Scale& scale,
    const std::vector<double>& h_list) {
    require(!h_list.empty(), "derivative_renormalizability_check: h_list must not be empty");
    double h_min = h_list.front();
    for (double h : h_list) {
        require(h > 0.0, "derivative_renormalizability_check: increments must be positive");
        h_min = std::min(h_min, h);
    }
    // First-order regime: the scale sits far below every increment.
    const double delta = std::min(h_min * h_min, scale.delta);
    const auto vmap = [&](double y) { return y / delta - 1.0; };

    RenormalizabilityCheck r{0.0, 0.0, 0.0};
    for (double h : h_list) {
        const double df = f(x0 + h) - f(x0);
        const double q_ord = df / h;
        // The normalization by ln(1/delta) cancels between numerator and
        // denominator; differencing before dividing keeps linear f exact.
        const double q_ren = (vmap(f(x0 + h)) - vmap(f(x0))) / (vmap(x0 + h) - vmap(x0));
        r.max_discrepancy = std::max(r.max_discrepancy, std::abs(q_ord - q_ren));
        if (h == h_min) {
            r.ordinary_quotient = q_ord;
            r.renormalized_quotient = q_ren;
        }
    }
    return r;
}

}  // namespace fractcalc
