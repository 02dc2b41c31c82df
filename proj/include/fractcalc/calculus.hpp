/*
 * calculus.hpp — differentiation and integration in the staircase variable
 *
 * With u = v(x) the staircase change of variable, the local fractional
 * derivative of f∘v at a support point x is the limit of the increment
 * quotient [f(u_hi) - f(u_lo)] / (u_hi - u_lo) across the level-n surviving
 * interval around x; on gaps the staircase is constant and the derivative
 * is 0 by convention, with an explicit on_support flag.
 *
 * The Stieltjes integral of g against dv concentrates the measure on the
 * seed set.  In the u variable the level-n increments are uniform, so the
 * increment sum is the composite midpoint rule on [v(a), v(b)]; an ordinary
 * adaptive quadrature of the same interval is computed alongside as the
 * independent change-of-variable route.
 */
#pragma once

#include <functional>
#include <vector>

#include "fractcalc/fractal.hpp"
#include "fractcalc/valuation.hpp"

namespace fractcalc {

struct FractalFunction {
    std::function<double(double)> outer;  // f(u)
    Staircase staircase;                  // u = v(x)
    double domain_length = 1.0;           // x in [0, l]
};

struct FractalDerivative {
    double value;
    bool on_support;
};

FractalDerivative local_fractional_derivative(const FractalFunction& ff, double x, int level,
                                              double tol = 1e-6);

struct StieltjesResult {
    double value;           // increment (midpoint-in-u) sum
    double ordinary_value;  // change-of-variable quadrature of g on [v(a), v(b)]
    double discrepancy;     // |value - ordinary_value|
};

StieltjesResult stieltjes_integral(const std::function<double(double)>& g, const Staircase& st,
                                   double a, double b, int level);

// Adaptive Simpson quadrature; used as the ordinary route and handy for
// oracles elsewhere.
double integrate_smooth(const std::function<double(double)>& g, double a, double b,
                        double tol = 1e-11);

struct RenormalizabilityCheck {
    double max_discrepancy;        // max over h of |ordinary - renormalized|
    double ordinary_quotient;      // at the smallest h
    double renormalized_quotient;  // at the smallest h
};

// Ordinary difference quotients against quotients of first-order
// renormalized increments (log y/delta ~ y/delta - 1) at delta = min(h)^2.
RenormalizabilityCheck derivative_renormalizability_check(
    const std::function<double(double)>& f, double x0, const Scale& scale,
    const std::vector<double>& h_list);

}  // namespace fractcalc
