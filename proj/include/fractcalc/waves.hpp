/*
 * waves.hpp — spectral solvers for the deformed wave equations
 *
 * 1D fractal string on [0, l]: with u = v(x), tau = v(T), T = c t, the
 * deformed equation separates into modes sin(k_n u) with k_n = n pi / v(l)
 * and omega_n = v(c) k_n, so
 *
 *     U(t, x) = sum_n a_n cos(omega_n v(T)) sin(k_n v(x)),
 *     a_n = (2 / v(l)) * Stieltjes-integral of h(v(x)) sin(k_n v(x)).
 *
 * 2D membrane on the unit v-square: A_{m,n} cos(pi sqrt(m^2+n^2) v(T))
 * sin(pi m v(x)) sin(pi n v(y)) with the tensor-product staircase measure.
 *
 * The lacunary baseline reproduces the circumscribing-square construction:
 * level-k coefficients against modes sin(4^k pi m x) over the square of
 * quadratic_koch_boundary(k); it is computed per level only.
 */
#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fractcalc/fractal.hpp"

namespace fractcalc {

struct WaveProblem1D {
    double length_l = 1.0;
    double speed_c = 1.0;         // rescaled time T = c t
    double speed_factor_vc = 1.0; // dimensionless v(c) in (0, 1]
    Staircase staircase_x;
    Staircase staircase_t;
    std::function<double(double)> initial_profile;  // h(u), u in [0, v(l)]
    int n_modes = 32;
    int quad_level = 16;
    double bc_tol = 1e-9;

    double v_l() const;  // extended staircase value of l
};

struct WaveSolution1D {
    std::vector<double> coefficients;  // a_n, n = 1..N
    std::vector<double> k_f;           // n pi / v(l)
    std::vector<double> omega_f;       // v(c) k_f
    double v_l = 1.0;
    double v_c = 1.0;
    double tail_magnitude = 0.0;       // largest |a_n| in the last quarter of modes
};

WaveSolution1D solve_1d(const WaveProblem1D& problem);

double eval_solution_1d(const WaveSolution1D& sol, const WaveProblem1D& problem, double t,
                        double x);

// u-grid energy of the truncated solution at rescaled time t:
// trapezoid of (dU/dtau)^2 + v(c)^2 (dU/du)^2 over [0, v(l)].
double energy_1d(const WaveSolution1D& sol, const WaveProblem1D& problem, double t,
                 int grid_n = 256);

std::vector<std::pair<double, double>> dispersion_table(const WaveProblem1D& problem,
                                                        std::span<const double> k_values);

// Stieltjes Gram matrix of sqrt(2/v(l)) sin(n pi u / v(l)), n = 1..n_modes.
std::vector<double> gram_matrix_sine_modes(const Staircase& st, double l, int n_modes, int level);

struct WaveProblem2D {
    double speed_c = 1.0;
    Staircase staircase_x;
    Staircase staircase_y;
    Staircase staircase_t;
    std::function<double(double, double)> initial_profile;  // h(ux, uy) on [0,1]^2
    int m_modes = 16;
    int n_modes = 16;
    int grid_level = 9;  // 2^level midpoint panels per direction
    double bc_tol = 1e-9;
};

struct WaveSolution2D {
    int m_modes = 0;
    int n_modes = 0;
    std::vector<double> coefficients;  // A_{m,n}, row-major over (m, n)
    double tail_magnitude = 0.0;

    double coefficient(int m, int n) const;
    double frequency(int m, int n) const;  // pi sqrt(m^2 + n^2)
};

WaveSolution2D solve_2d(const WaveProblem2D& problem);

double eval_solution_2d(const WaveSolution2D& sol, const WaveProblem2D& problem, double t,
                        double x, double y);

// True when the x/y/t staircases come from one seed family (coherent
// spatio-temporal deformation); solvers accept either, front ends flag it.
bool coherent_staircases(const WaveProblem2D& problem);
bool coherent_staircases(const WaveProblem1D& problem);

struct Rect {
    double x_lo, x_hi, y_lo, y_hi;
};

struct LacunaryApprox {
    int level_k = 0;
    int m_modes = 0;
    int n_modes = 0;
    std::vector<double> coefficients;  // A_{k,m,n}, row-major over (m, n)
    BoundarySquare square;

    double coefficient(int m, int n) const;
    double frequency(int m, int n) const;  // 4^k pi sqrt(m^2 + n^2)
    double term_bound() const;             // sum |A|, a sup-norm bound of the term
    double eval(double t, double x, double y) const;
};

// Level-k term of the circumscribing-square series.  h_k vanishes outside
// `support` (default: the whole square), and the quadrature panels align
// with it.
LacunaryApprox lacunary_partial_sum(int k, const std::function<double(double, double)>& h_k,
                                    int m_cap, int n_cap,
                                    std::optional<Rect> support = std::nullopt);

}  // namespace fractcalc
