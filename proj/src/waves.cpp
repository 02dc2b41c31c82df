#include "fractcalc/waves.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fractcalc/calculus.hpp"

namespace fractcalc {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::domain_error(what);
}

void check_boundary_1d(const std::function<double(double)>& h, double v_l, double tol) {
    double scale = 1.0;
    for (int i = 0; i <= 16; ++i) scale = std::max(scale, std::abs(h(v_l * i / 16.0)));
    const double r0 = std::abs(h(0.0)), r1 = std::abs(h(v_l));
    if (r0 > tol * scale || r1 > tol * scale) {
        std::ostringstream msg;
        msg << "solve_1d: initial profile violates U(T,0)=U(T,v(l))=0; boundary residuals "
            << r0 << " at u=0 and " << r1 << " at u=v(l)";
        throw std::invalid_argument(msg.str());
    }
}

void check_boundary_2d(const std::function<double(double, double)>& h, double tol) {
    double scale = 1.0, worst = 0.0;
    for (int i = 0; i <= 16; ++i) {
        const double s = i / 16.0;
        scale = std::max(scale, std::abs(h(s, 0.5)));
        worst = std::max({worst, std::abs(h(s, 0.0)), std::abs(h(s, 1.0)), std::abs(h(0.0, s)),
                          std::abs(h(1.0, s))});
    }
    if (worst > tol * scale) {
        std::ostringstream msg;
        msg << "solve_2d: initial profile does not vanish on the boundary of the unit v-square; "
               "worst residual "
            << worst;
        throw std::invalid_argument(msg.str());
    }
}

bool same_seed(const Staircase& a, const Staircase& b) {
    if (a.seed.has_value() != b.seed.has_value()) return false;
    if (!a.seed) return true;
    return a.seed->pieces == b.seed->pieces && a.seed->ratio == b.seed->ratio;
}

// Nodes and weights of 8-point Gauss-Legendre on [-1, 1].
constexpr double kGlNode[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                               -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                               0.7966664774136267,  0.9602898564975363};
constexpr double kGlWeight[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                 0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};

}  // namespace

double WaveProblem1D::v_l() const { return staircase_x.extend(length_l); }

WaveSolution1D solve_1d(const WaveProblem1D& problem) {
    require(problem.n_modes >= 1, "solve_1d: need at least one mode");
    require(problem.length_l > 0.0, "solve_1d: length must be positive");
    require(problem.speed_factor_vc > 0.0 && problem.speed_factor_vc <= 1.0,
            "solve_1d: v(c) must lie in (0, 1]");
    const double V = problem.v_l();
    check_boundary_1d(problem.initial_profile, V, problem.bc_tol);

    WaveSolution1D sol;
    sol.v_l = V;
    sol.v_c = problem.speed_factor_vc;
    sol.coefficients.reserve(std::size_t(problem.n_modes));
    for (int n = 1; n <= problem.n_modes; ++n) {
        const double k = double(n) * M_PI / V;
        const auto integrand = [&](double u) {
            return problem.initial_profile(u) * std::sin(k * u);
        };
        const double a_n = 2.0 / V *
                           stieltjes_integral(integrand, problem.staircase_x, 0.0,
                                              problem.length_l, problem.quad_level)
                               .value;
        sol.coefficients.push_back(a_n);
        sol.k_f.push_back(k);
        sol.omega_f.push_back(problem.speed_factor_vc * k);
    }
    for (std::size_t n = sol.coefficients.size() - sol.coefficients.size() / 4;
         n < sol.coefficients.size(); ++n)
        sol.tail_magnitude = std::max(sol.tail_magnitude, std::abs(sol.coefficients[n]));
    return sol;
}

double eval_solution_1d(const WaveSolution1D& sol, const WaveProblem1D& problem, double t,
                        double x) {
    require(t >= 0.0, "eval_solution_1d: time must be nonnegative");
    require(x >= 0.0 && x <= problem.length_l, "eval_solution_1d: x outside [0, l]");
    const double tau = problem.staircase_t.extend(problem.speed_c * t);
    const double u = problem.staircase_x.extend(x);
    double sum = 0.0;
    for (std::size_t i = 0; i < sol.coefficients.size(); ++i)
        sum += sol.coefficients[i] * std::cos(sol.omega_f[i] * tau) * std::sin(sol.k_f[i] * u);
    return sum;
}

double energy_1d(const WaveSolution1D& sol, const WaveProblem1D& problem, double t, int grid_n) {
    const double tau = problem.staircase_t.extend(problem.speed_c * t);
    const double V = sol.v_l;
    const double du = V / grid_n;
    double total = 0.0;
    for (int i = 0; i <= grid_n; ++i) {
        const double u = du * i;
        double ut = 0.0, ux = 0.0;
        for (std::size_t n = 0; n < sol.coefficients.size(); ++n) {
            ut -= sol.coefficients[n] * sol.omega_f[n] * std::sin(sol.omega_f[n] * tau) *
                  std::sin(sol.k_f[n] * u);
            ux += sol.coefficients[n] * sol.k_f[n] * std::cos(sol.omega_f[n] * tau) *
                  std::cos(sol.k_f[n] * u);
        }
        const double density = ut * ut + sol.v_c * sol.v_c * ux * ux;
        total += (i == 0 || i == grid_n) ? 0.5 * density : density;
    }
    return total * du;
}

std::vector<std::pair<double, double>> dispersion_table(const WaveProblem1D& problem,
                                                        std::span<const double> k_values) {
    std::vector<std::pair<double, double>> out;
    out.reserve(k_values.size());
    for (double k : k_values) {
        require(k > 0.0, "dispersion_table: wave numbers must be positive");
        out.emplace_back(k, problem.speed_factor_vc * problem.staircase_x.extend(k));
    }
    return out;
}

std::vector<double> gram_matrix_sine_modes(const Staircase& st, double l, int n_modes,
                                           int level) {
    require(n_modes >= 1, "gram_matrix_sine_modes: need at least one mode");
    const double V = st.extend(l);
    std::vector<double> gram(std::size_t(n_modes) * n_modes);
    for (int i = 1; i <= n_modes; ++i) {
        for (int j = i; j <= n_modes; ++j) {
            const auto integrand = [&](double u) {
                return 2.0 / V * std::sin(i * M_PI * u / V) * std::sin(j * M_PI * u / V);
            };
            const double value = stieltjes_integral(integrand, st, 0.0, l, level).value;
            gram[std::size_t(i - 1) * n_modes + (j - 1)] = value;
            gram[std::size_t(j - 1) * n_modes + (i - 1)] = value;
        }
    }
    return gram;
}

double WaveSolution2D::coefficient(int m, int n) const {
    if (m < 1 || m > m_modes || n < 1 || n > n_modes)
        throw std::out_of_range("WaveSolution2D: mode index out of range");
    return coefficients[std::size_t(m - 1) * n_modes + (n - 1)];
}

double WaveSolution2D::frequency(int m, int n) const {
    return M_PI * std::sqrt(double(m) * m + double(n) * n);
}

WaveSolution2D solve_2d(const WaveProblem2D& problem) {
    require(problem.m_modes >= 1 && problem.n_modes >= 1, "solve_2d: mode caps must be >= 1");
    require(problem.grid_level >= 4 && problem.grid_level <= 14,
            "solve_2d: grid level out of range");
    check_boundary_2d(problem.initial_profile, problem.bc_tol);

    // Midpoint tensor grid in the u variables; the staircase measure is
    // uniform there, so this is the exact 2D analogue of the 1D increment
    // sum.  Factorized accumulation keeps it O(G^2 M).
    const int g = 1 << problem.grid_level;
    const double du = 1.0 / g;
    std::vector<double> h(std::size_t(g) * g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j)
            h[std::size_t(i) * g + j] = problem.initial_profile((i + 0.5) * du, (j + 0.5) * du);

    std::vector<double> sin_x(std::size_t(problem.m_modes) * g),
        sin_y(std::size_t(problem.n_modes) * g);
    for (int m = 1; m <= problem.m_modes; ++m)
        for (int i = 0; i < g; ++i)
            sin_x[std::size_t(m - 1) * g + i] = std::sin(m * M_PI * (i + 0.5) * du);
    for (int n = 1; n <= problem.n_modes; ++n)
        for (int j = 0; j < g; ++j)
            sin_y[std::size_t(n - 1) * g + j] = std::sin(n * M_PI * (j + 0.5) * du);

    // partial[m][j] = sum_i h(i,j) sin_x[m][i]
    std::vector<double> partial(std::size_t(problem.m_modes) * g, 0.0);
    for (int m = 0; m < problem.m_modes; ++m)
        for (int i = 0; i < g; ++i) {
            const double s = sin_x[std::size_t(m) * g + i];
            const double* row = &h[std::size_t(i) * g];
            double* acc = &partial[std::size_t(m) * g];
            for (int j = 0; j < g; ++j) acc[j] += s * row[j];
        }

    WaveSolution2D sol;
    sol.m_modes = problem.m_modes;
    sol.n_modes = problem.n_modes;
    sol.coefficients.assign(std::size_t(problem.m_modes) * problem.n_modes, 0.0);
    for (int m = 0; m < problem.m_modes; ++m)
        for (int n = 0; n < problem.n_modes; ++n) {
            double acc = 0.0;
            for (int j = 0; j < g; ++j)
                acc += partial[std::size_t(m) * g + j] * sin_y[std::size_t(n) * g + j];
            sol.coefficients[std::size_t(m) * problem.n_modes + n] = 4.0 * acc * du * du;
        }

    for (int m = 1; m <= problem.m_modes; ++m)
        for (int n = 1; n <= problem.n_modes; ++n)
            if (m > problem.m_modes * 3 / 4 || n > problem.n_modes * 3 / 4)
                sol.tail_magnitude = std::max(sol.tail_magnitude, std::abs(sol.coefficient(m, n)));
    return sol;
}

double eval_solution_2d(const WaveSolution2D& sol, const WaveProblem2D& problem, double t,
                        double x, double y) {
    require(t >= 0.0, "eval_solution_2d: time must be nonnegative");
    const double tau = problem.staircase_t.extend(problem.speed_c * t);
    const double ux = problem.staircase_x.extend(x);
    const double uy = problem.staircase_y.extend(y);
    double sum = 0.0;
    for (int m = 1; m <= sol.m_modes; ++m)
        for (int n = 1; n <= sol.n_modes; ++n)
            sum += sol.coefficient(m, n) * std::cos(sol.frequency(m, n) * tau) *
                   std::sin(m * M_PI * ux) * std::sin(n * M_PI * uy);
    return sum;
}

bool coherent_staircases(const WaveProblem2D& problem) {
    return same_seed(problem.staircase_x, problem.staircase_y) &&
           same_seed(problem.staircase_x, problem.staircase_t);
}

bool coherent_staircases(const WaveProblem1D& problem) {
    return same_seed(problem.staircase_x, problem.staircase_t);
}

double LacunaryApprox::coefficient(int m, int n) const {
    if (m < 1 || m > m_modes || n < 1 || n > n_modes)
        throw std::out_of_range("LacunaryApprox: mode index out of range");
    return coefficients[std::size_t(m - 1) * n_modes + (n - 1)];
}

double LacunaryApprox::frequency(int m, int n) const {
    return std::pow(4.0, level_k) * M_PI * std::sqrt(double(m) * m + double(n) * n);
}

double LacunaryApprox::term_bound() const {
    double sum = 0.0;
    for (double a : coefficients) sum += std::abs(a);
    return sum;
}

double LacunaryApprox::eval(double t, double x, double y) const {
    const double lac = std::pow(4.0, level_k);
    double sum = 0.0;
    for (int m = 1; m <= m_modes; ++m)
        for (int n = 1; n <= n_modes; ++n)
            sum += coefficient(m, n) * std::cos(frequency(m, n) * t) *
                   std::sin(lac * M_PI * m * x) * std::sin(lac * M_PI * n * y);
    return sum;
}

LacunaryApprox lacunary_partial_sum(int k, const std::function<double(double, double)>& h_k,
                                    int m_cap, int n_cap, std::optional<Rect> support) {
    require(k >= 0, "lacunary_partial_sum: level must be nonnegative");
    require(m_cap >= 1 && n_cap >= 1, "lacunary_partial_sum: mode caps must be >= 1");

    LacunaryApprox out;
    out.level_k = k;
    out.m_modes = m_cap;
    out.n_modes = n_cap;
    out.square = quadratic_koch_boundary(k);

    Rect dom{out.square.lo, out.square.hi, out.square.lo, out.square.hi};
    if (support) {
        dom.x_lo = std::max(dom.x_lo, support->x_lo);
        dom.x_hi = std::min(dom.x_hi, support->x_hi);
        dom.y_lo = std::max(dom.y_lo, support->y_lo);
        dom.y_hi = std::min(dom.y_hi, support->y_hi);
    }
    require(dom.x_lo < dom.x_hi && dom.y_lo < dom.y_hi,
            "lacunary_partial_sum: support does not meet the boundary square");

    const double lac = std::pow(4.0, k);
    const int max_mode = std::max(m_cap, n_cap);
    const int panels = std::min(2048, std::max(24, int(std::ceil(2.0 * lac * max_mode)) * 2));

    // Per-axis mode integrals on a shared Gauss-Legendre panel grid, then the
    // 2D integral of h * sin * sin accumulated over the same nodes.
    const auto axis_nodes = [&](double lo, double hi) {
        std::vector<double> nodes, weights;
        const double w = (hi - lo) / panels;
        for (int p = 0; p < panels; ++p)
            for (int q = 0; q < 8; ++q) {
                nodes.push_back(lo + w * (p + 0.5 + 0.5 * kGlNode[q]));
                weights.push_back(0.5 * w * kGlWeight[q]);
            }
        return std::pair{nodes, weights};
    };
    const auto [xs, wx] = axis_nodes(dom.x_lo, dom.x_hi);
    const auto [ys, wy] = axis_nodes(dom.y_lo, dom.y_hi);

    std::vector<double> sx(std::size_t(m_cap) * xs.size()), sy(std::size_t(n_cap) * ys.size());
    for (int m = 1; m <= m_cap; ++m)
        for (std::size_t i = 0; i < xs.size(); ++i)
            sx[std::size_t(m - 1) * xs.size() + i] = std::sin(lac * M_PI * m * xs[i]);
    for (int n = 1; n <= n_cap; ++n)
        for (std::size_t j = 0; j < ys.size(); ++j)
            sy[std::size_t(n - 1) * ys.size() + j] = std::sin(lac * M_PI * n * ys[j]);

    std::vector<double> partial(std::size_t(m_cap) * ys.size(), 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::vector<double> hrow(ys.size());
        for (std::size_t j = 0; j < ys.size(); ++j) hrow[j] = h_k(xs[i], ys[j]) * wy[j];
        for (int m = 0; m < m_cap; ++m) {
            const double s = sx[std::size_t(m) * xs.size() + i] * wx[i];
            double* acc = &partial[std::size_t(m) * ys.size()];
            for (std::size_t j = 0; j < ys.size(); ++j) acc[j] += s * hrow[j];
        }
    }
    out.coefficients.assign(std::size_t(m_cap) * n_cap, 0.0);
    for (int m = 0; m < m_cap; ++m)
        for (int n = 0; n < n_cap; ++n) {
            double acc = 0.0;
            for (std::size_t j = 0; j < ys.size(); ++j)
                acc += partial[std::size_t(m) * ys.size() + j] * sy[std::size_t(n) * ys.size() + j];
            out.coefficients[std::size_t(m) * n_cap + n] = 4.0 * acc;
        }
    return out;
}

}  // namespace fractcalc
