#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "fractcalc/calculus.hpp"
#include "fractcalc/waves.hpp"

using namespace fractcalc;

namespace {

WaveProblem1D cantor_problem_1d(int modes = 8) {
    WaveProblem1D p;
    p.speed_factor_vc = 0.8;
    p.staircase_x = staircase_from_cantor({2, 1.0 / 3.0}, 40);
    p.staircase_t = p.staircase_x;
    p.initial_profile = [](double u) { return std::sin(M_PI * u); };
    p.n_modes = modes;
    return p;
}

WaveProblem1D identity_problem_1d(int modes = 8) {
    WaveProblem1D p;
    p.speed_factor_vc = 1.0;
    p.staircase_x = staircase_from_cantor({2, 0.5}, 40);
    p.staircase_t = p.staircase_x;
    p.initial_profile = [](double u) { return std::sin(M_PI * u); };
    p.n_modes = modes;
    return p;
}

WaveProblem2D identity_problem_2d() {
    WaveProblem2D p;
    p.staircase_x = staircase_from_cantor({2, 0.5}, 40);
    p.staircase_y = p.staircase_x;
    p.staircase_t = p.staircase_x;
    p.initial_profile = [](double ux, double uy) {
        return std::sin(M_PI * ux) * std::sin(M_PI * uy);
    };
    p.m_modes = 6;
    p.n_modes = 6;
    p.grid_level = 8;
    return p;
}

}  // namespace

TEST_CASE("1d solver: single mode orthogonality") {
    const auto problem = cantor_problem_1d();
    const auto sol = solve_1d(problem);
    CHECK(sol.v_l == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol.coefficients[0] == doctest::Approx(1.0).epsilon(1e-10));
    for (std::size_t n = 1; n < sol.coefficients.size(); ++n)
        CHECK(std::abs(sol.coefficients[n]) < 1e-6);
    CHECK(sol.omega_f[0] == doctest::Approx(0.8 * M_PI).epsilon(1e-13));

    SUBCASE("second harmonic profile picks a_2 only") {
        auto p2 = problem;
        p2.initial_profile = [](double u) { return std::sin(2.0 * M_PI * u); };
        const auto s2 = solve_1d(p2);
        CHECK(std::abs(s2.coefficients[0]) < 1e-6);
        CHECK(s2.coefficients[1] == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("1d solver: parabola profile has the odd-mode coefficients") {
    auto problem = cantor_problem_1d(9);
    problem.initial_profile = [](double u) { return u * (1.0 - u); };
    const auto sol = solve_1d(problem);
    for (int n = 1; n <= 9; ++n) {
        const double want = (n % 2 == 1) ? 8.0 / (n * n * n * M_PI * M_PI * M_PI) : 0.0;
        CHECK(std::abs(sol.coefficients[std::size_t(n - 1)] - want) < 1e-6);
    }
}

TEST_CASE("1d evaluator") {
    const auto problem = cantor_problem_1d();
    const auto sol = solve_1d(problem);
    SUBCASE("initial condition is reconstructed") {
        for (int i = 0; i <= 20; ++i) {
            const double x = double(i) / 20.0;
            const double u = problem.staircase_x.eval(x);
            CHECK(std::abs(eval_solution_1d(sol, problem, 0.0, x) - std::sin(M_PI * u)) < 1e-6);
        }
    }
    SUBCASE("boundary conditions hold at all times") {
        for (double t : {0.0, 0.3, 1.0, 2.7}) {
            CHECK(std::abs(eval_solution_1d(sol, problem, t, 0.0)) < 1e-12);
            CHECK(std::abs(eval_solution_1d(sol, problem, t, 1.0)) < 1e-9);
        }
    }
    SUBCASE("closed form of the single mode") {
        for (double t : {0.1, 0.62, 1.44}) {
            for (double x : {0.11, 0.5, 0.77}) {
                const double tau = problem.staircase_t.extend(t);
                const double u = problem.staircase_x.eval(x);
                const double want = std::cos(0.8 * M_PI * tau) * std::sin(M_PI * u);
                CHECK(std::abs(eval_solution_1d(sol, problem, t, x) - want) < 1e-6);
            }
        }
    }
    SUBCASE("time enters through the rescaled fractal variable") {
        auto scaled = problem;
        scaled.speed_c = 2.0;
        const auto sol2 = solve_1d(scaled);
        const double direct = eval_solution_1d(sol2, scaled, 0.35, 0.5);
        const double tau = scaled.staircase_t.extend(2.0 * 0.35);
        const double u = scaled.staircase_x.eval(0.5);
        CHECK(direct ==
              doctest::Approx(sol2.coefficients[0] * std::cos(sol2.omega_f[0] * tau) *
                              std::sin(sol2.k_f[0] * u))
                  .epsilon(1e-9));
    }
}

TEST_CASE("1d solver on a string of length two") {
    WaveProblem1D p;
    p.length_l = 2.0;
    p.speed_factor_vc = 0.5;
    p.staircase_x = staircase_from_cantor({2, 0.5}, 40);
    p.staircase_t = p.staircase_x;
    p.initial_profile = [](double u) { return std::sin(M_PI * u / 2.0); };
    p.n_modes = 6;
    const auto sol = solve_1d(p);
    CHECK(sol.v_l == 2.0);
    CHECK(sol.coefficients[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sol.k_f[0] == doctest::Approx(M_PI / 2.0).epsilon(1e-14));
    for (double t : {0.0, 0.5, 1.3})
        for (double x : {0.4, 1.0, 1.7}) {
            const double want =
                std::cos(0.5 * M_PI / 2.0 * t) * std::sin(M_PI * x / 2.0);
            CHECK(std::abs(eval_solution_1d(sol, p, t, x) - want) < 1e-8);
        }
}

TEST_CASE("1d solver rejects boundary-incompatible profiles") {
    auto problem = cantor_problem_1d();
    problem.initial_profile = [](double u) { return std::cos(M_PI * u); };
    CHECK_THROWS_WITH_AS(solve_1d(problem), doctest::Contains("boundary residuals"),
                         std::invalid_argument);
}

TEST_CASE("dispersion table") {
    const auto problem = cantor_problem_1d();
    SUBCASE("pinned staircase values") {
        const std::vector<double> ks = {1.0 / 3.0};
        const auto table = dispersion_table(problem, ks);
        CHECK(table[0].second == doctest::Approx(0.8 * 0.5).epsilon(1e-12));
    }
    SUBCASE("plateau inside a gap") {
        const std::vector<double> ks = {0.4, 0.55, 0.6};
        const auto table = dispersion_table(problem, ks);
        CHECK(table[0].second == table[1].second);
        CHECK(table[1].second == table[2].second);
    }
    SUBCASE("nondecreasing over sorted samples") {
        std::vector<double> ks;
        for (int i = 1; i <= 1000; ++i) ks.push_back(4.0 * i / 1000.0);
        const auto table = dispersion_table(problem, ks);
        for (std::size_t i = 0; i + 1 < table.size(); ++i)
            CHECK(table[i].second <= table[i + 1].second);
    }
    SUBCASE("identity staircase restores the linear law") {
        const auto p = identity_problem_1d();
        std::vector<double> ks;
        for (int i = 1; i <= 100; ++i) ks.push_back(3.0 * i / 100.0);
        for (const auto& [k, w] : dispersion_table(p, ks))
            CHECK(std::abs(w - p.speed_factor_vc * k) < 1e-12);
    }
    SUBCASE("positive wave numbers only") {
        const std::vector<double> bad = {-1.0};
        CHECK_THROWS_AS(dispersion_table(problem, bad), std::domain_error);
    }
}

TEST_CASE("wave equation residual in the deformed variables") {
    // With identity staircases the evaluator arguments are the u-variables
    // themselves, so central differences probe the deformed equation
    // directly: U_tt = v(c)^2 U_xx in 1d, U_tt = U_xx + U_yy in 2d.
    const double h = 2e-4;
    SUBCASE("1d single mode") {
        auto p = identity_problem_1d();
        p.speed_factor_vc = 0.8;
        const auto sol = solve_1d(p);
        for (double t : {0.31, 0.9})
            for (double x : {0.21, 0.5, 0.83}) {
                const auto u = [&](double tt, double xx) {
                    return eval_solution_1d(sol, p, tt, xx);
                };
                const double utt =
                    (u(t + h, x) - 2.0 * u(t, x) + u(t - h, x)) / (h * h);
                const double uxx =
                    (u(t, x + h) - 2.0 * u(t, x) + u(t, x - h)) / (h * h);
                CHECK(std::abs(utt - 0.8 * 0.8 * uxx) < 1e-6);
            }
    }
    SUBCASE("2d single mode") {
        const auto p = identity_problem_2d();
        const auto sol = solve_2d(p);
        const double t = 0.27, x = 0.41, y = 0.63;
        const auto u = [&](double tt, double xx, double yy) {
            return eval_solution_2d(sol, p, tt, xx, yy);
        };
        const double utt = (u(t + h, x, y) - 2.0 * u(t, x, y) + u(t - h, x, y)) / (h * h);
        const double uxx = (u(t, x + h, y) - 2.0 * u(t, x, y) + u(t, x - h, y)) / (h * h);
        const double uyy = (u(t, x, y + h) - 2.0 * u(t, x, y) + u(t, x, y - h)) / (h * h);
        CHECK(std::abs(utt - (uxx + uyy)) < 1e-6);
    }
}

TEST_CASE("orthonormality of sine modes under stieltjes quadrature") {
    const auto st = staircase_from_cantor({2, 1.0 / 3.0}, 40);
    const int n = 8;
    const auto gram = gram_matrix_sine_modes(st, 1.0, n, 16);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double want = i == j ? 1.0 : 0.0;
            CHECK(std::abs(gram[std::size_t(i) * n + j] - want) < 1e-6);
        }
}

TEST_CASE("energy stays constant over time samples") {
    auto problem = cantor_problem_1d(8);
    problem.initial_profile = [](double u) { return u * (1.0 - u); };
    const auto sol = solve_1d(problem);
    const double e0 = energy_1d(sol, problem, 0.0);
    CHECK(e0 > 0.0);
    for (int i = 1; i < 10; ++i) {
        const double t = 0.37 * i;
        CHECK(std::abs(energy_1d(sol, problem, t) - e0) < 1e-6 * e0);
    }
}

TEST_CASE("2d solver") {
    SUBCASE("single mode on the cantor staircase family") {
        WaveProblem2D p;
        p.staircase_x = staircase_from_cantor({2, 0.25}, 40);
        p.staircase_y = p.staircase_x;
        p.staircase_t = p.staircase_x;
        p.initial_profile = [](double ux, double uy) {
            return std::sin(M_PI * ux) * std::sin(M_PI * uy);
        };
        p.m_modes = 4;
        p.n_modes = 4;
        p.grid_level = 8;
        const auto sol = solve_2d(p);
        CHECK(sol.coefficient(1, 1) == doctest::Approx(1.0).epsilon(1e-10));
        for (int m = 1; m <= 4; ++m)
            for (int n = 1; n <= 4; ++n)
                if (m != 1 || n != 1) CHECK(std::abs(sol.coefficient(m, n)) < 1e-6);
        CHECK(sol.frequency(1, 1) == doctest::Approx(M_PI * std::sqrt(2.0)).epsilon(1e-15));
        CHECK(coherent_staircases(p));
    }
    SUBCASE("mixed mode lands on A_12") {
        auto p = identity_problem_2d();
        p.initial_profile = [](double ux, double uy) {
            return std::sin(M_PI * ux) * std::sin(2.0 * M_PI * uy);
        };
        const auto sol = solve_2d(p);
        CHECK(sol.coefficient(1, 2) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(sol.coefficient(1, 1)) < 1e-6);
        CHECK(sol.frequency(1, 2) == doctest::Approx(M_PI * std::sqrt(5.0)).epsilon(1e-15));
    }
    SUBCASE("zero data gives the zero solution") {
        auto p = identity_problem_2d();
        p.initial_profile = [](double, double) { return 0.0; };
        const auto sol = solve_2d(p);
        for (int m = 1; m <= p.m_modes; ++m)
            for (int n = 1; n <= p.n_modes; ++n) CHECK(sol.coefficient(m, n) == 0.0);
        CHECK(eval_solution_2d(sol, p, 0.5, 0.3, 0.7) == 0.0);
    }
    SUBCASE("smooth limit matches the classical membrane mode") {
        const auto p = identity_problem_2d();
        const auto sol = solve_2d(p);
        for (double t : {0.0, 0.21, 0.8})
            for (double x : {0.2, 0.5})
                for (double y : {0.3, 0.9}) {
                    const double want = std::cos(M_PI * std::sqrt(2.0) * t) *
                                        std::sin(M_PI * x) * std::sin(M_PI * y);
                    CHECK(std::abs(eval_solution_2d(sol, p, t, x, y) - want) < 1e-10);
                }
    }
    SUBCASE("boundary-incompatible data rejected") {
        auto p = identity_problem_2d();
        p.initial_profile = [](double ux, double) { return std::cos(M_PI * ux); };
        CHECK_THROWS_AS(solve_2d(p), std::invalid_argument);
    }
    SUBCASE("incoherent staircases are detected") {
        auto p = identity_problem_2d();
        p.staircase_y = staircase_from_cantor({2, 1.0 / 3.0}, 40);
        CHECK_FALSE(coherent_staircases(p));
    }
}

TEST_CASE("lacunary partial sums") {
    SUBCASE("level 0 with unit-square data is the classical mode") {
        const auto approx = lacunary_partial_sum(
            0, [](double x, double y) { return std::sin(M_PI * x) * std::sin(M_PI * y); }, 2, 2,
            Rect{0.0, 1.0, 0.0, 1.0});
        CHECK(approx.square.lo == -0.25);
        CHECK(approx.square.hi == 1.25);
        CHECK(approx.coefficient(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(approx.coefficient(2, 1)) < 1e-12);
        CHECK(approx.frequency(1, 1) == doctest::Approx(M_PI * std::sqrt(2.0)).epsilon(1e-15));
    }
    SUBCASE("level 1 frequencies carry the lacunary factor 4") {
        const auto approx = lacunary_partial_sum(
            1, [](double x, double y) { return x * y; }, 2, 3, Rect{0.0, 1.0, 0.0, 1.0});
        CHECK(approx.frequency(1, 1) ==
              doctest::Approx(4.0 * M_PI * std::sqrt(2.0)).epsilon(1e-15));
        CHECK(approx.frequency(2, 3) ==
              doctest::Approx(4.0 * M_PI * std::sqrt(13.0)).epsilon(1e-15));
    }
    SUBCASE("zero data gives a zero term") {
        const auto approx = lacunary_partial_sum(1, [](double, double) { return 0.0; }, 2, 2);
        CHECK(approx.term_bound() == 0.0);
        CHECK(approx.eval(0.3, 0.4, 0.5) == 0.0);
    }
    SUBCASE("term bound dominates the evaluated term") {
        const auto approx = lacunary_partial_sum(
            0, [](double x, double y) { return std::sin(M_PI * x) * std::sin(M_PI * y); }, 3, 3,
            Rect{0.0, 1.0, 0.0, 1.0});
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> d(0.0, 1.0);
        for (int i = 0; i < 100; ++i)
            CHECK(std::abs(approx.eval(d(rng), d(rng), d(rng))) <= approx.term_bound() + 1e-12);
    }
}
