// fractcalc — duality-structure fractal calculus from the command line.
//
// Subcommands: classify, valuation, staircase, massfn, derivative,
// integrate, solve1d, solve2d, dispersion, lacunary.  File outputs are CSV
// with one header row and 17-significant-digit floats, so identical runs
// produce byte-identical files.
//
// Exit codes: 0 success, 1 usage/config error, 2 numerical non-convergence.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fractcalc/calculus.hpp"
#include "fractcalc/expression.hpp"
#include "fractcalc/fractal.hpp"
#include "fractcalc/io.hpp"
#include "fractcalc/valuation.hpp"
#include "fractcalc/waves.hpp"

namespace {

using namespace fractcalc;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

std::vector<double> linspace(double lo, double hi, int samples) {
    std::vector<double> out;
    out.reserve(std::size_t(samples));
    for (int i = 0; i < samples; ++i)
        out.push_back(lo + (hi - lo) * double(i) / double(samples - 1));
    return out;
}

struct ClassifyArgs {
    std::string seq_expr;
    std::string scale_expr = "n^(-1)";
    std::uint64_t n0 = 1024;
    int levels = 20;
};

int run_classify(const ClassifyArgs& args) {
    const Expression seq = Expression::parse(args.seq_expr, {"n"});
    const Expression scl = Expression::parse(args.scale_expr, {"n"});
    SequenceSpec seq_spec{[&](double n) { return seq.eval1(n); }, args.n0, args.levels};
    SequenceSpec scale_spec{[&](double n) { return scl.eval1(n); }, args.n0, args.levels};
    const SequenceClass c = classify_sequence(seq_spec, scale_spec);
    std::cout << "label: " << to_string(c.label) << "\n"
              << "exponent_estimate: " << format_sig17(c.exponent_estimate) << "\n"
              << "rate: " << to_string(c.rate) << "\n"
              << "samples: n = " << args.n0 << " * 2^j, j = 0.." << args.levels << "\n";
    return kExitOk;
}

struct StaircaseArgs {
    int pieces = 2;
    double ratio = 1.0 / 3.0;
    int level = 40;
    int samples = 1000;
    std::string out_path;
};

int run_staircase(const StaircaseArgs& args) {
    const auto st = staircase_from_cantor({args.pieces, args.ratio}, args.level);
    auto out = open_output(args.out_path);
    export_staircase_csv(st, args.samples, out);
    std::cout << "staircase: pieces=" << args.pieces << " ratio=" << format_sig17(args.ratio)
              << " dimension_s=" << format_sig17(st.dimension_s) << " -> " << args.out_path
              << "\n";
    return kExitOk;
}

struct MassArgs {
    double alpha_degrees = 60.0;
    std::string ifs_path;
    int curve_level = 6;
    std::optional<double> s;
    double a = 0.0, b = 1.0;
    double tol = 1e-9;
    int level_cap = 8;
};

int run_massfn(const MassArgs& args) {
    IfsSpec ifs = args.ifs_path.empty() ? koch_ifs(args.alpha_degrees * M_PI / 180.0)
                                        : load_ifs_json(args.ifs_path);
    const auto curve = hutchinson_iterate(ifs, args.curve_level);
    const double s = args.s.value_or(curve.dimension_s);
    const double mass = mass_function(curve, s, args.a, args.b, args.tol, args.level_cap);
    std::cout << "ifs: " << ifs.name << "\n"
              << "dimension_s: " << format_sig17(curve.dimension_s) << "\n"
              << "mass(" << format_sig17(args.a) << ", " << format_sig17(args.b)
              << ") at s=" << format_sig17(s) << ": " << format_sig17(mass) << "\n";
    return kExitOk;
}

struct DerivativeArgs {
    std::string outer_expr = "u^2";
    int pieces = 2;
    double ratio = 1.0 / 3.0;
    int stair_level = 40;
    int level = 24;
    double x = 0.25;
    double tol = 1e-6;
};

int run_derivative(const DerivativeArgs& args) {
    const Expression outer = Expression::parse(args.outer_expr, {"u"});
    FractalFunction ff{[&](double u) { return outer.eval1(u); },
                       staircase_from_cantor({args.pieces, args.ratio}, args.stair_level), 1.0};
    const auto d = local_fractional_derivative(ff, args.x, args.level, args.tol);
    std::cout << "x: " << format_sig17(args.x) << "\n"
              << "on_support: " << (d.on_support ? "true" : "false") << "\n"
              << "derivative: " << format_sig17(d.value) << "\n";
    return kExitOk;
}

struct IntegrateArgs {
    std::string g_expr = "u";
    int pieces = 2;
    double ratio = 1.0 / 3.0;
    int stair_level = 40;
    int level = 16;
    double a = 0.0, b = 1.0;
};

int run_integrate(const IntegrateArgs& args) {
    const Expression g = Expression::parse(args.g_expr, {"u"});
    const auto st = staircase_from_cantor({args.pieces, args.ratio}, args.stair_level);
    const auto r =
        stieltjes_integral([&](double u) { return g.eval1(u); }, st, args.a, args.b, args.level);
    std::cout << "stieltjes_sum: " << format_sig17(r.value) << "\n"
              << "change_of_variable: " << format_sig17(r.ordinary_value) << "\n"
              << "discrepancy: " << format_sig17(r.discrepancy) << "\n";
    return kExitOk;
}

int run_valuation(double x, double delta) {
    std::cout << "valuation: " << format_sig17(valuation(x, Scale(delta))) << "\n";
    return kExitOk;
}

void report_config_errors(const std::vector<std::string>& errors) {
    std::cerr << "config errors:\n";
    for (const auto& e : errors) std::cerr << "  - " << e << "\n";
}

int run_solve1d(const std::string& config_path) {
    std::vector<std::string> errors;
    const Solve1DConfig cfg = parse_solve1d_config(config_path, errors);
    if (!errors.empty()) {
        report_config_errors(errors);
        return kExitUsage;
    }
    const Expression profile = Expression::parse(cfg.profile, {"u"});
    WaveProblem1D problem;
    problem.length_l = cfg.length;
    problem.speed_c = cfg.speed_c;
    problem.speed_factor_vc = cfg.speed_factor_vc;
    problem.staircase_x = build_staircase(cfg.staircase_x);
    problem.staircase_t = build_staircase(cfg.staircase_t.value_or(cfg.staircase_x));
    problem.initial_profile = [&](double u) { return profile.eval1(u); };
    problem.n_modes = cfg.modes;
    problem.quad_level = cfg.quad_level;
    problem.bc_tol = cfg.bc_tol;

    const auto sol = solve_1d(problem);
    std::cout << "v(l): " << format_sig17(sol.v_l) << "\n"
              << "a_1: " << format_sig17(sol.coefficients.front()) << "\n"
              << "coefficient_tail: " << format_sig17(sol.tail_magnitude) << "\n";
    if (!coherent_staircases(problem))
        std::cout << "note: x and t staircases differ (incoherent deformation)\n";
    if (problem.staircase_x.seed && problem.staircase_x.seed->is_identity())
        std::cout << "note: smooth limit (identity staircase); classical solution\n";
    if (!cfg.coefficients_csv.empty()) {
        auto out = open_output(cfg.coefficients_csv);
        export_coefficients_csv_1d(sol, out);
    }
    if (!cfg.solution_csv.empty()) {
        auto out = open_output(cfg.solution_csv);
        export_solution_csv_1d(sol, problem, linspace(0.0, cfg.t_max, cfg.t_samples),
                               linspace(0.0, cfg.length, cfg.x_samples), out);
    }
    return kExitOk;
}

int run_solve2d(const std::string& config_path) {
    std::vector<std::string> errors;
    const Solve2DConfig cfg = parse_solve2d_config(config_path, errors);
    if (!errors.empty()) {
        report_config_errors(errors);
        return kExitUsage;
    }
    const Expression profile = Expression::parse(cfg.profile, {"ux", "uy"});
    WaveProblem2D problem;
    problem.speed_c = cfg.speed_c;
    problem.staircase_x = build_staircase(cfg.staircase);
    problem.staircase_y = build_staircase(cfg.staircase_y.value_or(cfg.staircase));
    problem.staircase_t = build_staircase(cfg.staircase_t.value_or(cfg.staircase));
    problem.initial_profile = [&](double ux, double uy) {
        return profile.eval({{"ux", ux}, {"uy", uy}});
    };
    problem.m_modes = cfg.m_modes;
    problem.n_modes = cfg.n_modes;
    problem.grid_level = cfg.grid_level;
    problem.bc_tol = cfg.bc_tol;

    const auto sol = solve_2d(problem);
    std::cout << "A_11: " << format_sig17(sol.coefficient(1, 1)) << "\n"
              << "frequency_11: " << format_sig17(sol.frequency(1, 1)) << "\n"
              << "coefficient_tail: " << format_sig17(sol.tail_magnitude) << "\n";
    if (!coherent_staircases(problem))
        std::cout << "note: x/y/t staircases differ (incoherent deformation)\n";
    if (problem.staircase_x.seed && problem.staircase_x.seed->is_identity())
        std::cout << "note: smooth limit (identity staircase); classical solution\n";
    if (!cfg.coefficients_csv.empty()) {
        auto out = open_output(cfg.coefficients_csv);
        export_coefficients_csv_2d(sol, out);
    }
    if (!cfg.solution_csv.empty()) {
        auto out = open_output(cfg.solution_csv);
        const auto xy = linspace(0.0, 1.0, cfg.xy_samples);
        export_solution_csv_2d(sol, problem, linspace(0.0, cfg.t_max, cfg.t_samples), xy, xy,
                               out);
    }
    return kExitOk;
}

int run_dispersion(const std::string& config_path) {
    std::vector<std::string> errors;
    const DispersionConfig cfg = parse_dispersion_config(config_path, errors);
    if (!errors.empty()) {
        report_config_errors(errors);
        return kExitUsage;
    }
    WaveProblem1D problem;
    problem.speed_factor_vc = cfg.speed_factor_vc;
    problem.staircase_x = build_staircase(cfg.staircase);
    problem.staircase_t = problem.staircase_x;
    problem.initial_profile = [](double) { return 0.0; };
    const auto ks = linspace(cfg.k_min, cfg.k_max, cfg.k_samples);
    const auto table = dispersion_table(problem, ks);
    std::cout << "dispersion samples: " << table.size() << "\n"
              << "omega_f(k_max): " << format_sig17(table.back().second) << "\n";
    if (!cfg.out_csv.empty()) {
        auto out = open_output(cfg.out_csv);
        export_dispersion_csv(table, out);
    }
    return kExitOk;
}

int run_lacunary(const std::string& config_path) {
    std::vector<std::string> errors;
    const LacunaryConfig cfg = parse_lacunary_config(config_path, errors);
    if (!errors.empty()) {
        report_config_errors(errors);
        return kExitUsage;
    }
    const Expression h = Expression::parse(cfg.profile, {"x", "y"});
    const auto approx = lacunary_partial_sum(
        cfg.level_k, [&](double x, double y) { return h.eval({{"x", x}, {"y", y}}); },
        cfg.m_modes, cfg.n_modes, cfg.support);
    std::cout << "square: [" << format_sig17(approx.square.lo) << ", "
              << format_sig17(approx.square.hi) << "]^2\n"
              << "A_11: " << format_sig17(approx.coefficient(1, 1)) << "\n"
              << "frequency_11: " << format_sig17(approx.frequency(1, 1)) << "\n"
              << "term_bound: " << format_sig17(approx.term_bound()) << "\n";
    if (!cfg.out_csv.empty()) {
        auto out = open_output(cfg.out_csv);
        export_lacunary_csv(approx, out);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"duality-structure fractal calculus toolkit"};
    app.require_subcommand(1);

    ClassifyArgs classify_args;
    auto* classify = app.add_subcommand("classify", "classify a sequence against a scale");
    classify->add_option("--seq", classify_args.seq_expr, "sequence expression in n")->required();
    classify->add_option("--scale", classify_args.scale_expr, "scale expression in n");
    classify->add_option("--n0", classify_args.n0, "first sample index");
    classify->add_option("--levels", classify_args.levels, "number of doublings");

    double val_x = 0.1, val_delta = 0.01;
    auto* val = app.add_subcommand("valuation", "renormalized valuation of x at scale delta");
    val->add_option("--x", val_x, "asymptotic value")->required();
    val->add_option("--delta", val_delta, "scale in (0,1)")->required();

    StaircaseArgs staircase_args;
    auto* staircase = app.add_subcommand("staircase", "export a Cantor staircase as CSV");
    staircase->add_option("--pieces", staircase_args.pieces, "pieces per level");
    staircase->add_option("--ratio", staircase_args.ratio, "piece length ratio");
    staircase->add_option("--level", staircase_args.level, "refinement level");
    staircase->add_option("--samples", staircase_args.samples, "output sample count");
    staircase->add_option("--out", staircase_args.out_path, "output CSV path")->required();

    MassArgs mass_args;
    auto* massfn = app.add_subcommand("massfn", "s-mass of an IFS curve stretch");
    massfn->add_option("--alpha-degrees", mass_args.alpha_degrees, "Koch angle");
    massfn->add_option("--ifs", mass_args.ifs_path, "IFS JSON document");
    massfn->add_option("--curve-level", mass_args.curve_level, "Hutchinson level");
    double mass_s = 0.0;
    auto* s_opt = massfn->add_option("--s", mass_s, "mass exponent (default: dimension)");
    massfn->add_option("--a", mass_args.a, "interval start");
    massfn->add_option("--b", mass_args.b, "interval end");
    massfn->add_option("--tol", mass_args.tol, "refinement tolerance");
    massfn->add_option("--level-cap", mass_args.level_cap, "refinement cap");

    DerivativeArgs deriv_args;
    auto* derivative = app.add_subcommand("derivative", "local fractional derivative of f(v(x))");
    derivative->add_option("--outer", deriv_args.outer_expr, "outer function f(u)");
    derivative->add_option("--pieces", deriv_args.pieces, "seed pieces");
    derivative->add_option("--ratio", deriv_args.ratio, "seed ratio");
    derivative->add_option("--staircase-level", deriv_args.stair_level, "staircase level");
    derivative->add_option("--level", deriv_args.level, "refinement level");
    derivative->add_option("--x", deriv_args.x, "evaluation point")->required();
    derivative->add_option("--tol", deriv_args.tol, "refinement tolerance");

    IntegrateArgs int_args;
    auto* integrate = app.add_subcommand("integrate", "Stieltjes integral against a staircase");
    integrate->add_option("--g", int_args.g_expr, "integrand g(u)");
    integrate->add_option("--pieces", int_args.pieces, "seed pieces");
    integrate->add_option("--ratio", int_args.ratio, "seed ratio");
    integrate->add_option("--staircase-level", int_args.stair_level, "staircase level");
    integrate->add_option("--level", int_args.level, "partition level");
    integrate->add_option("--a", int_args.a, "lower limit");
    integrate->add_option("--b", int_args.b, "upper limit");

    std::string cfg_1d, cfg_2d, cfg_disp, cfg_lac;
    app.add_subcommand("solve1d", "fractal string spectral solve")
        ->add_option("--config", cfg_1d, "JSON run configuration")
        ->required();
    app.add_subcommand("solve2d", "fractal membrane spectral solve")
        ->add_option("--config", cfg_2d, "JSON run configuration")
        ->required();
    app.add_subcommand("dispersion", "staircase dispersion table")
        ->add_option("--config", cfg_disp, "JSON run configuration")
        ->required();
    app.add_subcommand("lacunary", "circumscribing-square lacunary term")
        ->add_option("--config", cfg_lac, "JSON run configuration")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (classify->parsed()) return run_classify(classify_args);
        if (val->parsed()) return run_valuation(val_x, val_delta);
        if (staircase->parsed()) return run_staircase(staircase_args);
        if (massfn->parsed()) {
            if (s_opt->count() > 0) mass_args.s = mass_s;
            return run_massfn(mass_args);
        }
        if (derivative->parsed()) return run_derivative(deriv_args);
        if (integrate->parsed()) return run_integrate(int_args);
        if (app.get_subcommand("solve1d")->parsed()) return run_solve1d(cfg_1d);
        if (app.get_subcommand("solve2d")->parsed()) return run_solve2d(cfg_2d);
        if (app.get_subcommand("dispersion")->parsed()) return run_dispersion(cfg_disp);
        if (app.get_subcommand("lacunary")->parsed()) return run_lacunary(cfg_lac);
    } catch (const ExpressionError& e) {
        std::cerr << "expression error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::length_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        // Malformed structured documents land here (parser exceptions).
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
