#include "fractcalc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "fractcalc/expression.hpp"

namespace fractcalc {

using nlohmann::json;

std::string format_sig17(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void export_staircase_csv(const Staircase& st, int samples, std::ostream& out) {
    out << "# dimension_s=" << format_sig17(st.dimension_s) << " level=" << st.level;
    if (st.seed)
        out << " pieces=" << st.seed->pieces << " ratio=" << format_sig17(st.seed->ratio);
    out << "\n";
    out << "xi,value\n";
    for (int i = 0; i <= samples; ++i) {
        const double x = double(i) / samples;
        out << format_sig17(x) << "," << format_sig17(st.eval(x)) << "\n";
    }
}

void export_dispersion_csv(const std::vector<std::pair<double, double>>& table,
                           std::ostream& out) {
    out << "k,omega_f\n";
    for (const auto& [k, w] : table) out << format_sig17(k) << "," << format_sig17(w) << "\n";
}

void export_solution_csv_1d(const WaveSolution1D& sol, const WaveProblem1D& problem,
                            const std::vector<double>& times, const std::vector<double>& xs,
                            std::ostream& out) {
    out << "t,x,U\n";
    for (double t : times)
        for (double x : xs)
            out << format_sig17(t) << "," << format_sig17(x) << ","
                << format_sig17(eval_solution_1d(sol, problem, t, x)) << "\n";
}

void export_solution_csv_2d(const WaveSolution2D& sol, const WaveProblem2D& problem,
                            const std::vector<double>& times, const std::vector<double>& xs,
                            const std::vector<double>& ys, std::ostream& out) {
    out << "t,x,y,U\n";
    for (double t : times)
        for (double x : xs)
            for (double y : ys)
                out << format_sig17(t) << "," << format_sig17(x) << "," << format_sig17(y) << ","
                    << format_sig17(eval_solution_2d(sol, problem, t, x, y)) << "\n";
}

void export_coefficients_csv_1d(const WaveSolution1D& sol, std::ostream& out) {
    out << "n,a_n,k_f,omega_f\n";
    for (std::size_t i = 0; i < sol.coefficients.size(); ++i)
        out << (i + 1) << "," << format_sig17(sol.coefficients[i]) << ","
            << format_sig17(sol.k_f[i]) << "," << format_sig17(sol.omega_f[i]) << "\n";
}

void export_coefficients_csv_2d(const WaveSolution2D& sol, std::ostream& out) {
    out << "m,n,A_mn,frequency\n";
    for (int m = 1; m <= sol.m_modes; ++m)
        for (int n = 1; n <= sol.n_modes; ++n)
            out << m << "," << n << "," << format_sig17(sol.coefficient(m, n)) << ","
                << format_sig17(sol.frequency(m, n)) << "\n";
}

void export_lacunary_csv(const LacunaryApprox& approx, std::ostream& out) {
    out << "m,n,A_kmn,frequency\n";
    for (int m = 1; m <= approx.m_modes; ++m)
        for (int n = 1; n <= approx.n_modes; ++n)
            out << m << "," << n << "," << format_sig17(approx.coefficient(m, n)) << ","
                << format_sig17(approx.frequency(m, n)) << "\n";
}

namespace {

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

// Pulls j[key] as a number/int/string, appending to `errors` when missing or
// mistyped; returns fallback on problems.
double num_field(const json& j, const std::string& key, double fallback,
                 std::vector<std::string>& errors, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) {
        errors.push_back(where + "." + key + ": expected a number");
        return fallback;
    }
    return j[key].get<double>();
}

int int_field(const json& j, const std::string& key, int fallback,
              std::vector<std::string>& errors, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) {
        errors.push_back(where + "." + key + ": expected an integer");
        return fallback;
    }
    return j[key].get<int>();
}

std::string str_field(const json& j, const std::string& key, const std::string& fallback,
                      std::vector<std::string>& errors, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_string()) {
        errors.push_back(where + "." + key + ": expected a string");
        return fallback;
    }
    return j[key].get<std::string>();
}

StaircaseConfig staircase_field(const json& j, std::vector<std::string>& errors,
                                const std::string& where) {
    StaircaseConfig cfg;
    cfg.pieces = int_field(j, "pieces", cfg.pieces, errors, where);
    cfg.ratio = num_field(j, "ratio", cfg.ratio, errors, where);
    cfg.level = int_field(j, "level", cfg.level, errors, where);
    if (cfg.pieces < 2) errors.push_back(where + ".pieces: must be >= 2");
    else if (cfg.ratio <= 0.0 || cfg.pieces * cfg.ratio > 1.0 + 1e-12)
        errors.push_back(where + ".ratio: must lie in (0, 1/pieces]");
    if (cfg.level < 1 || cfg.level > kStaircaseLevelCap)
        errors.push_back(where + ".level: must lie in [1, " +
                         std::to_string(kStaircaseLevelCap) + "]");
    return cfg;
}

void check_expression(const std::string& text, const std::vector<std::string>& vars,
                      std::vector<std::string>& errors, const std::string& where) {
    try {
        Expression::parse(text, vars);
    } catch (const ExpressionError& e) {
        errors.push_back(where + ": " + e.what());
    }
}

}  // namespace

IfsSpec load_ifs_json(const std::string& path) {
    const json j = load_json_file(path);
    if (!j.contains("maps") || !j["maps"].is_array())
        throw std::runtime_error("IFS document needs a 'maps' array");
    IfsSpec ifs;
    ifs.name = j.value("name", std::string("ifs"));
    for (const auto& m : j["maps"]) {
        SimilarityMap map;
        map.scale_factor = m.at("scale").get<double>();
        map.rotation = m.value("rotation_degrees", 0.0) * M_PI / 180.0;
        const auto& tr = m.at("translation");
        map.translation = {tr.at(0).get<double>(), tr.at(1).get<double>()};
        map.conjugate = m.value("conjugate", false);
        ifs.maps.push_back(map);
    }
    ifs.validate();
    return ifs;
}

void save_ifs_json(const IfsSpec& ifs, std::ostream& out) {
    json j;
    j["name"] = ifs.name;
    j["maps"] = json::array();
    for (const auto& m : ifs.maps) {
        json e;
        e["scale"] = m.scale_factor;
        e["rotation_degrees"] = m.rotation * 180.0 / M_PI;
        e["translation"] = {m.translation.real(), m.translation.imag()};
        e["conjugate"] = m.conjugate;
        j["maps"].push_back(e);
    }
    out << j.dump(2) << "\n";
}

Staircase build_staircase(const StaircaseConfig& cfg) {
    return staircase_from_cantor(CantorSeed{cfg.pieces, cfg.ratio}, cfg.level);
}

Solve1DConfig parse_solve1d_config(const std::string& path, std::vector<std::string>& errors) {
    Solve1DConfig cfg;
    json j;
    try {
        j = load_json_file(path);
    } catch (const std::exception& e) {
        errors.push_back(e.what());
        return cfg;
    }
    const json problem = j.value("problem", json::object());
    if (problem.contains("staircase"))
        cfg.staircase_x = staircase_field(problem["staircase"], errors, "problem.staircase");
    if (problem.contains("staircase_t"))
        cfg.staircase_t = staircase_field(problem["staircase_t"], errors, "problem.staircase_t");
    cfg.length = num_field(problem, "length", cfg.length, errors, "problem");
    cfg.speed_c = num_field(problem, "speed", cfg.speed_c, errors, "problem");
    cfg.speed_factor_vc = num_field(problem, "speed_factor_vc", cfg.speed_factor_vc, errors,
                                    "problem");
    cfg.profile = str_field(problem, "initial_profile", cfg.profile, errors, "problem");
    cfg.modes = int_field(problem, "modes", cfg.modes, errors, "problem");
    cfg.quad_level = int_field(problem, "quadrature_level", cfg.quad_level, errors, "problem");

    const json tol = j.value("tolerances", json::object());
    cfg.bc_tol = num_field(tol, "bc", cfg.bc_tol, errors, "tolerances");

    const json output = j.value("output", json::object());
    cfg.solution_csv = str_field(output, "solution_csv", cfg.solution_csv, errors, "output");
    cfg.coefficients_csv =
        str_field(output, "coefficients_csv", cfg.coefficients_csv, errors, "output");
    cfg.t_samples = int_field(output, "t_samples", cfg.t_samples, errors, "output");
    cfg.x_samples = int_field(output, "x_samples", cfg.x_samples, errors, "output");
    cfg.t_max = num_field(output, "t_max", cfg.t_max, errors, "output");

    if (cfg.length <= 0.0) errors.push_back("problem.length: must be positive");
    if (cfg.speed_c <= 0.0) errors.push_back("problem.speed: must be positive");
    if (cfg.speed_factor_vc <= 0.0 || cfg.speed_factor_vc > 1.0)
        errors.push_back("problem.speed_factor_vc: must lie in (0, 1]");
    if (cfg.modes < 1) errors.push_back("problem.modes: must be >= 1");
    if (cfg.quad_level < 1 || cfg.quad_level > 24)
        errors.push_back("problem.quadrature_level: must lie in [1, 24]");
    if (cfg.bc_tol <= 0.0) errors.push_back("tolerances.bc: must be positive");
    if (cfg.t_samples < 1 || cfg.x_samples < 2)
        errors.push_back("output: need t_samples >= 1 and x_samples >= 2");
    check_expression(cfg.profile, {"u"}, errors, "problem.initial_profile");
    return cfg;
}

Solve2DConfig parse_solve2d_config(const std::string& path, std::vector<std::string>& errors) {
    Solve2DConfig cfg;
    json j;
    try {
        j = load_json_file(path);
    } catch (const std::exception& e) {
        errors.push_back(e.what());
        return cfg;
    }
    const json problem = j.value("problem", json::object());
    if (problem.contains("staircase"))
        cfg.staircase = staircase_field(problem["staircase"], errors, "problem.staircase");
    if (problem.contains("staircase_y"))
        cfg.staircase_y = staircase_field(problem["staircase_y"], errors, "problem.staircase_y");
    if (problem.contains("staircase_t"))
        cfg.staircase_t = staircase_field(problem["staircase_t"], errors, "problem.staircase_t");
    cfg.speed_c = num_field(problem, "speed", cfg.speed_c, errors, "problem");
    cfg.profile = str_field(problem, "initial_profile", cfg.profile, errors, "problem");
    cfg.m_modes = int_field(problem, "m_modes", cfg.m_modes, errors, "problem");
    cfg.n_modes = int_field(problem, "n_modes", cfg.n_modes, errors, "problem");
    cfg.grid_level = int_field(problem, "grid_level", cfg.grid_level, errors, "problem");

    const json tol = j.value("tolerances", json::object());
    cfg.bc_tol = num_field(tol, "bc", cfg.bc_tol, errors, "tolerances");

    const json output = j.value("output", json::object());
    cfg.solution_csv = str_field(output, "solution_csv", cfg.solution_csv, errors, "output");
    cfg.coefficients_csv =
        str_field(output, "coefficients_csv", cfg.coefficients_csv, errors, "output");
    cfg.t_samples = int_field(output, "t_samples", cfg.t_samples, errors, "output");
    cfg.xy_samples = int_field(output, "xy_samples", cfg.xy_samples, errors, "output");
    cfg.t_max = num_field(output, "t_max", cfg.t_max, errors, "output");

    if (cfg.speed_c <= 0.0) errors.push_back("problem.speed: must be positive");
    if (cfg.m_modes < 1 || cfg.n_modes < 1)
        errors.push_back("problem.m_modes/n_modes: must be >= 1");
    if (cfg.grid_level < 4 || cfg.grid_level > 14)
        errors.push_back("problem.grid_level: must lie in [4, 14]");
    if (cfg.bc_tol <= 0.0) errors.push_back("tolerances.bc: must be positive");
    if (cfg.t_samples < 1 || cfg.xy_samples < 2)
        errors.push_back("output: need t_samples >= 1 and xy_samples >= 2");
    check_expression(cfg.profile, {"ux", "uy"}, errors, "problem.initial_profile");
    return cfg;
}

DispersionConfig parse_dispersion_config(const std::string& path,
                                         std::vector<std::string>& errors) {
    DispersionConfig cfg;
    json j;
    try {
        j = load_json_file(path);
    } catch (const std::exception& e) {
        errors.push_back(e.what());
        return cfg;
    }
    const json problem = j.value("problem", json::object());
    if (problem.contains("staircase"))
        cfg.staircase = staircase_field(problem["staircase"], errors, "problem.staircase");
    cfg.speed_factor_vc =
        num_field(problem, "speed_factor_vc", cfg.speed_factor_vc, errors, "problem");
    cfg.k_min = num_field(problem, "k_min", cfg.k_min, errors, "problem");
    cfg.k_max = num_field(problem, "k_max", cfg.k_max, errors, "problem");
    cfg.k_samples = int_field(problem, "k_samples", cfg.k_samples, errors, "problem");
    const json output = j.value("output", json::object());
    cfg.out_csv = str_field(output, "dispersion_csv", cfg.out_csv, errors, "output");

    if (cfg.speed_factor_vc <= 0.0 || cfg.speed_factor_vc > 1.0)
        errors.push_back("problem.speed_factor_vc: must lie in (0, 1]");
    if (!(cfg.k_min > 0.0) || !(cfg.k_max > cfg.k_min))
        errors.push_back("problem.k_min/k_max: need 0 < k_min < k_max");
    if (cfg.k_samples < 2) errors.push_back("problem.k_samples: must be >= 2");
    return cfg;
}

LacunaryConfig parse_lacunary_config(const std::string& path,
                                     std::vector<std::string>& errors) {
    LacunaryConfig cfg;
    json j;
    try {
        j = load_json_file(path);
    } catch (const std::exception& e) {
        errors.push_back(e.what());
        return cfg;
    }
    const json problem = j.value("problem", json::object());
    cfg.level_k = int_field(problem, "level_k", cfg.level_k, errors, "problem");
    cfg.profile = str_field(problem, "boundary_data", cfg.profile, errors, "problem");
    cfg.m_modes = int_field(problem, "m_modes", cfg.m_modes, errors, "problem");
    cfg.n_modes = int_field(problem, "n_modes", cfg.n_modes, errors, "problem");
    if (problem.contains("support")) {
        const auto& s = problem["support"];
        if (!s.is_array() || s.size() != 4 || !s[0].is_number()) {
            errors.push_back("problem.support: expected [x_lo, x_hi, y_lo, y_hi]");
        } else {
            cfg.support = Rect{s[0].get<double>(), s[1].get<double>(), s[2].get<double>(),
                               s[3].get<double>()};
        }
    }
    const json output = j.value("output", json::object());
    cfg.out_csv = str_field(output, "coefficients_csv", cfg.out_csv, errors, "output");

    if (cfg.level_k < 0 || cfg.level_k > 6)
        errors.push_back("problem.level_k: must lie in [0, 6]");
    if (cfg.m_modes < 1 || cfg.n_modes < 1)
        errors.push_back("problem.m_modes/n_modes: must be >= 1");
    check_expression(cfg.profile, {"x", "y"}, errors, "problem.boundary_data");
    return cfg;
}

}  // namespace fractcalc
