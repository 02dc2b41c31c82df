/*
 * io.hpp — CSV export and structured run configuration
 *
 * All CSV output uses one header row and a fixed 17-significant-digit float
 * format so identical runs produce byte-identical files.  IFS specs and run
 * configurations are JSON documents; configuration errors are collected and
 * reported itemized rather than one at a time.
 */
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fractcalc/fractal.hpp"
#include "fractcalc/waves.hpp"

namespace fractcalc {

// %.17g rendering, locale-free.
std::string format_sig17(double value);

void export_staircase_csv(const Staircase& st, int samples, std::ostream& out);
void export_dispersion_csv(const std::vector<std::pair<double, double>>& table,
                           std::ostream& out);
void export_solution_csv_1d(const WaveSolution1D& sol, const WaveProblem1D& problem,
                            const std::vector<double>& times, const std::vector<double>& xs,
                            std::ostream& out);
void export_solution_csv_2d(const WaveSolution2D& sol, const WaveProblem2D& problem,
                            const std::vector<double>& times, const std::vector<double>& xs,
                            const std::vector<double>& ys, std::ostream& out);
void export_coefficients_csv_1d(const WaveSolution1D& sol, std::ostream& out);
void export_coefficients_csv_2d(const WaveSolution2D& sol, std::ostream& out);
void export_lacunary_csv(const LacunaryApprox& approx, std::ostream& out);

// IFS document: {"name": ..., "maps": [{"scale": r, "rotation_degrees": d,
//                "translation": [x, y], "conjugate": bool}, ...]}
IfsSpec load_ifs_json(const std::string& path);
void save_ifs_json(const IfsSpec& ifs, std::ostream& out);

struct StaircaseConfig {
    int pieces = 2;
    double ratio = 1.0 / 3.0;
    int level = 40;
};

struct Solve1DConfig {
    StaircaseConfig staircase_x;
    std::optional<StaircaseConfig> staircase_t;  // defaults to staircase_x
    double length = 1.0;
    double speed_c = 1.0;
    double speed_factor_vc = 1.0;
    std::string profile = "sin(pi*u)";
    int modes = 32;
    int quad_level = 16;
    double bc_tol = 1e-9;
    std::string solution_csv;
    std::string coefficients_csv;
    int t_samples = 11;
    int x_samples = 51;
    double t_max = 2.0;
};

struct Solve2DConfig {
    StaircaseConfig staircase;  // shared by x, y, t unless overridden
    std::optional<StaircaseConfig> staircase_y;
    std::optional<StaircaseConfig> staircase_t;
    double speed_c = 1.0;
    std::string profile = "sin(pi*ux)*sin(pi*uy)";
    int m_modes = 16;
    int n_modes = 16;
    int grid_level = 9;
    double bc_tol = 1e-9;
    std::string solution_csv;
    std::string coefficients_csv;
    int t_samples = 3;
    int xy_samples = 17;
    double t_max = 1.0;
};

struct DispersionConfig {
    StaircaseConfig staircase;
    double speed_factor_vc = 1.0;
    double k_min = 0.01;
    double k_max = 4.0;
    int k_samples = 256;
    std::string out_csv;
};

struct LacunaryConfig {
    int level_k = 0;
    std::string profile = "sin(pi*x)*sin(pi*y)";
    int m_modes = 4;
    int n_modes = 4;
    std::optional<Rect> support;
    std::string out_csv;
};

// Parsers return the config and append human-readable problems to `errors`;
// a nonempty error list means the document is unusable.
Solve1DConfig parse_solve1d_config(const std::string& path, std::vector<std::string>& errors);
Solve2DConfig parse_solve2d_config(const std::string& path, std::vector<std::string>& errors);
DispersionConfig parse_dispersion_config(const std::string& path,
                                         std::vector<std::string>& errors);
LacunaryConfig parse_lacunary_config(const std::string& path, std::vector<std::string>& errors);

Staircase build_staircase(const StaircaseConfig& cfg);

}  // namespace fractcalc
