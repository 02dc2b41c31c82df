#include "fractcalc/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fractcalc {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::domain_error(what);
}

constexpr double kChainTol = 1e-12;

}  // namespace

std::complex<double> SimilarityMap::apply(std::complex<double> z) const {
    if (conjugate) z = std::conj(z);
    return translation + std::polar(scale_factor, rotation) * z;
}

void IfsSpec::validate() const {
    require(maps.size() >= 2, "IfsSpec: need at least two maps");
    for (const auto& m : maps)
        require(m.scale_factor > 0.0 && m.scale_factor < 1.0,
                "IfsSpec: every scale factor must lie strictly in (0,1)");
}

double IfsSpec::max_chain_gap() const {
    double gap = std::abs(maps.front().apply(0.0) - std::complex<double>(0.0));
    gap = std::max(gap, std::abs(maps.back().apply(1.0) - std::complex<double>(1.0)));
    for (std::size_t i = 0; i + 1 < maps.size(); ++i)
        gap = std::max(gap, std::abs(maps[i].apply(1.0) - maps[i + 1].apply(0.0)));
    return gap;
}

double IfsSpec::similarity_dimension() const {
    validate();
    const auto moran = [&](double s) {
        double sum = 0.0;
        for (const auto& m : maps) sum += std::pow(m.scale_factor, s);
        return sum - 1.0;
    };
    double lo = 0.0, hi = 4.0;
    while (moran(hi) > 0.0) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (moran(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

IfsSpec koch_ifs(double alpha) {
    require(alpha > 0.0 && alpha < M_PI / 2.0, "koch_ifs: alpha must lie in (0, pi/2)");
    const double L = 1.0 / (2.0 + 2.0 * std::cos(alpha));
    IfsSpec ifs;
    ifs.name = "koch";
    const std::complex<double> a = std::polar(1.0, alpha);
    ifs.maps = {
        {L, 0.0, {0.0, 0.0}, false},                  // L z
        {L, alpha, {L, 0.0}, false},                  // L (1 + a z)
        {L, -alpha, L * (1.0 + a), false},            // L (1 + a + conj(a) z)
        {L, 0.0, {L * (1.0 + 2.0 * std::cos(alpha)), 0.0}, false},  // L (1 + 2 cos a + z)
    };
    require(ifs.max_chain_gap() <= kChainTol, "koch_ifs: chain continuity violated");
    return ifs;
}

double FractalCurve::length() const {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < polyline.size(); ++i)
        total += std::abs(polyline[i + 1] - polyline[i]);
    return total;
}

std::complex<double> FractalCurve::point_at(double xi) const {
    require(xi >= 0.0 && xi <= 1.0, "FractalCurve: parameter must lie in [0,1]");
    const int m = int(ifs.maps.size());
    // Digits of xi select the map composition; the composition applied to 0
    // lands on the left endpoint of the cylinder, converging geometrically.
    std::vector<int> digits;
    double pos = xi;
    double contraction = 1.0;
    for (int depth = 0; depth < 600 && contraction > 1e-18; ++depth) {
        double scaled = pos * m;
        int d = int(scaled);
        if (d >= m) d = m - 1;
        digits.push_back(d);
        pos = scaled - d;
        contraction *= ifs.maps[std::size_t(d)].scale_factor;
    }
    std::complex<double> z = pos;  // remaining parameter inside the last cell
    for (auto it = digits.rbegin(); it != digits.rend(); ++it)
        z = ifs.maps[std::size_t(*it)].apply(z);
    return z;
}

FractalCurve hutchinson_iterate(const IfsSpec& ifs,
                                const std::vector<std::complex<double>>& initiator, int n,
                                std::size_t segment_cap) {
    ifs.validate();
    require(n >= 0, "hutchinson_iterate: level must be nonnegative");
    require(initiator.size() >= 2, "hutchinson_iterate: initiator needs at least two points");
    require(ifs.max_chain_gap() <= kChainTol,
            "hutchinson_iterate: IFS is not a continuous curve chain");

    const std::size_t m = ifs.maps.size();
    std::size_t segments = initiator.size() - 1;
    for (int i = 0; i < n; ++i) {
        if (segments > segment_cap / m) {
            std::ostringstream msg;
            msg << "hutchinson_iterate: level " << n << " needs " << m << "^" << n
                << " segments, above the cap of " << segment_cap;
            throw std::length_error(msg.str());
        }
        segments *= m;
    }

    std::vector<std::complex<double>> pts = initiator;
    for (int iter = 0; iter < n; ++iter) {
        std::vector<std::complex<double>> next;
        next.reserve(pts.size() * m);
        for (std::size_t i = 0; i < m; ++i) {
            // Chained maps: drop the duplicated junction point.
            for (std::size_t j = (i == 0 ? 0 : 1); j < pts.size(); ++j)
                next.push_back(ifs.maps[i].apply(pts[j]));
        }
        pts.swap(next);
    }

    FractalCurve curve;
    curve.polyline = std::move(pts);
    curve.level = n;
    curve.dimension_s = ifs.similarity_dimension();
    curve.ifs = ifs;
    return curve;
}

FractalCurve hutchinson_iterate(const IfsSpec& ifs, int n, std::size_t segment_cap) {
    return hutchinson_iterate(ifs, {{0.0, 0.0}, {1.0, 0.0}}, n, segment_cap);
}

double mass_sum_at_level(const FractalCurve& curve, double s, double a, double b, int level) {
    require(s > 0.0, "mass_function: s must be positive");
    require(a >= 0.0 && a < b && b <= 1.0, "mass_function: need 0 <= a < b <= 1");
    require(level >= 1 && level <= 12, "mass_function: partition level must lie in [1, 12]");
    const double m = double(curve.ifs.maps.size());
    const double cells = std::pow(m, level);

    std::vector<double> knots;
    knots.push_back(a);
    const long long first = (long long)std::floor(a * cells) + 1;
    for (long long k = first; k < (long long)std::ceil(b * cells); ++k) {
        const double xi = double(k) / cells;
        if (xi > a && xi < b) knots.push_back(xi);
    }
    knots.push_back(b);

    double sum = 0.0;
    std::complex<double> prev = curve.point_at(knots.front());
    for (std::size_t i = 1; i < knots.size(); ++i) {
        const std::complex<double> cur = curve.point_at(knots[i]);
        sum += std::pow(std::abs(cur - prev), s);
        prev = cur;
    }
    return sum;
}

double mass_function(const FractalCurve& curve, double s, double a, double b, double tol,
                     int level_cap) {
    double prev = mass_sum_at_level(curve, s, a, b, 1);
    for (int level = 2; level <= level_cap; ++level) {
        const double cur = mass_sum_at_level(curve, s, a, b, level);
        if (std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    const double last = mass_sum_at_level(curve, s, a, b, level_cap);
    std::ostringstream msg;
    msg << "mass_function: no convergence within level cap " << level_cap
        << "; last two iterates " << prev << ", " << last;
    throw std::runtime_error(msg.str());
}

void CantorSeed::validate() const {
    require(pieces >= 2, "CantorSeed: need at least two pieces");
    require(ratio > 0.0 && pieces * ratio <= 1.0,
            "CantorSeed: need ratio in (0, 1/m] so the pieces do not overlap");
}

double CantorSeed::dimension() const { return std::log(double(pieces)) / std::log(1.0 / ratio); }

bool CantorSeed::is_identity() const { return pieces * ratio >= 1.0 - 1e-15; }

double CantorSeed::gap_width() const { return (1.0 - pieces * ratio) / double(pieces - 1); }

double CantorSeed::piece_offset(int i) const { return double(i) * (ratio + gap_width()); }

namespace {

// One step of the digit walk.
struct DigitStep {
    int digit;
    bool in_gap;
    double next_pos;  // renormalized position inside the piece
};

// Most seeds of interest have integral slot structure: 1/ratio = R slots of
// equal width, pieces sitting S slots apart (middle third: R = 3, S = 2).
// Walking in slot units keeps the base-R digit recursion exact for exactly
// representable positions instead of tripling rounding error per level.
struct SlotLayout {
    int base;    // R
    int stride;  // S
};

std::optional<SlotLayout> slot_layout(const CantorSeed& seed) {
    const double r = 1.0 / seed.ratio;
    const double s = (seed.ratio + seed.gap_width()) / seed.ratio;
    const long long R = std::llround(r), S = std::llround(s);
    if (R < 2 || S < 1 || std::abs(r - double(R)) > 1e-9 || std::abs(s - double(S)) > 1e-9)
        return std::nullopt;
    if ((seed.pieces - 1) * S + 1 != R) return std::nullopt;
    return SlotLayout{int(R), int(S)};
}

DigitStep digit_step_generic(const CantorSeed& seed, double pos) {
    const double stride = seed.ratio + seed.gap_width();
    int i = int(pos / stride);
    if (i > seed.pieces - 1) i = seed.pieces - 1;
    double off = pos - seed.piece_offset(i);
    if (off > seed.ratio) {
        // Past the last piece only rounding can land; pin to the right edge.
        if (i == seed.pieces - 1) return {i, false, 1.0};
        // Gap between piece i and i+1; the staircase is constant there and
        // equals the value at the right piece's left edge.
        return {i + 1, true, 0.0};
    }
    if (off < 0.0) off = 0.0;
    return {i, false, off / seed.ratio};
}

DigitStep digit_step_slots(const SlotLayout& layout, double pos, double snap) {
    const double t = pos * layout.base;
    long long slot = (long long)t;
    if (slot > layout.base - 1) slot = layout.base - 1;
    double frac = t - double(slot);
    if (frac > 1.0 - snap && slot < layout.base - 1) {
        ++slot;
        frac = 0.0;
    }
    const int q = int(slot / layout.stride);
    if (slot % layout.stride != 0) {
        // The gap's left boundary is the right edge of the piece before it.
        if (frac <= snap && (slot - 1) % layout.stride == 0)
            return {int((slot - 1) / layout.stride), false, 1.0};
        return {q + 1, true, 0.0};
    }
    return {q, false, frac};
}

struct DigitWalker {
    const CantorSeed& seed;
    std::optional<SlotLayout> layout;
    // Rounding in the position amplifies by the base at every level, so the
    // edge-snapping window has to grow with it (capped: past depth ~20 a
    // misread digit moves the value by under 2^-20 anyway).
    double drift = 1e-13;

    explicit DigitWalker(const CantorSeed& s) : seed(s), layout(slot_layout(s)) {}
    DigitStep step(double pos) {
        const double snap = std::min(drift, 1e-6);
        drift *= layout ? layout->base : (1.0 / seed.ratio);
        return layout ? digit_step_slots(*layout, pos, snap) : digit_step_generic(seed, pos);
    }
};

}  // namespace

double Staircase::eval(double x) const {
    require(x >= 0.0 && x <= 1.0, "staircase_eval: x must lie in [0,1]");
    if (!seed) {
        require(!breakpoints.empty(), "staircase_eval: staircase has no seed and no table");
        // Breakpoint-table staircase: monotone linear interpolation.
        const auto it = std::lower_bound(
            breakpoints.begin(), breakpoints.end(), x,
            [](const std::pair<double, double>& bp, double v) { return bp.first < v; });
        if (it == breakpoints.begin()) return it->second;
        if (it == breakpoints.end()) return breakpoints.back().second;
        const auto [x1, u1] = *std::prev(it);
        const auto [x2, u2] = *it;
        return x2 > x1 ? u1 + (u2 - u1) * (x - x1) / (x2 - x1) : u1;
    }
    if (seed->is_identity()) return x;

    DigitWalker walker(*seed);
    const double m = seed->pieces;
    double value = 0.0, place = 1.0, pos = x;
    for (int depth = 0; depth < level; ++depth) {
        const DigitStep step = walker.step(pos);
        place /= m;
        if (step.in_gap) return value + step.digit * place;
        value += step.digit * place;
        pos = step.next_pos;
    }
    return value + pos * place;  // linear remainder inside the last cell
}

double Staircase::extend(double x) const {
    if (x < 0.0) return -extend(-x);
    double whole = std::floor(x);
    double frac = x - whole;
    if (frac > 1.0) frac = 1.0;  // guard against rounding at integer points
    return whole + eval(frac);
}

double Staircase::inverse(double u) const {
    require(u >= 0.0 && u <= 1.0, "staircase inverse: u must lie in [0,1]");
    if (!seed || seed->is_identity()) return u;
    const int m = seed->pieces;
    std::vector<int> digits;
    digits.reserve(std::size_t(level));
    double rem = u;
    for (int depth = 0; depth < level && rem > 0.0; ++depth) {
        double scaled = rem * m;
        int d = int(scaled);
        if (d >= m) d = m - 1;
        digits.push_back(d);
        rem = scaled - d;
    }
    // A terminating expansion addresses a survivor's left edge, i.e. the
    // right edge of a gap, where the digit walk is fragile.  The equivalent
    // representation ending in (m-1)s addresses the same point as a chain of
    // right edges, which walks stably.
    if (rem == 0.0 && !digits.empty()) {
        while (!digits.empty() && digits.back() == 0) digits.pop_back();
        if (!digits.empty()) {
            --digits.back();
            while (int(digits.size()) < level) digits.push_back(m - 1);
        }
    }
    double x = 0.0, scale = 1.0;
    for (int d : digits) {
        x += seed->piece_offset(d) * scale;
        scale *= seed->ratio;
    }
    return x + rem * scale;
}

std::optional<int> Staircase::gap_depth(double x) const {
    require(x >= 0.0 && x <= 1.0, "staircase gap_depth: x must lie in [0,1]");
    if (!seed || seed->is_identity()) return std::nullopt;
    DigitWalker walker(*seed);
    double pos = x;
    for (int depth = 1; depth <= level; ++depth) {
        const DigitStep step = walker.step(pos);
        if (step.in_gap) return depth;
        pos = step.next_pos;
    }
    return std::nullopt;
}

namespace {

void collect_breakpoints(const CantorSeed& seed, int depth, double x0, double width, double u0,
                         double du, std::vector<std::pair<double, double>>& out) {
    if (depth == 0) {
        out.emplace_back(x0, u0);
        out.emplace_back(x0 + width, u0 + du);
        return;
    }
    for (int i = 0; i < seed.pieces; ++i)
        collect_breakpoints(seed, depth - 1, x0 + seed.piece_offset(i) * width,
                            width * seed.ratio, u0 + i * du / seed.pieces, du / seed.pieces, out);
}

}  // namespace

Staircase staircase_from_cantor(const CantorSeed& seed, int level) {
    seed.validate();
    require(level >= 1, "staircase_from_cantor: level must be >= 1");
    if (level > kStaircaseLevelCap) {
        std::ostringstream msg;
        msg << "staircase_from_cantor: level " << level << " exceeds the cap of "
            << kStaircaseLevelCap;
        throw std::length_error(msg.str());
    }

    Staircase st;
    st.seed = seed;
    st.level = level;
    st.dimension_s = seed.dimension();
    st.seed_name = seed.is_identity() ? "identity" : "cantor";

    // Breakpoints at a table depth that keeps the list small; evaluation
    // itself runs on digits up to `level`.
    int table_level = 1;
    while (table_level < level &&
           std::pow(double(seed.pieces), table_level + 1) <= 4096.0)
        ++table_level;
    collect_breakpoints(seed, table_level, 0.0, 1.0, 0.0, 1.0, st.breakpoints);
    std::sort(st.breakpoints.begin(), st.breakpoints.end());
    st.breakpoints.erase(std::unique(st.breakpoints.begin(), st.breakpoints.end()),
                         st.breakpoints.end());
    return st;
}

double staircase_eval(const Staircase& st, double x) { return st.eval(x); }

double extend_staircase(const Staircase& st, double x) { return st.extend(x); }

std::optional<SupportInterval> survivor_at(const Staircase& st, double x, int level_j) {
    require(st.seed.has_value(), "survivor_at: staircase must be seed-backed");
    require(level_j >= 1 && level_j <= st.level, "survivor_at: level out of range");
    const CantorSeed& seed = *st.seed;

    SupportInterval iv{0.0, 1.0, 0.0, 1.0};
    if (seed.is_identity()) {
        // Uniform m-adic cell around x.
        const double m = seed.pieces;
        const double cells = std::pow(m, level_j);
        double k = std::floor(x * cells);
        if (k >= cells) k = cells - 1;
        iv.x_lo = k / cells;
        iv.x_hi = (k + 1) / cells;
        iv.u_lo = iv.x_lo;
        iv.u_hi = iv.x_hi;
        return iv;
    }

    DigitWalker walker(seed);
    double pos = x, width = 1.0, du = 1.0;
    for (int depth = 0; depth < level_j; ++depth) {
        const DigitStep step = walker.step(pos);
        if (step.in_gap) return std::nullopt;
        iv.x_lo += seed.piece_offset(step.digit) * width;
        width *= seed.ratio;
        du /= seed.pieces;
        iv.u_lo += step.digit * du;
        pos = step.next_pos;
    }
    iv.x_hi = iv.x_lo + width;
    iv.u_hi = iv.u_lo + du;
    return iv;
}

std::vector<double> gap_midpoints(const CantorSeed& seed, std::size_t count) {
    seed.validate();
    require(!seed.is_identity(), "gap_midpoints: the identity staircase has no gaps");
    std::vector<double> out;
    // Breadth-first over levels: surviving intervals of level L-1 each break
    // into m pieces separated by m-1 gaps.
    std::vector<std::pair<double, double>> cells = {{0.0, 1.0}};  // (x0, width)
    while (out.size() < count) {
        std::vector<std::pair<double, double>> next;
        std::vector<double> mids;
        for (const auto& [x0, w] : cells) {
            for (int i = 0; i < seed.pieces; ++i) {
                next.emplace_back(x0 + seed.piece_offset(i) * w, w * seed.ratio);
                if (i + 1 < seed.pieces) {
                    const double gap_lo = x0 + (seed.piece_offset(i) + seed.ratio) * w;
                    mids.push_back(gap_lo + 0.5 * seed.gap_width() * w);
                }
            }
        }
        std::sort(mids.begin(), mids.end());
        for (double mid : mids) {
            if (out.size() == count) break;
            out.push_back(mid);
        }
        cells.swap(next);
    }
    return out;
}

BoundarySquare quadratic_koch_boundary(int k) {
    if (k < 0) throw std::domain_error("quadratic_koch_boundary: k must be nonnegative");
    double odd = 1.0;  // a_{-1}
    double even = 0.0;
    for (int i = 0; i <= k; ++i) {
        even = odd / 4.0;    // 4 a_{2i} = a_{2i-1}
        odd = 1.0 + even;    // a_{2i+1} = 1 + a_{2i}
    }
    return {even, odd, -even, odd};
}

}  // namespace fractcalc
