#include "isingmdp/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace isingmdp {

long long Configuration::edge_sum() const {
    // One term per unordered torus edge: right and up neighbour of every cell.
    long long total = 0;
    for (int y = 0; y < n_; ++y) {
        const int yp = y == n_ - 1 ? 0 : y + 1;
        for (int x = 0; x < n_; ++x) {
            const int xp = x == n_ - 1 ? 0 : x + 1;
            const int s = spins_[idx(x, y)];
            total += s * spins_[idx(xp, y)];
            total += s * spins_[idx(x, yp)];
        }
    }
    return total;
}

long long Configuration::spin_sum() const {
    long long total = 0;
    for (std::int8_t s : spins_) total += s;
    return total;
}

long long Configuration::count_plus() const {
    long long total = 0;
    for (std::int8_t s : spins_) total += (s > 0);
    return total;
}

std::vector<TorusCoord> Configuration::plus_cells() const {
    std::vector<TorusCoord> out;
    for (int y = 0; y < n_; ++y)
        for (int x = 0; x < n_; ++x)
            if (at(x, y) > 0) out.push_back({x, y});
    return out;
}

Configuration rectangle_config(int n, int width, int height, TorusCoord anchor) {
    if (width < 0 || height < 0 || width > n || height > n)
        throw std::invalid_argument("rectangle does not fit the lattice");
    Configuration config = Configuration::all_minus(n);
    for (int dy = 0; dy < height; ++dy)
        for (int dx = 0; dx < width; ++dx)
            config.set((anchor.x + dx) % n, (anchor.y + dy) % n, +1);
    return config;
}

namespace {
int wrap_abs(int a, int b, int n) {
    int d = std::abs(a - b);
    return std::min(d, n - d);
}
}  // namespace

int torus_distance(TorusCoord p, TorusCoord q, int n) {
    return wrap_abs(p.x, q.x, n) + wrap_abs(p.y, q.y, n);
}

std::optional<int> directional_distance(TorusCoord p, TorusCoord q, int n, Axis axis) {
    if (axis == Axis::Horizontal) {
        if (p.y != q.y) return std::nullopt;
        return wrap_abs(p.x, q.x, n);
    }
    if (p.x != q.x) return std::nullopt;
    return wrap_abs(p.y, q.y, n);
}

std::optional<int> set_distance(TorusCoord p, const std::vector<TorusCoord>& w, int n) {
    std::optional<int> best;
    for (TorusCoord q : w) {
        int d = torus_distance(p, q, n);
        if (!best || d < *best) best = d;
    }
    return best;
}

std::optional<int> set_directional_distance(TorusCoord p, const std::vector<TorusCoord>& w,
                                            int n, Axis axis) {
    std::optional<int> best;
    for (TorusCoord q : w) {
        auto d = directional_distance(p, q, n, axis);
        if (d && (!best || *d < *best)) best = *d;
    }
    return best;
}

std::vector<TorusCoord> nearest_in_set(TorusCoord p, const std::vector<TorusCoord>& w, int n) {
    std::vector<TorusCoord> out;
    auto best = set_distance(p, w, n);
    if (!best) return out;
    for (TorusCoord q : w)
        if (torus_distance(p, q, n) == *best) out.push_back(q);
    return out;
}

std::vector<TorusCoord> nearest_in_set_directional(TorusCoord p,
                                                   const std::vector<TorusCoord>& w, int n,
                                                   Axis axis) {
    std::vector<TorusCoord> out;
    auto best = set_directional_distance(p, w, n, axis);
    if (!best) return out;
    for (TorusCoord q : w) {
        auto d = directional_distance(p, q, n, axis);
        if (d && *d == *best) out.push_back(q);
    }
    return out;
}

double energy(const Configuration& config, double h) {
    return -double(config.edge_sum()) - h * double(config.spin_sum());
}

double delta_energy_flip(const Configuration& config, TorusCoord spin, double h) {
    // Integer changes of the two Hamiltonian pieces, h applied once at the end;
    // bit-identical to an energy difference computed from full integer sums.
    const long long d_edge = -2LL * config.at(spin) * config.neighbor_sum(spin);
    const long long d_spin = -2LL * config.at(spin);
    return -double(d_edge) - h * double(d_spin);
}

SpinClassification classify_spins(const Configuration& config) {
    SpinClassification out;
    const int n = config.n();
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            if (config.at(x, y) <= 0) continue;
            const TorusCoord c{x, y};
            const int sh = config.horizontal_neighbor_sum(c);
            const int sv = config.vertical_neighbor_sum(c);
            if (sh == 0 && sv == 0)
                out.corners.push_back(c);
            else if (sh == 2 && sv == 0)
                out.h_boundary.push_back(c);
            else if (sv == 2 && sh == 0)
                out.v_boundary.push_back(c);
            else if (sh == 2 && sv == 2)
                out.interior.push_back(c);
        }
    }
    return out;
}

namespace {

// Minimal wrap-interval covering the occupied coordinates of one axis.
// Returns {start, length}; ties between equally large gaps break toward the
// smallest arc start.
std::pair<int, int> covering_arc(const std::vector<bool>& occupied, int n) {
    int count = 0;
    for (bool b : occupied) count += b;
    if (count == n) return {0, n};
    int best_gap = -1, best_start = n;
    for (int s = 0; s < n; ++s) {
        // Maximal gaps start at an unoccupied cell whose predecessor is occupied;
        // with 0 < count < n every maximal gap has one.
        if (occupied[s] || !occupied[(s + n - 1) % n]) continue;
        int len = 0;
        while (len < n && !occupied[(s + len) % n]) ++len;
        const int arc_start = (s + len) % n;
        if (len > best_gap || (len == best_gap && arc_start < best_start)) {
            best_gap = len;
            best_start = arc_start;
        }
    }
    return {best_start, n - best_gap};
}

}  // namespace

std::optional<Rect> circumscribed_rectangle(const Configuration& config) {
    const int n = config.n();
    std::vector<bool> col(n, false), row(n, false);
    long long plus = 0;
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            if (config.at(x, y) > 0) {
                col[x] = true;
                row[y] = true;
                ++plus;
            }
        }
    }
    if (plus == 0) return std::nullopt;

    bool all_cols = std::all_of(col.begin(), col.end(), [](bool b) { return b; });
    bool all_rows = std::all_of(row.begin(), row.end(), [](bool b) { return b; });
    if (all_cols && all_rows && plus < (long long)n * n)
        throw AmbiguousWrapError("+1 spins meet every row and column without filling the torus");

    auto [ax, w] = covering_arc(col, n);
    auto [ay, h] = covering_arc(row, n);
    return Rect{w, h, {ax, ay}};
}

double gibbs_log_weight(const Configuration& config, const ModelParams& params) {
    return -params.beta * energy(config, params.h);
}

double partition_function(int n, const ModelParams& params) {
    if (n > 4) throw LatticeTooLargeError("partition function is exhaustive; n must be <= 4");
    const int cells = n * n;
    double z = 0.0;
    Configuration config = Configuration::all_minus(n);
    for (std::uint64_t bits = 0; bits < (1ULL << cells); ++bits) {
        for (int c = 0; c < cells; ++c)
            config.set(c % n, c / n, (bits >> c) & 1 ? +1 : -1);
        z += std::exp(gibbs_log_weight(config, params));
    }
    return z;
}

}  // namespace isingmdp
