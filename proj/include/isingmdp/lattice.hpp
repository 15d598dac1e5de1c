#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "isingmdp/errors.hpp"

namespace isingmdp {

struct TorusCoord {
    int x = 0;  // column
    int y = 0;  // row
    friend bool operator==(TorusCoord a, TorusCoord b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(TorusCoord a, TorusCoord b) { return !(a == b); }
    friend bool operator<(TorusCoord a, TorusCoord b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    }
};

struct ModelParams {
    double h;     // external field, in (0,1)
    double beta;  // inverse temperature, > 0
    ModelParams(double h_, double beta_) : h(h_), beta(beta_) {
        if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("field h must lie in (0,1)");
        if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    }
};

/// ±1 spin assignment on an n-by-n torus, stored row-major.
///
/// Raw lattice operations accept any n >= 2; the n >= 6 requirement that
/// keeps the rectangle index set {2,..,n-3, n-2, n} nonempty is enforced at
/// the reduced-MDP and policy boundary, not here, so that small exhaustive
/// checks (partition function, n=3 energy oracles) stay expressible.
class Configuration {
public:
    Configuration(int n, std::int8_t fill) : n_(n), spins_(std::size_t(n) * n, fill) {
        if (n < 2) throw std::invalid_argument("lattice side must be at least 2");
        if (fill != -1 && fill != 1) throw std::invalid_argument("spins are -1 or +1");
    }
    static Configuration all_minus(int n) { return Configuration(n, -1); }
    static Configuration all_plus(int n) { return Configuration(n, +1); }

    int n() const { return n_; }
    int size() const { return n_ * n_; }

    std::int8_t at(int x, int y) const { return spins_[idx(x, y)]; }
    std::int8_t at(TorusCoord c) const { return at(c.x, c.y); }
    void set(int x, int y, std::int8_t v) { spins_[idx(x, y)] = v; }
    void set(TorusCoord c, std::int8_t v) { set(c.x, c.y, v); }
    void flip(TorusCoord c) { spins_[idx(c.x, c.y)] = -spins_[idx(c.x, c.y)]; }
    Configuration flipped(TorusCoord c) const {
        Configuration out = *this;
        out.flip(c);
        return out;
    }

    // Sum of the four neighbouring spins with periodic wrap.
    int neighbor_sum(TorusCoord c) const {
        const int xm = c.x == 0 ? n_ - 1 : c.x - 1;
        const int xp = c.x == n_ - 1 ? 0 : c.x + 1;
        const int ym = c.y == 0 ? n_ - 1 : c.y - 1;
        const int yp = c.y == n_ - 1 ? 0 : c.y + 1;
        return spins_[idx(xm, c.y)] + spins_[idx(xp, c.y)] + spins_[idx(c.x, ym)] +
               spins_[idx(c.x, yp)];
    }
    int horizontal_neighbor_sum(TorusCoord c) const {
        const int xm = c.x == 0 ? n_ - 1 : c.x - 1;
        const int xp = c.x == n_ - 1 ? 0 : c.x + 1;
        return spins_[idx(xm, c.y)] + spins_[idx(xp, c.y)];
    }
    int vertical_neighbor_sum(TorusCoord c) const {
        const int ym = c.y == 0 ? n_ - 1 : c.y - 1;
        const int yp = c.y == n_ - 1 ? 0 : c.y + 1;
        return spins_[idx(c.x, ym)] + spins_[idx(c.x, yp)];
    }

    // Integer pieces of the Hamiltonian: H = -edge_sum - h * spin_sum.
    // Keeping them separate makes energy comparisons exact for 0 < h < 1.
    long long edge_sum() const;
    long long spin_sum() const;

    long long count_plus() const;
    std::vector<TorusCoord> plus_cells() const;

    const std::vector<std::int8_t>& raw() const { return spins_; }

    friend bool operator==(const Configuration& a, const Configuration& b) {
        return a.n_ == b.n_ && a.spins_ == b.spins_;
    }
    friend bool operator<(const Configuration& a, const Configuration& b) {
        return a.n_ != b.n_ ? a.n_ < b.n_ : a.spins_ < b.spins_;
    }

private:
    std::size_t idx(int x, int y) const { return std::size_t(y) * n_ + x; }

    int n_;
    std::vector<std::int8_t> spins_;
};

// Rectangle of +1 spins with the given width (columns) and height (rows),
// lower-left corner at `anchor`, wrapping around the torus if needed.
Configuration rectangle_config(int n, int width, int height, TorusCoord anchor = {0, 0});

int torus_distance(TorusCoord p, TorusCoord q, int n);

enum class Axis { Horizontal, Vertical };

// Wrap-corrected one-dimensional distance; empty when the off-axis
// coordinates differ (the "infinite" case).
std::optional<int> directional_distance(TorusCoord p, TorusCoord q, int n, Axis axis);

// delta-tilde: distance from a point to a coordinate set (empty set -> nullopt).
std::optional<int> set_distance(TorusCoord p, const std::vector<TorusCoord>& w, int n);
std::optional<int> set_directional_distance(TorusCoord p, const std::vector<TorusCoord>& w,
                                            int n, Axis axis);

// mu / mu_h / mu_v: the (possibly empty) argmin sets of the distances above.
std::vector<TorusCoord> nearest_in_set(TorusCoord p, const std::vector<TorusCoord>& w, int n);
std::vector<TorusCoord> nearest_in_set_directional(TorusCoord p,
                                                   const std::vector<TorusCoord>& w, int n,
                                                   Axis axis);

double energy(const Configuration& config, double h);

// H(sigma^i) - H(sigma) = 2 * sigma(i) * (neighbor_sum(i) + h), computed locally.
double delta_energy_flip(const Configuration& config, TorusCoord spin, double h);

struct SpinClassification {
    std::vector<TorusCoord> corners;
    std::vector<TorusCoord> h_boundary;
    std::vector<TorusCoord> v_boundary;
    std::vector<TorusCoord> interior;
};

// Classifies +1 spins by their per-axis neighbour sums; spins matching no
// case (strips, protrusions) are omitted from all four sets.
SpinClassification classify_spins(const Configuration& config);

struct Rect {
    int width = 0;
    int height = 0;
    TorusCoord anchor;  // lower-left corner (smallest coordinate of each covering arc)
    friend bool operator==(const Rect& a, const Rect& b) {
        return a.width == b.width && a.height == b.height && a.anchor == b.anchor;
    }
};

// Smallest axis-aligned torus rectangle covering all +1 spins; nullopt when
// there are none. Throws AmbiguousWrapError when the +1 spins meet every row
// and every column without filling the lattice.
std::optional<Rect> circumscribed_rectangle(const Configuration& config);

double gibbs_log_weight(const Configuration& config, const ModelParams& params);

// Exhaustive sum over all 2^(n^2) configurations; n <= 4 only.
double partition_function(int n, const ModelParams& params);

}  // namespace isingmdp
