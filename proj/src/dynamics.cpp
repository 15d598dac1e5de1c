#include "isingmdp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include "isingmdp/errors.hpp"

namespace isingmdp {

bool is_susceptible(const Configuration& config, TorusCoord spin) {
    const int nbr = config.neighbor_sum(spin);
    // +1 spin: dH = 2(nbr + h) < 0 iff nbr <= -2 iff >= 3 minus neighbours.
    // -1 spin: dH = -2(nbr + h) < 0 iff nbr >= 0 iff >= 2 plus neighbours.
    return config.at(spin) > 0 ? nbr <= -2 : nbr >= 0;
}

std::vector<TorusCoord> susceptible_set(const Configuration& config) {
    std::vector<TorusCoord> out;
    const int n = config.n();
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            if (is_susceptible(config, {x, y})) out.push_back({x, y});
    return out;
}

bool is_robust(const Configuration& config) {
    const int n = config.n();
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            if (is_susceptible(config, {x, y})) return false;
    return true;
}

bool is_single_plus_cluster(const Configuration& config) {
    const int n = config.n();
    const long long plus = config.count_plus();
    if (plus == 0) return false;
    std::vector<std::uint8_t> seen(std::size_t(n) * n, 0);
    std::deque<TorusCoord> queue;
    auto cells = config.plus_cells();
    queue.push_back(cells.front());
    seen[std::size_t(cells.front().y) * n + cells.front().x] = 1;
    long long visited = 0;
    while (!queue.empty()) {
        TorusCoord c = queue.front();
        queue.pop_front();
        ++visited;
        const TorusCoord nbrs[4] = {{c.x == 0 ? n - 1 : c.x - 1, c.y},
                                    {c.x == n - 1 ? 0 : c.x + 1, c.y},
                                    {c.x, c.y == 0 ? n - 1 : c.y - 1},
                                    {c.x, c.y == n - 1 ? 0 : c.y + 1}};
        for (TorusCoord q : nbrs) {
            auto& mark = seen[std::size_t(q.y) * n + q.x];
            if (!mark && config.at(q) > 0) {
                mark = 1;
                queue.push_back(q);
            }
        }
    }
    return visited == plus;
}

namespace {
bool side_in_index_set(int v, int n) {
    return (v >= 2 && v <= n - 3) || v == n - 2 || v == n;
}
}  // namespace

bool is_exact_plus_rectangle(const Configuration& config) {
    std::optional<Rect> rect;
    try {
        rect = circumscribed_rectangle(config);
    } catch (const AmbiguousWrapError&) {
        return false;
    }
    if (!rect) return false;
    if ((long long)rect->width * rect->height != config.count_plus()) return false;
    return side_in_index_set(rect->width, config.n()) &&
           side_in_index_set(rect->height, config.n());
}

std::optional<std::pair<int, int>> u1_dims(const Configuration& config) {
    if (config.count_plus() == 0) return std::nullopt;
    if (!is_robust(config)) return std::nullopt;
    if (!is_single_plus_cluster(config)) return std::nullopt;
    auto rect = circumscribed_rectangle(config);
    return std::make_pair(rect->width, rect->height);
}

bool metropolis_step(Configuration& config, const ModelParams& params, Engine& rng) {
    const int n = config.n();
    std::uniform_int_distribution<int> cell(0, n * n - 1);
    const int c = cell(rng);
    const TorusCoord spin{c % n, c / n};
    const double dh = delta_energy_flip(config, spin, params.h);
    if (dh <= 0.0) {
        config.flip(spin);
        return true;
    }
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (unif(rng) < std::exp(-params.beta * dh)) {
        config.flip(spin);
        return true;
    }
    return false;
}

bool zero_temperature_step(Configuration& config, Engine& rng) {
    const int n = config.n();
    std::uniform_int_distribution<int> cell(0, n * n - 1);
    const int c = cell(rng);
    const TorusCoord spin{c % n, c / n};
    if (is_susceptible(config, spin)) {
        config.flip(spin);
        return true;
    }
    return false;
}

DownhillTrace sample_downhill_trace(Configuration& config, Engine& rng) {
    DownhillTrace trace;
    trace.probability = 1;
    for (;;) {
        auto delta = susceptible_set(config);
        if (delta.empty()) return trace;
        std::uniform_int_distribution<std::size_t> pick(0, delta.size() - 1);
        const TorusCoord spin = delta[pick(rng)];
        config.flip(spin);
        trace.flips.push_back(spin);
        trace.probability /= Rat(delta.size());
    }
}

std::vector<std::uint8_t> active_closure_mask(const Configuration& config) {
    const int n = config.n();
    std::vector<std::uint8_t> mask(std::size_t(n) * n, 0);
    std::deque<TorusCoord> queue;
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            if (config.at(x, y) > 0) {
                mask[std::size_t(y) * n + x] = 1;
                queue.push_back({x, y});
            }
    auto closed_neighbors = [&](TorusCoord c) {
        int count = 0;
        const TorusCoord nbrs[4] = {{c.x == 0 ? n - 1 : c.x - 1, c.y},
                                    {c.x == n - 1 ? 0 : c.x + 1, c.y},
                                    {c.x, c.y == 0 ? n - 1 : c.y - 1},
                                    {c.x, c.y == n - 1 ? 0 : c.y + 1}};
        for (TorusCoord q : nbrs) count += mask[std::size_t(q.y) * n + q.x];
        return count;
    };
    while (!queue.empty()) {
        TorusCoord c = queue.front();
        queue.pop_front();
        const TorusCoord nbrs[4] = {{c.x == 0 ? n - 1 : c.x - 1, c.y},
                                    {c.x == n - 1 ? 0 : c.x + 1, c.y},
                                    {c.x, c.y == 0 ? n - 1 : c.y - 1},
                                    {c.x, c.y == n - 1 ? 0 : c.y + 1}};
        for (TorusCoord q : nbrs) {
            auto& m = mask[std::size_t(q.y) * n + q.x];
            if (!m && closed_neighbors(q) >= 2) {
                m = 1;
                queue.push_back(q);
            }
        }
    }
    return mask;
}

Configuration closure_fill(const Configuration& config) {
    auto mask = active_closure_mask(config);
    Configuration out = config;
    const int n = config.n();
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            if (mask[std::size_t(y) * n + x]) out.set(x, y, +1);
    return out;
}

bool is_upward_committed(const Configuration& config) {
    const int n = config.n();
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            if (config.at(x, y) > 0) {
                const TorusCoord c{x, y};
                // neighbor_sum = #plus - #minus; >= 2 plus neighbours iff sum >= 0.
                if (config.neighbor_sum(c) < 0) return false;
            }
        }
    }
    return true;
}

const Rat* ExactDistribution::probability_of(const Configuration& config) const {
    for (const auto& [endpoint, p] : support)
        if (endpoint == config) return &p;
    return nullptr;
}

Rat ExactDistribution::total_mass() const {
    Rat total = 0;
    for (const auto& [endpoint, p] : support) total += p;
    return total;
}

std::string ExactDistribution::to_csv() const {
    std::string out = "state,probability_numerator,probability_denominator\n";
    for (const auto& [endpoint, p] : support) {
        const int n = endpoint.n();
        for (int y = 0; y < n; ++y) {
            if (y) out += '|';
            for (int x = 0; x < n; ++x) out += endpoint.at(x, y) > 0 ? '+' : '-';
        }
        out += ',';
        out += boost::multiprecision::numerator(p).str();
        out += ',';
        out += boost::multiprecision::denominator(p).str();
        out += '\n';
    }
    return out;
}

namespace {

// Sparse distribution over endpoint ids, kept sorted by id.
using IdDist = std::vector<std::pair<int, Rat>>;

void accumulate(IdDist& into, const IdDist& from, const Rat& weight) {
    for (const auto& [id, p] : from) {
        auto it = std::lower_bound(into.begin(), into.end(), id,
                                   [](const auto& e, int v) { return e.first < v; });
        if (it != into.end() && it->first == id)
            it->second += p * weight;
        else
            into.insert(it, {id, p * weight});
    }
}

struct Enumerator {
    const int n;
    const EnumerationOptions options;
    std::vector<int> active_cells;  // flat indices allowed to change
    std::unordered_map<std::string, IdDist> memo;
    std::vector<Configuration> endpoints;
    std::map<Configuration, int> endpoint_ids;

    explicit Enumerator(const Configuration& root, const EnumerationOptions& opts)
        : n(root.n()), options(opts) {
        if (options.restrict_to_active_window) {
            auto mask = active_closure_mask(root);
            for (int i = 0; i < n * n; ++i)
                if (mask[i]) active_cells.push_back(i);
        } else {
            for (int i = 0; i < n * n; ++i) active_cells.push_back(i);
        }
    }

    std::string key_of(const Configuration& config) const {
        std::string key((active_cells.size() + 7) / 8, '\0');
        const auto& raw = config.raw();
        for (std::size_t k = 0; k < active_cells.size(); ++k)
            if (raw[active_cells[k]] > 0) key[k / 8] |= char(1u << (k % 8));
        return key;
    }

    int endpoint_id(const Configuration& config) {
        auto [it, inserted] = endpoint_ids.try_emplace(config, int(endpoints.size()));
        if (inserted) endpoints.push_back(config);
        return it->second;
    }

    std::vector<TorusCoord> susceptibles_in_window(const Configuration& config) const {
        std::vector<TorusCoord> out;
        for (int i : active_cells) {
            const TorusCoord c{i % n, i / n};
            if (is_susceptible(config, c)) out.push_back(c);
        }
        return out;
    }

    const IdDist& solve(Configuration& config) {
        std::string key = key_of(config);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        if (memo.size() >= options.state_cap)
            throw StateExplosionError("downhill enumeration exceeded the state cap");

        IdDist dist;
        auto delta = susceptibles_in_window(config);
        if (delta.empty()) {
            dist.push_back({endpoint_id(config), Rat(1)});
        } else if (options.use_commitment_pruning && is_upward_committed(config)) {
            // Only -1 -> +1 flips remain possible, every susceptible -1 spin
            // stays susceptible until flipped, so the unique robust endpoint
            // is the filled closure.
            dist.push_back({endpoint_id(closure_fill(config)), Rat(1)});
        } else {
            const Rat weight(1, (unsigned long long)delta.size());
            for (TorusCoord spin : delta) {
                config.flip(spin);
                const IdDist& child = solve(config);
                accumulate(dist, child, weight);
                config.flip(spin);
            }
        }
        auto [it, _] = memo.emplace(std::move(key), std::move(dist));
        return it->second;
    }
};

}  // namespace

ExactDistribution downhill_endpoint_distribution(const Configuration& config,
                                                 const EnumerationOptions& options) {
    Enumerator enumerator(config, options);
    Configuration work = config;
    const IdDist root = enumerator.solve(work);
    ExactDistribution out;
    for (const auto& [id, p] : root) out.support.push_back({enumerator.endpoints[id], p});
    std::sort(out.support.begin(), out.support.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

double QKappaEstimate::conditional(const Configuration& config) const {
    if (robust_hits == 0) return 0.0;
    auto it = terminal_counts.find(config);
    if (it == terminal_counts.end()) return 0.0;
    return double(it->second) / double(robust_hits);
}

QKappaEstimate estimate_q_kappa(const Configuration& config,
                                const std::optional<ModelParams>& params, long long kappa,
                                long long reps, Engine& rng) {
    if (reps < 1) throw std::invalid_argument("reps must be >= 1");
    QKappaEstimate estimate;
    estimate.reps = reps;
    const std::uint64_t base = rng();
    for (long long r = 0; r < reps; ++r) {
        Engine stream = make_engine(base, std::uint64_t(r));
        Configuration walk = config;
        if (params) {
            for (long long t = 0; t < kappa; ++t) metropolis_step(walk, *params, stream);
        } else {
            for (long long t = 0; t < kappa; ++t) zero_temperature_step(walk, stream);
        }
        if (is_robust(walk)) {
            ++estimate.robust_hits;
            ++estimate.terminal_counts[walk];
        }
    }
    return estimate;
}

}  // namespace isingmdp
