#include "isingmdp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "isingmdp/dynamics.hpp"
#include "isingmdp/errors.hpp"
#include "isingmdp/rng.hpp"
#include "isingmdp/snapshot.hpp"

namespace isingmdp {

void ExperimentConfig::validate() const {
    if (n < 6) throw std::invalid_argument("experiments need n >= 6");
    if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("h must lie in (0,1)");
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    if (kappa < 1) throw std::invalid_argument("kappa must be >= 1");
    if (replications < 1) throw std::invalid_argument("replications must be >= 1");
    if (max_epochs < 0) throw std::invalid_argument("max_epochs must be >= 0");
    if (!(lambda > 0 && lambda < 1)) throw std::invalid_argument("lambda must lie in (0,1)");
    if (policy != "opt" && policy != "pi1" && policy != "pi2")
        throw std::invalid_argument("policy must be opt, pi1 or pi2");
}

void apply_config_line(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "n")
        cfg.n = std::stoi(value);
    else if (key == "h")
        cfg.h = std::stod(value);
    else if (key == "beta")
        cfg.beta = std::stod(value);
    else if (key == "kappa")
        cfg.kappa = std::stoll(value);
    else if (key == "policy")
        cfg.policy = value;
    else if (key == "lambda")
        cfg.lambda = parse_rational(value);
    else if (key == "max_epochs")
        cfg.max_epochs = std::stoll(value);
    else if (key == "replications")
        cfg.replications = std::stoll(value);
    else if (key == "seed")
        cfg.master_seed = std::stoull(value);
    else if (key == "start")
        cfg.start_snapshot = value;
    else if (key == "outdir")
        cfg.output_dir = value;
    else if (key == "snapshot_dir")
        cfg.snapshot_dir = value;
    else if (key == "snapshot_every")
        cfg.snapshot_every = std::stoll(value);
    else
        throw std::invalid_argument("unknown config key: " + key);
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto strip = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        " is not key=value");
        apply_config_line(cfg, strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
    return cfg;
}

LatticePolicy policy_by_name(const std::string& name, const Rat& lambda, int n) {
    if (name == "opt") return LatticePolicy::lifted_optimal(lambda, n);
    if (name == "pi1") return LatticePolicy::lifted_benchmark(BenchmarkKind::Pi1, n);
    if (name == "pi2") return LatticePolicy::lifted_benchmark(BenchmarkKind::Pi2, n);
    throw std::invalid_argument("unknown policy name: " + name);
}

std::string RunRecord::to_text() const {
    std::ostringstream out;
    out << "seed " << seed << '\n';
    out << "hit_epoch " << (hit_epoch ? std::to_string(*hit_epoch) : std::string("-1")) << '\n';
    out << "lens_fallbacks " << lens_fallbacks << '\n';
    out << "wrap_ambiguous_epochs " << wrap_ambiguous_epochs << '\n';
    for (std::size_t t = 0; t < sizes.size(); ++t)
        out << t << ' ' << sizes[t].first << ' ' << sizes[t].second << '\n';
    return out.str();
}

Configuration starting_configuration(const ExperimentConfig& cfg) {
    if (cfg.start_snapshot.empty()) {
        TorusCoord anchor{cfg.n / 2 - 1, cfg.n / 2 - 1};
        return rectangle_config(cfg.n, 3, 3, anchor);
    }
    auto [config, h] = load_snapshot_file(cfg.start_snapshot);
    (void)h;  // field comes from the experiment config, not the snapshot
    if (config.n() != cfg.n)
        throw std::invalid_argument("snapshot lattice size does not match config n");
    return config;
}

RunRecord run_simulation(const ExperimentConfig& cfg, const LatticePolicy& policy,
                         std::uint64_t seed) {
    cfg.validate();
    RunRecord record;
    record.seed = seed;
    Configuration config = starting_configuration(cfg);
    const ModelParams params(cfg.h, cfg.beta);
    Engine rng(seed);
    const long long cells = (long long)cfg.n * cfg.n;

    auto maybe_snapshot = [&](long long epoch, bool terminal) {
        if (cfg.snapshot_dir.empty()) return;
        const bool periodic = cfg.snapshot_every > 0 && epoch % cfg.snapshot_every == 0;
        if (!(terminal || epoch == 0 || periodic)) return;
        std::string path = cfg.snapshot_dir + "/seed" + std::to_string(seed) + "_epoch" +
                           std::to_string(epoch) + ".snap";
        save_snapshot_file(path, config, cfg.h);
        record.snapshot_paths.push_back(std::move(path));
    };

    for (long long epoch = 0;; ++epoch) {
        std::pair<int, int> size{0, 0};
        try {
            if (auto rect = circumscribed_rectangle(config))
                size = {rect->width, rect->height};
        } catch (const AmbiguousWrapError&) {
            size = {-1, -1};
            ++record.wrap_ambiguous_epochs;
        }
        record.sizes.push_back(size);
        if (config.count_plus() == cells) {
            record.hit_epoch = epoch;
            maybe_snapshot(epoch, true);
            break;
        }
        if (epoch == cfg.max_epochs) {
            maybe_snapshot(epoch, true);
            break;
        }
        maybe_snapshot(epoch, false);
        PolicyStep step = step_policy(config, epoch, policy);
        if (step.outside_lens) ++record.lens_fallbacks;
        if (step.flip) config.flip(*step.flip);
        for (long long t = 0; t < cfg.kappa; ++t) metropolis_step(config, params, rng);
    }
    return record;
}

std::string SweepResult::rows_csv() const {
    std::ostringstream out;
    out << "kappa,policy,seed,hit_epochs,hit_steps\n";
    for (const auto& row : rows) {
        out << row.kappa << ',' << row.policy << ',' << row.seed << ','
            << (row.hit_epochs ? std::to_string(*row.hit_epochs) : std::string("-1")) << ','
            << (row.hit_steps ? std::to_string(*row.hit_steps) : std::string("-1")) << '\n';
    }
    return out.str();
}

std::string SweepResult::summary_csv() const {
    std::ostringstream out;
    out << "kappa,policy,hits,reps,mean_epochs,sd_epochs,mean_steps,sd_steps\n";
    std::map<std::pair<long long, std::string>, std::vector<long long>> cells;
    std::map<std::pair<long long, std::string>, long long> totals;
    for (const auto& row : rows) {
        auto key = std::make_pair(row.kappa, row.policy);
        ++totals[key];
        if (row.hit_epochs) cells[key].push_back(*row.hit_epochs);
    }
    for (const auto& [key, hits] : totals) {
        const auto& epochs = cells[key];
        double mean = 0.0, sd = 0.0;
        if (!epochs.empty()) {
            for (long long e : epochs) mean += double(e);
            mean /= double(epochs.size());
            for (long long e : epochs) sd += (double(e) - mean) * (double(e) - mean);
            sd = epochs.size() > 1 ? std::sqrt(sd / double(epochs.size() - 1)) : 0.0;
        }
        out << key.first << ',' << key.second << ',' << epochs.size() << ',' << hits << ','
            << mean << ',' << sd << ',' << mean * double(key.first) << ','
            << sd * double(key.first) << '\n';
    }
    return out.str();
}

SweepResult hitting_time_sweep(const ExperimentConfig& base,
                               const std::vector<long long>& kappas,
                               const std::vector<std::string>& policies, long long reps,
                               int workers) {
    base.validate();
    struct Task {
        long long kappa;
        std::string policy_name;
        long long rep;
    };
    std::vector<Task> tasks;
    for (long long kappa : kappas)
        for (const auto& name : policies)
            for (long long r = 0; r < reps; ++r) tasks.push_back({kappa, name, r});

    SweepResult result;
    result.rows.resize(tasks.size());

    // Policies are immutable; share one instance per name across workers.
    std::map<std::string, LatticePolicy> policy_cache;
    for (const auto& name : policies)
        policy_cache.emplace(name, policy_by_name(name, base.lambda, base.n));

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks.size()) return;
            const Task& task = tasks[t];
            ExperimentConfig cfg = base;
            cfg.kappa = task.kappa;
            cfg.policy = task.policy_name;
            // Seeds depend only on (master, cell, rep): growing the budget or
            // changing worker count reproduces existing rows byte for byte.
            const std::uint64_t policy_tag = task.policy_name == "opt"   ? 1
                                             : task.policy_name == "pi1" ? 2
                                                                         : 3;
            const std::uint64_t seed = derive_seed(base.master_seed,
                                                   std::uint64_t(task.kappa), policy_tag,
                                                   std::uint64_t(task.rep));
            RunRecord record =
                run_simulation(cfg, policy_cache.at(task.policy_name), seed);
            SweepRow row;
            row.kappa = task.kappa;
            row.policy = task.policy_name;
            row.seed = seed;
            row.rep = task.rep;
            row.hit_epochs = record.hit_epoch;
            if (record.hit_epoch) row.hit_steps = *record.hit_epoch * task.kappa;
            result.rows[t] = std::move(row);
        }
    };

    int count = workers > 0 ? workers : int(std::thread::hardware_concurrency());
    if (count < 1) count = 1;
    std::vector<std::thread> pool;
    for (int w = 0; w < count; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return result;
}

}  // namespace isingmdp
