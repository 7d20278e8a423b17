// Command-line driver for the agreement simulator.
//
// Precedence for settings: explicit flags beat a --config file, which beats
// a --preset, which beats built-in defaults.  Exit code 0 means every
// transaction converged, 1 means at least one did not, 2 means the
// invocation or configuration was invalid.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <iostream>
#include <map>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "eda/eda.hpp"

namespace {

const char* init_mode_name(eda::InitMode mode) {
    return mode == eda::InitMode::UniformGrid ? "uniform-grid" : "random";
}

void print_summary(const eda::SimConfig& cfg, const eda::ConsensusOutcome& outcome) {
    std::cout << "peers=" << cfg.n_peers << " sample_ratio=" << eda::format_value(cfg.sample_ratio)
              << " epsilon=" << eda::format_value(cfg.epsilon)
              << " byzantine=" << eda::format_value(cfg.byzantine_fraction)
              << " seed=" << cfg.seed << " init=" << init_mode_name(cfg.init_mode)
              << " jitter=" << eda::format_value(cfg.jitter) << " max_rounds=" << cfg.max_rounds
              << " transactions=" << cfg.transactions.size() << '\n';
    for (const eda::TxOutcome& tx : outcome.transactions) {
        std::cout << "tx " << tx.index << ' ' << tx.tx.hex()
                  << " anchor=" << eda::format_value(tx.anchor)
                  << (tx.converged ? " converged" : " NOT-converged")
                  << " rounds=" << tx.rounds_used
                  << " final=" << eda::format_value(tx.final_value)
                  << " spread=" << eda::format_value(tx.final_spread) << '\n';
    }
    std::cout << "order:";
    for (std::uint32_t idx : outcome.package_order) { std::cout << ' ' << idx; }
    std::cout << '\n';
    for (const auto& [a, b] : outcome.collisions) {
        std::cout << "collision: tx " << a << " and tx " << b << " within epsilon\n";
    }
    std::cout << (outcome.all_converged ? "package converged" : "package NOT converged") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"epsilon-differential agreement simulator"};
    app.set_config("--config", "", "read options from a key=value file");
    app.allow_config_extras(CLI::config_extras_mode::error);  // unknown keys are config errors

    eda::SimConfig defaults;
    std::uint32_t peers = defaults.n_peers;
    double sample_ratio = defaults.sample_ratio;
    double epsilon = defaults.epsilon;
    double byzantine = defaults.byzantine_fraction;
    std::uint64_t seed = defaults.seed;
    eda::InitMode init_mode = defaults.init_mode;
    double jitter = defaults.jitter;
    std::uint32_t tx_count = 1;
    std::uint32_t max_rounds = defaults.max_rounds;
    bool no_history = false;
    unsigned workers = 0;
    std::string preset;
    std::string out_dir;
    std::string name = "run";

    const std::map<std::string, eda::InitMode> init_map{
        {"uniform-grid", eda::InitMode::UniformGrid}, {"random", eda::InitMode::Random}};

    app.add_option("--peers", peers, "number of peers")->capture_default_str();
    app.add_option("--sample-ratio", sample_ratio, "fraction of other peers each send reaches")
        ->capture_default_str();
    app.add_option("--epsilon", epsilon, "agreement tolerance")->capture_default_str();
    app.add_option("--byzantine", byzantine, "fraction of faulty peers")->capture_default_str();
    app.add_option("--seed", seed, "simulation seed")->capture_default_str();
    app.add_option("--init", init_mode, "initial estimate placement")
        ->transform(CLI::CheckedTransformer(init_map, CLI::ignore_case))
        ->default_str("random");
    app.add_option("--jitter", jitter, "initial placement half-width around the anchor")
        ->capture_default_str();
    app.add_option("--transactions", tx_count, "number of evenly spaced transactions")
        ->capture_default_str();
    app.add_option("--max-rounds", max_rounds, "round budget per transaction")
        ->capture_default_str();
    app.add_flag("--no-history", no_history, "skip per-round statistics");
    app.add_option("--workers", workers, "parallel transaction instances, 0 = auto")
        ->capture_default_str();
    app.add_option("--preset", preset, "named configuration to start from")
        ->check(CLI::IsMember(eda::preset_names()));
    app.add_option("--out", out_dir, "directory for CSV and JSON artifacts");
    app.add_option("--name", name, "artifact base name")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        eda::SimConfig cfg = preset.empty() ? eda::SimConfig{} : eda::preset_config(preset);
        if (app.count("--peers")) { cfg.n_peers = peers; }
        if (app.count("--sample-ratio")) { cfg.sample_ratio = sample_ratio; }
        if (app.count("--epsilon")) { cfg.epsilon = epsilon; }
        if (app.count("--byzantine")) { cfg.byzantine_fraction = byzantine; }
        if (app.count("--seed")) { cfg.seed = seed; }
        if (app.count("--init")) { cfg.init_mode = init_mode; }
        if (app.count("--jitter")) { cfg.jitter = jitter; }
        if (app.count("--transactions")) {
            cfg.transactions = eda::evenly_spaced_transactions(tx_count);
        }
        if (app.count("--max-rounds")) { cfg.max_rounds = max_rounds; }
        if (no_history) { cfg.record_history = false; }
        cfg.validate();

        unsigned pool = workers;
        if (pool == 0) {
            const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
            pool = std::min<unsigned>(hw, static_cast<unsigned>(cfg.transactions.size()));
        }

        const eda::SimResult result =
            out_dir.empty() ? eda::run_consensus(cfg, pool)
                            : eda::run_to_files(cfg, out_dir, name, pool);
        print_summary(cfg, result.outcome);
        if (!out_dir.empty()) { std::cout << "artifacts: " << out_dir << '/' << name << ".*\n"; }
        return result.outcome.all_converged ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
