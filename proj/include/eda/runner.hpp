// File-level entry points shared by the CLI and by tests: run a
// configuration and leave its artifacts in a directory.
//
//   <dir>/<name>.csv, .hist.csv, .byz.csv   per-round history (if recorded)
//   <dir>/<name>.outcome.json               final per-transaction outcomes

#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "eda/harness.hpp"
#include "eda/reporting.hpp"

namespace eda {

inline nlohmann::ordered_json outcome_to_json(const ConsensusOutcome& outcome) {
    nlohmann::ordered_json doc;
    doc["epsilon"] = outcome.epsilon;
    doc["all_converged"] = outcome.all_converged;
    doc["transactions"] = nlohmann::ordered_json::array();
    for (const TxOutcome& tx : outcome.transactions) {
        nlohmann::ordered_json row;
        row["index"] = tx.index;
        row["tx"] = tx.tx.hex();
        row["anchor"] = tx.anchor;
        row["converged"] = tx.converged;
        row["rounds_used"] = tx.rounds_used;
        row["final_value"] = tx.final_value;
        row["final_spread"] = tx.final_spread;
        doc["transactions"].push_back(std::move(row));
    }
    doc["package_order"] = nlohmann::ordered_json::array();
    for (std::uint32_t idx : outcome.package_order) {
        doc["package_order"].push_back(outcome.transactions[idx].tx.hex());
    }
    doc["collisions"] = nlohmann::ordered_json::array();
    for (const auto& [a, b] : outcome.collisions) {
        doc["collisions"].push_back({outcome.transactions[a].tx.hex(),
                                     outcome.transactions[b].tx.hex()});
    }
    return doc;
}

inline void write_artifacts(const SimResult& result, const std::string& out_dir,
                            const std::string& name, bool with_history) {
    std::filesystem::create_directories(out_dir);
    const std::string base = (std::filesystem::path(out_dir) / name).string();
    if (with_history) { write_round_history_csv(result.history, base); }
    std::ofstream json_out(base + ".outcome.json");
    if (!json_out) { throw std::runtime_error("cannot open output file " + base + ".outcome.json"); }
    json_out << outcome_to_json(result.outcome).dump(2) << '\n';
    if (!json_out.flush()) {
        throw std::runtime_error("failed writing output file " + base + ".outcome.json");
    }
}

inline SimResult run_to_files(const SimConfig& config, const std::string& out_dir,
                              const std::string& name = "run", unsigned workers = 1) {
    SimResult result = run_consensus(config, workers);
    write_artifacts(result, out_dir, name, config.record_history);
    return result;
}

}  // namespace eda
