// Simulation configuration: one value set drives one consensus run over a
// package of transactions.  Defaults describe a desk-scale run that finishes
// in well under a second.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "eda/protocol.hpp"
#include "eda/transaction.hpp"

namespace eda {

// Transactions with anchors spread evenly across [0, 1]: a single
// transaction sits at 0.5, otherwise anchor k/(count-1).
inline std::vector<TransactionId> evenly_spaced_transactions(std::uint32_t count) {
    if (count == 0) { throw std::invalid_argument("count: need at least one transaction"); }
    std::vector<TransactionId> txs;
    txs.reserve(count);
    if (count == 1) {
        txs.push_back(TransactionId::from_anchor(0, 0.5));
        return txs;
    }
    for (std::uint32_t k = 0; k < count; ++k) {
        txs.push_back(TransactionId::from_anchor(
            k, static_cast<double>(k) / static_cast<double>(count - 1)));
    }
    return txs;
}

struct SimConfig {
    std::uint32_t n_peers = 1000;
    double sample_ratio = 0.02;
    double epsilon = 0.01;
    double byzantine_fraction = 0.0;
    std::uint64_t seed = 0;
    InitMode init_mode = InitMode::Random;
    double jitter = 0.5;
    std::uint32_t max_rounds = 100;
    bool record_history = true;
    std::vector<TransactionId> transactions = evenly_spaced_transactions(1);

    void validate() const {
        if (n_peers < 2) { throw std::invalid_argument("n_peers: need at least 2 peers"); }
        if (!(sample_ratio > 0.0 && sample_ratio <= 1.0)) {
            throw std::invalid_argument("sample_ratio: must lie in (0, 1]");
        }
        if (!(epsilon > 0.0 && epsilon < 1.0)) {
            throw std::invalid_argument("epsilon: must lie in (0, 1)");
        }
        if (!(byzantine_fraction >= 0.0 && byzantine_fraction < 1.0)) {
            throw std::invalid_argument("byzantine_fraction: must lie in [0, 1)");
        }
        if (!(jitter >= 0.0)) { throw std::invalid_argument("jitter: must be >= 0"); }
        if (max_rounds < 1) { throw std::invalid_argument("max_rounds: must be >= 1"); }
        if (transactions.empty()) {
            throw std::invalid_argument("transactions: need at least one transaction");
        }
        // Duplicate digests are allowed (they model a capacity collision by
        // construction); the full id must stay unique.
        std::unordered_set<std::string> seen;
        for (const TransactionId& tx : transactions) {
            tx.validate();
            if (!seen.insert(tx.hex() + ':' + std::to_string(tx.index)).second) {
                throw std::invalid_argument("transactions: duplicate id " + tx.hex());
            }
        }
    }
};

}  // namespace eda
