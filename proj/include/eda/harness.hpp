// Simulation harness: wires peers, roles and per-transaction protocol
// instances into full consensus runs.
//
// Determinism contract: every random decision is drawn from a stream keyed
// by (seed, peer lane, transaction digest, round, purpose).  Two runs with
// the same configuration produce bit-identical trajectories, transactions
// evolve independently of how many siblings run next to them, and the
// worker count never changes results.
//
// The roster indirection exists for relabeling tests: recipient candidates
// are enumerated in roster order, so permuting lanes, roles and roster
// together permutes every trajectory bit-exactly.  Production tables use
// the identity roster.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numeric>
#include <span>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "eda/config.hpp"
#include "eda/protocol.hpp"
#include "eda/reporting.hpp"
#include "eda/rng.hpp"
#include "eda/transaction.hpp"

namespace eda {

// How many transactions fit in one package with pairwise separation epsilon.
// Computed with a small guard so representable reciprocals like 1/0.01 do
// not round down a slot.
inline std::uint64_t package_capacity(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("epsilon: must lie in (0, 1)");
    }
    return static_cast<std::uint64_t>(std::floor(1.0 / epsilon + 1e-9));
}

inline std::uint32_t byzantine_count(std::uint32_t n_peers, double fraction) {
    return static_cast<std::uint32_t>(
        std::floor(fraction * static_cast<double>(n_peers) + 1e-9));
}

struct PeerTable {
    std::vector<std::uint64_t> lanes;        // per-peer stream roots
    std::vector<PeerRole> roles;
    std::vector<PeerId> roster;              // label order for candidate enumeration
    std::vector<std::uint32_t> roster_pos;   // inverse of roster

    std::uint32_t size() const { return static_cast<std::uint32_t>(lanes.size()); }

    std::uint32_t honest_count() const {
        return static_cast<std::uint32_t>(std::count(roles.begin(), roles.end(), PeerRole::Honest));
    }

    void validate() const {
        const std::size_t n = lanes.size();
        if (n < 2) { throw std::invalid_argument("lanes: need at least 2 peers"); }
        if (roles.size() != n || roster.size() != n || roster_pos.size() != n) {
            throw std::invalid_argument("roles: peer table arrays must have equal size");
        }
        std::vector<bool> seen(n, false);
        for (std::size_t pos = 0; pos < n; ++pos) {
            const PeerId p = roster[pos];
            if (p >= n || seen[p] || roster_pos[p] != pos) {
                throw std::invalid_argument("roster: not a permutation with matching inverse");
            }
            seen[p] = true;
        }
        if (honest_count() == 0) { throw std::invalid_argument("roles: need at least one honest peer"); }
    }
};

// Standard table: identity roster, byzantine role assigned to the first
// floor(fraction * N) entries of a seed-derived permutation.
inline PeerTable make_peer_table(std::uint32_t n_peers, double byzantine_fraction,
                                 std::uint64_t seed) {
    if (n_peers < 2) { throw std::invalid_argument("n_peers: need at least 2 peers"); }
    if (!(byzantine_fraction >= 0.0 && byzantine_fraction < 1.0)) {
        throw std::invalid_argument("byzantine_fraction: must lie in [0, 1)");
    }
    PeerTable table;
    table.lanes.resize(n_peers);
    for (std::uint32_t i = 0; i < n_peers; ++i) { table.lanes[i] = lane_root(seed, i); }
    table.roles.assign(n_peers, PeerRole::Honest);
    std::vector<PeerId> perm(n_peers);
    std::iota(perm.begin(), perm.end(), PeerId{0});
    RandomStream role_rng = roles_stream(seed);
    shuffle(std::span<PeerId>(perm), role_rng);
    const std::uint32_t faulty = byzantine_count(n_peers, byzantine_fraction);
    for (std::uint32_t i = 0; i < faulty; ++i) { table.roles[perm[i]] = PeerRole::Byzantine; }
    table.roster = std::move(perm);
    std::iota(table.roster.begin(), table.roster.end(), PeerId{0});
    table.roster_pos = table.roster;
    return table;
}

// Explicit-parts table for tests that relabel peers.
inline PeerTable make_peer_table(std::vector<std::uint64_t> lanes, std::vector<PeerRole> roles,
                                 std::vector<PeerId> roster) {
    PeerTable table;
    table.lanes = std::move(lanes);
    table.roles = std::move(roles);
    table.roster = std::move(roster);
    table.roster_pos.assign(table.roster.size(), 0);
    for (std::uint32_t pos = 0; pos < table.roster.size(); ++pos) {
        const PeerId p = table.roster[pos];
        if (p >= table.roster.size()) { throw std::invalid_argument("roster: peer id out of range"); }
        table.roster_pos[p] = pos;
    }
    table.validate();
    return table;
}

// One transaction's protocol instance over a fixed peer table.  Owns the
// estimate vector and replays rounds; all state transitions are driven by
// the streams derived from the transaction digest.
class TxInstance {
public:
    TxInstance(const PeerTable& table, TransactionId tx)
        : table_(&table), tx_(std::move(tx)), tx_key_(stream_key_of(tx_)) {
        tx_.validate();
        table_->validate();
        estimates_.assign(table_->size(), 0.0);
        inbox_.resize(table_->size());
    }

    void initialize(InitMode mode, double jitter) {
        const double anchor = anchor_of(tx_);
        const std::uint32_t n = table_->size();
        round_ = 0;
        last_byz_.clear();
        for (PeerId i = 0; i < n; ++i) {
            RandomStream rng = init_stream(table_->lanes[i], tx_key_);
            estimates_[i] =
                initialize_estimate(table_->roster_pos[i], n, mode, anchor, jitter, rng);
        }
    }

    // Test seam: drop the instance into an arbitrary state.
    void set_estimates(std::span<const OrderEstimate> values) {
        if (values.size() != estimates_.size()) {
            throw std::invalid_argument("values: size must match peer count");
        }
        std::copy(values.begin(), values.end(), estimates_.begin());
    }

    // One synchronous round: every peer broadcasts to a fresh random subset,
    // then every honest peer takes the median of its inbox.
    void run_round(double sample_ratio) {
        const std::uint32_t n = table_->size();
        const auto k = static_cast<std::uint32_t>(sample_size(n, sample_ratio));
        const std::uint32_t r = ++round_;
        last_byz_.clear();
        for (PeerId s = 0; s < n; ++s) {
            RandomStream srng = sample_stream(table_->lanes[s], tx_key_, r);
            sampler_.draw(n - 1, k, srng, positions_);
            double value;
            if (table_->roles[s] == PeerRole::Byzantine) {
                RandomStream brng = byz_stream(table_->lanes[s], tx_key_, r);
                value = byzantine_emit(brng);
                last_byz_.push_back(value);
            } else {
                value = estimates_[s];
            }
            const std::uint32_t self_pos = table_->roster_pos[s];
            for (std::uint32_t t : positions_) {
                const PeerId recipient = table_->roster[t < self_pos ? t : t + 1];
                inbox_[recipient].push_back(clamp_unit(value));
            }
        }
        for (PeerId i = 0; i < n; ++i) {
            if (table_->roles[i] == PeerRole::Honest) {
                estimates_[i] = honest_update(inbox_[i], estimates_[i]);
            }
            inbox_[i].clear();
        }
    }

    std::uint32_t round() const { return round_; }
    const std::vector<OrderEstimate>& estimates() const { return estimates_; }
    const std::vector<double>& last_byzantine_values() const { return last_byz_; }
    const PeerTable& table() const { return *table_; }
    const TransactionId& tx() const { return tx_; }

    double honest_spread() const {
        double lo = 1.0;
        double hi = 0.0;
        for (PeerId i = 0; i < table_->size(); ++i) {
            if (table_->roles[i] != PeerRole::Honest) { continue; }
            lo = std::min(lo, estimates_[i]);
            hi = std::max(hi, estimates_[i]);
        }
        return hi - lo;
    }

    double honest_median() const {
        std::vector<OrderEstimate> honest;
        honest.reserve(table_->size());
        for (PeerId i = 0; i < table_->size(); ++i) {
            if (table_->roles[i] == PeerRole::Honest) { honest.push_back(estimates_[i]); }
        }
        return median_in_place(honest);
    }

    // Agreement predicate over honest peers: all pairwise differences within
    // epsilon, i.e. spread <= epsilon.
    bool converged(double epsilon) const { return honest_spread() <= epsilon; }

private:
    const PeerTable* table_;
    TransactionId tx_;
    std::uint64_t tx_key_;
    std::uint32_t round_ = 0;
    std::vector<OrderEstimate> estimates_;
    std::vector<std::vector<OrderEstimate>> inbox_;
    std::vector<double> last_byz_;
    SubsetSampler sampler_;
    std::vector<std::uint32_t> positions_;
};

struct TxOutcome {
    std::uint32_t index = 0;  // position within the configured package
    TransactionId tx;
    double anchor = 0.0;
    bool converged = false;
    std::uint32_t rounds_used = 0;
    double final_value = 0.0;   // median of honest final estimates
    double final_spread = 0.0;
};

struct ConsensusOutcome {
    double epsilon = 0.0;
    bool all_converged = false;
    std::vector<TxOutcome> transactions;
    std::vector<std::uint32_t> package_order;  // indices sorted by final value
    std::vector<std::pair<std::uint32_t, std::uint32_t>> collisions;  // |delta| <= epsilon
};

struct SimResult {
    ConsensusOutcome outcome;
    std::vector<RoundStats> history;  // (transaction, round) order; empty if not recorded
};

namespace detail {

inline TxOutcome run_single_tx(const PeerTable& table, const SimConfig& config,
                               std::uint32_t index, std::vector<RoundStats>* history) {
    const TransactionId& tx = config.transactions[index];
    TxInstance inst(table, tx);
    inst.initialize(config.init_mode, config.jitter);

    bool converged = inst.converged(config.epsilon);
    if (history) {
        history->push_back(
            collect_round_stats(inst.estimates(), table.roles, 0, tx, converged, {}));
    }
    std::uint32_t rounds_used = 0;
    if (!converged) {
        for (std::uint32_t r = 1; r <= config.max_rounds; ++r) {
            inst.run_round(config.sample_ratio);
            converged = inst.converged(config.epsilon);
            if (history) {
                history->push_back(collect_round_stats(inst.estimates(), table.roles, r, tx,
                                                       converged, inst.last_byzantine_values()));
            }
            if (converged) {
                rounds_used = r;
                break;
            }
        }
        if (!converged) { rounds_used = config.max_rounds; }
    }

    TxOutcome outcome;
    outcome.index = index;
    outcome.tx = tx;
    outcome.anchor = anchor_of(tx);
    outcome.converged = converged;
    outcome.rounds_used = rounds_used;
    outcome.final_value = inst.honest_median();
    outcome.final_spread = inst.honest_spread();
    return outcome;
}

}  // namespace detail

// Full consensus run over the configured package.  `workers` bounds the
// number of transaction instances advanced concurrently; results are
// identical for any worker count because instances share nothing mutable.
inline SimResult run_consensus(const SimConfig& config, unsigned workers = 1) {
    config.validate();
    const PeerTable table = make_peer_table(config.n_peers, config.byzantine_fraction, config.seed);
    const auto ntx = static_cast<std::uint32_t>(config.transactions.size());

    std::vector<TxOutcome> outcomes(ntx);
    std::vector<std::vector<RoundStats>> histories(ntx);
    auto run_one = [&](std::uint32_t idx) {
        outcomes[idx] = detail::run_single_tx(table, config, idx,
                                              config.record_history ? &histories[idx] : nullptr);
    };

    const unsigned pool = std::min<unsigned>(std::max(1u, workers), ntx);
    if (pool <= 1) {
        for (std::uint32_t idx = 0; idx < ntx; ++idx) { run_one(idx); }
    } else {
        std::atomic<std::uint32_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (;;) {
                const std::uint32_t idx = next.fetch_add(1);
                if (idx >= ntx) { return; }
                try {
                    run_one(idx);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) { failure = std::current_exception(); }
                }
            }
        };
        std::vector<std::thread> threads;
        threads.reserve(pool);
        for (unsigned w = 0; w < pool; ++w) { threads.emplace_back(worker); }
        for (std::thread& t : threads) { t.join(); }
        if (failure) { std::rethrow_exception(failure); }
    }

    SimResult result;
    result.outcome.epsilon = config.epsilon;
    result.outcome.transactions = std::move(outcomes);
    result.outcome.all_converged = std::all_of(
        result.outcome.transactions.begin(), result.outcome.transactions.end(),
        [](const TxOutcome& o) { return o.converged; });

    std::vector<std::uint32_t> order(ntx);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const double va = result.outcome.transactions[a].final_value;
        const double vb = result.outcome.transactions[b].final_value;
        return va != vb ? va < vb : a < b;
    });
    for (std::size_t a = 0; a < order.size(); ++a) {
        for (std::size_t b = a + 1; b < order.size(); ++b) {
            const double delta = result.outcome.transactions[order[b]].final_value -
                                 result.outcome.transactions[order[a]].final_value;
            if (delta > config.epsilon) { break; }
            result.outcome.collisions.emplace_back(std::min(order[a], order[b]),
                                                   std::max(order[a], order[b]));
        }
    }
    std::sort(result.outcome.collisions.begin(), result.outcome.collisions.end());
    result.outcome.package_order = std::move(order);

    if (config.record_history) {
        std::size_t rows = 0;
        for (const auto& h : histories) { rows += h.size(); }
        result.history.reserve(rows);
        for (auto& h : histories) {
            for (RoundStats& s : h) { result.history.push_back(std::move(s)); }
        }
    }
    return result;
}

}  // namespace eda
