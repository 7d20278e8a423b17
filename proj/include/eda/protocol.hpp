// Peer-level protocol primitives: median aggregation, activation, recipient
// sampling, the honest update rule and the byzantine value source.
//
// One round is broadcast-then-aggregate: every peer sends its current
// estimate (honest) or a fresh random value (byzantine) to a uniformly
// random subset of the other peers, then every honest peer replaces its
// estimate with the median of what it received.  All randomness comes in
// through explicit RandomStream handles.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "eda/rng.hpp"

namespace eda {

using PeerId = std::uint32_t;

// Order coordinate in [0, 1].  Byzantine-supplied values are clamped into
// this range on receipt.
using OrderEstimate = double;

enum class PeerRole : std::uint8_t { Honest, Byzantine };

enum class InitMode : std::uint8_t { UniformGrid, Random };

struct SamplePlan {
    PeerId sender = 0;
    std::vector<PeerId> recipients;  // distinct, never contains the sender
};

inline OrderEstimate clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

// Broadcast fan-out: max(1, round(ratio * (N - 1))) recipients per sender.
inline std::size_t sample_size(std::uint32_t n_peers, double sample_ratio) {
    if (n_peers < 2) { throw std::invalid_argument("n_peers: sampling requires at least 2 peers"); }
    if (!(sample_ratio > 0.0 && sample_ratio <= 1.0)) {
        throw std::invalid_argument("sample_ratio: must lie in (0, 1]");
    }
    const auto k = std::llround(sample_ratio * static_cast<double>(n_peers - 1));
    return static_cast<std::size_t>(std::max<long long>(1, k));
}

// Uniform k-subsets of [0, n) by Floyd's algorithm.  The stamp table gives
// O(1) membership checks without clearing between draws, so one sampler can
// serve every sender of every round.
class SubsetSampler {
public:
    void draw(std::uint32_t n, std::uint32_t k, RandomStream& rng,
              std::vector<std::uint32_t>& out) {
        if (k > n) { throw std::invalid_argument("k: subset size exceeds population"); }
        if (stamp_.size() < n) { stamp_.resize(n, 0); }
        if (++epoch_ == 0) {  // stamp wraparound: reset and restart epochs
            std::fill(stamp_.begin(), stamp_.end(), 0);
            epoch_ = 1;
        }
        out.clear();
        out.reserve(k);
        for (std::uint32_t i = n - k; i < n; ++i) {
            auto t = static_cast<std::uint32_t>(rng.below(i + 1));
            if (stamp_[t] == epoch_) { t = i; }
            stamp_[t] = epoch_;
            out.push_back(t);
        }
    }

private:
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
};

// Fresh uniformly random recipient subset of the other peers; resampled
// every round from the sender's per-round stream.
inline SamplePlan draw_sample(PeerId sender, std::uint32_t n_peers, double sample_ratio,
                              RandomStream& rng) {
    const auto k = static_cast<std::uint32_t>(sample_size(n_peers, sample_ratio));
    SubsetSampler sampler;
    std::vector<std::uint32_t> positions;
    sampler.draw(n_peers - 1, k, rng, positions);
    SamplePlan plan;
    plan.sender = sender;
    plan.recipients.reserve(k);
    for (std::uint32_t pos : positions) {
        plan.recipients.push_back(pos < sender ? pos : pos + 1);
    }
    return plan;
}

// Median with mean-of-two-middles tie handling for even sizes.  Partially
// reorders `values`.
inline OrderEstimate median_in_place(std::span<OrderEstimate> values) {
    if (values.empty()) { throw std::invalid_argument("median of an empty set"); }
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                     values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) { return upper; }
    const double lower =
        *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return (lower + upper) * 0.5;
}

inline OrderEstimate median(std::span<const OrderEstimate> values) {
    std::vector<OrderEstimate> scratch(values.begin(), values.end());
    return median_in_place(scratch);
}

// Activation a(x); identity by construction, kept as a named seam.
inline OrderEstimate activate(OrderEstimate aggregated) { return aggregated; }

// Honest update rule: median of the inbox, or hold the previous estimate
// when nothing arrived this round.  Partially reorders `inbox`.
inline OrderEstimate honest_update(std::span<OrderEstimate> inbox, OrderEstimate previous) {
    if (inbox.empty()) { return previous; }
    return activate(median_in_place(inbox));
}

// Byzantine value source: a fresh uniform draw per call, independent across
// rounds and transactions through the stream key chain.
inline OrderEstimate byzantine_emit(RandomStream& rng) { return rng.next_double(); }

// Round-0 placement of one peer's estimate around the transaction anchor.
// `grid_coord` is the peer's position index used by the uniform-grid mode.
inline OrderEstimate initialize_estimate(std::uint32_t grid_coord, std::uint32_t n_peers,
                                         InitMode mode, double anchor, double jitter,
                                         RandomStream& rng) {
    if (!(anchor >= 0.0 && anchor <= 1.0)) {
        throw std::invalid_argument("anchor: must lie in [0, 1]");
    }
    if (!(jitter >= 0.0)) { throw std::invalid_argument("jitter: must be >= 0"); }
    if (mode == InitMode::UniformGrid) {
        const double g =
            n_peers > 1 ? static_cast<double>(grid_coord) / static_cast<double>(n_peers - 1) : 0.5;
        return clamp_unit(anchor + (g - 0.5) * 2.0 * jitter);
    }
    return clamp_unit(anchor + rng.uniform(-jitter, jitter));
}

// Stream derivation chain.  Lane roots are per-peer; every per-round stream
// is keyed by (lane, transaction digest, round, purpose) so that instances
// of different transactions never share generator state.
inline std::uint64_t lane_root(std::uint64_t seed, PeerId peer) {
    return key_combine(key_combine(seed, StreamKind::Lane), peer);
}

inline RandomStream roles_stream(std::uint64_t seed) {
    return RandomStream(key_combine(seed, StreamKind::Roles));
}

inline RandomStream init_stream(std::uint64_t lane, std::uint64_t tx_key) {
    return RandomStream(key_combine(key_combine(lane, tx_key), StreamKind::Init));
}

inline RandomStream sample_stream(std::uint64_t lane, std::uint64_t tx_key, std::uint32_t round) {
    return RandomStream(
        key_combine(key_combine(key_combine(lane, tx_key), round), StreamKind::Sample));
}

inline RandomStream byz_stream(std::uint64_t lane, std::uint64_t tx_key, std::uint32_t round) {
    return RandomStream(
        key_combine(key_combine(key_combine(lane, tx_key), round), StreamKind::ByzEmit));
}

}  // namespace eda
