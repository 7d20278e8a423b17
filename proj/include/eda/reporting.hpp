// Per-round measurement and CSV artifact emission.
//
// Statistics are computed over honest peers only; byzantine emissions are
// recorded separately so a plot can overlay them.  A history written for one
// simulation becomes three files next to each other:
//
//   <base>.csv       round,tx,mean,std,min,max,spread,converged
//   <base>.hist.csv  round,tx,bin_index,count
//   <base>.byz.csv   round,tx,value
//
// The tx column carries the transaction digest in hex so rows of different
// transactions can be compared across runs without relying on ordering.

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eda/protocol.hpp"
#include "eda/transaction.hpp"

namespace eda {

inline constexpr int kDefaultHistogramBins = 100;

struct RoundStats {
    std::uint32_t round = 0;
    TransactionId tx;
    double mean = 0.0;
    double std_dev = 0.0;  // population standard deviation
    double min = 0.0;
    double max = 0.0;
    double spread = 0.0;  // max - min
    bool converged = false;
    std::vector<std::uint64_t> histogram;      // equal-width bins over [0, 1]
    std::vector<double> byzantine_values;      // what faulty peers emitted this round
};

inline std::size_t histogram_bin(double value, int bins) {
    const auto raw = static_cast<long long>(value * bins);
    const auto top = static_cast<long long>(bins) - 1;
    return static_cast<std::size_t>(std::clamp(raw, 0ll, top));
}

// Snapshot of one transaction instance after a round.  `estimates` and
// `roles` are parallel per-peer arrays.
inline RoundStats collect_round_stats(std::span<const OrderEstimate> estimates,
                                      std::span<const PeerRole> roles, std::uint32_t round,
                                      const TransactionId& tx, bool converged,
                                      std::vector<double> byzantine_values,
                                      int bins = kDefaultHistogramBins) {
    if (estimates.size() != roles.size()) {
        throw std::invalid_argument("estimates: size must match roles");
    }
    if (bins < 1) { throw std::invalid_argument("bins: must be >= 1"); }

    RoundStats stats;
    stats.round = round;
    stats.tx = tx;
    stats.converged = converged;
    stats.histogram.assign(static_cast<std::size_t>(bins), 0);
    stats.byzantine_values = std::move(byzantine_values);

    double sum = 0.0;
    double lo = 1.0;
    double hi = 0.0;
    std::size_t honest = 0;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        if (roles[i] != PeerRole::Honest) { continue; }
        const double v = estimates[i];
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        ++stats.histogram[histogram_bin(v, bins)];
        ++honest;
    }
    if (honest == 0) { throw std::invalid_argument("roles: no honest peers to measure"); }

    stats.mean = sum / static_cast<double>(honest);
    double sq = 0.0;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        if (roles[i] != PeerRole::Honest) { continue; }
        const double d = estimates[i] - stats.mean;
        sq += d * d;
    }
    stats.std_dev = std::sqrt(sq / static_cast<double>(honest));
    stats.min = lo;
    stats.max = hi;
    stats.spread = hi - lo;
    return stats;
}

// Shortest round-trippable decimal rendering we need: general format with
// nine significant digits.
inline std::string format_value(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

inline void write_round_history_csv(std::span<const RoundStats> history,
                                    const std::string& base_path) {
    std::ofstream main(base_path + ".csv");
    std::ofstream hist(base_path + ".hist.csv");
    std::ofstream byz(base_path + ".byz.csv");
    if (!main || !hist || !byz) {
        throw std::runtime_error("cannot open output files at " + base_path);
    }

    main << "round,tx,mean,std,min,max,spread,converged\n";
    hist << "round,tx,bin_index,count\n";
    byz << "round,tx,value\n";
    for (const RoundStats& s : history) {
        const std::string tx_hex = s.tx.hex();
        main << s.round << ',' << tx_hex << ',' << format_value(s.mean) << ','
             << format_value(s.std_dev) << ',' << format_value(s.min) << ','
             << format_value(s.max) << ',' << format_value(s.spread) << ','
             << (s.converged ? 1 : 0) << '\n';
        for (std::size_t b = 0; b < s.histogram.size(); ++b) {
            hist << s.round << ',' << tx_hex << ',' << b << ',' << s.histogram[b] << '\n';
        }
        for (double v : s.byzantine_values) {
            byz << s.round << ',' << tx_hex << ',' << format_value(v) << '\n';
        }
    }
    if (!main.flush() || !hist.flush() || !byz.flush()) {
        throw std::runtime_error("failed writing output files at " + base_path);
    }
}

}  // namespace eda
