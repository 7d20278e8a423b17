// Transaction identity and the content-derived order anchor c(x).
//
// A transaction is identified by an opaque digest (at least 8 bytes).  The
// first 8 digest bytes, read big-endian and scaled by 2^-64, give the anchor
// in [0, 1] around which honest peers place their initial estimates; distinct
// transactions therefore converge toward distinct order coordinates without
// coordination.

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eda/rng.hpp"

namespace eda {

struct TransactionId {
    std::uint32_t index = 0;            // position in the run's transaction list
    std::vector<std::uint8_t> digest;   // content identity, >= 8 bytes

    // Digest from arbitrary payload bytes (FNV-1a; identity for simulation,
    // not a cryptographic commitment).
    static TransactionId from_payload(std::uint32_t index, std::span<const std::uint8_t> payload) {
        return with_word(index, fnv1a64(payload));
    }

    static TransactionId from_payload(std::uint32_t index, std::string_view payload) {
        return from_payload(
            index, std::span<const std::uint8_t>(
                       reinterpret_cast<const std::uint8_t*>(payload.data()), payload.size()));
    }

    // Digest whose derived anchor is (approximately) the given value.
    static TransactionId from_anchor(std::uint32_t index, double anchor) {
        std::uint64_t word = 0;
        if (anchor >= 1.0) {
            word = ~std::uint64_t{0};
        } else if (anchor > 0.0) {
            word = static_cast<std::uint64_t>(anchor * 0x1p64);
        }
        return with_word(index, word);
    }

    std::string hex() const {
        static constexpr char kDigits[] = "0123456789abcdef";
        std::string out;
        out.reserve(digest.size() * 2);
        for (std::uint8_t b : digest) {
            out.push_back(kDigits[b >> 4]);
            out.push_back(kDigits[b & 0xF]);
        }
        return out;
    }

    void validate() const {
        if (digest.size() < 8) {
            throw std::invalid_argument("transaction digest must hold at least 8 bytes");
        }
    }

private:
    static TransactionId with_word(std::uint32_t index, std::uint64_t word) {
        TransactionId tx;
        tx.index = index;
        tx.digest.resize(8);
        for (int i = 0; i < 8; ++i) {
            tx.digest[static_cast<std::size_t>(i)] =
                static_cast<std::uint8_t>(word >> (56 - 8 * i));
        }
        return tx;
    }
};

// Anchor c(tx): first 8 digest bytes as a big-endian integer, scaled to [0, 1].
inline double anchor_of(const TransactionId& tx) {
    tx.validate();
    std::uint64_t word = 0;
    for (int i = 0; i < 8; ++i) {
        word = (word << 8) | tx.digest[static_cast<std::size_t>(i)];
    }
    return static_cast<double>(word) * 0x1.0p-64;
}

// Key folding the whole digest into the stream-derivation chain.
inline std::uint64_t stream_key_of(const TransactionId& tx) {
    tx.validate();
    return fnv1a64(tx.digest);
}

}  // namespace eda
