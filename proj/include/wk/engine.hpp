#pragma once

#include <atomic>
#include <cstdint>
#include <shared_mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wk/rational.hpp"

namespace wk {

// Canonical label for one intersection number: genus plus the insertion
// degrees sorted descending. Zeros are kept; (g=1, [1]) and (g=1, [1,0])
// are different correlators.
struct CorrelatorKey {
    uint32_t genus = 0;
    std::vector<uint32_t> degrees;

    bool operator==(const CorrelatorKey&) const = default;
    bool operator<(const CorrelatorKey& o) const {
        if (genus != o.genus) return genus < o.genus;
        if (degrees.size() != o.degrees.size()) return degrees.size() < o.degrees.size();
        return degrees < o.degrees;
    }
};

struct CorrelatorKeyHash {
    std::size_t operator()(const CorrelatorKey& k) const {
        std::size_t h = 0x811c9dc5u ^ k.genus;
        for (uint32_t d : k.degrees) {
            h ^= d + 0x9e3779b9u + (h << 6) + (h >> 2);
        }
        return h;
    }
};

// Computes intersection numbers by recursion:
//   - removing a degree-0 insertion (string relation),
//   - removing a degree-1 insertion (dilaton relation),
//   - otherwise trading the largest insertion for lower-order data
//     (Virasoro constraint L_m with m = d_max - 1).
// Results are memoized. Safe to call from several threads; a recomputation
// race produces identical values, so last-writer-wins is harmless.
//
// Counter conventions: a call that finds its canonical key cached counts as
// a hit, one that has to compute counts as a miss. Calls rejected by the
// dimension check (value 0) touch neither the cache nor the counters.
class CorrelatorEngine {
public:
    explicit CorrelatorEngine(bool use_genus0_closed = true)
        : use_genus0_closed_(use_genus0_closed) {}

    // Throws domain_error for unstable (g, n) or empty degree lists.
    Rational correlator(uint32_t genus, std::vector<uint32_t> degrees);

    uint64_t cache_hits() const { return hits_.load(); }
    uint64_t cache_misses() const { return misses_.load(); }
    std::size_t cache_size() const;
    void reset_counters() {
        hits_.store(0);
        misses_.store(0);
    }

    void preload(CorrelatorKey key, Rational value);
    // Sorted by (genus, n, degrees); used for deterministic cache flushes.
    std::vector<std::pair<CorrelatorKey, Rational>> snapshot() const;

    static bool stable(uint32_t genus, std::size_t n) {
        return 2 * static_cast<long>(genus) - 2 + static_cast<long>(n) > 0;
    }
    static uint64_t dimension(uint32_t genus, std::size_t n) {
        return 3ull * genus - 3 + n;  // callers guarantee stability first
    }

private:
    Rational compute(const CorrelatorKey& key);
    Rational lookup_or_compute(uint32_t genus, std::vector<uint32_t> degrees);

    bool use_genus0_closed_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<CorrelatorKey, Rational, CorrelatorKeyHash> cache_;
    std::atomic<uint64_t> hits_{0};
    std::atomic<uint64_t> misses_{0};
};

}  // namespace wk
