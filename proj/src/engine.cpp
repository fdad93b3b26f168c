#include "wk/engine.hpp"

#include <algorithm>
#include <functional>
#include <mutex>

#include "wk/partition.hpp"

namespace wk {

namespace {

struct DegreeClass {
    uint32_t value;
    uint32_t mult;
};

// Distinct values of a descending degree list, zeros included.
std::vector<DegreeClass> degree_classes(const std::vector<uint32_t>& d) {
    std::vector<DegreeClass> cls;
    for (uint32_t v : d) {
        if (!cls.empty() && cls.back().value == v) {
            ++cls.back().mult;
        } else {
            cls.push_back({v, 1});
        }
    }
    return cls;
}

// (2u+2m+1)!! / (2u-1)!! = (2u+1)(2u+3)...(2u+2m+1), always an integer.
Integer odd_df_ratio(uint32_t u, uint32_t m) {
    Integer p = 1;
    for (uint32_t j = 0; j <= m; ++j) p *= 2 * (u + j) + 1;
    return p;
}

}  // namespace

std::size_t CorrelatorEngine::cache_size() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
}

void CorrelatorEngine::preload(CorrelatorKey key, Rational value) {
    std::sort(key.degrees.begin(), key.degrees.end(), std::greater<uint32_t>());
    std::unique_lock lock(mutex_);
    cache_[std::move(key)] = std::move(value);
}

std::vector<std::pair<CorrelatorKey, Rational>> CorrelatorEngine::snapshot() const {
    std::vector<std::pair<CorrelatorKey, Rational>> out;
    {
        std::shared_lock lock(mutex_);
        out.reserve(cache_.size());
        for (const auto& [k, v] : cache_) out.emplace_back(k, v);
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

Rational CorrelatorEngine::correlator(uint32_t genus, std::vector<uint32_t> degrees) {
    return lookup_or_compute(genus, std::move(degrees));
}

Rational CorrelatorEngine::lookup_or_compute(uint32_t genus, std::vector<uint32_t> degrees) {
    if (degrees.empty()) throw domain_error("correlator needs at least one insertion");
    if (!stable(genus, degrees.size()))
        throw domain_error("unstable surface type: genus " + std::to_string(genus) + " with " +
                           std::to_string(degrees.size()) + " marked points");
    std::sort(degrees.begin(), degrees.end(), std::greater<uint32_t>());
    uint64_t total = 0;
    for (uint32_t d : degrees) total += d;
    if (total != dimension(genus, degrees.size())) return 0;

    CorrelatorKey key{genus, std::move(degrees)};
    {
        std::shared_lock lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            hits_.fetch_add(1, std::memory_order_relaxed);
            return it->second;
        }
    }
    misses_.fetch_add(1, std::memory_order_relaxed);
    Rational value = compute(key);
    {
        std::unique_lock lock(mutex_);
        cache_[key] = value;
    }
    return value;
}

Rational CorrelatorEngine::compute(const CorrelatorKey& key) {
    const uint32_t g = key.genus;
    const std::vector<uint32_t>& d = key.degrees;
    const std::size_t n = d.size();

    if (g == 0 && n == 3) return 1;
    if (g == 1 && n == 1) return Rational(1, 24);

    if (g == 0 && use_genus0_closed_) {
        // multinomial (n-3 choose d_1, ..., d_n)
        Rational r(factorial(static_cast<long>(n - 3)), 1);
        Integer den = 1;
        for (uint32_t di : d) den *= factorial(di);
        r /= Rational(den);
        r.canonicalize();
        return r;
    }

    if (d.back() == 0) {
        // remove one degree-0 insertion, lowering each remaining degree in turn
        std::vector<uint32_t> rest(d.begin(), d.end() - 1);
        Rational total = 0;
        for (const auto& cls : degree_classes(rest)) {
            if (cls.value == 0) continue;
            std::vector<uint32_t> child = rest;
            auto it = std::find(child.begin(), child.end(), cls.value);
            --*it;
            total += Rational(cls.mult) * lookup_or_compute(g, std::move(child));
        }
        return total;
    }

    if (d.back() == 1) {
        // remove one degree-1 insertion; the rest scales by 2g-2+(n-1)
        std::vector<uint32_t> rest(d.begin(), d.end() - 1);
        long factor = 2 * static_cast<long>(g) - 2 + static_cast<long>(n - 1);
        return Rational(factor) * lookup_or_compute(g, std::move(rest));
    }

    // All degrees are >= 2 here. Apply the constraint of order m = d_max - 1
    // to the largest insertion.
    const uint32_t m = d[0] - 1;
    const std::vector<uint32_t> r(d.begin() + 1, d.end());
    const auto classes = degree_classes(r);
    uint64_t r_sum = 0;
    for (uint32_t v : r) r_sum += v;

    Rational total = 0;

    // raise one remaining insertion by m
    for (const auto& cls : classes) {
        std::vector<uint32_t> child = r;
        auto it = std::find(child.begin(), child.end(), cls.value);
        *it += m;
        total += Rational(Integer(cls.mult) * odd_df_ratio(cls.value, m)) *
                 lookup_or_compute(g, std::move(child));
    }

    Rational paired = 0;

    // trade the insertion for two new ones on a surface of one lower genus
    if (g >= 1 && stable(g - 1, n + 1)) {
        for (uint32_t a = 0; a + 1 <= m; ++a) {
            uint32_t b = m - 1 - a;
            std::vector<uint32_t> child = r;
            child.push_back(a);
            child.push_back(b);
            paired += Rational(double_factorial(2 * a + 1) * double_factorial(2 * b + 1)) *
                      lookup_or_compute(g - 1, std::move(child));
        }
    }

    // split into two surfaces; enumerate ordered splits of the remaining
    // insertions by class profile
    std::vector<uint32_t> profile(classes.size(), 0);
    std::function<void(std::size_t)> split = [&](std::size_t j) {
        if (j == classes.size()) {
            std::vector<uint32_t> left, right;
            Integer ways = 1;
            for (std::size_t t = 0; t < classes.size(); ++t) {
                for (uint32_t c = 0; c < profile[t]; ++c) left.push_back(classes[t].value);
                for (uint32_t c = profile[t]; c < classes[t].mult; ++c)
                    right.push_back(classes[t].value);
                ways *= binomial(classes[t].mult, profile[t]);
            }
            uint64_t left_sum = 0;
            for (uint32_t v : left) left_sum += v;
            for (uint32_t g1 = 0; g1 <= g; ++g1) {
                uint32_t g2 = g - g1;
                if (!stable(g1, left.size() + 1) || !stable(g2, right.size() + 1)) continue;
                // factor dimensions fix the degree split of the new pair
                long a_signed = 3 * static_cast<long>(g1) - 2 +
                                static_cast<long>(left.size()) - static_cast<long>(left_sum);
                if (a_signed < 0 || a_signed > static_cast<long>(m) - 1) continue;
                uint32_t a = static_cast<uint32_t>(a_signed);
                uint32_t b = m - 1 - a;
                std::vector<uint32_t> cl = left;
                cl.push_back(a);
                std::vector<uint32_t> cr = right;
                cr.push_back(b);
                paired += Rational(ways * double_factorial(2 * a + 1) *
                                   double_factorial(2 * b + 1)) *
                          lookup_or_compute(g1, std::move(cl)) *
                          lookup_or_compute(g2, std::move(cr));
            }
            return;
        }
        for (uint32_t v = 0; v <= classes[j].mult; ++v) {
            profile[j] = v;
            split(j + 1);
        }
        profile[j] = 0;
    };
    split(0);

    total += paired / Rational(2);
    total /= Rational(double_factorial(2 * m + 3));
    total.canonicalize();
    return total;
}

}  // namespace wk
