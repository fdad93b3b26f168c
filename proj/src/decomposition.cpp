#include "wk/decomposition.hpp"

#include <atomic>
#include <set>
#include <thread>

namespace wk {

Rational normalization_factor(uint32_t genus) {
    Rational f(factorial(static_cast<long>(genus)));
    for (uint32_t i = 0; i < genus; ++i) f *= 24;
    return f;
}

Partition strip_ones(const Partition& full) {
    std::vector<uint32_t> parts;
    for (uint32_t p : full.parts())
        if (p >= 2) parts.push_back(p);
    return Partition::from_sorted(std::move(parts));
}

Partition pad_with_ones(const Partition& lambda, uint64_t degree) {
    if (lambda.size() > degree)
        throw domain_error("pad_with_ones: partition heavier than the target weight");
    std::vector<uint32_t> parts = lambda.parts();
    for (uint64_t i = lambda.size(); i < degree; ++i) parts.push_back(1);
    return Partition::from_sorted(std::move(parts));
}

std::vector<Partition> admissible_lambdas(uint32_t genus, uint64_t degree, uint32_t max_part) {
    std::vector<Partition> out;
    out.push_back(Partition{});
    const uint64_t mu_cap = genus == 0 ? 0 : 3ull * genus - 3;
    for (const Partition& mu :
         partitions_up_to(mu_cap, 2, static_cast<uint32_t>(mu_cap > 0 ? mu_cap : 1))) {
        for (uint32_t k = std::max<uint32_t>(2, mu.largest());; ++k) {
            if (k > max_part || k + mu.size() > degree) break;
            out.push_back(mu.appended(k));
        }
    }
    return out;
}

MSymPoly<Rational> amplitude_monomials(CorrelatorEngine& engine, uint32_t genus, std::size_t n,
                                       unsigned threads) {
    if (!CorrelatorEngine::stable(genus, n))
        throw domain_error("amplitude: unstable surface type");
    const uint64_t D = amplitude_degree(genus, n);
    auto keys = partitions_of(D, D > 0 ? static_cast<uint32_t>(D) : 1, n);
    std::vector<Rational> vals(keys.size());
    auto work = [&](std::size_t i) {
        std::vector<uint32_t> d = keys[i].parts();
        d.resize(n, 0);
        vals[i] = engine.correlator(genus, std::move(d));
    };
    if (threads <= 1 || keys.size() < 2) {
        for (std::size_t i = 0; i < keys.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto runner = [&] {
            for (std::size_t i = next.fetch_add(1); i < keys.size(); i = next.fetch_add(1)) work(i);
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(runner);
        for (auto& th : pool) th.join();
    }
    MSymPoly<Rational> out(n);
    for (std::size_t i = 0; i < keys.size(); ++i)
        if (!is_zero(vals[i])) out.add_term(keys[i], vals[i]);
    return out;
}

AmplitudeDecomposition amplitude(CorrelatorEngine& engine, uint32_t genus, std::size_t n,
                                 bool normalized, unsigned threads, SpanMode mode) {
    MSymPoly<Rational> mono = amplitude_monomials(engine, genus, n, threads);
    const uint64_t D = amplitude_degree(genus, n);
    EPolynomial<Rational> e;
    if (mode == SpanMode::full) {
        e = monomials_to_e(mono);
    } else {
        e = monomials_to_e_span(mono, admissible_lambdas(genus, D, static_cast<uint32_t>(n)), D);
    }
    if (normalized) e *= normalization_factor(genus);
    AmplitudeDecomposition dec;
    dec.genus = genus;
    dec.n = n;
    dec.normalized = normalized;
    dec.coeffs = std::move(e);
    return dec;
}

std::map<Partition, Rational> AmplitudeDecomposition::cmap() const {
    std::map<Partition, Rational> out;
    for (const auto& [full, c] : coeffs.terms()) out.emplace(strip_ones(full), c);
    return out;
}

RelationReport check_string_relations(CorrelatorEngine& engine, uint32_t genus, std::size_t n,
                                      unsigned threads) {
    AmplitudeDecomposition low = amplitude(engine, genus, n, true, threads, SpanMode::full);
    AmplitudeDecomposition high = amplitude(engine, genus, n + 1, true, threads, SpanMode::full);
    const uint64_t d_low = low.degree();
    RelationReport rep;

    // shared coefficients agree
    std::set<Partition> shared;
    for (const auto& [full, c] : low.coeffs.terms()) shared.insert(strip_ones(full));
    for (const auto& [full, c] : high.coeffs.terms()) {
        Partition lam = strip_ones(full);
        if (lam.size() <= d_low && lam.largest() <= n) shared.insert(lam);
    }
    for (const Partition& lam : shared) {
        ++rep.checks;
        Rational a = low.ccoeff(lam);
        Rational b = high.ccoeff(lam);
        if (a != b) {
            rep.violations.push_back("level transfer " + lam.to_string() + ": " +
                                     pretty_string(a) + " at n=" + std::to_string(n) + " vs " +
                                     pretty_string(b) + " at n=" + std::to_string(n + 1));
        }
    }

    // full-weight keys with all parts strictly below the level vanish;
    // this is inherited from the level below, so that level must be stable
    auto boundary = [&rep](const AmplitudeDecomposition& dec) {
        if (dec.n < 2 || !CorrelatorEngine::stable(dec.genus, dec.n - 1)) return;
        const uint64_t d = dec.degree();
        for (const Partition& lam :
             partitions_of(d, static_cast<uint32_t>(dec.n - 1), static_cast<std::size_t>(d))) {
            if (!lam.empty() && lam.smallest() < 2) continue;
            ++rep.checks;
            Rational c = dec.ccoeff(lam);
            if (!is_zero(c)) {
                rep.violations.push_back("boundary " + lam.to_string() + " at n=" +
                                         std::to_string(dec.n) + ": " + pretty_string(c));
            }
        }
    };
    boundary(low);
    boundary(high);

    // heavy-tail vanishing: |lambda| - lambda_1 bounded by 3g-3
    auto heavy_tail = [&rep, genus](const AmplitudeDecomposition& dec) {
        const uint64_t cap = genus == 0 ? 0 : 3ull * genus - 3;
        for (const auto& [full, c] : dec.coeffs.terms()) {
            Partition lam = strip_ones(full);
            ++rep.checks;
            if (lam.size() - lam.largest() > cap && !is_zero(c)) {
                rep.violations.push_back("tail bound " + lam.to_string() + " at n=" +
                                         std::to_string(dec.n) + ": " + pretty_string(c));
            }
        }
    };
    heavy_tail(low);
    heavy_tail(high);

    return rep;
}

}  // namespace wk
