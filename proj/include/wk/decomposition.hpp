#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wk/engine.hpp"
#include "wk/sympoly.hpp"

namespace wk {

/// Total weight 3g-3+n of the n-point genus-g amplitude.
inline uint64_t amplitude_degree(uint32_t genus, std::size_t n) {
    return 3ull * genus + n - 3;
}

/// Scale 24^g g! between raw and normalized amplitudes.
Rational normalization_factor(uint32_t genus);

/// Drops all 1-parts. Together with pad_with_ones this is a bijection
/// between full decomposition keys of a fixed weight and their 1-free cores.
Partition strip_ones(const Partition& full);
Partition pad_with_ones(const Partition& lambda, uint64_t degree);

/// 1-free keys that can carry a nonzero coefficient at genus g: the empty
/// key plus every (k) joined to mu with mu parts >= 2, |mu| <= 3g-3 and
/// k >= max(2, mu_1), subject to k <= max_part and total size <= degree.
/// The |mu| bound is the vanishing forced by the string equation.
std::vector<Partition> admissible_lambdas(uint32_t genus, uint64_t degree, uint32_t max_part);

/// Amplitude in the monomial basis: the coefficient of m_d is the intersection
/// number with degree multiset d, zero-padded to n insertions.
MSymPoly<Rational> amplitude_monomials(CorrelatorEngine& engine, uint32_t genus, std::size_t n,
                                       unsigned threads = 1);

/// restricted: eliminate within the admissible span (fast; a nonzero
/// remainder raises integrity_error, certifying the span along the way).
/// full: general leading-term elimination over all e-products, making no
/// vanishing assumption at all.
enum class SpanMode { restricted, full };

struct AmplitudeDecomposition {
    uint32_t genus = 0;
    std::size_t n = 0;
    bool normalized = true;
    /// Keys: partitions of weight 3g-3+n with parts <= n.
    EPolynomial<Rational> coeffs;

    uint64_t degree() const { return amplitude_degree(genus, n); }

    Rational dcoeff(const Partition& full) const { return coeffs.coeff(full); }

    /// Coefficient addressed by the 1-free core; zero when the padded key
    /// cannot exist at this weight.
    Rational ccoeff(const Partition& lambda) const {
        if (lambda.size() > degree()) return 0;
        return coeffs.coeff(pad_with_ones(lambda, degree()));
    }

    /// The same data keyed by 1-free cores.
    std::map<Partition, Rational> cmap() const;
};

AmplitudeDecomposition amplitude(CorrelatorEngine& engine, uint32_t genus, std::size_t n,
                                 bool normalized = true, unsigned threads = 1,
                                 SpanMode mode = SpanMode::restricted);

struct RelationReport {
    std::size_t checks = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Consequences of the string equation between levels n and n+1, verified on
/// decompositions computed in full (unrestricted) mode:
///   - shared coefficients agree across the two levels,
///   - keys of full weight with every part < level vanish,
///   - keys with |lambda| - lambda_1 > 3g-3 vanish.
RelationReport check_string_relations(CorrelatorEngine& engine, uint32_t genus, std::size_t n,
                                      unsigned threads = 1);

}  // namespace wk
