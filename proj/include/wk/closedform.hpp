#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wk/decomposition.hpp"

namespace wk {

/// Tails mu (parts >= 2, |mu| <= 3g-3) that can sit below the largest part
/// of a coefficient key at genus g. Includes the empty tail.
std::vector<Partition> family_tails(uint32_t genus);

/// First k at which the factorial-times-polynomial form of C((k) join mu)
/// holds: max(2, mu_1, 3g-2-|mu|+mu_1 - [|mu| = 3g-3]).
uint32_t family_k0(uint32_t genus, const Partition& mu);

/// One fitted coefficient family: C((k) join mu) = (k + shift)! * Q(k) for
/// all k >= k0, with deg Q = 3g-3-|mu| and shift = |mu|-g-1.
struct ClosedFormFamily {
    Partition mu;
    uint32_t k0 = 0;
    long shift = 0;
    std::vector<Rational> qpoly;  // ascending powers

    Rational q_eval(uint32_t k) const;
    Rational eval(uint32_t k) const;
};

/// Normalized coefficients harvested level by level: each 1-free key lambda
/// first appears in the level-(largest part) decomposition, which is where
/// its value is read off. Absent keys are genuine zeros up to max_n.
struct SeedTable {
    uint32_t genus = 0;
    uint32_t max_n = 0;
    std::map<Partition, Rational> values;

    Rational value(const Partition& lambda) const {
        auto it = values.find(lambda);
        return it == values.end() ? Rational(0) : it->second;
    }
};

SeedTable build_seed_table(CorrelatorEngine& engine, uint32_t genus, uint32_t max_n,
                           unsigned threads = 1);

struct ClosedFormSet {
    uint32_t genus = 0;
    Rational c_empty;                               // coefficient of the pure e1 key
    std::map<Partition, ClosedFormFamily> families; // keyed by mu
    std::map<Partition, Rational> exceptional;      // keys (k) join mu with k < k0
    std::vector<Partition> skipped;                 // tails whose window exceeded the n cap

    /// C((k) join mu); throws domain_error when mu was skipped.
    Rational value(uint32_t k, const Partition& mu) const;
};

/// Fits every family from seed data, then checks each against one seed value
/// beyond its fit window (integrity_error on mismatch). Families that would
/// need amplitudes above max_seed_n are skipped, not guessed.
ClosedFormSet fit_closed_form_from_table(const SeedTable& table);
ClosedFormSet fit_closed_form(CorrelatorEngine& engine, uint32_t genus,
                              uint32_t max_seed_n = 0,  // 0: smallest complete cap
                              unsigned threads = 1);

/// Smallest seed-table level that makes every family of this genus fittable,
/// including the verification point.
uint32_t complete_seed_level(uint32_t genus);

/// Assembles the level-n decomposition purely from fitted families and stored
/// exceptional values; performs no intersection-number computation.
AmplitudeDecomposition closed_form_amplitude(const ClosedFormSet& set, std::size_t n);

/// Linear consequence of the dilaton equation on the coefficient table:
/// for every 1-free lambda,
///   sum over steps j of (m_{lambda_j+1}+1) C(lambda+(1)_j)
///     + (m_2+1) C(lambda join (2)) + (g-|lambda|) C(lambda) = 0,
/// together with its lambda = empty specialization C((2)) = -g C(()).
RelationReport verify_dilaton_recursion(const SeedTable& table);

struct ConjectureReport {
    uint32_t genus = 0;
    std::size_t checked_n = 0;
    std::size_t keys_checked = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Tests the length bound: every coefficient key with more than g parts
/// (after dropping 1s) vanishes in the level-(2g-1) decomposition, which by
/// the polynomial structure of the k-families decides every level at once.
/// The decomposition is computed in full mode so no vanishing is assumed.
ConjectureReport check_conjecture(CorrelatorEngine& engine, uint32_t genus,
                                  unsigned threads = 1);

/// Human-readable family table, one line per family and exceptional value.
std::string render_closed_forms(const ClosedFormSet& set);

/// The normalized amplitude as symbolic text in n: scale on the left, the
/// pure-e1 term, one summed term per fitted family with the e1 exponent
/// written in n and k, then the explicit exceptional terms.
std::string render_amplitude_formula(const ClosedFormSet& set);

}  // namespace wk
