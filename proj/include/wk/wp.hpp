#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wk/residue.hpp"

namespace wk {

/// Volume polynomial of the moduli space of genus-g hyperbolic surfaces with
/// n geodesic boundaries: coefficient of prod_i L_i^{2 m_i} keyed by the
/// exponent tuple (m_1..m_n). Every permutation of a tuple is stored, so the
/// map is explicitly symmetric, and each coefficient is a pure pi^2 monomial
/// of power 3g-3+n - sum(m) (builders enforce both).
struct WPVolume {
    uint32_t genus = 0;
    std::size_t n = 0;
    std::map<std::vector<uint32_t>, PiScalar> terms;

    uint64_t weight() const { return 3ull * genus - 3 + n; }
    PiScalar coeff(const std::vector<uint32_t>& l2exp) const;

    bool operator==(const WPVolume&) const = default;
};

/// kappa: expand the boundary-class exponential into coupling insertions and
/// sum engine correlators; uses no fitted data.
/// residue: evaluate the integral representation instead, extracting window-
/// truncated Laurent coefficients of the fitted kernel against Bessel-type
/// leg factors, plus (from genus 2 on) line-integral terms up to the second
/// zero of the disc function; the engine is touched only to fit families
/// when none are supplied. The sample coefficient is recomputed on an
/// enlarged window and must agree (integrity_error otherwise).
enum class WPPath { kappa, residue };

WPVolume wp_volume(CorrelatorEngine& engine, uint32_t genus, std::size_t n, WPPath path,
                   const ClosedFormSet* families = nullptr);

/// "1/48*L1^2 + 1/12*pi^2": descending total L-degree, then key order.
std::string wp_volume_human(const WPVolume& vol);

/// {"g":..,"n":..,"terms":[{"L2exp":[..],"coeff":"p/q","pi2pow":..},..]}
/// in key order, coefficients as exact fraction strings.
std::string wp_volume_json(const WPVolume& vol);

}  // namespace wk
