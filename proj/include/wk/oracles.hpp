#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "wk/decomposition.hpp"
#include "wk/sympoly.hpp"

namespace wk {

/// Raw one-point amplitude: e1^(3g-2) / (24^g g!). The once-marked sphere
/// is unstable, so genus 0 raises domain_error.
EPolynomial<Rational> one_point(uint32_t genus);

/// Raw coefficient of e2^m e1^(3g-1-2m) in the two-point amplitude:
/// (1/(24^g g!)) * binom(g,m) * (-3)^m / (2m+1). Zero for m > g.
Rational two_point_coeff(uint32_t genus, uint32_t m);

/// Same coefficient with 1/(2m+1) left as the alternating sum it arises
/// from; must agree with two_point_coeff identically.
Rational two_point_coeff_sum_form(uint32_t genus, uint32_t m);

/// sum_{k=0}^m (-4)^k (m!/(m-k)!) k!/(2k+1)!, which collapses to 1/(2m+1).
Rational two_point_identity_sum(uint32_t m);

/// Raw two-point amplitude assembled from two_point_coeff. The twice-marked
/// sphere is unstable; genus 0 raises domain_error.
EPolynomial<Rational> two_point_amplitude(uint32_t genus);

/// Weight-3r kernel of the three-point closed form:
///   e1^{-1} sum_{i<j} (x_i+x_j)^{r+1} (x_i x_j)^r
/// in three variables, computed through its residue representation (a finite
/// t-series truncated at order r, no division ever performed).
EPolynomial<Rational> zagier_three_point(uint32_t r);

/// The same kernel expanded literally from the defining pair sum, converted
/// to the e-basis, then divided by e1 term by term. Raises integrity_error
/// if any term lacks the e1 factor. Slower; used to cross-check the residue
/// route.
EPolynomial<Rational> zagier_three_point_direct(uint32_t r);

/// Raw three-point amplitude: kernels P_r = zagier_three_point(r) / (4^r
/// (2r+1)!!) combined level by level with weights (2r)!!/(4^(g'-r)(2g'+2)!!)
/// and powers of (e1 e2 - e3), then dressed by exp(p3/24) where
/// p3 = e1^3 - 3 e1 e2 + 3 e3.
EPolynomial<Rational> three_point_amplitude(uint32_t genus);

/// One family of the published genus-2/3/4 coefficient tables. The
/// normalized coefficient attached to the 1-free key (k) joined with mu is
/// value(k): a listed exceptional value for k below k_lo, and
/// poly(k) * (k + shift)! from k_lo on.
struct PrintedFamily {
    Partition mu;
    long shift = 0;
    std::vector<Rational> poly;  // ascending coefficients in k
    uint32_t k_lo = 0;
    std::map<uint32_t, Rational> exceptional;

    uint32_t k_min() const;  // max(2, largest part of mu)
    Rational family_eval(uint32_t k) const;
    /// Piecewise table value; pre: k >= k_min(). A gap below k_lo raises
    /// integrity_error (the shipped tables have none).
    Rational value(uint32_t k) const;
};

/// The published normalized coefficient tables. Families whose coefficient
/// vanishes identically are omitted. Genus outside {2,3,4}: domain_error.
const std::vector<PrintedFamily>& printed_families(uint32_t genus);

/// Normalized decomposition assembled from printed_families at given n.
/// Terms with a part exceeding n or a negative leftover power of e1 drop.
AmplitudeDecomposition printed_formula(uint32_t genus, std::size_t n);

/// Coefficient of x^(2k) in S(x) = sinh(x/2)/(x/2), i.e. 1/(4^k (2k+1)!),
/// and in the reciprocal series 1/S = 1 - x^2/24 + 7x^4/5760 - ...
Rational sinh_kernel_coeff(uint32_t k);
Rational inv_sinh_kernel_coeff(uint32_t k);

/// [t^(2g)] prod_i S(t x_i) / S(t): symmetric in the x_i, even, of total
/// degree exactly 2g (degree g as a polynomial in the x_i^2), returned on
/// doubled monomial keys.
MSymPoly<Rational> gjv_onepart_poly(uint32_t genus, std::size_t n);

}  // namespace wk
