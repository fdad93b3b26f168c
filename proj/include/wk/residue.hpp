#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wk/closedform.hpp"
#include "wk/engine.hpp"
#include "wk/partition.hpp"
#include "wk/rational.hpp"

namespace wk {

/// Element of Q[pi^2], keyed by the pi^2 power. Zero coefficients are pruned,
/// so is_zero() == terms().empty(). Exact ring arithmetic throughout; pi is
/// never evaluated numerically.
class PiScalar {
public:
    PiScalar() = default;
    PiScalar(Rational r);  // power-0 embedding, intentionally implicit
    PiScalar(long v) : PiScalar(Rational(v)) {}
    PiScalar(int v) : PiScalar(Rational(v)) {}

    static PiScalar pi2(long power, Rational coeff = Rational(1));

    const std::map<long, Rational>& terms() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    Rational coeff(long power) const;

    /// (power, coefficient) of a one-term scalar; domain_error otherwise.
    std::pair<long, Rational> sole_term() const;

    PiScalar& operator+=(const PiScalar& o);
    PiScalar& operator-=(const PiScalar& o);
    PiScalar& operator*=(const PiScalar& o);
    PiScalar& operator*=(const Rational& r);
    friend PiScalar operator+(PiScalar a, const PiScalar& b) { return a += b; }
    friend PiScalar operator-(PiScalar a, const PiScalar& b) { return a -= b; }
    friend PiScalar operator*(PiScalar a, const PiScalar& b) { return a *= b; }
    PiScalar operator-() const;
    bool operator==(const PiScalar&) const = default;

    /// Ascending powers, sign-aware joins: "0", "1/2", "2*pi^2 - 4/3*pi^6".
    std::string to_string() const;

private:
    std::map<long, Rational> c_;
};

/// Coupling values t_k for k >= 1; t_k multiplies a degree-(k+1) insertion in
/// the coupling exponential. Index 0 (the degree-1 coupling) is structurally
/// absent: fold it away with absorb_dilaton_times first. Reading or writing
/// any index <= 0 is a domain error, never a silent zero.
class TimesVector {
public:
    TimesVector() = default;

    void set(long k, PiScalar value);
    PiScalar at(long k) const;  // unset index: zero
    bool empty() const { return t_.empty(); }
    long max_index() const { return t_.empty() ? 0 : t_.rbegin()->first; }
    const std::map<long, PiScalar>& entries() const { return t_; }

    /// t_k = -(-2 pi^2)^k / k!, 1 <= k <= max_index: the coupling whose
    /// amplitude series generates Weil-Petersson volume polynomials.
    static TimesVector weil_petersson(long max_index);

    bool operator==(const TimesVector&) const = default;

private:
    std::map<long, PiScalar> t_;
};

/// Folds a degree-1 coupling t0 into the remaining times: every insertion of
/// the coupling exponential picks up 1/(1-t0) and the surface type contributes
/// (1-t0)^-(2g-2+n) overall. Exact only for rational t0; t0 = 1 is a pole of
/// the resummation and a domain error.
std::pair<Rational, TimesVector> absorb_dilaton_times(const Rational& t0,
                                                      const TimesVector& rest,
                                                      uint32_t genus, std::size_t n);

/// Truncation window for Laurent arithmetic: u-exponents within
/// [u_min, u_max], every v-exponent within [-v_cap, v_cap]. Terms falling
/// outside are dropped on creation and on multiplication; window adequacy is
/// certified downstream by recomputing a sample on an enlarged window.
struct LaurentWindow {
    long u_min = 0;
    long u_max = 0;
    long v_cap = 0;
    bool operator==(const LaurentWindow&) const = default;
};

/// Exact truncated Laurent series in the exchange variable u and gvars
/// auxiliary variables, coefficients in Q[pi^2]. Binary operations require
/// matching variable counts and windows (domain_error otherwise).
class LaurentSeries {
public:
    using Key = std::pair<long, std::vector<long>>;

    LaurentSeries(std::size_t gvars, LaurentWindow w) : gvars_(gvars), window_(w) {}

    static LaurentSeries one(std::size_t gvars, LaurentWindow w);

    std::size_t gvars() const { return gvars_; }
    const LaurentWindow& window() const { return window_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::map<Key, PiScalar>& terms() const { return terms_; }

    void add_term(long u, std::vector<long> vexp, const PiScalar& c);
    PiScalar coeff(long u, const std::vector<long>& vexp) const;

    LaurentSeries& operator+=(const LaurentSeries& o);
    LaurentSeries& operator-=(const LaurentSeries& o);
    LaurentSeries operator*(const LaurentSeries& o) const;
    LaurentSeries& scale(const PiScalar& s);
    LaurentSeries u_shifted(long delta) const;  // times u^delta, same window

    bool operator==(const LaurentSeries&) const = default;

private:
    void require_compatible(const LaurentSeries& o) const;

    std::size_t gvars_;
    LaurentWindow window_;
    std::map<Key, PiScalar> terms_;
};

/// Deformed exchange series
///   F(t; u, v) = u - sum_{j,k >= 0, j+k >= 2} t_{k+j-1} u^j e_k(v) / j!
/// truncated to the window. Zero coupling gives F = u exactly. The origin
/// valuation ([u^0] = 0, [u^1]|_{v=0} = 1) is asserted: it is what keeps
/// u = 0 the unique expansion point for the inverse powers taken downstream.
LaurentSeries f_series(const TimesVector& t, std::size_t gvars, LaurentWindow w);
LaurentSeries f_series(const TimesVector& t, std::size_t gvars, long u_cap, long v_cap);

/// Residue kernel at fixed (g, n): the sum over 1-free coefficient keys
/// lambda (parts >= 2, length <= g, |lambda| <= weight) of
///   terms[lambda] * maug_lambda(1/v) * xi^|lambda|
/// with terms[lambda] = (weight - |lambda|)! * C(lambda) / g! in the
/// normalized coefficient convention; maug is the full permutation-sum
/// monomial in g variables. Extractions against this kernel therefore carry
/// one global division by 24^g g!.
struct BFunction {
    uint32_t genus = 0;
    std::size_t n = 0;
    std::map<Partition, Rational> terms;

    long weight() const { return 3L * genus - 3 + static_cast<long>(n); }
};

/// Assembles the kernel from fitted coefficient families. With cap_parts the
/// keys with a part exceeding n are dropped; no monomial of an n-leg product
/// can pair with them, so the cap is inert for bare-correlator extraction
/// (tested, not assumed). Volume evaluation must pass cap_parts = false:
/// there the inverse disc-function powers supply extra elementary symmetric
/// factors and every key matters. Throws domain_error if a needed family was
/// skipped by the fit.
BFunction build_b_minus(const ClosedFormSet& families, std::size_t n,
                        bool cap_parts = true);

/// Correlator recovered from the kernel alone: pairs each kernel term against
/// the product over legs of sum_{r <= min(d_i, g)} e_r(v) / (d_i - r)! and
/// divides by 24^g. Degree vectors off the amplitude weight give 0. The
/// intersection-number engine is never consulted.
Rational correlator_from_residue(const BFunction& b, const std::vector<uint32_t>& degrees);

/// Correlator of tau_{d_1}..tau_{d_n} against the coupling exponential:
///   sum over multisets mu with parts >= 2 of
///     prod_i t_{mu_i - 1} / prod_value mult! * <tau_mu tau_d>_g.
/// The dimension check kills every mu with |mu| - len(mu) != weight - sum(d),
/// so the sum is finite. An empty degree list is allowed and sums bare
/// coupling insertions only, which is how leg-free volumes arise.
PiScalar times_correlator(CorrelatorEngine& engine, uint32_t genus,
                          const std::vector<uint32_t>& degrees, const TimesVector& t);

}  // namespace wk
