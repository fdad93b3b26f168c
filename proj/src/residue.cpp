#include "wk/residue.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace wk {

// ---------------------------------------------------------------- PiScalar

PiScalar::PiScalar(Rational r) {
    if (!wk::is_zero(r)) c_.emplace(0, std::move(r));
}

PiScalar PiScalar::pi2(long power, Rational coeff) {
    PiScalar s;
    if (!wk::is_zero(coeff)) s.c_.emplace(power, std::move(coeff));
    return s;
}

Rational PiScalar::coeff(long power) const {
    auto it = c_.find(power);
    return it == c_.end() ? Rational(0) : it->second;
}

std::pair<long, Rational> PiScalar::sole_term() const {
    if (c_.size() != 1) throw domain_error("PiScalar: not a single pi^2 monomial");
    return {c_.begin()->first, c_.begin()->second};
}

PiScalar& PiScalar::operator+=(const PiScalar& o) {
    for (const auto& [p, r] : o.c_) {
        auto [it, fresh] = c_.emplace(p, r);
        if (!fresh) {
            it->second += r;
            if (wk::is_zero(it->second)) c_.erase(it);
        }
    }
    return *this;
}

PiScalar& PiScalar::operator-=(const PiScalar& o) {
    for (const auto& [p, r] : o.c_) {
        auto [it, fresh] = c_.emplace(p, -r);
        if (!fresh) {
            it->second -= r;
            if (wk::is_zero(it->second)) c_.erase(it);
        }
    }
    return *this;
}

PiScalar& PiScalar::operator*=(const PiScalar& o) {
    std::map<long, Rational> out;
    for (const auto& [p, r] : c_) {
        for (const auto& [q, s] : o.c_) {
            Rational prod = r * s;
            auto [it, fresh] = out.emplace(p + q, prod);
            if (!fresh) it->second += prod;
        }
    }
    for (auto it = out.begin(); it != out.end();)
        it = wk::is_zero(it->second) ? out.erase(it) : std::next(it);
    c_ = std::move(out);
    return *this;
}

PiScalar& PiScalar::operator*=(const Rational& r) {
    if (wk::is_zero(r)) {
        c_.clear();
        return *this;
    }
    for (auto& [p, v] : c_) v *= r;
    return *this;
}

PiScalar PiScalar::operator-() const {
    PiScalar s;
    for (const auto& [p, r] : c_) s.c_.emplace(p, -r);
    return s;
}

std::string PiScalar::to_string() const {
    if (c_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [p, r] : c_) {
        bool negative = sgn(r) < 0;
        Rational mag = negative ? Rational(-r) : r;
        if (first) {
            if (negative) out << "-";
            first = false;
        } else {
            out << (negative ? " - " : " + ");
        }
        if (p == 0) {
            out << pretty_string(mag);
        } else {
            if (mag != 1) out << pretty_string(mag) << "*";
            out << "pi^" << 2 * p;
        }
    }
    return out.str();
}

// ------------------------------------------------------------- TimesVector

void TimesVector::set(long k, PiScalar value) {
    if (k <= 0)
        throw domain_error(
            "TimesVector: index must be >= 1; fold the degree-1 coupling with "
            "absorb_dilaton_times");
    if (value.is_zero())
        t_.erase(k);
    else
        t_[k] = std::move(value);
}

PiScalar TimesVector::at(long k) const {
    if (k <= 0) throw domain_error("TimesVector: index must be >= 1");
    auto it = t_.find(k);
    return it == t_.end() ? PiScalar() : it->second;
}

TimesVector TimesVector::weil_petersson(long max_index) {
    TimesVector t;
    Rational c(1);  // runs through (-2)^k / k!
    for (long k = 1; k <= max_index; ++k) {
        c *= make_rational(-2, k);
        t.set(k, PiScalar::pi2(k, -c));
    }
    return t;
}

std::pair<Rational, TimesVector> absorb_dilaton_times(const Rational& t0,
                                                      const TimesVector& rest,
                                                      uint32_t genus, std::size_t n) {
    Rational remainder = Rational(1) - t0;
    if (wk::is_zero(remainder))
        throw domain_error("absorb_dilaton_times: degree-1 coupling 1 is a pole");
    long euler = 2L * genus - 2 + static_cast<long>(n);
    Rational prefactor = rational_pow(remainder, -euler);
    Rational inv = Rational(1) / remainder;
    TimesVector scaled;
    for (const auto& [k, v] : rest.entries()) {
        PiScalar s = v;
        s *= inv;
        scaled.set(k, std::move(s));
    }
    return {prefactor, scaled};
}

// ----------------------------------------------------------- LaurentSeries

LaurentSeries LaurentSeries::one(std::size_t gvars, LaurentWindow w) {
    LaurentSeries s(gvars, w);
    s.add_term(0, std::vector<long>(gvars, 0), PiScalar(Rational(1)));
    return s;
}

void LaurentSeries::add_term(long u, std::vector<long> vexp, const PiScalar& c) {
    if (vexp.size() != gvars_)
        throw domain_error("LaurentSeries: exponent vector length mismatch");
    if (c.is_zero()) return;
    if (u < window_.u_min || u > window_.u_max) return;
    for (long e : vexp)
        if (e < -window_.v_cap || e > window_.v_cap) return;
    Key key{u, std::move(vexp)};
    auto [it, fresh] = terms_.emplace(std::move(key), c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

PiScalar LaurentSeries::coeff(long u, const std::vector<long>& vexp) const {
    auto it = terms_.find(Key{u, vexp});
    return it == terms_.end() ? PiScalar() : it->second;
}

void LaurentSeries::require_compatible(const LaurentSeries& o) const {
    if (gvars_ != o.gvars_ || !(window_ == o.window_))
        throw domain_error("LaurentSeries: window or variable count mismatch");
}

LaurentSeries& LaurentSeries::operator+=(const LaurentSeries& o) {
    require_compatible(o);
    for (const auto& [k, c] : o.terms_) {
        auto [it, fresh] = terms_.emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    return *this;
}

LaurentSeries& LaurentSeries::operator-=(const LaurentSeries& o) {
    require_compatible(o);
    for (const auto& [k, c] : o.terms_) {
        auto [it, fresh] = terms_.emplace(k, -c);
        if (!fresh) {
            it->second -= c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    return *this;
}

LaurentSeries LaurentSeries::operator*(const LaurentSeries& o) const {
    require_compatible(o);
    LaurentSeries out(gvars_, window_);
    std::vector<long> vexp(gvars_);
    for (const auto& [ka, ca] : terms_) {
        for (const auto& [kb, cb] : o.terms_) {
            long u = ka.first + kb.first;
            if (u < window_.u_min || u > window_.u_max) continue;
            bool inside = true;
            for (std::size_t i = 0; i < gvars_; ++i) {
                vexp[i] = ka.second[i] + kb.second[i];
                if (vexp[i] < -window_.v_cap || vexp[i] > window_.v_cap) {
                    inside = false;
                    break;
                }
            }
            if (!inside) continue;
            PiScalar prod = ca;
            prod *= cb;
            if (prod.is_zero()) continue;
            Key key{u, vexp};
            auto [it, fresh] = out.terms_.emplace(std::move(key), prod);
            if (!fresh) {
                it->second += prod;
                if (it->second.is_zero()) out.terms_.erase(it);
            }
        }
    }
    return out;
}

LaurentSeries& LaurentSeries::scale(const PiScalar& s) {
    if (s.is_zero()) {
        terms_.clear();
        return *this;
    }
    std::map<Key, PiScalar> out;
    for (const auto& [k, c] : terms_) {
        PiScalar prod = c;
        prod *= s;
        if (!prod.is_zero()) out.emplace(k, std::move(prod));
    }
    terms_ = std::move(out);
    return *this;
}

LaurentSeries LaurentSeries::u_shifted(long delta) const {
    LaurentSeries out(gvars_, window_);
    for (const auto& [k, c] : terms_) out.add_term(k.first + delta, k.second, c);
    return out;
}

// ---------------------------------------------------------------- f_series

LaurentSeries f_series(const TimesVector& t, std::size_t gvars, LaurentWindow w) {
    if (w.u_max < 1) throw domain_error("f_series: window must reach u^1");
    LaurentSeries F(gvars, w);
    const std::vector<long> zeros(gvars, 0);
    F.add_term(1, zeros, PiScalar(Rational(1)));
    Rational jfact_inv(1);  // 1 / j!
    for (long j = 0; j <= w.u_max; ++j) {
        if (j > 0) jfact_inv /= Rational(j);
        for (std::size_t k = 0; k <= gvars; ++k) {
            if (j + static_cast<long>(k) < 2) continue;
            PiScalar coupling = t.at(j + static_cast<long>(k) - 1);
            if (coupling.is_zero()) continue;
            coupling *= -jfact_inv;
            if (k == 0) {
                F.add_term(j, zeros, coupling);
                continue;
            }
            // e_k(v): all 0/1 exponent vectors with k ones
            std::vector<long> sel(gvars, 0);
            std::fill(sel.end() - k, sel.end(), 1);
            do {
                F.add_term(j, sel, coupling);
            } while (std::next_permutation(sel.begin(), sel.end()));
        }
    }
    if (!(F.coeff(0, zeros).is_zero()) || !(F.coeff(1, zeros) == PiScalar(Rational(1))))
        throw integrity_error("f_series: origin valuation violated, u = 0 is not a clean root");
    return F;
}

LaurentSeries f_series(const TimesVector& t, std::size_t gvars, long u_cap, long v_cap) {
    return f_series(t, gvars, LaurentWindow{0, u_cap, v_cap});
}

// ----------------------------------------------------------------- kernels

BFunction build_b_minus(const ClosedFormSet& families, std::size_t n, bool cap_parts) {
    BFunction b;
    b.genus = families.genus;
    b.n = n;
    const long d = b.weight();
    if (d < 0) return b;  // no stable amplitude, empty kernel
    Rational gfact_inv = Rational(1) / Rational(factorial(static_cast<long>(b.genus)));
    long part_cap = cap_parts ? std::min<long>(d, static_cast<long>(n)) : d;
    for (const Partition& lam :
         partitions_up_to(static_cast<uint64_t>(d), 2,
                          static_cast<uint32_t>(std::max<long>(part_cap, 1)))) {
        if (lam.length() > b.genus) continue;
        Rational c = lam.empty() ? families.c_empty
                                 : families.value(lam.largest(), lam.dropped_largest());
        if (wk::is_zero(c)) continue;
        Rational term = Rational(factorial(d - static_cast<long>(lam.size()))) * c * gfact_inv;
        b.terms.emplace(lam, std::move(term));
    }
    return b;
}

Rational correlator_from_residue(const BFunction& b, const std::vector<uint32_t>& degrees) {
    if (degrees.size() != b.n)
        throw domain_error("correlator_from_residue: kernel built for a different leg count");
    long total = 0;
    for (uint32_t di : degrees) total += di;
    if (total != b.weight()) return 0;
    const uint32_t g = b.genus;
    // product over legs of sum_r e_r / (d_i - r)!, expanded to monomials in
    // g variables; the permutation-sum pairing contributes the g! that
    // cancels the kernel's 1/g!
    EPolynomial<Rational> prod = EPolynomial<Rational>::constant(Rational(1));
    for (uint32_t di : degrees) {
        EPolynomial<Rational> leg;
        uint32_t top = std::min(di, g);
        for (uint32_t r = 0; r <= top; ++r) {
            Partition key = r == 0 ? Partition{} : Partition({r});
            leg.add_term(key, Rational(1) / Rational(factorial(static_cast<long>(di - r))));
        }
        prod = prod * leg;
    }
    MSymPoly<Rational> mono = prod.to_monomials(g);
    Rational acc(0);
    for (const auto& [lam, c] : b.terms) acc += c * mono.coeff(lam);
    return acc / rational_pow(Rational(24), g);
}

PiScalar times_correlator(CorrelatorEngine& engine, uint32_t genus,
                          const std::vector<uint32_t>& degrees, const TimesVector& t) {
    const long n = static_cast<long>(degrees.size());
    long excess = 3L * genus - 3 + n;
    for (uint32_t di : degrees) excess -= di;
    PiScalar acc;
    if (excess < 0) return acc;
    if (excess == 0 && CorrelatorEngine::stable(genus, degrees.size()))
        acc += PiScalar(engine.correlator(genus, degrees));
    for (long ell = 1; ell <= excess; ++ell) {
        for (const Partition& mu :
             partitions_of(static_cast<uint64_t>(excess + ell),
                           static_cast<uint32_t>(excess + 1), static_cast<std::size_t>(ell))) {
            if (static_cast<long>(mu.length()) != ell || mu.smallest() < 2) continue;
            PiScalar weight(Rational(1));
            bool dead = false;
            for (uint32_t part : mu.parts()) {
                PiScalar tv = t.at(static_cast<long>(part) - 1);
                if (tv.is_zero()) {
                    dead = true;
                    break;
                }
                weight *= tv;
            }
            if (dead) continue;
            std::vector<uint32_t> full = degrees;
            full.insert(full.end(), mu.parts().begin(), mu.parts().end());
            Rational corr = engine.correlator(genus, std::move(full));
            if (wk::is_zero(corr)) continue;
            weight *= corr / Rational(mu.zstab());
            acc += weight;
        }
    }
    return acc;
}

}  // namespace wk
