#pragma once

#include "wk/partition.hpp"
#include "wk/rational.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace wk {

/// Symmetric polynomial in a fixed number of variables, written in the
/// monomial basis: sum over keys lambda of coeff * m_lambda. Keys longer
/// than nvars are rejected (m_lambda vanishes there).
template <class S>
class MSymPoly {
public:
    explicit MSymPoly(std::size_t nvars) : nvars_(nvars) {}

    static MSymPoly unit(std::size_t nvars) {
        MSymPoly p(nvars);
        p.terms_.emplace(Partition{}, S(1));
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    const std::map<Partition, S>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Partition& key, const S& c) {
        if (key.length() > nvars_)
            throw domain_error("MSymPoly: key longer than variable count");
        auto [it, fresh] = terms_.emplace(key, c);
        if (!fresh) {
            it->second += c;
            if (scalar_is_zero(it->second)) terms_.erase(it);
        } else if (scalar_is_zero(it->second)) {
            terms_.erase(it);
        }
    }

    S coeff(const Partition& key) const {
        auto it = terms_.find(key);
        return it == terms_.end() ? S(0) : it->second;
    }

    MSymPoly& operator+=(const MSymPoly& o) {
        require_same_vars(o);
        for (auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    MSymPoly& operator-=(const MSymPoly& o) {
        require_same_vars(o);
        for (auto& [k, c] : o.terms_) add_term(k, S(-1) * c);
        return *this;
    }
    MSymPoly& operator*=(const S& s) {
        if (scalar_is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, c] : terms_) c *= s;
        return *this;
    }

    /// Multiplication by the elementary symmetric polynomial e_k.
    MSymPoly times_ek(uint32_t k) const;

    bool operator==(const MSymPoly& o) const {
        return nvars_ == o.nvars_ && terms_ == o.terms_;
    }

private:
    static bool scalar_is_zero(const S& s) { return s == S(0); }
    void require_same_vars(const MSymPoly& o) const {
        if (nvars_ != o.nvars_) throw domain_error("MSymPoly: variable count mismatch");
    }

    std::size_t nvars_;
    std::map<Partition, S> terms_;
};

/// Polynomial in the elementary symmetric generators: sum over keys Lambda of
/// coeff * e_Lambda, where e_Lambda = prod over parts of e_part. Valid in any
/// number of variables >= the largest part; parts larger than the variable
/// count make e_Lambda vanish on evaluation.
template <class S>
class EPolynomial {
public:
    EPolynomial() = default;

    static EPolynomial constant(const S& c) {
        EPolynomial p;
        p.add_term(Partition{}, c);
        return p;
    }

    const std::map<Partition, S>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Partition& key, const S& c) {
        auto [it, fresh] = terms_.emplace(key, c);
        if (!fresh) it->second += c;
        if (it->second == S(0)) terms_.erase(it);
    }

    S coeff(const Partition& key) const {
        auto it = terms_.find(key);
        return it == terms_.end() ? S(0) : it->second;
    }

    EPolynomial& operator+=(const EPolynomial& o) {
        for (auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    EPolynomial& operator-=(const EPolynomial& o) {
        for (auto& [k, c] : o.terms_) add_term(k, S(-1) * c);
        return *this;
    }
    EPolynomial& operator*=(const S& s) {
        if (s == S(0)) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, c] : terms_) c *= s;
        return *this;
    }

    friend EPolynomial operator*(const EPolynomial& a, const EPolynomial& b) {
        EPolynomial r;
        for (auto& [ka, ca] : a.terms_) {
            for (auto& [kb, cb] : b.terms_) {
                std::vector<uint32_t> parts = ka.parts();
                parts.insert(parts.end(), kb.parts().begin(), kb.parts().end());
                r.add_term(Partition(std::move(parts)), ca * cb);
            }
        }
        return r;
    }

    /// Expansion into the monomial basis in nvars variables.
    MSymPoly<S> to_monomials(std::size_t nvars) const {
        MSymPoly<S> acc(nvars);
        for (auto& [key, c] : terms_) {
            MSymPoly<S> prod = MSymPoly<S>::unit(nvars);
            for (uint32_t part : key.parts()) prod = prod.times_ek(part);
            prod *= c;
            acc += prod;
        }
        return acc;
    }

    bool operator==(const EPolynomial& o) const { return terms_ == o.terms_; }

private:
    std::map<Partition, S> terms_;
};

/// Evaluates an e-basis polynomial at the point xs; e_k(xs) = 0 for k > #xs.
template <class S>
S e_eval(const EPolynomial<S>& p, const std::vector<S>& xs) {
    std::vector<S> e(xs.size() + 1, S(0));
    e[0] = S(1);
    for (const S& x : xs)
        for (std::size_t j = e.size() - 1; j >= 1; --j) e[j] += x * e[j - 1];
    S total(0);
    for (auto& [key, c] : p.terms()) {
        S term = c;
        bool dead = false;
        for (uint32_t part : key.parts()) {
            if (part >= e.size()) {
                dead = true;
                break;
            }
            term *= e[part];
        }
        if (!dead) total += term;
    }
    return total;
}

/// Sum over all permutations sigma in S_n of prod_i xs[i]^{lambda_sigma(i)}
/// (lambda zero-padded to n = #xs). Equals zstab(padded) * m_lambda * (orbit sum).
template <class S>
S augmented_monomial(const Partition& lambda, const std::vector<S>& xs);

/// Constant-term pairing of m_lambda(v) against m_mu(1/v) in n variables:
/// delta_{lambda,mu} * n! / (zstab(lambda) * (n - length)!), and 0 when the
/// keys don't fit into n variables.
Rational pairing_residue(const Partition& lambda, const Partition& mu, std::size_t n);

// --- implementation ---

namespace detail {

// Distinct part values of `key` in descending order, with multiplicities,
// including the zero class when the key is shorter than nvars.
struct ValueClass {
    uint32_t value;
    uint32_t mult;
};

inline std::vector<ValueClass> value_classes(const Partition& key, std::size_t nvars) {
    std::vector<ValueClass> cls;
    const auto& parts = key.parts();
    std::size_t i = 0;
    while (i < parts.size()) {
        std::size_t j = i;
        while (j < parts.size() && parts[j] == parts[i]) ++j;
        cls.push_back({parts[i], static_cast<uint32_t>(j - i)});
        i = j;
    }
    if (parts.size() < nvars)
        cls.push_back({0, static_cast<uint32_t>(nvars - parts.size())});
    return cls;
}

// Enumerates increment profiles a_j (0 <= a_j <= mult_j, sum = k) and hands
// each to `sink` together with the resulting sorted key and the pair count:
// the number of (monomial, variable-subset) pairs mapping onto that key.
template <class Sink>
void for_each_ek_shift(const std::vector<ValueClass>& cls, uint32_t k, Sink&& sink) {
    std::vector<uint32_t> a(cls.size(), 0);
    auto recurse = [&](auto&& self, std::size_t j, uint32_t left) -> void {
        if (j == cls.size()) {
            if (left != 0) return;
            std::vector<uint32_t> out;
            Integer ways = 1;
            for (std::size_t t = 0; t < cls.size(); ++t) {
                for (uint32_t r = 0; r < a[t]; ++r) out.push_back(cls[t].value + 1);
                for (uint32_t r = 0; r < cls[t].mult - a[t]; ++r)
                    if (cls[t].value > 0) out.push_back(cls[t].value);
                if (a[t] > 0) {
                    // elements raised to value+1 join any untouched elements
                    // already at that value (the tail of the previous class)
                    uint32_t carry = 0;
                    if (t > 0 && cls[t - 1].value == cls[t].value + 1) carry = cls[t - 1].mult - a[t - 1];
                    ways *= binomial(static_cast<long>(a[t] + carry), static_cast<long>(a[t]));
                }
            }
            sink(Partition(std::move(out)), ways);
            return;
        }
        uint32_t hi = std::min(left, cls[j].mult);
        for (uint32_t v = 0; v <= hi; ++v) {
            a[j] = v;
            self(self, j + 1, left - v);
        }
        a[j] = 0;
    };
    recurse(recurse, 0, k);
}

}  // namespace detail

template <class S>
MSymPoly<S> MSymPoly<S>::times_ek(uint32_t k) const {
    if (k == 0) return *this;
    MSymPoly<S> out(nvars_);
    if (k > nvars_) return out;  // e_k = 0
    for (auto& [key, c] : terms_) {
        auto cls = detail::value_classes(key, nvars_);
        detail::for_each_ek_shift(cls, k, [&](Partition&& shifted, const Integer& ways) {
            out.add_term(shifted, c * S(Rational(ways)));
        });
    }
    return out;
}

template <class S>
S augmented_monomial(const Partition& lambda, const std::vector<S>& xs) {
    const std::size_t n = xs.size();
    if (lambda.length() > n)
        throw domain_error("augmented_monomial: partition longer than point");
    std::vector<uint32_t> exps(n, 0);
    for (std::size_t i = 0; i < lambda.length(); ++i) exps[i] = lambda.part(i);
    std::sort(exps.begin(), exps.end());
    Integer repeats = lambda.zstab() * factorial(static_cast<long>(n - lambda.length()));
    S total(0);
    do {
        S term(1);
        for (std::size_t i = 0; i < n; ++i) {
            for (uint32_t e = 0; e < exps[i]; ++e) term *= xs[i];
        }
        total += term;
    } while (std::next_permutation(exps.begin(), exps.end()));
    return total * S(Rational(repeats));
}

/// Rewrites monomial-basis data as a polynomial in the e_k via leading-term
/// elimination (conjugate-partition pivots). Keys of the result are the
/// e-index partitions. Exact; total-degree preserving.
EPolynomial<Rational> monomials_to_e(const MSymPoly<Rational>& m);

/// Same result as monomials_to_e, restricted to the span
///   { e_lambda * e1^(degree - |lambda|) : lambda in span_keys },
/// for homogeneous input of the given total degree. Raises integrity_error
/// if the input does not lie in that span. Much faster than the general
/// routine for large variable counts.
EPolynomial<Rational> monomials_to_e_span(const MSymPoly<Rational>& m,
                                          const std::vector<Partition>& span_keys,
                                          uint64_t degree);

}  // namespace wk
