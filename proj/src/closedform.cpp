#include "wk/closedform.hpp"

#include <algorithm>
#include <sstream>

namespace wk {

std::vector<Partition> family_tails(uint32_t genus) {
    if (genus == 0) return {};
    uint32_t cap = 3 * genus - 3;
    if (cap == 0) return {Partition{}};
    return partitions_up_to(cap, 2, cap);
}

uint32_t family_k0(uint32_t genus, const Partition& mu) {
    if (genus == 0) throw domain_error("no closed-form families at genus 0");
    uint64_t cap = 3ull * genus - 3;
    if (mu.size() > cap) throw domain_error("tail too heavy for this genus");
    long base = 3L * (long)genus - 2 - (long)mu.size() + (long)mu.largest()
                - (mu.size() == cap ? 1 : 0);
    long k0 = std::max({2L, (long)mu.largest(), base});
    return (uint32_t)k0;
}

uint32_t complete_seed_level(uint32_t genus) {
    uint32_t level = genus == 0 ? 3 : 2;
    for (const auto& mu : family_tails(genus)) {
        uint32_t deg = (uint32_t)(3 * genus - 3 - mu.size());
        level = std::max(level, family_k0(genus, mu) + deg + 1);
    }
    return level;
}

Rational ClosedFormFamily::q_eval(uint32_t k) const {
    Rational x((long)k);
    Rational acc(0);
    for (std::size_t t = qpoly.size(); t-- > 0;) acc = acc * x + qpoly[t];
    return acc;
}

Rational ClosedFormFamily::eval(uint32_t k) const {
    if (k < k0) throw domain_error("closed form valid only from its threshold k0");
    long ks = (long)k + shift;
    if (ks < 0) throw domain_error("factorial argument negative inside validity range");
    return Rational(factorial(ks)) * q_eval(k);
}

SeedTable build_seed_table(CorrelatorEngine& engine, uint32_t genus, uint32_t max_n,
                           unsigned threads) {
    std::size_t n0 = genus == 0 ? 3 : 1;
    if (max_n < n0) throw domain_error("seed table needs at least the first stable level");
    SeedTable table;
    table.genus = genus;
    table.max_n = max_n;
    for (std::size_t n = n0; n <= max_n; ++n) {
        auto dec = amplitude(engine, genus, n, /*normalized=*/true, threads);
        for (const auto& [lambda, c] : dec.cmap()) {
            if (lambda.empty()) {
                table.values.emplace(lambda, c);  // same at every level; first wins
            } else if (lambda.largest() == n) {
                // a key is read off at the level equal to its largest part,
                // where its coefficient has just stabilized
                table.values.emplace(lambda, c);
            }
        }
    }
    return table;
}

static bool contains(const std::vector<Partition>& v, const Partition& p) {
    return std::find(v.begin(), v.end(), p) != v.end();
}

// Exact interpolation at the consecutive nodes k0, k0+1, ... via divided
// differences, expanded to ascending monomial coefficients.
static std::vector<Rational> newton_fit(uint32_t k0, const std::vector<Rational>& ys) {
    std::size_t m = ys.size();
    std::vector<Rational> dd = ys;
    for (std::size_t j = 1; j < m; ++j)
        for (std::size_t i = m - 1; i >= j; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / Rational((long)j);
            if (i == j) break;
        }
    std::vector<Rational> poly{dd[m - 1]};
    for (std::size_t j = m - 1; j-- > 0;) {
        std::vector<Rational> next(poly.size() + 1, Rational(0));
        Rational node((long)(k0 + j));
        for (std::size_t t = 0; t < poly.size(); ++t) {
            next[t + 1] += poly[t];
            next[t] -= node * poly[t];
        }
        next[0] += dd[j];
        poly = std::move(next);
    }
    return poly;
}

ClosedFormSet fit_closed_form_from_table(const SeedTable& table) {
    ClosedFormSet set;
    set.genus = table.genus;
    set.c_empty = table.value(Partition{});
    if (is_zero(set.c_empty)) throw integrity_error("pure e1 coefficient missing from seed table");
    for (const auto& mu : family_tails(set.genus)) {
        uint32_t k0 = family_k0(set.genus, mu);
        uint32_t deg = (uint32_t)(3 * set.genus - 3 - mu.size());
        uint32_t kmin = std::max<uint32_t>(2, (uint32_t)mu.largest());
        for (uint32_t k = kmin; k < k0 && k <= table.max_n; ++k) {
            Rational v = table.value(mu.appended(k));
            if (!is_zero(v)) set.exceptional.emplace(mu.appended(k), v);
        }
        if ((uint64_t)k0 + deg + 1 > table.max_n) {
            set.skipped.push_back(mu);
            continue;
        }
        long shift = (long)mu.size() - (long)set.genus - 1;
        std::vector<Rational> ys;
        ys.reserve(deg + 1);
        for (uint32_t k = k0; k <= k0 + deg; ++k)
            ys.push_back(table.value(mu.appended(k)) / Rational(factorial((long)k + shift)));
        ClosedFormFamily fam;
        fam.mu = mu;
        fam.k0 = k0;
        fam.shift = shift;
        fam.qpoly = newton_fit(k0, ys);
        uint32_t kv = k0 + deg + 1;
        if (fam.eval(kv) != table.value(mu.appended(kv))) {
            std::ostringstream os;
            os << "fitted family for tail " << mu.to_string()
               << " disagrees with the seed at k = " << kv;
            throw integrity_error(os.str());
        }
        set.families.emplace(mu, std::move(fam));
    }
    return set;
}

ClosedFormSet fit_closed_form(CorrelatorEngine& engine, uint32_t genus,
                              uint32_t max_seed_n, unsigned threads) {
    if (max_seed_n == 0) max_seed_n = complete_seed_level(genus);
    return fit_closed_form_from_table(build_seed_table(engine, genus, max_seed_n, threads));
}

Rational ClosedFormSet::value(uint32_t k, const Partition& mu) const {
    if (k < 2 || k < mu.largest())
        throw domain_error("coefficient keys list their largest part first: need k >= max(2, mu_1)");
    if (contains(skipped, mu))
        throw domain_error("family " + mu.to_string() + " was not fitted at this seed cap");
    auto fit = families.find(mu);
    if (fit != families.end() && k >= fit->second.k0) return fit->second.eval(k);
    auto ex = exceptional.find(mu.appended(k));
    if (ex != exceptional.end()) return ex->second;
    return Rational(0);
}

AmplitudeDecomposition closed_form_amplitude(const ClosedFormSet& set, std::size_t n) {
    if (!CorrelatorEngine::stable(set.genus, n))
        throw domain_error("unstable genus/insertion pair");
    uint64_t degree = amplitude_degree(set.genus, n);
    EPolynomial<Rational> coeffs;
    if (!is_zero(set.c_empty))
        coeffs.add_term(pad_with_ones(Partition{}, degree), set.c_empty);
    for (const auto& mu : family_tails(set.genus)) {
        if (mu.size() + 2 > degree || mu.largest() > n) continue;
        uint32_t kmin = std::max<uint32_t>(2, (uint32_t)mu.largest());
        uint64_t kcap = std::min<uint64_t>(n, degree - mu.size());
        for (uint64_t k = kmin; k <= kcap; ++k) {
            Rational v = set.value((uint32_t)k, mu);
            if (is_zero(v)) continue;
            coeffs.add_term(pad_with_ones(mu.appended((uint32_t)k), degree), v);
        }
    }
    return AmplitudeDecomposition{set.genus, n, true, std::move(coeffs)};
}

RelationReport verify_dilaton_recursion(const SeedTable& table) {
    RelationReport rep;
    uint32_t g = table.genus;
    const Rational zero(0);

    auto value = [&](const Partition& key) {
        if (!key.empty() && key.largest() > table.max_n)
            throw domain_error("dilaton sweep referenced a key beyond the table's levels");
        return table.value(key);
    };

    // lambda = (): C((2)) + g C(()) = 0
    {
        Rational lhs = value(Partition({2})) + Rational((long)g) * value(Partition{});
        ++rep.checks;
        if (lhs != zero)
            rep.violations.push_back("C((2)) != -g*C(()) at genus " + std::to_string(g));
    }

    for (const auto& mu : family_tails(g)) {
        uint32_t kmin = std::max<uint32_t>(2, (uint32_t)mu.largest());
        for (uint32_t k = kmin; k + 1 <= table.max_n; ++k) {
            Partition lam = mu.appended(k);
            Rational lhs(0);
            for (std::size_t j : lam.step_indices()) {
                uint32_t grown = lam.part(j) + 1;
                lhs += Rational((long)(lam.mult(grown) + 1)) * value(lam.incremented_at(j));
            }
            lhs += Rational((long)(lam.mult(2) + 1)) * value(lam.appended(2));
            lhs += (Rational((long)g) - Rational((long)lam.size())) * value(lam);
            ++rep.checks;
            if (lhs != zero)
                rep.violations.push_back("dilaton relation fails at lambda = " + lam.to_string() +
                                         ", genus " + std::to_string(g));
        }
    }
    return rep;
}

ConjectureReport check_conjecture(CorrelatorEngine& engine, uint32_t genus, unsigned threads) {
    if (genus < 3)
        throw domain_error("length-bound check starts at genus 3; below that the bound "
                           "follows from the string relation");
    std::size_t n = 2 * (std::size_t)genus - 1;
    auto dec = amplitude(engine, genus, n, /*normalized=*/true, threads, SpanMode::full);

    ConjectureReport rep;
    rep.genus = genus;
    rep.checked_n = n;
    uint64_t degree = dec.degree();
    uint64_t tail_cap = 3ull * genus - 3;

    // full mode assumed nothing, so first re-verify the tail bound on what
    // actually showed up
    for (const auto& [lam, c] : dec.cmap()) {
        if (!lam.empty() && lam.size() - lam.largest() > tail_cap && !is_zero(c)) {
            rep.violations.push_back("tail bound breached by " + lam.to_string() + " = " +
                                     pretty_string(c) + " at n = " + std::to_string(n));
        }
    }

    // every key with more than g parts that could appear at this level
    for (const auto& lam : partitions_up_to((uint32_t)degree, 2, (uint32_t)n)) {
        if (lam.length() <= genus) continue;
        ++rep.keys_checked;
        Rational c = dec.ccoeff(lam);
        if (!is_zero(c)) {
            rep.violations.push_back("C(" + lam.to_string() + ") = " + pretty_string(c) +
                                     " at n = " + std::to_string(n));
        }
    }
    return rep;
}

static std::string key_with_symbol(const Partition& mu) {
    std::string s = "(k";
    for (std::size_t i = 0; i < mu.length(); ++i)
        s += "," + std::to_string(mu.part(i));
    return s + ")";
}

static std::string factorial_string(long shift) {
    if (shift == 0) return "k!";
    std::ostringstream os;
    os << "(k " << (shift > 0 ? "+ " : "- ") << std::abs(shift) << ")!";
    return os.str();
}

static std::string family_formula(const ClosedFormFamily& fam) {
    Integer den(1);
    for (const auto& c : fam.qpoly)
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<Integer> ip(fam.qpoly.size());
    std::size_t nonzero = 0;
    for (std::size_t t = 0; t < fam.qpoly.size(); ++t) {
        Rational scaled = fam.qpoly[t] * Rational(den);
        ip[t] = scaled.get_num();
        if (ip[t] != 0) ++nonzero;
    }
    if (nonzero == 0) return "0";

    std::ostringstream poly;
    bool first = true;
    for (std::size_t t = ip.size(); t-- > 0;) {
        if (ip[t] == 0) continue;
        bool neg = ip[t] < 0;
        Integer mag = neg ? Integer(-ip[t]) : ip[t];
        if (first)
            poly << (neg ? "-" : "");
        else
            poly << (neg ? " - " : " + ");
        if (t == 0)
            poly << mag.get_str();
        else {
            if (mag != 1) poly << mag.get_str() << "*";
            poly << "k";
            if (t > 1) poly << "^" << t;
        }
        first = false;
    }

    std::ostringstream os;
    std::string body = poly.str();
    if (nonzero == 1 && (body == "1" || body == "-1"))
        os << (body == "-1" ? "-" : "") << factorial_string(fam.shift);
    else if (nonzero == 1 && body.find(' ') == std::string::npos)
        os << body << "*" << factorial_string(fam.shift);
    else
        os << "(" << body << ")*" << factorial_string(fam.shift);
    if (den != 1) os << "/" << den.get_str();
    return os.str();
}

std::string render_closed_forms(const ClosedFormSet& set) {
    std::ostringstream os;
    os << "C(()) = " << pretty_string(set.c_empty) << "\n";
    for (const auto& [mu, fam] : set.families) {
        os << "C(" << key_with_symbol(mu) << ") = " << family_formula(fam)
           << "   for k >= " << fam.k0 << "\n";
    }
    for (const auto& [key, v] : set.exceptional)
        os << "C(" << key.to_string() << ") = " << pretty_string(v) << "\n";
    for (const auto& mu : set.skipped)
        os << "# family " << key_with_symbol(mu) << " not fitted: needs seed levels up to "
           << family_k0(set.genus, mu) + (3 * set.genus - 3 - mu.size()) + 1 << "\n";
    return os.str();
}

static std::string e1_power(long offset, bool minus_k) {
    if (offset == 0 && !minus_k) return "e1^n";
    std::ostringstream os;
    os << "e1^(n";
    if (offset > 0) os << "+" << offset;
    if (offset < 0) os << "-" << -offset;
    if (minus_k) os << "-k";
    os << ")";
    return os.str();
}

static std::string e_monomial(const Partition& key) {
    std::string s;
    const auto& parts = key.parts();
    for (std::size_t i = 0; i < parts.size();) {
        std::size_t j = i;
        while (j < parts.size() && parts[j] == parts[i]) ++j;
        if (!s.empty()) s += "*";
        s += "e" + std::to_string(parts[i]);
        if (j - i > 1) s += "^" + std::to_string(j - i);
        i = j;
    }
    return s;
}

std::string render_amplitude_formula(const ClosedFormSet& set) {
    const long base = 3L * set.genus - 3;
    std::ostringstream os;
    os << pretty_string(normalization_factor(set.genus)) << " * A(" << set.genus << ",n) = ";
    if (is_zero(set.c_empty)) {
        os << "0";
    } else {
        if (set.c_empty != 1) os << pretty_string(set.c_empty) << "*";
        os << e1_power(base, false);
    }
    for (const auto& [mu, fam] : set.families) {
        os << "\n  + sum_{" << fam.k0 << " <= k <= n} [" << family_formula(fam) << "]*e_k";
        if (!mu.empty()) os << "*" << e_monomial(mu);
        os << "*" << e1_power(base - static_cast<long>(mu.size()), true);
    }
    for (const auto& [key, v] : set.exceptional) {
        if (is_zero(v)) continue;
        bool neg = sgn(v) < 0;
        Rational mag = neg ? Rational(-v) : v;
        os << "\n  " << (neg ? "-" : "+") << " ";
        if (mag != 1) os << pretty_string(mag) << "*";
        os << e_monomial(key) << "*" << e1_power(base - static_cast<long>(key.size()), false);
    }
    for (const auto& mu : set.skipped)
        os << "\n  # family C" << key_with_symbol(mu) << " not fitted at this seed cap";
    os << "\n(terms with k > n or a negative e1 exponent are absent)\n";
    return os.str();
}

}  // namespace wk
