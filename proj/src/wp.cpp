#include "wk/wp.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>
#include <utility>

namespace wk {

PiScalar WPVolume::coeff(const std::vector<uint32_t>& l2exp) const {
    auto it = terms.find(l2exp);
    return it == terms.end() ? PiScalar() : it->second;
}

namespace {

// Descending-sorted exponent tuples (m_1 >= ... >= m_n >= 0) with total <= d,
// zero-padded to n entries. One representative per permutation orbit.
std::vector<std::vector<uint32_t>> exponent_classes(long d, std::size_t n) {
    std::vector<std::vector<uint32_t>> out;
    for (long s = 0; s <= d; ++s) {
        for (const Partition& p :
             partitions_of(static_cast<uint64_t>(s),
                           static_cast<uint32_t>(std::max<long>(d, 1)), n)) {
            std::vector<uint32_t> padded = p.parts();
            padded.resize(n, 0);
            out.push_back(std::move(padded));
        }
    }
    return out;
}

void assign_orbit(WPVolume& vol, const std::vector<uint32_t>& cls, const PiScalar& c) {
    if (c.is_zero()) return;
    std::vector<uint32_t> arr = cls;
    std::sort(arr.begin(), arr.end());
    do {
        vol.terms.emplace(arr, c);
    } while (std::next_permutation(arr.begin(), arr.end()));
}

// Each coefficient must be a pure pi^2 power matching weight - sum(m).
void check_grading(const WPVolume& vol, const std::vector<uint32_t>& cls, const PiScalar& c) {
    long expect = static_cast<long>(vol.weight());
    for (uint32_t m : cls) expect -= m;
    for (const auto& [power, coeff] : c.terms()) {
        if (power != expect) {
            std::ostringstream msg;
            msg << "volume coefficient off the pi^2 grading at g=" << vol.genus
                << " n=" << vol.n << " exponents (";
            for (std::size_t i = 0; i < cls.size(); ++i)
                msg << (i ? "," : "") << cls[i];
            msg << "): found pi^" << 2 * power << ", expected pi^" << 2 * expect;
            throw integrity_error(msg.str());
        }
    }
    (void)c;
}

WPVolume volume_kappa(CorrelatorEngine& engine, uint32_t genus, std::size_t n) {
    WPVolume vol;
    vol.genus = genus;
    vol.n = n;
    const long d = static_cast<long>(vol.weight());
    TimesVector wp = TimesVector::weil_petersson(d + 1);
    for (const auto& cls : exponent_classes(d, n)) {
        PiScalar c = times_correlator(engine, genus, cls, wp);
        if (c.is_zero()) continue;
        Rational scale(1);
        for (uint32_t m : cls)
            scale /= rational_pow(Rational(2), m) * Rational(factorial(static_cast<long>(m)));
        c *= scale;
        check_grading(vol, cls, c);
        assign_orbit(vol, cls, c);
    }
    return vol;
}

// State for the integral representation at one (g, n): the kernel paired with
// the inverse exchange-series powers, everything on one truncation window.
// Expansion regime: every v is formally smaller than u, so F = u (1 + W) with
// the geometric series in W = F/u - 1 giving the inverse powers. Each W term
// raises u-exponent + v-degree by at least 1, which both terminates the
// series inside the window and keeps u = 0 the only pole.
//
// The inverse-power terms are not the whole story once two or more v-variables
// are in play. The disc function then has a second zero u = root(v), of
// v-adic order two, and the kernel keys heavier than the weight pair with
// line integrals from 0 to that root instead of residues. Their integrands
// carry nonnegative powers of the disc function, so each key contributes
//   (-1)^m / m! * key coefficient * [v^key] integral of F^m * legs,
// with m = |key| - weight - 1. At the volume coupling values every term of F
// has v-degree + twice u-degree at least two, which caps contributing keys at
// twice the weight and makes the root enumeration finite.
struct ResidueKernel {
    std::size_t gv;
    LaurentWindow w{};
    std::vector<long> zeros;
    Rational norm_inv;
    LaurentSeries combined;
    LaurentSeries fser;
    std::vector<LaurentSeries> root_pow;  // powers of the migrated zero of F
    // per F-power m: extraction targets and weights for the heavy keys
    std::vector<std::vector<std::pair<std::vector<long>, Rational>>> heavy;
    long heavy_top = -1;  // largest m with a nonempty target list

    ResidueKernel(const BFunction& b, const ClosedFormSet& fam, long enlarge)
        : gv(b.genus),
          zeros(b.genus, 0),
          norm_inv(Rational(1) / (rational_pow(Rational(24), b.genus) *
                                  Rational(factorial(static_cast<long>(b.genus))))),
          combined(b.genus, LaurentWindow{}),
          fser(b.genus, LaurentWindow{}) {
        const long d = b.weight();
        const long N = d + 1;  // pole order of the volume integrand
        const long U = N + d + 1 + enlarge;
        // heavy-key targets reach per-variable exponent 2d - 2, the residue
        // part only needs d; extra headroom never feeds back into either
        const long vcap = gv >= 2 ? std::max<long>(2 * d - 2, 1) : std::max<long>(d, 1);
        w = LaurentWindow{-U, U, vcap};
        combined = LaurentSeries(gv, w);

        TimesVector wp = TimesVector::weil_petersson(U + static_cast<long>(gv));
        LaurentSeries F = f_series(wp, gv, w);
        fser = F;

        LaurentSeries W = F;
        W.add_term(1, zeros, PiScalar(Rational(-1)));
        W = W.u_shifted(-1);
        LaurentSeries negW = W;
        negW.scale(PiScalar(Rational(-1)));
        LaurentSeries inv1 = LaurentSeries::one(gv, w);
        LaurentSeries power = LaurentSeries::one(gv, w);
        const long exhaustion = U + static_cast<long>(gv) * w.v_cap + 2;
        for (long p = 0; p <= exhaustion; ++p) {
            power = power * negW;
            if (power.is_zero()) break;
            inv1 += power;
        }
        if (!power.is_zero())
            throw integrity_error("residue kernel: inverse series failed to terminate");

        LaurentSeries invN = LaurentSeries::one(gv, w);
        for (long i = 0; i < N; ++i) invN = invN * inv1;
        std::vector<LaurentSeries> powF;  // F^(j - N) for j = 0..d
        powF.push_back(invN.u_shifted(-N));
        for (long j = 1; j <= d; ++j) powF.push_back(powF.back() * F);

        for (const auto& [lam, c] : b.terms) {
            // permutation-sum monomial in 1/v: every distinct arrangement of
            // the negated parts, weighted by the stabilizer size
            LaurentSeries maug(gv, w);
            std::vector<long> exps(gv, 0);
            for (std::size_t i = 0; i < lam.length(); ++i)
                exps[i] = -static_cast<long>(lam.part(i));
            std::sort(exps.begin(), exps.end());
            PiScalar repeats(
                Rational(lam.zstab() * factorial(static_cast<long>(gv - lam.length()))));
            do {
                maug.add_term(0, exps, repeats);
            } while (std::next_permutation(exps.begin(), exps.end()));
            LaurentSeries piece = maug * powF[static_cast<std::size_t>(lam.size())];
            piece.scale(PiScalar(c));
            combined += piece;
        }

        // heavy keys: size d+1 .. 2d, at least two parts (the root vanishes
        // identically on one-variable slices, so single-part keys never pair)
        heavy.assign(static_cast<std::size_t>(std::max<long>(d, 0)), {});
        for (uint64_t sz = static_cast<uint64_t>(d) + 1; sz <= 2 * static_cast<uint64_t>(d);
             ++sz) {
            for (const Partition& lam :
                 partitions_of(sz, static_cast<uint32_t>(sz), gv)) {
                if (lam.length() < 2 || lam.smallest() < 2) continue;
                Rational c = fam.value(lam.largest(), lam.dropped_largest());
                if (wk::is_zero(c)) continue;
                long m = static_cast<long>(sz) - d - 1;
                Rational wt = c / Rational(factorial(m));
                if (m % 2) wt = -wt;
                std::vector<long> target(gv, 0);
                for (std::size_t i = 0; i < lam.length(); ++i)
                    target[i] = static_cast<long>(lam.part(i));
                heavy[static_cast<std::size_t>(m)].emplace_back(std::move(target), wt);
                heavy_top = std::max(heavy_top, m);
            }
        }
        if (heavy_top < 0) return;

        // the migrated zero of F as a v-series, by fixed-point iteration on
        // u = -f1(v)^-1 (f0(v) + sum_{s>=2} fs(v) u^s) with fs the u-slices
        std::vector<LaurentSeries> slice(static_cast<std::size_t>(U) + 1,
                                         LaurentSeries(gv, w));
        for (const auto& [key, c] : F.terms())
            slice[static_cast<std::size_t>(key.first)].add_term(0, key.second, c);
        LaurentSeries one = LaurentSeries::one(gv, w);
        LaurentSeries h = slice[1];
        h.add_term(0, zeros, PiScalar(Rational(-1)));
        LaurentSeries f1inv = one;
        {
            LaurentSeries hp = one;
            for (long p = 0; p <= exhaustion; ++p) {
                hp = hp * h;
                if (hp.is_zero()) break;
                LaurentSeries t = hp;
                t.scale(PiScalar(Rational(p % 2 ? 1 : -1)));
                f1inv += t;
            }
            if (!hp.is_zero())
                throw integrity_error("residue kernel: slope inversion failed to terminate");
        }
        LaurentSeries root(gv, w);
        bool settled = false;
        for (long it = 0; it <= exhaustion && !settled; ++it) {
            LaurentSeries next = slice[0];
            LaurentSeries rp = root;
            for (long s = 2; s <= U; ++s) {
                rp = rp * root;
                if (rp.is_zero()) break;
                next += slice[static_cast<std::size_t>(s)] * rp;
            }
            next = next * f1inv;
            next.scale(PiScalar(Rational(-1)));
            settled = next == root;
            root = next;
        }
        LaurentSeries residual = slice[0];
        {
            LaurentSeries rp = one;
            for (long s = 1; s <= U; ++s) {
                rp = rp * root;
                if (rp.is_zero()) break;
                residual += slice[static_cast<std::size_t>(s)] * rp;
            }
        }
        if (!settled || !residual.is_zero())
            throw integrity_error("residue kernel: root iteration did not converge");

        root_pow.assign(static_cast<std::size_t>(U) + 2, LaurentSeries(gv, w));
        root_pow[0] = one;
        for (std::size_t p = 1; p < root_pow.size(); ++p)
            root_pow[p] = root_pow[p - 1] * root;
    }

    // [u^-1 v^0] of kernel * legs, one leg factor per boundary:
    //   sum_{k <= min(m, g)} e_k(v) u^{m-k} / (2^m (m-k)! m!)
    // which is the L^{2m} slice of the squared-argument Bessel leg.
    PiScalar coefficient(const std::vector<uint32_t>& cls) const {
        LaurentSeries legs = LaurentSeries::one(gv, w);
        for (uint32_t m : cls) {
            LaurentSeries leg(gv, w);
            Rational base = Rational(1) / (rational_pow(Rational(2), m) *
                                           Rational(factorial(static_cast<long>(m))));
            uint32_t top = std::min<uint32_t>(m, static_cast<uint32_t>(gv));
            for (uint32_t k = 0; k <= top; ++k) {
                PiScalar c(base / Rational(factorial(static_cast<long>(m - k))));
                if (k == 0) {
                    leg.add_term(m, zeros, c);
                    continue;
                }
                std::vector<long> sel(gv, 0);
                std::fill(sel.end() - k, sel.end(), 1);
                do {
                    leg.add_term(static_cast<long>(m) - k, sel, c);
                } while (std::next_permutation(sel.begin(), sel.end()));
            }
            legs = legs * leg;
        }
        PiScalar out = (combined * legs).coeff(-1, zeros);
        // heavy-key line integrals: primitive of F^m * legs evaluated at the
        // migrated root, u^s picking up root^(s+1) / (s+1)
        LaurentSeries integrand = legs;
        for (long m = 0; m <= heavy_top; ++m) {
            if (m > 0) integrand = integrand * fser;
            if (heavy[static_cast<std::size_t>(m)].empty()) continue;
            LaurentSeries prim(gv, w);
            for (const auto& [key, c] : integrand.terms()) {
                std::size_t p = static_cast<std::size_t>(key.first) + 1;
                if (p >= root_pow.size() || root_pow[p].is_zero()) continue;
                PiScalar cc = c;
                cc *= Rational(1) / Rational(key.first + 1);
                for (const auto& [rkey, rc] : root_pow[p].terms()) {
                    std::vector<long> ve = rkey.second;
                    for (std::size_t i = 0; i < ve.size(); ++i) ve[i] += key.second[i];
                    prim.add_term(0, ve, cc * rc);
                }
            }
            for (const auto& [target, wt] : heavy[static_cast<std::size_t>(m)]) {
                PiScalar c = prim.coeff(0, target);
                c *= wt;
                out += c;
            }
        }
        out *= norm_inv;
        return out;
    }
};

WPVolume volume_residue(CorrelatorEngine& engine, uint32_t genus, std::size_t n,
                        const ClosedFormSet* families) {
    ClosedFormSet local;
    if (families == nullptr) {
        local = fit_closed_form(engine, genus);
        families = &local;
    }
    if (families->genus != genus)
        throw domain_error("wp_volume: supplied families fitted at a different genus");
    WPVolume vol;
    vol.genus = genus;
    vol.n = n;
    const long d = static_cast<long>(vol.weight());
    // no part cap here: inverse powers of the disc function feed elementary
    // symmetric factors into the pairing, so every key up to the weight matters
    BFunction b = build_b_minus(*families, n, false);
    ResidueKernel kernel(b, *families, 0);
    for (const auto& cls : exponent_classes(d, n)) {
        PiScalar c = kernel.coefficient(cls);
        check_grading(vol, cls, c);
        assign_orbit(vol, cls, c);
    }
    // certify the truncation window on the deepest-pole coefficient
    ResidueKernel widened(b, *families, 2);
    std::vector<uint32_t> constant_cls(n, 0);
    if (!(widened.coefficient(constant_cls) == kernel.coefficient(constant_cls)))
        throw integrity_error("wp_volume: window enlargement shifted a residue coefficient");
    return vol;
}

}  // namespace

WPVolume wp_volume(CorrelatorEngine& engine, uint32_t genus, std::size_t n, WPPath path,
                   const ClosedFormSet* families) {
    if (!CorrelatorEngine::stable(genus, n))
        throw domain_error("wp_volume: unstable surface type");
    return path == WPPath::kappa ? volume_kappa(engine, genus, n)
                                 : volume_residue(engine, genus, n, families);
}

std::string wp_volume_human(const WPVolume& vol) {
    if (vol.terms.empty()) return "0";
    std::vector<const std::pair<const std::vector<uint32_t>, PiScalar>*> items;
    items.reserve(vol.terms.size());
    for (const auto& t : vol.terms) items.push_back(&t);
    std::sort(items.begin(), items.end(), [](const auto* a, const auto* b) {
        long da = 0, db = 0;
        for (uint32_t m : a->first) da += m;
        for (uint32_t m : b->first) db += m;
        if (da != db) return da > db;
        return a->first > b->first;  // L1-major terms first within a degree
    });
    std::ostringstream out;
    bool first = true;
    for (const auto* item : items) {
        auto [power, r] = item->second.sole_term();
        bool negative = sgn(r) < 0;
        Rational mag = negative ? Rational(-r) : r;
        std::vector<std::string> factors;
        if (mag != 1) factors.push_back(pretty_string(mag));
        if (power > 0) factors.push_back("pi^" + std::to_string(2 * power));
        for (std::size_t i = 0; i < item->first.size(); ++i)
            if (item->first[i] > 0)
                factors.push_back("L" + std::to_string(i + 1) + "^" +
                                  std::to_string(2 * item->first[i]));
        if (factors.empty()) factors.push_back(pretty_string(mag));
        if (first) {
            if (negative) out << "-";
            first = false;
        } else {
            out << (negative ? " - " : " + ");
        }
        for (std::size_t i = 0; i < factors.size(); ++i) out << (i ? "*" : "") << factors[i];
    }
    return out.str();
}

std::string wp_volume_json(const WPVolume& vol) {
    nlohmann::json j;
    j["g"] = vol.genus;
    j["n"] = static_cast<uint64_t>(vol.n);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [exp, c] : vol.terms) {
        auto [power, r] = c.sole_term();
        nlohmann::json term;
        term["L2exp"] = exp;
        term["pi2pow"] = power;
        term["coeff"] = fraction_string(r);
        arr.push_back(std::move(term));
    }
    j["terms"] = std::move(arr);
    return j.dump();
}

}  // namespace wk
