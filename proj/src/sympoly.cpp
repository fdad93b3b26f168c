#include "wk/sympoly.hpp"

#include <algorithm>
#include <array>
#include <iterator>

namespace wk {

Rational pairing_residue(const Partition& lambda, const Partition& mu, std::size_t n) {
    if (lambda.length() > n || mu.length() > n) return 0;
    if (!(lambda == mu)) return 0;
    Rational r(factorial(static_cast<long>(n)),
               lambda.zstab() * factorial(static_cast<long>(n - lambda.length())));
    r.canonicalize();
    return r;
}

namespace {

// e_Lambda expanded in the monomial basis, shared across calls through `memo`.
// Built by peeling the smallest part, so partitions with a common prefix reuse work.
const MSymPoly<Rational>& expand_e(const Partition& key, std::size_t nvars,
                                   std::map<Partition, MSymPoly<Rational>>& memo) {
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    MSymPoly<Rational> value(nvars);
    if (key.empty()) {
        value = MSymPoly<Rational>::unit(nvars);
    } else {
        Partition head = key.removed_at(key.length() - 1);
        value = expand_e(head, nvars, memo).times_ek(key.smallest());
    }
    return memo.emplace(key, std::move(value)).first->second;
}

}  // namespace

EPolynomial<Rational> monomials_to_e(const MSymPoly<Rational>& m) {
    MSymPoly<Rational> work = m;
    EPolynomial<Rational> out;
    std::map<Partition, MSymPoly<Rational>> memo;
    while (!work.is_zero()) {
        auto lead = std::prev(work.terms().end());
        Partition nu = lead->first;
        Rational c = lead->second;
        Partition pivot = nu.conjugate();
        MSymPoly<Rational> sub = expand_e(pivot, m.nvars(), memo);
        sub *= c;
        work -= sub;
        if (!work.is_zero() && !(std::prev(work.terms().end())->first < nu))
            throw integrity_error("monomials_to_e: elimination failed to reduce leading term");
        out.add_term(pivot, c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Span-restricted elimination. Two implementations: a packed fast path for
// small part sizes / variable counts, and a generic fallback.
// ---------------------------------------------------------------------------

namespace {

using u128 = unsigned __int128;

constexpr int kSlots = 25;
constexpr int kSlotBits = 5;
constexpr uint32_t kMaxPackedPart = 30;

bool packable(std::size_t nvars, uint64_t degree) {
    return nvars <= kSlots && degree <= kMaxPackedPart;
}

inline int slot_shift(int i) { return kSlotBits * (kSlots - 1 - i); }

u128 pack_parts(const std::vector<uint32_t>& parts) {
    u128 key = 0;
    for (std::size_t i = 0; i < parts.size(); ++i)
        key |= static_cast<u128>(parts[i]) << slot_shift(static_cast<int>(i));
    return key;
}

void unpack_key(u128 key, std::vector<uint32_t>& parts) {
    parts.clear();
    for (int i = 0; i < kSlots; ++i) {
        auto v = static_cast<uint32_t>((key >> slot_shift(i)) & 0x1fu);
        if (v == 0) break;
        parts.push_back(v);
    }
}

// Sorted descending by key; coefficients are pair counts (bounded by
// degree! <= 30!, well inside 128 bits).
using PackedPoly = std::vector<std::pair<u128, u128>>;

void sort_combine(PackedPoly& p) {
    std::sort(p.begin(), p.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    std::size_t w = 0;
    for (std::size_t r = 0; r < p.size(); ++r) {
        if (w > 0 && p[w - 1].first == p[r].first) {
            p[w - 1].second += p[r].second;
        } else {
            p[w++] = p[r];
        }
    }
    p.resize(w);
}

struct PackedClass {
    uint32_t value;
    uint32_t mult;
    uint32_t start;
};

void packed_classes(const std::vector<uint32_t>& parts, std::size_t nvars,
                    std::vector<PackedClass>& cls) {
    cls.clear();
    std::size_t i = 0;
    while (i < parts.size()) {
        std::size_t j = i;
        while (j < parts.size() && parts[j] == parts[i]) ++j;
        cls.push_back({parts[i], static_cast<uint32_t>(j - i), static_cast<uint32_t>(i)});
        i = j;
    }
    if (parts.size() < nvars)
        cls.push_back({0, static_cast<uint32_t>(nvars - parts.size()),
                       static_cast<uint32_t>(parts.size())});
}

uint64_t small_binomial(uint32_t n, uint32_t k) {
    static const auto table = [] {
        std::array<std::array<uint64_t, kSlots + 1>, kSlots + 1> t{};
        for (int i = 0; i <= kSlots; ++i) {
            t[i][0] = 1;
            for (int j = 1; j <= i; ++j)
                t[i][j] = t[i - 1][j - 1] + (j <= i - 1 ? t[i - 1][j] : 0);
        }
        return t;
    }();
    return table[n][k];
}

PackedPoly packed_times_e1(const PackedPoly& p, std::size_t nvars) {
    PackedPoly out;
    out.reserve(p.size() * 4);
    std::vector<uint32_t> parts;
    std::vector<PackedClass> cls;
    for (const auto& [key, c] : p) {
        unpack_key(key, parts);
        packed_classes(parts, nvars, cls);
        for (std::size_t t = 0; t < cls.size(); ++t) {
            u128 shifted = key + (static_cast<u128>(1) << slot_shift(static_cast<int>(cls[t].start)));
            uint32_t carry = (t > 0 && cls[t - 1].value == cls[t].value + 1)
                                 ? cls[t - 1].mult
                                 : 0;
            out.emplace_back(shifted, c * (carry + 1));
        }
    }
    sort_combine(out);
    return out;
}

PackedPoly packed_times_ek(const PackedPoly& p, uint32_t k, std::size_t nvars) {
    if (k == 0) return p;
    PackedPoly out;
    if (k > nvars) return out;
    if (k == 1) return packed_times_e1(p, nvars);
    std::vector<uint32_t> parts;
    std::vector<PackedClass> cls;
    std::vector<uint32_t> a;
    for (const auto& [key, c] : p) {
        unpack_key(key, parts);
        packed_classes(parts, nvars, cls);
        a.assign(cls.size(), 0);
        auto recurse = [&](auto&& self, std::size_t j, uint32_t left) -> void {
            if (j == cls.size()) {
                if (left != 0) return;
                u128 shifted = key;
                u128 ways = 1;
                for (std::size_t t = 0; t < cls.size(); ++t) {
                    if (a[t] == 0) continue;
                    for (uint32_t r = 0; r < a[t]; ++r)
                        shifted += static_cast<u128>(1)
                                   << slot_shift(static_cast<int>(cls[t].start + r));
                    uint32_t carry = (t > 0 && cls[t - 1].value == cls[t].value + 1)
                                         ? cls[t - 1].mult - a[t - 1]
                                         : 0;
                    ways *= small_binomial(a[t] + carry, a[t]);
                }
                out.emplace_back(shifted, c * ways);
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
    sort_combine(out);
    return out;
}

Rational u128_to_rational(u128 v) {
    auto hi = static_cast<uint64_t>(v >> 64);
    auto lo = static_cast<uint64_t>(v);
    Integer z(static_cast<unsigned long>(hi));
    z <<= 64;
    z += Integer(static_cast<unsigned long>(lo));
    return Rational(z);
}

Partition padded_with_ones(const Partition& lambda, uint64_t degree) {
    std::vector<uint32_t> parts = lambda.parts();
    for (uint64_t i = lambda.size(); i < degree; ++i) parts.push_back(1);
    return Partition::from_sorted(std::move(parts));
}

EPolynomial<Rational> span_eliminate_packed(const MSymPoly<Rational>& m,
                                            const std::vector<Partition>& span_keys,
                                            uint64_t degree) {
    const std::size_t nvars = m.nvars();

    struct Candidate {
        Partition lambda;
        uint32_t head;      // largest part, 0 for the empty key
        Partition tail;     // lambda minus its largest part
        uint32_t ones;      // e1 exponent
        u128 lead;          // packed leading monomial key
        PackedPoly expansion;
    };
    std::vector<Candidate> cand;
    cand.reserve(span_keys.size());
    for (const auto& lam : span_keys) {
        if (lam.size() > degree) continue;
        Candidate c;
        c.lambda = lam;
        c.head = lam.largest();
        c.tail = lam.empty() ? Partition{} : lam.dropped_largest();
        c.ones = static_cast<uint32_t>(degree - lam.size());
        Partition full = padded_with_ones(lam, degree);
        if (full.largest() > nvars) continue;  // e_k vanishes for k > nvars
        c.lead = pack_parts(full.conjugate().parts());
        cand.push_back(std::move(c));
    }

    // Expansions of e_tail * e1^ones are chained per tail (ascending in the
    // e1 exponent), then one final e_head multiplication per candidate.
    std::map<Partition, std::vector<std::size_t>> by_tail;
    for (std::size_t i = 0; i < cand.size(); ++i) by_tail[cand[i].tail].push_back(i);
    for (auto& [tail, idxs] : by_tail) {
        std::sort(idxs.begin(), idxs.end(),
                  [&](std::size_t a, std::size_t b) { return cand[a].ones < cand[b].ones; });
        PackedPoly chain{{pack_parts({}), 1}};
        {
            // ascending factor order keeps the intermediate polynomials smallest
            std::vector<uint32_t> asc = tail.parts();
            std::sort(asc.begin(), asc.end());
            for (uint32_t part : asc) chain = packed_times_ek(chain, part, nvars);
        }
        uint32_t at = 0;
        for (std::size_t idx : idxs) {
            while (at < cand[idx].ones) {
                chain = packed_times_e1(chain, nvars);
                ++at;
            }
            cand[idx].expansion =
                cand[idx].head ? packed_times_ek(chain, cand[idx].head, nvars) : chain;
        }
    }

    std::sort(cand.begin(), cand.end(),
              [](const Candidate& a, const Candidate& b) { return a.lead > b.lead; });

    struct GreaterU128 {
        bool operator()(u128 a, u128 b) const { return a > b; }
    };
    std::map<u128, Rational, GreaterU128> residual;
    for (auto& [key, c] : m.terms()) residual.emplace(pack_parts(key.parts()), c);

    EPolynomial<Rational> out;
    for (auto& c : cand) {
        auto it = residual.find(c.lead);
        if (it == residual.end()) continue;
        Rational coeff = it->second;
        if (is_zero(coeff)) {
            residual.erase(it);
            continue;
        }
        for (auto& [key, ways] : c.expansion) {
            auto [rit, fresh] = residual.emplace(key, 0);
            rit->second -= coeff * u128_to_rational(ways);
            if (is_zero(rit->second)) residual.erase(rit);
        }
        out.add_term(padded_with_ones(c.lambda, degree), coeff);
    }
    if (!residual.empty()) {
        std::vector<uint32_t> parts;
        unpack_key(residual.begin()->first, parts);
        throw integrity_error("monomials_to_e_span: input outside span near monomial " +
                              Partition(std::move(parts)).to_string());
    }
    return out;
}

EPolynomial<Rational> span_eliminate_generic(const MSymPoly<Rational>& m,
                                             const std::vector<Partition>& span_keys,
                                             uint64_t degree) {
    const std::size_t nvars = m.nvars();
    struct Candidate {
        Partition lambda;
        Partition full;
        Partition lead;
        MSymPoly<Rational> expansion{0};
    };
    std::vector<Candidate> cand;
    std::map<Partition, MSymPoly<Rational>> memo;
    for (const auto& lam : span_keys) {
        if (lam.size() > degree) continue;
        Candidate c;
        c.lambda = lam;
        c.full = padded_with_ones(lam, degree);
        if (c.full.largest() > nvars) continue;  // e_k vanishes for k > nvars
        c.lead = c.full.conjugate();
        c.expansion = expand_e(c.full, nvars, memo);
        cand.push_back(std::move(c));
    }
    std::sort(cand.begin(), cand.end(),
              [](const Candidate& a, const Candidate& b) { return b.lead < a.lead; });

    MSymPoly<Rational> work = m;
    EPolynomial<Rational> out;
    for (auto& c : cand) {
        Rational coeff = work.coeff(c.lead);
        if (is_zero(coeff)) continue;
        MSymPoly<Rational> sub = c.expansion;
        sub *= coeff;
        work -= sub;
        out.add_term(c.full, coeff);
    }
    if (!work.is_zero())
        throw integrity_error("monomials_to_e_span: input outside span near monomial " +
                              std::prev(work.terms().end())->first.to_string());
    return out;
}

}  // namespace

EPolynomial<Rational> monomials_to_e_span(const MSymPoly<Rational>& m,
                                          const std::vector<Partition>& span_keys,
                                          uint64_t degree) {
    for (auto& [key, c] : m.terms()) {
        if (key.size() != degree)
            throw domain_error("monomials_to_e_span: input not homogeneous of stated degree");
    }
    if (packable(m.nvars(), degree)) return span_eliminate_packed(m, span_keys, degree);
    return span_eliminate_generic(m, span_keys, degree);
}

}  // namespace wk
