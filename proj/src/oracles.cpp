#include "wk/oracles.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <tuple>
#include <utility>

namespace wk {

namespace {

using EP = EPolynomial<Rational>;

Partition repeated(uint32_t part, std::size_t count) {
    return Partition(std::vector<uint32_t>(count, part));
}

Integer pow_int(unsigned long base, unsigned long e) {
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), base, e);
    return p;
}

}  // namespace

EPolynomial<Rational> one_point(uint32_t genus) {
    if (genus == 0) throw domain_error("one_point: the once-marked sphere is unstable");
    EP p;
    p.add_term(repeated(1, 3ull * genus - 2), Rational(1) / normalization_factor(genus));
    return p;
}

Rational two_point_coeff(uint32_t genus, uint32_t m) {
    if (m > genus) return 0;
    Integer num = binomial(genus, m);
    for (uint32_t i = 0; i < m; ++i) num *= -3;
    Rational val = Rational(num) / Rational(Integer(2L * m + 1));
    return val / normalization_factor(genus);
}

Rational two_point_identity_sum(uint32_t m) {
    Rational total(0);
    Integer falling = 1;  // m!/(m-k)!
    Integer pow4 = 1;
    for (uint32_t k = 0; k <= m; ++k) {
        Rational term = Rational(falling * pow4 * factorial(k)) / Rational(factorial(2L * k + 1));
        if (k % 2) term = -term;
        total += term;
        falling *= static_cast<long>(m - k);
        pow4 *= 4;
    }
    return total;
}

Rational two_point_coeff_sum_form(uint32_t genus, uint32_t m) {
    if (m > genus) return 0;
    Integer num = binomial(genus, m);
    for (uint32_t i = 0; i < m; ++i) num *= -3;
    return Rational(num) * two_point_identity_sum(m) / normalization_factor(genus);
}

EPolynomial<Rational> two_point_amplitude(uint32_t genus) {
    if (genus == 0) throw domain_error("two_point_amplitude: the twice-marked sphere is unstable");
    EP p;
    for (uint32_t m = 0; m <= genus; ++m) {
        std::vector<uint32_t> parts(m, 2);
        parts.insert(parts.end(), 3ull * genus - 1 - 2ull * m, 1u);
        p.add_term(Partition(std::move(parts)), two_point_coeff(genus, m));
    }
    return p;
}

EPolynomial<Rational> zagier_three_point(uint32_t r) {
    EP total;
    {
        Rational boundary(3L * r + 2);
        if (r % 2) boundary = -boundary;
        total.add_term(repeated(3, r), boundary);
    }
    if (r == 0) return total;

    // t-series with e-polynomial coefficients, truncated past t^r.
    std::vector<EP> base(r + 1);  // t e2 - t^2 e1 + t^3
    base[1].add_term(Partition({2}), Rational(1));
    if (r >= 2) base[2].add_term(Partition({1}), Rational(-1));
    if (r >= 3) base[3].add_term(Partition{}, Rational(1));

    std::vector<EP> power(r + 1);  // base^k as k advances
    power[0] = EP::constant(Rational(1));
    for (uint32_t k = 1; k <= r; ++k) {
        std::vector<EP> next(r + 1);
        for (uint32_t a = 0; a <= r; ++a) {
            if (power[a].is_zero()) continue;
            for (uint32_t b = 1; b <= 3 && a + b <= r; ++b) {
                if (base[b].is_zero()) continue;
                next[a + b] += power[a] * base[b];
            }
        }
        power = std::move(next);

        // coefficient of t^r in power * sum_j (r-j) binom(r+1,j) e1^(r-j) (-t)^j
        EP picked;
        for (uint32_t j = 0; j < r; ++j) {
            const EP& factor = power[r - j];
            if (factor.is_zero()) continue;
            Rational cj(Integer(r - j) * binomial(r + 1, j));
            if (j % 2) cj = -cj;
            EP mono;
            mono.add_term(repeated(1, r - j), cj);
            picked += mono * factor;
        }
        EP pref;
        pref.add_term(repeated(3, r - k), Rational(1, static_cast<long>(k)));
        total += pref * picked;
    }
    return total;
}

EPolynomial<Rational> zagier_three_point_direct(uint32_t r) {
    std::map<std::array<uint64_t, 3>, Integer> raw;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            for (uint32_t a = 0; a <= r + 1; ++a) {
                std::array<uint64_t, 3> ex{0, 0, 0};
                ex[i] = a + r;
                ex[j] = (r + 1 - a) + r;
                raw[ex] += binomial(r + 1, a);
            }
        }
    }
    // The pair sum is symmetric; read off monomial coefficients from the
    // sorted representatives.
    MSymPoly<Rational> msum(3);
    for (auto& [ex, c] : raw) {
        if (ex[0] >= ex[1] && ex[1] >= ex[2]) {
            std::vector<uint32_t> ps;
            for (uint64_t e : ex)
                if (e) ps.push_back(static_cast<uint32_t>(e));
            msum.add_term(Partition::from_sorted(std::move(ps)), Rational(c));
        }
    }
    EP in_e = monomials_to_e(msum);
    EP out;
    for (auto& [key, c] : in_e.terms()) {
        if (key.mult(1) == 0)
            throw integrity_error("three-point pair sum not divisible by e1 at r=" +
                                  std::to_string(r));
        out.add_term(key.removed_at(key.length() - 1), c);
    }
    return out;
}

EPolynomial<Rational> three_point_amplitude(uint32_t genus) {
    std::vector<EP> kernel(genus + 1);
    for (uint32_t r = 0; r <= genus; ++r) kernel[r] = zagier_three_point(r);

    EP cross;  // e1 e2 - e3
    cross.add_term(Partition({2, 1}), Rational(1));
    cross.add_term(Partition({3}), Rational(-1));
    EP p3;  // x1^3 + x2^3 + x3^3
    p3.add_term(Partition({1, 1, 1}), Rational(1));
    p3.add_term(Partition({2, 1}), Rational(-3));
    p3.add_term(Partition({3}), Rational(3));

    std::vector<EP> crossp(genus + 1), p3p(genus + 1);
    crossp[0] = EP::constant(Rational(1));
    p3p[0] = EP::constant(Rational(1));
    for (uint32_t i = 1; i <= genus; ++i) {
        crossp[i] = crossp[i - 1] * cross;
        p3p[i] = p3p[i - 1] * p3;
    }

    EP total;
    for (uint32_t l = 0; l <= genus; ++l) {
        const uint32_t gp = genus - l;
        EP inner;
        for (uint32_t r = 0; r <= gp; ++r) {
            Integer den = pow_int(4, gp) * double_factorial(2L * gp + 2) *
                          double_factorial(2L * r + 1);
            Rational w = Rational(double_factorial(2L * r)) / Rational(den);
            EP term = kernel[r] * crossp[gp - r];
            term *= w;
            inner += term;
        }
        EP level = p3p[l] * inner;
        level *= Rational(1) / normalization_factor(l);
        total += level;
    }
    return total;
}

uint32_t PrintedFamily::k_min() const { return std::max<uint32_t>(2, mu.largest()); }

Rational PrintedFamily::family_eval(uint32_t k) const {
    Rational kk(static_cast<long>(k));
    Rational p(0);
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) p = p * kk + *it;
    return p * Rational(factorial(static_cast<long>(k) + shift));
}

Rational PrintedFamily::value(uint32_t k) const {
    if (k >= k_lo) return family_eval(k);
    auto it = exceptional.find(k);
    if (it == exceptional.end())
        throw integrity_error("printed table gap below " + mu.to_string() + " at k=" +
                              std::to_string(k));
    return it->second;
}

namespace {

PrintedFamily fam(std::vector<uint32_t> mu, long shift, std::vector<long> num, long den,
                  uint32_t k_lo, std::vector<std::tuple<uint32_t, long, long>> exc) {
    PrintedFamily f;
    f.mu = Partition(std::move(mu));
    f.shift = shift;
    f.poly.reserve(num.size());
    for (long c : num) f.poly.push_back(make_rational(c, den));
    f.k_lo = k_lo;
    for (auto& [k, p, q] : exc) f.exceptional.emplace(k, make_rational(p, q));
    return f;
}

std::vector<PrintedFamily> genus2_table() {
    std::vector<PrintedFamily> t;
    t.push_back(fam({}, -3, {-96, 70, -21, -1}, 30, 4, {{2, -2, 1}, {3, -18, 5}}));
    t.push_back(fam({2}, -1, {16, 1}, 10, 4, {{2, 9, 5}, {3, 18, 5}}));
    t.push_back(fam({3}, 0, {-1}, 10, 3, {}));
    return t;
}

std::vector<PrintedFamily> genus3_table() {
    std::vector<PrintedFamily> t;
    t.push_back(fam({}, -4, {-970272, 912492, -338972, 83577, -9347, -885, -17}, 50400, 7,
                    {{2, -3, 1}, {3, -39, 5}, {4, -594, 35}, {5, -2286, 35}, {6, -1872, 5}}));
    t.push_back(fam({2}, -2, {53904, -12142, 9391, 814, 17}, 8400, 7,
                    {{2, 27, 5}, {3, 594, 35}, {4, 1692, 35}, {5, 8532, 35}, {6, 51696, 35}}));
    t.push_back(fam({3}, -1, {480, 1523, -39, -2}, 2100, 7,
                    {{3, 153, 35}, {4, 324, 35}, {5, 2844, 35}, {6, 15552, 35}}));
    t.push_back(fam({4}, 0, {-596, -79, -3}, 700, 7,
                    {{4, -1152, 35}, {5, -5904, 35}, {6, -8496, 7}}));
    t.push_back(fam({5}, 1, {37, 1}, 350, 7, {{5, 432, 5}, {6, 3024, 5}}));
    t.push_back(fam({6}, 2, {-1}, 350, 6, {}));
    t.push_back(fam({2, 2}, 0, {-2282, -199, -5}, 1400, 5,
                    {{2, -27, 7}, {3, -81, 7}, {4, -54, 1}}));
    t.push_back(fam({3, 2}, 1, {102, 5}, 700, 5, {{3, 27, 7}, {4, 108, 5}}));
    t.push_back(fam({4, 2}, 2, {1}, 175, 4, {}));
    t.push_back(fam({3, 3}, 2, {-9}, 1400, 3, {}));
    return t;
}

std::vector<PrintedFamily> genus4_table() {
    std::vector<PrintedFamily> t;
    t.push_back(fam({}, -5,
                    {-314153693568, 387514181568, -196752773416, 52358293308, -8585898070,
                     1143710229, -51871810, -10022652, -345264, -3717},
                    2270268000, 10,
                    {{2, -4, 1},
                     {3, -68, 5},
                     {4, -1144, 35},
                     {5, -21816, 175},
                     {6, -141264, 175},
                     {7, -1106064, 175},
                     {8, -9988992, 175},
                     {9, -102117888, 175}}));
    t.push_back(fam({2}, -3,
                    {26179474464, -20766829960, 5966416652, -712790674, 269630259, 29709011,
                     998761, 11151},
                    756756000, 10,
                    {{2, 54, 5},
                     {3, 324, 7},
                     {4, 21816, 175},
                     {5, 17064, 25},
                     {6, 117648, 25},
                     {7, 266832, 7},
                     {8, 12432384, 35},
                     {9, 93011328, 25}}));
    t.push_back(fam({3}, -2,
                    {-1065697776, 3514829748, -51459908, 413083225, 16387577, 199787, 723},
                    756756000, 10,
                    {{3, 4842, 175},
                     {4, 14184, 175},
                     {5, 105768, 175},
                     {6, 104112, 25},
                     {7, 227952, 7},
                     {8, 51469056, 175},
                     {9, 521255808, 175}}));
    t.push_back(fam({4}, -1,
                    {-1946520576, -184540456, -274984058, -37277747, -1771714, -25569},
                    378378000, 10,
                    {{4, -27648, 175},
                     {5, -182592, 175},
                     {6, -36288, 5},
                     {7, -11405952, 175},
                     {8, -22470912, 35},
                     {9, -176332032, 25}}));
    t.push_back(fam({5}, 0, {-287488200, -218527846, 14966271, 930010, 12093}, 378378000, 10,
                    {{5, -9792, 35},
                     {6, -51264, 175},
                     {7, -269568, 25},
                     {8, -10245888, 175},
                     {9, -47778048, 175}}));
    t.push_back(fam({6}, 1, {15061740, 2328884, 78137, 513}, 15765750, 10,
                    {{6, 1787904, 175},
                     {7, 14375808, 175},
                     {8, 157378176, 175},
                     {9, 49168512, 5}}));
    t.push_back(fam({7}, 2, {-1154393, -66173, -2011}, 7882875, 10,
                    {{7, -13825152, 175}, {8, -28266624, 35}, {9, -339110784, 35}}));
    t.push_back(fam({8}, 3, {9868, 99}, 1433250, 10, {{8, 2078208, 7}, {9, 24938496, 7}}));
    t.push_back(fam({9}, 4, {-11}, 159250, 9, {}));
    t.push_back(fam({2, 2}, -1,
                    {-313049088, -33387016, -38382106, -3592493, -125102, -1515}, 29106000, 8,
                    {{2, -108, 7},
                     {3, -468, 7},
                     {4, -1800, 7},
                     {5, -57096, 35},
                     {6, -410544, 35},
                     {7, -3450672, 35}}));
    t.push_back(fam({3, 2}, 0, {-8017332, -7592459, 67239, 24362, 450}, 7276500, 8,
                    {{3, -180, 7},
                     {4, -1584, 35},
                     {5, -24624, 35},
                     {6, -31392, 7},
                     {7, -5870304, 175}}));
    t.push_back(fam({4, 2}, 1, {2519512, 325180, 20182, 371}, 1212750, 8,
                    {{4, 2880, 7}, {5, 91008, 35}, {6, 3836736, 175}, {7, 34399872, 175}}));
    t.push_back(fam({3, 3}, 1, {-233736, 14, -3077, -69}, 882000, 7,
                    {{3, -36, 5}, {4, -216, 5}, {5, -8712, 35}, {6, -51408, 25}}));
    t.push_back(fam({5, 2}, 2, {-509174, -29593, -389}, 2425500, 8,
                    {{5, -242496, 175}, {6, -409536, 35}, {7, -19225728, 175}}));
    t.push_back(fam({4, 3}, 2, {-5292, -671, -27}, 220500, 7,
                    {{4, -1152, 35}, {5, -22464, 175}, {6, -333504, 175}}));
    t.push_back(fam({6, 2}, 3, {-2532, 191}, 1212750, 8, {{6, -10368, 25}, {7, -13824, 7}}));
    t.push_back(fam({5, 3}, 3, {1673, 38}, 110250, 7, {{5, 119232, 175}, {6, 211392, 35}}));
    t.push_back(fam({4, 4}, 3, {-376, -14}, 55125, 6, {{4, -6912, 175}, {5, -55296, 175}}));
    t.push_back(fam({7, 2}, 4, {107}, 242550, 7, {}));
    t.push_back(fam({6, 3}, 4, {-11}, 18375, 6, {}));
    t.push_back(fam({5, 4}, 4, {2}, 7875, 5, {}));
    t.push_back(fam({2, 2, 2}, 1, {651864, 65830, 2499, 35}, 529200, 6,
                    {{2, 9, 1}, {3, 36, 1}, {4, 216, 1}, {5, 7128, 5}}));
    t.push_back(fam({3, 2, 2}, 2, {-22788, -1701, -35}, 176400, 6,
                    {{3, -18, 1}, {4, -648, 5}, {5, -32184, 35}}));
    t.push_back(fam({4, 2, 2}, 3, {-188, -7}, 22050, 6, {{4, -1728, 35}, {5, -2880, 7}}));
    t.push_back(fam({3, 3, 2}, 3, {180, 7}, 19600, 5, {{3, 36, 5}, {4, 1944, 35}}));
    t.push_back(fam({5, 2, 2}, 4, {-1}, 11025, 5, {}));
    t.push_back(fam({4, 3, 2}, 4, {1}, 2450, 4, {}));
    t.push_back(fam({3, 3, 3}, 4, {-1}, 3920, 3, {}));
    return t;
}

}  // namespace

const std::vector<PrintedFamily>& printed_families(uint32_t genus) {
    static const std::vector<PrintedFamily> g2 = genus2_table();
    static const std::vector<PrintedFamily> g3 = genus3_table();
    static const std::vector<PrintedFamily> g4 = genus4_table();
    switch (genus) {
        case 2: return g2;
        case 3: return g3;
        case 4: return g4;
        default: throw domain_error("printed_families: tables exist for genus 2, 3, 4 only");
    }
}

AmplitudeDecomposition printed_formula(uint32_t genus, std::size_t n) {
    if (n < 1) throw domain_error("printed_formula: need n >= 1");
    const auto& fams = printed_families(genus);
    const uint64_t degree = amplitude_degree(genus, n);

    EP coeffs;
    coeffs.add_term(repeated(1, degree), Rational(1));
    for (const PrintedFamily& f : fams) {
        if (f.mu.largest() > n) continue;
        const uint64_t msize = f.mu.size();
        if (msize > degree) continue;
        const uint64_t kmax = std::min<uint64_t>(n, degree - msize);
        for (uint64_t k = f.k_min(); k <= kmax; ++k) {
            Rational v = f.value(static_cast<uint32_t>(k));
            if (is_zero(v)) continue;
            std::vector<uint32_t> parts;
            parts.reserve(1 + f.mu.length() + (degree - msize - k));
            parts.push_back(static_cast<uint32_t>(k));
            parts.insert(parts.end(), f.mu.parts().begin(), f.mu.parts().end());
            parts.insert(parts.end(), degree - msize - k, 1u);
            coeffs.add_term(Partition(std::move(parts)), v);
        }
    }

    AmplitudeDecomposition dec;
    dec.genus = genus;
    dec.n = n;
    dec.normalized = true;
    dec.coeffs = std::move(coeffs);
    return dec;
}

Rational sinh_kernel_coeff(uint32_t k) {
    return Rational(1) / Rational(pow_int(4, k) * factorial(2L * k + 1));
}

Rational inv_sinh_kernel_coeff(uint32_t k) {
    std::vector<Rational> c(k + 1);
    c[0] = 1;
    for (uint32_t j = 1; j <= k; ++j) {
        Rational acc(0);
        for (uint32_t i = 1; i <= j; ++i) acc += sinh_kernel_coeff(i) * c[j - i];
        c[j] = -acc;
    }
    return c[k];
}

MSymPoly<Rational> gjv_onepart_poly(uint32_t genus, std::size_t n) {
    MSymPoly<Rational> out(n);
    for (uint32_t j = 0; j <= genus; ++j) {
        const Rational outer = inv_sinh_kernel_coeff(genus - j);
        if (is_zero(outer)) continue;
        const std::vector<Partition> kappas =
            (j == 0) ? std::vector<Partition>{Partition{}}
                     : partitions_of(j, static_cast<uint32_t>(j), n);
        for (const Partition& kappa : kappas) {
            Rational w = outer;
            std::vector<uint32_t> doubled;
            doubled.reserve(kappa.length());
            for (uint32_t c : kappa.parts()) {
                w *= sinh_kernel_coeff(c);
                doubled.push_back(2 * c);
            }
            out.add_term(Partition::from_sorted(std::move(doubled)), w);
        }
    }
    return out;
}

}  // namespace wk
