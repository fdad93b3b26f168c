#include "wk/rational.hpp"

#include <cctype>

namespace wk {

Rational parse_rational(const std::string& text) {
    auto is_int = [](const std::string& s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        return true;
    };
    std::string num = text, den = "1";
    if (auto slash = text.find('/'); slash != std::string::npos) {
        num = text.substr(0, slash);
        den = text.substr(slash + 1);
    }
    if (!is_int(num) || !is_int(den))
        throw domain_error("parse_rational: malformed rational '" + text + "'");
    Integer n(num), d(den);
    if (sgn(d) == 0) throw domain_error("parse_rational: zero denominator in '" + text + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

std::string fraction_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string pretty_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return fraction_string(q);
}

Integer factorial(long n) {
    if (n < 0) throw domain_error("factorial: negative argument");
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

Integer double_factorial(long n) {
    if (n < -1) throw domain_error("double_factorial: argument below -1");
    if (n <= 0) return 1;
    Integer r;
    mpz_2fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

Integer binomial(long n, long k) {
    if (n < 0) throw domain_error("binomial: negative n");
    if (k < 0 || k > n) return 0;
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

Rational rational_pow(const Rational& base, long e) {
    if (e == 0) return 1;
    if (is_zero(base)) {
        if (e < 0) throw domain_error("rational_pow: negative power of zero");
        return 0;
    }
    Rational b = base;
    long k = e;
    if (k < 0) {
        b = Rational(base.get_den(), base.get_num());
        b.canonicalize();
        k = -k;
    }
    Rational acc = 1;
    while (k > 0) {
        if (k & 1) acc *= b;
        b *= b;
        k >>= 1;
    }
    return acc;
}

}  // namespace wk
