#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "prng.hpp"

namespace orbitsense {

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;

/*
 * Exact arithmetic on the unit circle. A UnitFixed is a dyadic rational
 * v / 2^FRAC_BITS in [0,1), closed under rotation and arc arithmetic.
 * Irrational rotation numbers are represented by dyadic proxies at this
 * precision; at 256 bits the proxy's continued fraction agrees with the
 * target for several hundred terms, far beyond any horizon used here.
 */
inline constexpr unsigned FRAC_BITS = 256;

inline const BigInt& unit_one() {
    static const BigInt one = BigInt(1) << FRAC_BITS;
    return one;
}

struct UnitFixed {
    BigInt v; // in [0, 2^FRAC_BITS)

    UnitFixed() : v(0) {}
    explicit UnitFixed(BigInt raw) : v(std::move(raw)) {
        BigInt m = unit_one();
        v %= m;
        if (v < 0) v += m;
    }

    bool operator==(const UnitFixed& o) const { return v == o.v; }
    bool operator!=(const UnitFixed& o) const { return v != o.v; }
    bool operator<(const UnitFixed& o) const { return v < o.v; }
};

inline UnitFixed uf_add(const UnitFixed& a, const UnitFixed& b) {
    BigInt s = a.v + b.v;
    if (s >= unit_one()) s -= unit_one();
    return UnitFixed{s};
}

inline UnitFixed uf_sub(const UnitFixed& a, const UnitFixed& b) {
    BigInt s = a.v - b.v;
    if (s < 0) s += unit_one();
    return UnitFixed{s};
}

// frac(n * a), exact.
inline UnitFixed uf_scale_frac(const UnitFixed& a, std::uint64_t n) {
    BigInt s = a.v * n;
    return UnitFixed{s % unit_one()};
}

// Wrapped distance on the unit circle, in turns; result in [0, 1/2].
inline UnitFixed uf_circle_gap(const UnitFixed& a, const UnitFixed& b) {
    BigInt d = a.v - b.v;
    if (d < 0) d = -d;
    BigInt alt = unit_one() - d;
    return UnitFixed{d < alt ? d : alt};
}

inline double uf_to_double(const UnitFixed& a) {
    // Keep 64 leading bits; plenty for reporting and threshold comparisons.
    BigInt top = a.v >> (FRAC_BITS - 62);
    return static_cast<double>(top.convert_to<std::uint64_t>()) * 0x1.0p-62;
}

inline UnitFixed uf_from_double(double x) {
    if (x < 0 || x >= 1.0) {
        x -= std::floor(x);
    }
    // 2^256 * x assembled 53 bits at a time.
    BigInt acc = 0;
    double r = x;
    for (int shift = FRAC_BITS; shift > 0;) {
        int take = shift >= 53 ? 53 : shift;
        r *= static_cast<double>(1ULL << take);
        auto part = static_cast<std::uint64_t>(r);
        r -= static_cast<double>(part);
        acc = (acc << take) | part;
        shift -= take;
    }
    return UnitFixed{acc};
}

/*
 * Exact decimal form: since v/2^B is dyadic, its decimal expansion is
 * finite (v * 5^B scaled), so serialize/parse round-trips exactly.
 */
inline std::string uf_to_decimal(const UnitFixed& a) {
    static const BigInt five_pow = [] {
        BigInt p = 1;
        for (unsigned i = 0; i < FRAC_BITS; ++i) p *= 5;
        return p;
    }();
    BigInt digits = a.v * five_pow; // v/2^B == digits / 10^B
    std::string s = digits.str();
    if (s.size() < FRAC_BITS) s.insert(0, FRAC_BITS - s.size(), '0');
    s.insert(s.size() - FRAC_BITS, s.size() == FRAC_BITS ? "0." : ".");
    // Trim trailing zeros but keep at least one fractional digit.
    auto last = s.find_last_not_of('0');
    if (last != std::string::npos && s[last] == '.') ++last;
    s.erase(last + 1);
    return s;
}

inline UnitFixed uf_from_decimal(const std::string& text) {
    auto dot = text.find('.');
    std::string ip = dot == std::string::npos ? text : text.substr(0, dot);
    std::string fp = dot == std::string::npos ? "" : text.substr(dot + 1);
    if (fp.size() > FRAC_BITS) throw ConfigError("decimal fraction too long for exact parse: " + text);
    BigInt num(fp.empty() ? "0" : fp);
    BigInt den = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
    // v = round-exact of num/den * 2^B; inputs we emit are always exact.
    BigInt scaled = num * unit_one();
    if (scaled % den != 0) throw ConfigError("decimal is not dyadic at this precision: " + text);
    (void)ip; // integer part folds away mod 1
    return UnitFixed{scaled / den};
}

inline BigInt isqrt(const BigInt& n) {
    if (n <= 0) return 0;
    BigInt x = BigInt(1) << (static_cast<unsigned>(boost::multiprecision::msb(n)) / 2 + 1);
    while (true) {
        BigInt y = (x + n / x) >> 1;
        if (y >= x) return x;
        x = y;
    }
}

// (sqrt(5)-1)/2 truncated to FRAC_BITS, forced odd so gcd(v, 2^B) = 1.
inline UnitFixed golden_slope() {
    static const UnitFixed g = [] {
        BigInt s = isqrt(BigInt(5) << (2 * FRAC_BITS));
        BigInt v = (s - unit_one()) >> 1;
        v |= 1;
        return UnitFixed{v};
    }();
    return g;
}

inline UnitFixed uf_random(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    BigInt acc = 0;
    for (unsigned i = 0; i < FRAC_BITS / 64; ++i) {
        acc = (acc << 64) | hash_draw(seed, stream, counter * 8 + i);
    }
    acc |= 1;
    return UnitFixed{acc};
}

// Continued fraction of v/2^B; stops after max_terms or exhaustion.
inline std::vector<BigInt> continued_fraction(const UnitFixed& a, std::size_t max_terms) {
    std::vector<BigInt> terms;
    BigInt p = a.v, q = unit_one();
    // a in (0,1): first partial quotient of 1/a.
    while (p != 0 && terms.size() < max_terms) {
        BigInt t = q / p;
        terms.push_back(t);
        BigInt r = q % p;
        q = p;
        p = r;
    }
    return terms;
}

// Denominators of the convergents for the same expansion.
inline std::vector<BigInt> convergent_denominators(const std::vector<BigInt>& cf) {
    std::vector<BigInt> q;
    BigInt q0 = 1, q1 = 0;
    for (const auto& t : cf) {
        BigInt qn = t * q0 + q1;
        q.push_back(qn);
        q1 = q0;
        q0 = qn;
    }
    return q;
}

} // namespace orbitsense
