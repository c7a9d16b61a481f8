#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bigfixed.hpp"
#include "errors.hpp"
#include "stream.hpp"
#include "word.hpp"

namespace orbitsense {

/*
 * Mechanical words. With slope rho and intercept gamma the n-th symbol is
 *   s_n = floor((n+1) rho + gamma) - floor(n rho + gamma),
 * the lower mechanical convention. Slopes and intercepts are exact dyadics,
 * so the floors are exact integer arithmetic and shifts are index offsets.
 */
struct SturmianParams {
    UnitFixed rho;   // slope in (0,1), numerator odd
    UnitFixed gamma; // intercept in [0,1)
    std::vector<BigInt> cf; // continued fraction of rho
    std::vector<BigInt> q;  // convergent denominators
};

inline SturmianParams make_sturmian_params(UnitFixed rho, UnitFixed gamma) {
    if (rho.v == 0) throw ConfigError("slope must be in (0,1)");
    SturmianParams p;
    p.rho = std::move(rho);
    p.gamma = std::move(gamma);
    p.cf = continued_fraction(p.rho, 64);
    if (p.cf.size() < 40) throw ConfigError("slope proxy too shallow: continued fraction under 40 terms");
    p.q = convergent_denominators(p.cf);
    return p;
}

inline SturmianParams golden_params(UnitFixed gamma = UnitFixed{}) {
    return make_sturmian_params(golden_slope(), std::move(gamma));
}

// Single mechanical symbol, exact. Throws PrecisionExhaustedError when the
// evaluation sits exactly on a coding discontinuity (the ambiguous set).
inline std::uint8_t mechanical_symbol(const SturmianParams& p, std::uint64_t n) {
    BigInt t0 = p.gamma.v + p.rho.v * n;
    BigInt t1 = t0 + p.rho.v;
    if (n > 0 && (t0 % unit_one()) == 0) {
        throw PrecisionExhaustedError("intercept lies on the coding boundary at index " +
                                      std::to_string(n));
    }
    BigInt f0 = t0 >> FRAC_BITS;
    BigInt f1 = t1 >> FRAC_BITS;
    return static_cast<std::uint8_t>((f1 - f0).convert_to<int>());
}

class MechanicalStream final : public CachedStream {
public:
    explicit MechanicalStream(SturmianParams params)
        : params_(std::move(params)), t_(params_.gamma.v) {}

    std::int64_t limit() const override { return std::int64_t(1) << 40; }
    std::string describe() const override {
        return "mech[g=" + uf_to_decimal(params_.gamma) + "]";
    }
    const SturmianParams& params() const { return params_; }

protected:
    std::uint8_t step() const override {
        if (!cache_.empty() && (t_ % unit_one()) == 0) {
            throw PrecisionExhaustedError("intercept lies on the coding boundary at index " +
                                          std::to_string(cache_.size()));
        }
        BigInt f0 = t_ >> FRAC_BITS;
        t_ += params_.rho.v;
        BigInt f1 = t_ >> FRAC_BITS;
        return static_cast<std::uint8_t>((f1 - f0).convert_to<int>());
    }

private:
    SturmianParams params_;
    mutable BigInt t_;
};

// Shift acts on the intercept: the word at gamma shifted k times equals the
// word at frac(gamma + k rho). Returned params generate the shifted word.
inline SturmianParams shifted_params(const SturmianParams& p, std::uint64_t k) {
    SturmianParams out = p;
    out.gamma = uf_add(p.gamma, uf_scale_frac(p.rho, k));
    return out;
}

/*
 * Cylinder arcs. The intercepts generating a given prefix form one
 * half-open circle arc; refining by one more symbol intersects with a
 * rotated copy of the coding partition.
 */
struct Arc {
    UnitFixed start;
    BigInt len; // raw units in (0, 2^FRAC_BITS]; full circle allowed

    bool contains(const UnitFixed& x) const { return uf_sub(x, start).v < len; }
    UnitFixed midpoint() const { return UnitFixed{start.v + len / 2}; }
};

inline Arc full_circle_arc() { return Arc{UnitFixed{}, unit_one()}; }

// Intersection of two arcs. Throws if the result has two components, which
// cannot happen along a Sturmian cylinder refinement.
inline std::optional<Arc> intersect_arc(const Arc& a, const Arc& b) {
    if (a.len == unit_one()) return b;
    if (b.len == unit_one()) return a;
    BigInt da = uf_sub(a.start, b.start).v;
    std::optional<Arc> piece1, piece2;
    if (da < b.len) {
        BigInt hi = std::min(da + a.len, b.len);
        if (hi > da) piece1 = Arc{UnitFixed{b.start.v + da}, hi - da};
    }
    BigInt wrap = da + a.len - unit_one();
    if (wrap > 0) {
        BigInt hi = std::min(wrap, b.len);
        if (hi > 0) piece2 = Arc{b.start, hi};
    }
    if (piece1 && piece2) {
        throw CertificationFailedError("cylinder arc split into two components");
    }
    return piece1 ? piece1 : piece2;
}

// Arc of intercepts whose symbol at word position k equals s.
inline Arc symbol_constraint_arc(const SturmianParams& p, std::uint64_t k, std::uint8_t s) {
    UnitFixed one_minus_rho = uf_sub(UnitFixed{}, p.rho); // = 1 - rho as a circle point
    UnitFixed shift = uf_scale_frac(p.rho, k);
    if (s == 1) return Arc{uf_sub(one_minus_rho, shift), p.rho.v};
    return Arc{uf_sub(UnitFixed{}, shift), unit_one() - p.rho.v};
}

// Arc of intercepts whose word starts with w; nullopt if w is not a factor.
inline std::optional<Arc> word_arc(const SturmianParams& p, const Word& w) {
    std::optional<Arc> arc = full_circle_arc();
    for (std::size_t k = 0; k < w.size(); ++k) {
        arc = intersect_arc(*arc, symbol_constraint_arc(p, k, w[k]));
        if (!arc) return std::nullopt;
    }
    return arc;
}

inline bool is_sturmian_factor(const SturmianParams& p, const Word& w) {
    return word_arc(p, w).has_value();
}

// Word of length n generated by intercept t.
inline Word word_at_intercept(const SturmianParams& p, const UnitFixed& t, std::size_t n) {
    Word w;
    w.reserve(n);
    BigInt cur = t.v;
    for (std::size_t k = 0; k < n; ++k) {
        BigInt f0 = cur >> FRAC_BITS;
        cur += p.rho.v;
        BigInt f1 = cur >> FRAC_BITS;
        w.push_back(static_cast<std::uint8_t>((f1 - f0).convert_to<int>()));
    }
    return w;
}

/*
 * All factors of length n. The circle is cut by {frac(-k rho) : k = 0..n}
 * into n+1 arcs, one per factor; midpoints avoid every boundary, so the
 * generated words are exact.
 */
inline std::vector<Word> sturmian_factors(const SturmianParams& p, std::size_t n) {
    if (n == 0) return {Word{}};
    std::vector<BigInt> cuts;
    cuts.reserve(n + 1);
    UnitFixed c{};
    for (std::size_t k = 0; k <= n; ++k) {
        cuts.push_back(c.v);
        c = uf_sub(c, p.rho);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<Word> words;
    words.reserve(cuts.size());
    std::set<Word> seen;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        BigInt next = (i + 1 < cuts.size()) ? cuts[i + 1] : cuts[0] + unit_one();
        UnitFixed mid{cuts[i] + (next - cuts[i]) / 2};
        Word w = word_at_intercept(p, mid, n);
        if (seen.insert(w).second) words.push_back(std::move(w));
    }
    std::sort(words.begin(), words.end());
    return words;
}

// Random intercept inside an arc, away from its boundary.
inline UnitFixed random_intercept_in_arc(const Arc& arc, std::uint64_t seed,
                                         std::uint64_t stream, std::uint64_t counter) {
    UnitFixed u = uf_random(seed, stream, counter);
    // Scale u into (0, len): take u*len / 2^B and clamp off the edges.
    BigInt off = (u.v * arc.len) >> FRAC_BITS;
    if (off == 0) off = arc.len / 3 + 1;
    if (off >= arc.len) off = arc.len - 1;
    return UnitFixed{arc.start.v + off};
}

} // namespace orbitsense
