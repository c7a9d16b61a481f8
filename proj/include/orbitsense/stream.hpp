#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bigfixed.hpp"
#include "errors.hpp"
#include "prng.hpp"
#include "word.hpp"

namespace orbitsense {

/*
 * Lazily extendable symbol sequences over {0,1}. A stream is immutable as a
 * value: extension only appends to an internal cache and never rewrites
 * already-produced symbols (prefix stability). Caches are not synchronized;
 * a stream graph must stay confined to one thread, which the detector layer
 * guarantees by giving every worker its own points.
 *
 * The same interface carries both symbolic-space points and 2-adic bit
 * sequences; an odometer point simply is a stream of bits.
 */
class SymbolStream {
public:
    virtual ~SymbolStream() = default;

    // Symbol at index i; throws WindowExhaustedError past the extension limit.
    virtual std::uint8_t at(std::int64_t i) const = 0;

    virtual std::int64_t limit() const = 0;

    // Highest index ever materialized; used by the depth planner.
    virtual std::int64_t high_water() const = 0;

    // Generator summary for diagnostics and serialized forms.
    virtual std::string describe() const = 0;
};

using SymPtr = std::shared_ptr<const SymbolStream>;

// Comparisons deeper than this raise WindowExhausted instead of claiming equality.
inline constexpr std::int64_t kCompareWindowCap = 4096;
// Default eagerly materialized window for freshly constructed points.
inline constexpr std::int64_t kDefaultWindow = 64;

inline Word stream_prefix(const SymbolStream& s, std::int64_t n) {
    Word w;
    w.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) w.push_back(s.at(i));
    return w;
}

// Index of first disagreement looking at most `cap` symbols; -1 if none found.
inline std::int64_t first_difference(const SymbolStream& a, const SymbolStream& b,
                                     std::int64_t cap) {
    for (std::int64_t i = 0; i < cap; ++i) {
        if (a.at(i) != b.at(i)) return i;
    }
    return -1;
}

/*
 * Base for streams that produce symbols sequentially. Subclasses implement
 * step(), which must emit the next symbol each call.
 */
class CachedStream : public SymbolStream {
public:
    std::uint8_t at(std::int64_t i) const final {
        if (i < 0) throw Error("negative stream index");
        if (i >= limit()) {
            throw WindowExhaustedError(describe() + ": index " + std::to_string(i) +
                                       " beyond window limit " + std::to_string(limit()));
        }
        while (static_cast<std::int64_t>(cache_.size()) <= i) cache_.push_back(step());
        return cache_[static_cast<std::size_t>(i)];
    }

    std::int64_t high_water() const final { return static_cast<std::int64_t>(cache_.size()); }

protected:
    virtual std::uint8_t step() const = 0;
    mutable std::vector<std::uint8_t> cache_;
};

// Explicit finite word; reads past the end exhaust the window.
class FixedStream final : public CachedStream {
public:
    explicit FixedStream(Word w) : word_(std::move(w)) {}
    std::int64_t limit() const override { return static_cast<std::int64_t>(word_.size()); }
    std::string describe() const override { return "fixed[" + std::to_string(word_.size()) + "]"; }

protected:
    std::uint8_t step() const override { return word_[cache_.size()]; }

private:
    Word word_;
};

// Deterministic bit noise keyed by seed; counter-based, so reproducible.
class SeededStream final : public CachedStream {
public:
    explicit SeededStream(std::uint64_t seed) : seed_(seed) {}
    std::int64_t limit() const override { return std::int64_t(1) << 40; }
    std::string describe() const override { return "seeded[" + std::to_string(seed_) + "]"; }
    std::uint64_t seed() const { return seed_; }

protected:
    std::uint8_t step() const override {
        return static_cast<std::uint8_t>(hash_draw(seed_, 0x5eed, cache_.size()) & 1);
    }

private:
    std::uint64_t seed_;
};

// Constant symbol forever.
class ConstStream final : public SymbolStream {
public:
    explicit ConstStream(std::uint8_t s) : s_(s) {}
    std::uint8_t at(std::int64_t) const override { return s_; }
    std::int64_t limit() const override { return std::int64_t(1) << 40; }
    std::int64_t high_water() const override { return 0; }
    std::string describe() const override { return s_ ? "ones" : "zeros"; }

private:
    std::uint8_t s_;
};

// Fixed prefix, then delegate to a tail stream (used for in-ball sampling).
class ConcatStream final : public SymbolStream {
public:
    ConcatStream(Word prefix, SymPtr tail) : prefix_(std::move(prefix)), tail_(std::move(tail)) {}
    const Word& prefix() const { return prefix_; }
    const SymPtr& tail() const { return tail_; }
    std::uint8_t at(std::int64_t i) const override {
        auto n = static_cast<std::int64_t>(prefix_.size());
        return i < n ? prefix_[static_cast<std::size_t>(i)] : tail_->at(i - n);
    }
    std::int64_t limit() const override {
        return static_cast<std::int64_t>(prefix_.size()) + tail_->limit();
    }
    std::int64_t high_water() const override {
        return static_cast<std::int64_t>(prefix_.size()) + tail_->high_water();
    }
    std::string describe() const override {
        return "concat[" + std::to_string(prefix_.size()) + "]+" + tail_->describe();
    }

private:
    Word prefix_;
    SymPtr tail_;
};

// View of a stream shifted left by k symbols.
class ShiftView final : public SymbolStream {
public:
    ShiftView(SymPtr base, std::int64_t k) : base_(std::move(base)), k_(k) {}
    std::uint8_t at(std::int64_t i) const override { return base_->at(i + k_); }
    std::int64_t limit() const override { return base_->limit() - k_; }
    std::int64_t high_water() const override { return base_->high_water() - k_; }
    std::string describe() const override {
        return "shift[" + std::to_string(k_) + "]:" + base_->describe();
    }
    const SymPtr& base() const { return base_; }
    std::int64_t offset() const { return k_; }

private:
    SymPtr base_;
    std::int64_t k_;
};

inline SymPtr make_shift(SymPtr s, std::int64_t k) {
    if (k == 0) return s;
    if (auto sv = std::dynamic_pointer_cast<const ShiftView>(s)) {
        return std::make_shared<ShiftView>(sv->base(), sv->offset() + k);
    }
    return std::make_shared<ShiftView>(std::move(s), k);
}

/*
 * 2-adic addition: bits of (base + addend) with carry rippling upward.
 * Bit i of the sum depends only on bits 0..i of base, so agreement on a
 * prefix is preserved — the property that makes the odometer non-expansive.
 */
class Z2AddStream final : public CachedStream {
public:
    Z2AddStream(SymPtr base, BigInt addend)
        : base_(std::move(base)), addend_(std::move(addend)) {}
    std::int64_t limit() const override { return base_->limit(); }
    std::string describe() const override {
        return "z2add[" + addend_.str() + "]:" + base_->describe();
    }
    const SymPtr& base() const { return base_; }
    const BigInt& addend() const { return addend_; }

protected:
    std::uint8_t step() const override {
        auto i = static_cast<std::int64_t>(cache_.size());
        unsigned b = base_->at(i);
        unsigned m = boost::multiprecision::bit_test(addend_, static_cast<unsigned>(i)) ? 1 : 0;
        unsigned sum = b + m + carry_;
        carry_ = sum >> 1;
        return static_cast<std::uint8_t>(sum & 1);
    }

private:
    SymPtr base_;
    BigInt addend_;
    mutable unsigned carry_ = 0;
};

inline SymPtr make_z2_add(SymPtr base, BigInt addend) {
    if (addend == 0) return base;
    if (auto z = std::dynamic_pointer_cast<const Z2AddStream>(base)) {
        return std::make_shared<Z2AddStream>(z->base(), z->addend() + addend);
    }
    return std::make_shared<Z2AddStream>(std::move(base), std::move(addend));
}

} // namespace orbitsense
