#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "word.hpp"

namespace orbitsense {

/*
 * Binary substitutions with a prefix-stable fixed point reached from seed
 * symbol 0. The default rule is the Chacon substitution 0 -> 0010, 1 -> 1,
 * whose subshift is minimal and weakly mixing.
 */
struct SubstitutionRule {
    Word image0;
    Word image1;
    std::string name;
};

inline SubstitutionRule chacon_rule() {
    return SubstitutionRule{word_from_string("0010"), word_from_string("1"), "chacon"};
}

inline Word apply_rule(const SubstitutionRule& r, const Word& w) {
    Word out;
    out.reserve(w.size() * r.image0.size());
    for (auto s : w) {
        const Word& img = s ? r.image1 : r.image0;
        out.insert(out.end(), img.begin(), img.end());
    }
    return out;
}

// tau^iterations(0).
inline Word substitution_prefix(const SubstitutionRule& r, unsigned iterations) {
    Word w = word_from_string("0");
    for (unsigned i = 0; i < iterations; ++i) w = apply_rule(r, w);
    return w;
}

// Smallest tau-power prefix with at least min_len symbols.
inline Word fixed_point_prefix(const SubstitutionRule& r, std::size_t min_len,
                               unsigned* level_out = nullptr) {
    Word w = word_from_string("0");
    unsigned level = 0;
    while (w.size() < min_len) {
        Word next = apply_rule(r, w);
        if (next.size() <= w.size()) throw CertificationFailedError("substitution does not grow from seed 0");
        w = std::move(next);
        ++level;
    }
    if (level_out) *level_out = level;
    return w;
}

inline std::set<Word> scan_factors(const Word& text, std::size_t n) {
    std::set<Word> out;
    if (text.size() < n) return out;
    for (std::size_t i = 0; i + n <= text.size(); ++i) {
        out.insert(Word(text.begin() + i, text.begin() + i + n));
    }
    return out;
}

/*
 * Length-n factors of the substitution subshift: scan successive tau-powers
 * until the factor set is unchanged for two further iterations.
 */
inline std::vector<Word> substitution_factors(const SubstitutionRule& r, std::size_t n) {
    Word w = substitution_prefix(r, 1);
    std::set<Word> cur = scan_factors(w, n);
    unsigned stable = 0;
    for (unsigned level = 2; level < 40; ++level) {
        w = apply_rule(r, w);
        std::set<Word> next = scan_factors(w, n);
        stable = (next == cur && w.size() >= 3 * n) ? stable + 1 : 0;
        cur = std::move(next);
        if (stable >= 2) return {cur.begin(), cur.end()};
    }
    throw CertificationFailedError("factor set of length " + std::to_string(n) +
                                   " did not stabilize across two extra iterations");
}

/*
 * Suffix automaton over a long fixed-point prefix: constant-time answers to
 * "is w extendable by symbol s inside the sampled language". Sound for
 * positive answers; negative answers are certified only up to a depth that
 * leaves a wide recurrence margin, enforced by certified_depth().
 */
class SuffixAutomaton {
public:
    explicit SuffixAutomaton(const Word& text) {
        st_.reserve(text.size() * 2 + 4);
        st_.push_back(State{-1, 0, {-1, -1}});
        last_ = 0;
        for (auto c : text) extend(c);
    }

    // State reached from the root by word w, or -1 if w is not a factor.
    int walk(int state, std::uint8_t sym) const { return st_[static_cast<std::size_t>(state)].next[sym]; }
    int root() const { return 0; }
    std::size_t state_count() const { return st_.size(); }

private:
    struct State {
        int link;
        int len;
        std::array<int, 2> next;
    };

    void extend(std::uint8_t c) {
        int cur = static_cast<int>(st_.size());
        st_.push_back(State{-1, st_[static_cast<std::size_t>(last_)].len + 1, {-1, -1}});
        int p = last_;
        while (p != -1 && st_[static_cast<std::size_t>(p)].next[c] == -1) {
            st_[static_cast<std::size_t>(p)].next[c] = cur;
            p = st_[static_cast<std::size_t>(p)].link;
        }
        if (p == -1) {
            st_[static_cast<std::size_t>(cur)].link = 0;
        } else {
            int q = st_[static_cast<std::size_t>(p)].next[c];
            if (st_[static_cast<std::size_t>(p)].len + 1 == st_[static_cast<std::size_t>(q)].len) {
                st_[static_cast<std::size_t>(cur)].link = q;
            } else {
                int clone = static_cast<int>(st_.size());
                State cl = st_[static_cast<std::size_t>(q)];
                cl.len = st_[static_cast<std::size_t>(p)].len + 1;
                st_.push_back(cl);
                while (p != -1 && st_[static_cast<std::size_t>(p)].next[c] == q) {
                    st_[static_cast<std::size_t>(p)].next[c] = clone;
                    p = st_[static_cast<std::size_t>(p)].link;
                }
                st_[static_cast<std::size_t>(q)].link = clone;
                st_[static_cast<std::size_t>(cur)].link = clone;
            }
        }
        last_ = cur;
    }

    std::vector<State> st_;
    int last_;
};

// Largest gap between consecutive occurrences of w in text (including the
// leading and trailing margins); -1 if w does not occur.
inline std::int64_t max_occurrence_gap(const Word& text, const Word& w) {
    std::int64_t prev = -1, max_gap = -1;
    const auto n = static_cast<std::int64_t>(text.size());
    const auto m = static_cast<std::int64_t>(w.size());
    std::int64_t first = -1;
    for (std::int64_t i = 0; i + m <= n; ++i) {
        if (std::equal(w.begin(), w.end(), text.begin() + i)) {
            if (prev >= 0) max_gap = std::max(max_gap, i - prev);
            if (first < 0) first = i;
            prev = i;
        }
    }
    if (prev < 0) return -1;
    max_gap = std::max(max_gap, first + m);
    max_gap = std::max(max_gap, n - prev);
    return max_gap;
}

} // namespace orbitsense
