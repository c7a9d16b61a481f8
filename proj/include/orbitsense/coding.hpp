#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "stream.hpp"
#include "sturmian.hpp"
#include "substitution.hpp"
#include "word.hpp"

namespace orbitsense {

/*
 * Cylinder structure of a binary subshift, exposed as a walker down the
 * tree of admissible words. At each node either one or two one-symbol
 * extensions are admissible; the binary branch choices along a path, read
 * at the nodes with two children, code the point. With lexicographic bit
 * assignment (extension 0 -> bit 0) the code map is a homeomorphism onto
 * the full binary sequence space, which is how the Cantor conjugacies
 * between the corpus subshifts are realized.
 */
class LanguageWalker {
public:
    virtual ~LanguageWalker() = default;
    // Bit s set iff current word extended by symbol s stays admissible.
    virtual unsigned child_mask() = 0;
    virtual void step(std::uint8_t s) = 0;
    virtual std::unique_ptr<LanguageWalker> clone() const = 0;
    std::int64_t depth() const { return depth_; }

protected:
    std::int64_t depth_ = 0;
};

class LanguageOracle {
public:
    virtual ~LanguageOracle() = default;
    virtual std::unique_ptr<LanguageWalker> walk() const = 0;
    virtual std::int64_t certified_depth() const = 0;
    virtual std::string name() const = 0;
    virtual bool is_full_shift() const { return false; }

    // All admissible words of length n, lexicographic.
    std::vector<Word> words_of_length(std::size_t n) const {
        std::vector<std::pair<Word, std::unique_ptr<LanguageWalker>>> frontier;
        frontier.emplace_back(Word{}, walk());
        for (std::size_t d = 0; d < n; ++d) {
            std::vector<std::pair<Word, std::unique_ptr<LanguageWalker>>> next;
            for (auto& [w, wk] : frontier) {
                unsigned mask = wk->child_mask();
                if (mask == 3) {
                    Word w0 = w;
                    w0.push_back(0);
                    auto side = wk->clone();
                    side->step(0);
                    next.emplace_back(std::move(w0), std::move(side));
                    Word w1 = std::move(w);
                    w1.push_back(1);
                    wk->step(1);
                    next.emplace_back(std::move(w1), std::move(wk));
                } else {
                    std::uint8_t s = (mask & 1) ? 0 : 1;
                    Word ext = std::move(w);
                    ext.push_back(s);
                    wk->step(s);
                    next.emplace_back(std::move(ext), std::move(wk));
                }
            }
            frontier = std::move(next);
        }
        std::vector<Word> out;
        out.reserve(frontier.size());
        for (auto& [w, wk] : frontier) out.push_back(std::move(w));
        return out;
    }
};

using OraclePtr = std::shared_ptr<const LanguageOracle>;

/*
 * Sturmian language: cylinders are circle arcs, refined exactly. A small
 * table of the first levels is prebuilt so the orbit hot paths never touch
 * big-integer arithmetic; walks outgrowing the table fall back to arcs.
 */
class SturmianOracle final : public LanguageOracle,
                             public std::enable_shared_from_this<SturmianOracle> {
public:
    explicit SturmianOracle(SturmianParams params, std::int64_t table_depth = 160)
        : params_(std::move(params)) {
        build_table(table_depth);
    }

    std::unique_ptr<LanguageWalker> walk() const override;
    std::int64_t certified_depth() const override { return std::int64_t(1) << 20; }
    std::string name() const override { return "sturmian"; }
    const SturmianParams& params() const { return params_; }

private:
    friend class SturmianWalker;
    struct Node {
        std::int32_t child[2]; // index into next level, -1 if inadmissible
        Arc arc;
    };

    void build_table(std::int64_t depth) {
        table_.resize(static_cast<std::size_t>(depth) + 1);
        table_[0].push_back(Node{{-1, -1}, full_circle_arc()});
        for (std::int64_t d = 0; d < depth; ++d) {
            auto& level = table_[static_cast<std::size_t>(d)];
            auto& next = table_[static_cast<std::size_t>(d) + 1];
            for (auto& node : level) {
                for (std::uint8_t s = 0; s < 2; ++s) {
                    auto piece = intersect_arc(node.arc,
                                               symbol_constraint_arc(params_, static_cast<std::uint64_t>(d), s));
                    if (piece) {
                        node.child[s] = static_cast<std::int32_t>(next.size());
                        next.push_back(Node{{-1, -1}, *piece});
                    }
                }
            }
        }
    }

    SturmianParams params_;
    std::vector<std::vector<Node>> table_;
};

class SturmianWalker final : public LanguageWalker {
public:
    explicit SturmianWalker(const SturmianOracle& o)
        : oracle_(o), node_(0), arc_(full_circle_arc()), minus_k_rho_{} {}

    unsigned child_mask() override {
        if (table_step_possible()) {
            const auto& n = oracle_.table_[static_cast<std::size_t>(depth_)][static_cast<std::size_t>(node_)];
            return (n.child[0] >= 0 ? 1u : 0u) | (n.child[1] >= 0 ? 2u : 0u);
        }
        leave_table_if_needed();
        ensure_pieces();
        return (pieces_[0] ? 1u : 0u) | (pieces_[1] ? 2u : 0u);
    }

    std::unique_ptr<LanguageWalker> clone() const override {
        return std::make_unique<SturmianWalker>(*this);
    }

    void step(std::uint8_t s) override {
        if (depth_ >= oracle_.certified_depth()) {
            throw CertifiedDepthExceededError("sturmian walk beyond certified depth");
        }
        if (table_step_possible()) {
            const auto& n = oracle_.table_[static_cast<std::size_t>(depth_)][static_cast<std::size_t>(node_)];
            if (n.child[s] < 0) throw CertificationFailedError("inadmissible symbol fed to sturmian walk");
            node_ = n.child[s];
            ++depth_;
            return;
        }
        leave_table_if_needed();
        ensure_pieces();
        if (!pieces_[s]) throw CertificationFailedError("inadmissible symbol fed to sturmian walk");
        arc_ = *pieces_[s];
        ++depth_;
        minus_k_rho_ = uf_sub(minus_k_rho_, oracle_.params().rho);
        pieces_known_ = false;
    }

private:
    // Child links at the current level are only materialized below the last
    // table level.
    bool table_step_possible() const {
        return table_mode_ && static_cast<std::size_t>(depth_) + 1 < oracle_.table_.size();
    }

    void leave_table_if_needed() {
        if (!table_mode_) return;
        arc_ = oracle_.table_[static_cast<std::size_t>(depth_)][static_cast<std::size_t>(node_)].arc;
        minus_k_rho_ = uf_sub(UnitFixed{}, uf_scale_frac(oracle_.params().rho,
                                                         static_cast<std::uint64_t>(depth_)));
        table_mode_ = false;
        pieces_known_ = false;
    }

    void ensure_pieces() {
        if (pieces_known_) return;
        const auto& rho = oracle_.params().rho;
        UnitFixed one_minus_rho = uf_sub(UnitFixed{}, rho);
        Arc c0{minus_k_rho_, unit_one() - rho.v};
        Arc c1{uf_add(minus_k_rho_, one_minus_rho), rho.v};
        pieces_[0] = intersect_arc(arc_, c0);
        pieces_[1] = intersect_arc(arc_, c1);
        pieces_known_ = true;
    }

    const SturmianOracle& oracle_;
    bool table_mode_ = true;
    std::int32_t node_;  // valid while table_mode_
    Arc arc_;            // valid once table_mode_ is off
    UnitFixed minus_k_rho_;
    std::optional<Arc> pieces_[2];
    bool pieces_known_ = false;
};

inline std::unique_ptr<LanguageWalker> SturmianOracle::walk() const {
    return std::make_unique<SturmianWalker>(*this);
}

/*
 * Substitution language sampled from a long fixed-point prefix through a
 * suffix automaton. Positive factor answers are exact; the certified depth
 * keeps a wide margin so that linear recurrence makes negative answers
 * trustworthy too (the margin is checked empirically by the test suite).
 */
class SubstitutionOracle final : public LanguageOracle {
public:
    static constexpr std::int64_t kRecurrenceMargin = 24;

    SubstitutionOracle(SubstitutionRule rule, std::size_t min_prefix_len)
        : rule_(std::move(rule)),
          prefix_(fixed_point_prefix(rule_, min_prefix_len, &level_)),
          sam_(prefix_) {}

    std::unique_ptr<LanguageWalker> walk() const override;
    std::int64_t certified_depth() const override {
        return static_cast<std::int64_t>(prefix_.size()) / kRecurrenceMargin;
    }
    std::string name() const override { return rule_.name; }
    const Word& prefix() const { return prefix_; }
    unsigned prefix_level() const { return level_; }
    const SubstitutionRule& rule() const { return rule_; }
    const SuffixAutomaton& automaton() const { return sam_; }

private:
    SubstitutionRule rule_;
    unsigned level_ = 0;
    Word prefix_;
    SuffixAutomaton sam_;
};

class SubstitutionWalker final : public LanguageWalker {
public:
    explicit SubstitutionWalker(const SubstitutionOracle& o) : oracle_(o), state_(o.automaton().root()) {}

    unsigned child_mask() override {
        unsigned mask = 0;
        if (oracle_.automaton().walk(state_, 0) >= 0) mask |= 1;
        if (oracle_.automaton().walk(state_, 1) >= 0) mask |= 2;
        if (mask == 0) throw CertificationFailedError("dead end inside certified depth of " + oracle_.name());
        return mask;
    }

    std::unique_ptr<LanguageWalker> clone() const override {
        return std::make_unique<SubstitutionWalker>(*this);
    }

    void step(std::uint8_t s) override {
        if (depth_ >= oracle_.certified_depth()) {
            throw CertifiedDepthExceededError(oracle_.name() + " walk beyond certified depth " +
                                              std::to_string(oracle_.certified_depth()));
        }
        int nxt = oracle_.automaton().walk(state_, s);
        if (nxt < 0) throw CertificationFailedError("inadmissible symbol fed to " + oracle_.name() + " walk");
        state_ = nxt;
        ++depth_;
    }

private:
    const SubstitutionOracle& oracle_;
    int state_;
};

inline std::unique_ptr<LanguageWalker> SubstitutionOracle::walk() const {
    return std::make_unique<SubstitutionWalker>(*this);
}

// Full binary shift: every word admissible; codes and words coincide.
class FullShiftOracle final : public LanguageOracle {
public:
    std::unique_ptr<LanguageWalker> walk() const override;
    std::int64_t certified_depth() const override { return std::int64_t(1) << 40; }
    std::string name() const override { return "full-shift"; }
    bool is_full_shift() const override { return true; }
};

class FullShiftWalker final : public LanguageWalker {
public:
    unsigned child_mask() override { return 3; }
    void step(std::uint8_t) override { ++depth_; }
    std::unique_ptr<LanguageWalker> clone() const override {
        return std::make_unique<FullShiftWalker>(*this);
    }
};

inline std::unique_ptr<LanguageWalker> FullShiftOracle::walk() const {
    return std::make_unique<FullShiftWalker>();
}

/*
 * Code bits of a point: its branch symbols at the split nodes along its
 * cylinder path. Monotone by construction — bit j never changes once read.
 */
class EncodeStream final : public CachedStream {
public:
    EncodeStream(OraclePtr oracle, SymPtr source)
        : oracle_(std::move(oracle)), source_(std::move(source)), walker_(oracle_->walk()) {}

    std::int64_t limit() const override { return std::int64_t(1) << 40; }
    std::string describe() const override { return "encode<" + oracle_->name() + ">:" + source_->describe(); }
    const OraclePtr& oracle() const { return oracle_; }
    const SymPtr& source() const { return source_; }

protected:
    std::uint8_t step() const override {
        while (true) {
            unsigned mask = walker_->child_mask();
            std::uint8_t s = source_->at(walker_->depth());
            if (!((mask >> s) & 1)) {
                throw CertificationFailedError("source symbol leaves the language during encode of " +
                                               source_->describe());
            }
            walker_->step(s);
            if (mask == 3) return s;
        }
    }

private:
    OraclePtr oracle_;
    SymPtr source_;
    mutable std::unique_ptr<LanguageWalker> walker_;
};

/*
 * Decode bits into the admissible word they select; symbols come out as a
 * stream, pulling bits only when a split node requires a choice.
 */
class DecodeStream final : public CachedStream {
public:
    DecodeStream(OraclePtr oracle, SymPtr bits)
        : oracle_(std::move(oracle)), bits_(std::move(bits)), walker_(oracle_->walk()) {}

    std::int64_t limit() const override { return oracle_->certified_depth(); }
    std::string describe() const override { return "decode<" + oracle_->name() + ">:" + bits_->describe(); }
    const OraclePtr& oracle() const { return oracle_; }
    const SymPtr& bits() const { return bits_; }

protected:
    std::uint8_t step() const override {
        unsigned mask = walker_->child_mask();
        std::uint8_t s;
        if (mask == 3) {
            s = bits_->at(bit_cursor_++);
        } else {
            s = (mask & 1) ? 0 : 1;
        }
        walker_->step(s);
        return s;
    }

private:
    OraclePtr oracle_;
    SymPtr bits_;
    mutable std::unique_ptr<LanguageWalker> walker_;
    mutable std::int64_t bit_cursor_ = 0;
};

/*
 * Factory pair with exact algebraic simplifications:
 *   encode(T, decode(T, bits)) == bits   and   decode(T, encode(T, p)) == p.
 * Both identities are theorems about the cylinder tree (verified
 * exhaustively by the test suite); applying them keeps iterated conjugated
 * maps flat instead of stacking one encode/decode pair per step. Passing
 * flatten=false builds the raw pipeline, which the tests compare against.
 */
inline SymPtr make_encode(const OraclePtr& oracle, SymPtr source, bool flatten = true) {
    if (flatten) {
        if (oracle->is_full_shift()) return source;
        if (auto d = std::dynamic_pointer_cast<const DecodeStream>(source)) {
            if (d->oracle().get() == oracle.get()) return d->bits();
        }
    }
    return std::make_shared<EncodeStream>(oracle, std::move(source));
}

inline SymPtr make_decode(const OraclePtr& oracle, SymPtr bits, bool flatten = true) {
    if (flatten) {
        if (oracle->is_full_shift()) return bits;
        if (auto e = std::dynamic_pointer_cast<const EncodeStream>(bits)) {
            if (e->oracle().get() == oracle.get()) return e->source();
        }
    }
    return std::make_shared<DecodeStream>(oracle, std::move(bits));
}

// h = decode_target ∘ encode_source, a homeomorphism between the two
// subshifts; returns h^{-1}(target_map(h(p))).
inline SymPtr conjugate_point(const OraclePtr& source_oracle, const OraclePtr& target_oracle,
                              const std::function<SymPtr(SymPtr)>& target_map, SymPtr p,
                              bool flatten = true) {
    SymPtr image = make_decode(target_oracle, make_encode(source_oracle, std::move(p), flatten), flatten);
    SymPtr moved = target_map(std::move(image));
    return make_decode(source_oracle, make_encode(target_oracle, std::move(moved), flatten), flatten);
}

/*
 * Materialized audit tree: the first levels of the cylinder tree with child
 * links and bit assignments, plus the exhaustive checks the audit needs.
 */
class CodingTree {
public:
    struct Node {
        std::int32_t parent;
        std::uint8_t sym;       // symbol labeling the edge from parent
        std::int32_t child[2];  // indices into the next level, -1 if absent
    };

    CodingTree(OraclePtr oracle, std::int64_t depth) : oracle_(std::move(oracle)), depth_(depth) {
        levels_.resize(static_cast<std::size_t>(depth) + 1);
        levels_[0].push_back(Node{-1, 0, {-1, -1}});
        std::vector<std::unique_ptr<LanguageWalker>> walkers;
        walkers.push_back(oracle_->walk());
        for (std::int64_t d = 0; d < depth; ++d) {
            auto& level = levels_[static_cast<std::size_t>(d)];
            auto& next = levels_[static_cast<std::size_t>(d) + 1];
            std::vector<std::unique_ptr<LanguageWalker>> next_walkers;
            for (std::size_t i = 0; i < level.size(); ++i) {
                unsigned mask = walkers[i]->child_mask();
                if (mask == 0) throw CertificationFailedError("coding tree hit a dead end");
                for (std::uint8_t s = 0; s < 2; ++s) {
                    if (!((mask >> s) & 1)) continue;
                    level[i].child[s] = static_cast<std::int32_t>(next.size());
                    next.push_back(Node{static_cast<std::int32_t>(i), s, {-1, -1}});
                    if (mask == 3 && s == 0) {
                        auto side = walkers[i]->clone();
                        side->step(0);
                        next_walkers.push_back(std::move(side));
                    } else {
                        walkers[i]->step(s);
                        next_walkers.push_back(std::move(walkers[i]));
                    }
                }
            }
            walkers = std::move(next_walkers);
        }
    }

    const OraclePtr& oracle() const { return oracle_; }
    std::int64_t depth() const { return depth_; }

    std::size_t level_size(std::int64_t d) const { return levels_[static_cast<std::size_t>(d)].size(); }

    std::size_t splits_at_level(std::int64_t d) const {
        std::size_t n = 0;
        for (const auto& node : levels_[static_cast<std::size_t>(d)]) {
            if (node.child[0] >= 0 && node.child[1] >= 0) ++n;
        }
        return n;
    }

    Word word_of(std::int64_t level, std::int32_t index) const {
        Word w;
        std::int32_t i = index;
        for (std::int64_t d = level; d > 0; --d) {
            const auto& node = levels_[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)];
            w.push_back(node.sym);
            i = node.parent;
        }
        std::reverse(w.begin(), w.end());
        return w;
    }

    // Per-depth word list with child links and branch-bit assignments.
    void dump(std::ostream& os) const {
        os << "coding tree: " << oracle_->name() << ", depth " << depth_ << "\n";
        for (std::int64_t d = 0; d <= depth_; ++d) {
            const auto& level = levels_[static_cast<std::size_t>(d)];
            os << "depth " << d << " (" << level.size() << " words)\n";
            for (std::size_t i = 0; i < level.size(); ++i) {
                const auto& n = level[i];
                os << "  [" << i << "] " << (d == 0 ? "<root>" : word_to_string(word_of(d, static_cast<std::int32_t>(i))));
                bool split = n.child[0] >= 0 && n.child[1] >= 0;
                for (std::uint8_t s = 0; s < 2; ++s) {
                    if (n.child[s] >= 0) {
                        os << "  " << int(s) << "->" << n.child[s];
                        if (split) os << " (bit " << int(s) << ")";
                    }
                }
                os << "\n";
            }
        }
    }

private:
    OraclePtr oracle_;
    std::int64_t depth_;
    std::vector<std::vector<Node>> levels_;
};

// First n code bits of a point (the spec-level encode operation).
inline Word encode_bits(const OraclePtr& oracle, SymPtr p, std::int64_t nbits) {
    EncodeStream enc(oracle, std::move(p));
    return stream_prefix(enc, nbits);
}

// Branch bits read while walking a finite word down the cylinder tree.
inline Word branch_bits_of_prefix(const LanguageOracle& oracle, const Word& prefix) {
    auto walker = oracle.walk();
    Word bits;
    for (auto s : prefix) {
        unsigned mask = walker->child_mask();
        if (!((mask >> s) & 1)) throw CertificationFailedError("prefix leaves the language");
        if (mask == 3) bits.push_back(s);
        walker->step(s);
    }
    return bits;
}

/*
 * Canonical decode: consume all bits, then extend through forced symbols up
 * to (but not through) the next split, giving the unique maximal word the
 * bits determine.
 */
inline Word decode_word(const OraclePtr& oracle, const Word& bits) {
    auto walker = oracle->walk();
    Word w;
    std::size_t cursor = 0;
    while (true) {
        unsigned mask = walker->child_mask();
        std::uint8_t s;
        if (mask == 3) {
            if (cursor == bits.size()) break;
            s = bits[cursor++];
        } else {
            s = (mask & 1) ? 0 : 1;
        }
        walker->step(s);
        w.push_back(s);
    }
    return w;
}

/*
 * Depth planner: runs the conjugation pipeline without simplification on a
 * probe point and reports how deep the input window had to be to produce
 * out_depth trusted output symbols.
 */
struct ConjugacyPlan {
    std::int64_t out_depth;
    std::int64_t input_depth;
};

inline ConjugacyPlan plan_conjugacy(const OraclePtr& source_oracle, const OraclePtr& target_oracle,
                                    const std::function<SymPtr(SymPtr)>& target_map, SymPtr probe,
                                    std::int64_t out_depth) {
    SymPtr out = conjugate_point(source_oracle, target_oracle, target_map, probe, /*flatten=*/false);
    for (std::int64_t i = 0; i < out_depth; ++i) out->at(i);
    return ConjugacyPlan{out_depth, probe->high_water()};
}

} // namespace orbitsense
