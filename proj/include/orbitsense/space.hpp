#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coding.hpp"
#include "errors.hpp"
#include "point.hpp"
#include "prng.hpp"
#include "stream.hpp"
#include "sturmian.hpp"
#include "substitution.hpp"

namespace orbitsense {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
// Declared distance between distinct components and between the two copies
// of a two-copy space.
inline constexpr double kCrossComponentDistance = 2.0;
inline constexpr std::size_t kMaxNetPoints = 4096;

// Smallest j with 2^-j < eps: symbolic points are closer than eps exactly
// when they agree on their first j symbols.
inline std::int64_t threshold_depth(double eps) {
    if (eps <= 0) throw Error("threshold_depth needs eps > 0");
    std::int64_t j = 0;
    double v = 1.0;
    while (v >= eps) {
        v *= 0.5;
        ++j;
        if (j > kCompareWindowCap) {
            throw WindowExhaustedError("entourage finer than the comparison window allows");
        }
    }
    return j;
}

inline void materialize_window(const SymbolStream& s, std::int64_t n = kDefaultWindow) {
    for (std::int64_t i = 0; i < n; ++i) s.at(i);
}

/*
 * Finite stand-in for "all points near x": net ball locator. locate()
 * appends the indices of the net balls of the given radius containing x.
 */
struct NetIndex {
    std::vector<Point> centers;
    double radius = 0;
    std::function<void(const Point&, std::vector<int>&)> locate;
};

class SpaceImpl {
public:
    SpaceImpl(SpaceKind kind, std::string name, double diameter)
        : kind_(kind), name_(std::move(name)), diameter_(diameter) {}
    virtual ~SpaceImpl() = default;

    SpaceKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    double diameter() const { return diameter_; }

    virtual double distance(const Point& a, const Point& b) const = 0;
    // Exact threshold predicate: distance(a,b) < eps.
    virtual bool closer_than(const Point& a, const Point& b, double eps) const {
        return distance(a, b) < eps;
    }
    // Lower bound on the distance with a bounded symbol scan; equals
    // distance() on non-symbolic spaces.
    virtual double distance_low(const Point& a, const Point& b, std::int64_t /*cap*/) const {
        return distance(a, b);
    }
    virtual std::string serialize(const Point& p) const = 0;
    virtual Point parse(const std::string& s) const = 0;
    virtual Point sample_one(std::uint64_t seed, std::uint64_t index) const = 0;
    virtual Point sample_in_ball_one(const Ball& ball, std::uint64_t seed,
                                     std::uint64_t index) const = 0;
    virtual std::vector<Point> net(double eps) const = 0;
    virtual NetIndex net_index(double net_eps, double ball_radius) const = 0;

protected:
    void check_net_size(std::size_t n) const {
        if (n > kMaxNetPoints) {
            throw NetTooLargeError(name_ + ": net of " + std::to_string(n) + " points exceeds cap " +
                                   std::to_string(kMaxNetPoints));
        }
    }

private:
    SpaceKind kind_;
    std::string name_;
    double diameter_;
};

class StateSpace {
public:
    StateSpace() = default;
    explicit StateSpace(std::shared_ptr<const SpaceImpl> impl) : impl_(std::move(impl)) {}

    const SpaceImpl& impl() const { return *impl_; }
    SpaceKind kind() const { return impl_->kind(); }
    const std::string& name() const { return impl_->name(); }
    double diameter() const { return impl_->diameter(); }

    double distance(const Point& a, const Point& b) const { return impl_->distance(a, b); }
    double distance_low(const Point& a, const Point& b, std::int64_t cap = kDefaultWindow) const {
        return impl_->distance_low(a, b, cap);
    }
    bool closer_than(const Point& a, const Point& b, double eps) const {
        return impl_->closer_than(a, b, eps);
    }
    bool at_least(const Point& a, const Point& b, double eps) const {
        return !impl_->closer_than(a, b, eps);
    }

    std::string serialize(const Point& p) const { return impl_->serialize(p); }
    Point parse(const std::string& s) const { return impl_->parse(s); }

    std::vector<Point> sample_points(std::size_t n, std::uint64_t seed) const {
        std::vector<Point> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back(impl_->sample_one(seed, i));
        return out;
    }

    std::vector<Point> sample_in_ball(const Ball& ball, std::size_t n, std::uint64_t seed) const {
        if (!(ball.radius > 0)) throw EmptyRegionError("ball radius must be positive");
        std::vector<Point> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back(impl_->sample_in_ball_one(ball, seed, i));
        return out;
    }

    std::vector<Point> epsilon_net(double eps, std::uint64_t /*seed*/ = 0) const {
        if (!(eps > 0) || eps >= diameter()) throw Error("epsilon_net needs 0 < eps < diameter");
        return impl_->net(eps);
    }

    NetIndex net_index(double net_eps, double ball_radius) const {
        return impl_->net_index(net_eps, ball_radius);
    }

    bool valid() const { return impl_ != nullptr; }

private:
    std::shared_ptr<const SpaceImpl> impl_;
};

// ---------------------------------------------------------------------------
// shared cover machinery

inline std::vector<int> locate_in_cover(const StateSpace& space, const FiniteCover& cover,
                                        const Point& x) {
    std::vector<int> hits;
    for (std::size_t i = 0; i < cover.members.size(); ++i) {
        if (space.closer_than(cover.members[i].center, x, cover.members[i].radius)) {
            hits.push_back(static_cast<int>(i));
        }
    }
    return hits;
}

inline void certify_cover(const StateSpace& space, FiniteCover& cover,
                          const std::vector<Point>& samples) {
    for (const auto& p : samples) {
        if (locate_in_cover(space, cover, p).empty()) {
            throw CoverageGapError("cover leaves sampled point uncovered: " + space.serialize(p));
        }
    }
    cover.certified_on = samples;
}

// Largest radius whose ball around every sampled point fits inside a member.
inline double lebesgue_radius(const StateSpace& space, const FiniteCover& cover,
                              const std::vector<Point>& samples) {
    double lam = std::numeric_limits<double>::infinity();
    for (const auto& p : samples) {
        double best = 0;
        for (const auto& m : cover.members) {
            best = std::max(best, m.radius - space.distance_low(m.center, p, kDefaultWindow));
        }
        lam = std::min(lam, best);
    }
    return lam;
}

// ---------------------------------------------------------------------------
// circle geometry helpers

inline double circle_arc_radians(const UnitFixed& a, const UnitFixed& b) {
    return uf_to_double(uf_circle_gap(a, b)) * kTwoPi;
}

inline bool circle_closer_than(const UnitFixed& a, const UnitFixed& b, double eps) {
    if (eps >= kTwoPi) return true;
    UnitFixed bound = uf_from_double(eps / kTwoPi);
    return uf_circle_gap(a, b).v < bound.v;
}

inline UnitFixed turns_offset_from_double(double radians) {
    return uf_from_double(radians / kTwoPi);
}

/*
 * Circle with a finite set of isolated atoms glued alongside. With no atoms
 * this is the plain circle. Isolated points sit at declared distance 2 from
 * everything else; their neighborhoods are singletons, so transitivity
 * verdicts at them are exact.
 */
class CircleWithIsolatedSpace final : public SpaceImpl {
public:
    explicit CircleWithIsolatedSpace(std::vector<int> labels)
        : SpaceImpl(SpaceKind::circle_with_isolated,
                    labels.empty() ? "circle" : "circle-plus-isolated", kTwoPi / 2),
          labels_(std::move(labels)) {}

    double distance(const Point& a, const Point& b) const override {
        if (a.is_circle() && b.is_circle()) {
            return circle_arc_radians(a.as_circle().turns, b.as_circle().turns);
        }
        if (a.is_isolated() && b.is_isolated()) {
            return a.as_isolated().label == b.as_isolated().label ? 0.0 : kCrossComponentDistance;
        }
        if ((a.is_isolated() && b.is_circle()) || (a.is_circle() && b.is_isolated())) {
            return kCrossComponentDistance;
        }
        throw MixedSpaceError("point does not belong to " + name());
    }

    bool closer_than(const Point& a, const Point& b, double eps) const override {
        if (a.is_circle() && b.is_circle()) {
            return circle_closer_than(a.as_circle().turns, b.as_circle().turns, eps);
        }
        return distance(a, b) < eps;
    }

    std::string serialize(const Point& p) const override {
        if (p.is_circle()) return "circle:t=" + uf_to_decimal(p.as_circle().turns);
        if (p.is_isolated()) return "iso:(" + std::to_string(p.as_isolated().label) + ",0)";
        throw MixedSpaceError("point does not belong to " + name());
    }

    Point parse(const std::string& s) const override {
        if (s.rfind("circle:t=", 0) == 0) return Point::circle(uf_from_decimal(s.substr(9)));
        if (s.rfind("iso:(", 0) == 0) return Point::isolated(std::stoi(s.substr(5)));
        throw ConfigError("unparseable point: " + s);
    }

    Point sample_one(std::uint64_t seed, std::uint64_t index) const override {
        if (!labels_.empty()) {
            // Stratified: fixed slots guarantee every atom appears early.
            std::uint64_t slot = index % 17;
            if (slot >= 1 && slot <= labels_.size()) {
                return Point::isolated(labels_[static_cast<std::size_t>(slot - 1)]);
            }
        }
        return Point::circle(uf_random(seed, 11, index));
    }

    Point sample_in_ball_one(const Ball& ball, std::uint64_t seed, std::uint64_t index) const override {
        if (ball.center.is_isolated()) return ball.center;
        double u = uniform01(seed, 23, index);
        double off = (2 * u - 1) * 0.98 * std::min(ball.radius, kTwoPi / 2);
        return Point::circle(uf_add(ball.center.as_circle().turns, turns_offset_from_double(off)));
    }

    std::vector<Point> net(double eps) const override {
        auto m = static_cast<std::size_t>(std::ceil(kTwoPi / eps));
        check_net_size(m + labels_.size());
        std::vector<Point> out;
        out.reserve(m + labels_.size());
        for (std::size_t k = 0; k < m; ++k) {
            out.push_back(Point::circle(UnitFixed{unit_one() * k / m}));
        }
        for (int l : labels_) out.push_back(Point::isolated(l));
        return out;
    }

    NetIndex net_index(double net_eps, double ball_radius) const override {
        NetIndex idx;
        idx.centers = net(net_eps);
        idx.radius = ball_radius;
        auto m = static_cast<std::size_t>(std::ceil(kTwoPi / net_eps));
        auto labels = labels_;
        auto centers = idx.centers;
        auto self = this;
        idx.locate = [m, labels, centers, ball_radius, self](const Point& x, std::vector<int>& out) {
            if (x.is_isolated()) {
                for (std::size_t i = m; i < centers.size(); ++i) {
                    if (centers[i].as_isolated().label == x.as_isolated().label) {
                        out.push_back(static_cast<int>(i));
                    }
                }
                return;
            }
            double pos = uf_to_double(x.as_circle().turns) * static_cast<double>(m);
            auto span = static_cast<long>(ball_radius / (kTwoPi / static_cast<double>(m))) + 2;
            for (long d = -span; d <= span; ++d) {
                long k = (static_cast<long>(std::floor(pos)) + d) % static_cast<long>(m);
                if (k < 0) k += static_cast<long>(m);
                if (self->closer_than(centers[static_cast<std::size_t>(k)], x, ball_radius)) {
                    out.push_back(static_cast<int>(k));
                }
            }
        };
        return idx;
    }

    const std::vector<int>& labels() const { return labels_; }

private:
    std::vector<int> labels_;
};

/*
 * Two unit circles tangent at one point, with the intrinsic path metric:
 * within a circle the arc length, across circles the geodesic through the
 * tangent point. The tangent point is A at angle 0 == B at half turn.
 */
class TangentCirclesSpace final : public SpaceImpl {
public:
    TangentCirclesSpace() : SpaceImpl(SpaceKind::two_tangent_circles, "two-tangent-circles", kTwoPi) {}

    static UnitFixed anchor_turns(char circle) {
        return circle == 'A' ? UnitFixed{} : UnitFixed{unit_one() / 2};
    }

    double distance(const Point& a, const Point& b) const override {
        const auto& ta = a.as_tangent();
        const auto& tb = b.as_tangent();
        if (ta.circle == tb.circle) return circle_arc_radians(ta.turns, tb.turns);
        return circle_arc_radians(ta.turns, anchor_turns(ta.circle)) +
               circle_arc_radians(tb.turns, anchor_turns(tb.circle));
    }

    std::string serialize(const Point& p) const override {
        const auto& t = p.as_tangent();
        return std::string("tcirc:") + t.circle + ":t=" + uf_to_decimal(t.turns);
    }

    Point parse(const std::string& s) const override {
        if (s.rfind("tcirc:", 0) != 0 || s.size() < 10) throw ConfigError("unparseable point: " + s);
        return Point::tangent(s[6], uf_from_decimal(s.substr(10)));
    }

    Point sample_one(std::uint64_t seed, std::uint64_t index) const override {
        return Point::tangent(index % 2 ? 'B' : 'A', uf_random(seed, 31, index));
    }

    Point sample_in_ball_one(const Ball& ball, std::uint64_t seed, std::uint64_t index) const override {
        const auto& c = ball.center.as_tangent();
        double r = std::min(ball.radius, kTwoPi / 2);
        double d_anchor = circle_arc_radians(c.turns, anchor_turns(c.circle));
        double w = r - d_anchor;
        double u = uniform01(seed, 37, index);
        if (w > 0 && uniform01(seed, 41, index) < w / (r + w)) {
            char other = c.circle == 'A' ? 'B' : 'A';
            double off = (2 * u - 1) * 0.98 * w;
            return Point::tangent(other, uf_add(anchor_turns(other), turns_offset_from_double(off)));
        }
        double off = (2 * u - 1) * 0.98 * r;
        return Point::tangent(c.circle, uf_add(c.turns, turns_offset_from_double(off)));
    }

    std::vector<Point> net(double eps) const override {
        auto m = static_cast<std::size_t>(std::ceil(kTwoPi / eps));
        check_net_size(2 * m);
        std::vector<Point> out;
        out.reserve(2 * m);
        for (char c : {'A', 'B'}) {
            for (std::size_t k = 0; k < m; ++k) {
                out.push_back(Point::tangent(c, UnitFixed{unit_one() * k / m}));
            }
        }
        return out;
    }

    NetIndex net_index(double net_eps, double ball_radius) const override {
        NetIndex idx;
        idx.centers = net(net_eps);
        idx.radius = ball_radius;
        auto m = static_cast<std::size_t>(std::ceil(kTwoPi / net_eps));
        auto centers = idx.centers;
        auto self = this;
        idx.locate = [m, centers, ball_radius, self](const Point& x, std::vector<int>& out) {
            const auto& tx = x.as_tangent();
            auto scan = [&](char circle, const UnitFixed& at, double radius) {
                std::size_t base = circle == 'A' ? 0 : m;
                double pos = uf_to_double(at) * static_cast<double>(m);
                auto span = static_cast<long>(radius / (kTwoPi / static_cast<double>(m))) + 2;
                for (long d = -span; d <= span; ++d) {
                    long k = (static_cast<long>(std::floor(pos)) + d) % static_cast<long>(m);
                    if (k < 0) k += static_cast<long>(m);
                    std::size_t i = base + static_cast<std::size_t>(k);
                    if (self->distance(centers[i], x) < ball_radius) out.push_back(static_cast<int>(i));
                }
            };
            scan(tx.circle, tx.turns, ball_radius);
            double d_anchor = circle_arc_radians(tx.turns, anchor_turns(tx.circle));
            double w = ball_radius - d_anchor;
            if (w > 0) {
                char other = tx.circle == 'A' ? 'B' : 'A';
                scan(other, anchor_turns(other), w);
            }
        };
        return idx;
    }
};

// Sampler family for plain symbolic spaces.
enum class SymbolicFamily { sturmian, substitution, full_shift };

/*
 * One-sided binary subshift with the 2^-k metric: d(x,y) = 2^-(first
 * disagreement index). Points are lazily extendable streams generated
 * inside the language (intercepts, decoded codes, or free bits).
 */
class PlainSymbolicSpace final : public SpaceImpl,
                                 public std::enable_shared_from_this<PlainSymbolicSpace> {
public:
    PlainSymbolicSpace(std::string name, SymbolicFamily family, OraclePtr oracle,
                       std::optional<SturmianParams> params)
        : SpaceImpl(SpaceKind::plain_symbolic, std::move(name), 1.0),
          family_(family),
          oracle_(std::move(oracle)),
          params_(std::move(params)) {}

    const OraclePtr& oracle() const { return oracle_; }
    SymbolicFamily family() const { return family_; }
    const SturmianParams& sturmian_params() const { return *params_; }

    double distance(const Point& a, const Point& b) const override {
        return symbolic_distance(a.as_symbolic(), b.as_symbolic());
    }

    bool closer_than(const Point& a, const Point& b, double eps) const override {
        return symbolic_closer_than(a.as_symbolic(), b.as_symbolic(), eps);
    }

    double distance_low(const Point& a, const Point& b, std::int64_t cap) const override {
        return symbolic_distance_low(a.as_symbolic(), b.as_symbolic(), cap);
    }

    static double symbolic_distance(const TaggedSymbolic& sa, const TaggedSymbolic& sb) {
        if (sa.copy != sb.copy) return kCrossComponentDistance;
        if (sa.seq == sb.seq) return 0.0;
        std::int64_t cap = std::min({kCompareWindowCap, sa.seq->limit(), sb.seq->limit()});
        std::int64_t k = first_difference(*sa.seq, *sb.seq, cap);
        if (k < 0) {
            throw WindowExhaustedError("symbolic points agree through the whole comparison window");
        }
        return std::ldexp(1.0, -static_cast<int>(std::min<std::int64_t>(k, 1074)));
    }

    static bool symbolic_closer_than(const TaggedSymbolic& sa, const TaggedSymbolic& sb, double eps) {
        if (sa.copy != sb.copy) return kCrossComponentDistance < eps;
        if (eps > 1.0) return true;
        if (sa.seq == sb.seq) return true;
        std::int64_t j = threshold_depth(eps);
        return first_difference(*sa.seq, *sb.seq, j) < 0;
    }

    // Lower bound for the distance, scanning at most `cap` symbols; pairs
    // agreeing through the cap count as 2^-cap. For summary statistics only;
    // verdict logic uses the exact threshold predicates.
    static double symbolic_distance_low(const TaggedSymbolic& sa, const TaggedSymbolic& sb,
                                        std::int64_t cap) {
        if (sa.copy != sb.copy) return kCrossComponentDistance;
        if (sa.seq == sb.seq) return 0.0;
        std::int64_t k = first_difference(*sa.seq, *sb.seq, cap);
        if (k < 0) k = cap;
        return std::ldexp(1.0, -static_cast<int>(std::min<std::int64_t>(k, 1074)));
    }

    std::string serialize(const Point& p) const override { return serialize_tagged(p.as_symbolic(), false); }

    Point parse(const std::string& s) const override {
        auto [copy, seq] = parse_tagged(s, false);
        return Point::symbolic(copy, std::move(seq));
    }

    std::string serialize_tagged(const TaggedSymbolic& t, bool with_copy) const {
        std::string head = "sym:";
        if (with_copy) head += std::string(1, t.copy) + ":";
        std::string window = word_to_string(stream_prefix(*t.seq, kDefaultWindow));
        if (auto m = std::dynamic_pointer_cast<const MechanicalStream>(t.seq)) {
            return head + "mech[g=" + uf_to_decimal(m->params().gamma) + "]:" + window;
        }
        if (auto sv = std::dynamic_pointer_cast<const ShiftView>(t.seq)) {
            if (auto m = std::dynamic_pointer_cast<const MechanicalStream>(sv->base())) {
                UnitFixed g = shifted_params(m->params(), static_cast<std::uint64_t>(sv->offset())).gamma;
                return head + "mech[g=" + uf_to_decimal(g) + "]:" + window;
            }
        }
        if (auto d = std::dynamic_pointer_cast<const DecodeStream>(t.seq)) {
            if (auto seeds = std::dynamic_pointer_cast<const SeededStream>(d->bits())) {
                return head + "coded[seed=" + std::to_string(seeds->seed()) + "]:" + window;
            }
            if (auto cat = std::dynamic_pointer_cast<const ConcatStream>(d->bits())) {
                if (auto seeds = std::dynamic_pointer_cast<const SeededStream>(cat->tail())) {
                    return head + "coded[bits=" + word_to_string(cat->prefix()) + ",seed=" +
                           std::to_string(seeds->seed()) + "]:" + window;
                }
            }
        }
        if (auto seeds = std::dynamic_pointer_cast<const SeededStream>(t.seq)) {
            return head + "free[seed=" + std::to_string(seeds->seed()) + "]:" + window;
        }
        return head + "window:" + window;
    }

    std::pair<char, SymPtr> parse_tagged(const std::string& s, bool with_copy) const {
        if (s.rfind("sym:", 0) != 0) throw ConfigError("unparseable point: " + s);
        std::string rest = s.substr(4);
        char copy = 'a';
        if (with_copy) {
            if (rest.size() < 2 || (rest[0] != 'a' && rest[0] != 'b') || rest[1] != ':') {
                throw ConfigError("unparseable copy tag: " + s);
            }
            copy = rest[0];
            rest = rest.substr(2);
        }
        auto colon = rest.rfind(':');
        std::string gen = rest.substr(0, colon);
        std::string window = colon == std::string::npos ? "" : rest.substr(colon + 1);
        SymPtr seq;
        if (gen.rfind("mech[g=", 0) == 0) {
            UnitFixed g = uf_from_decimal(gen.substr(7, gen.size() - 8));
            SturmianParams p = *params_;
            p.gamma = g;
            seq = std::make_shared<MechanicalStream>(std::move(p));
        } else if (gen.rfind("coded[seed=", 0) == 0) {
            auto seed = std::stoull(gen.substr(11, gen.size() - 12));
            seq = std::make_shared<DecodeStream>(oracle_, std::make_shared<SeededStream>(seed));
        } else if (gen.rfind("coded[bits=", 0) == 0) {
            auto comma = gen.find(",seed=");
            if (comma == std::string::npos) throw ConfigError("unparseable coded form: " + s);
            Word bits = word_from_string(gen.substr(11, comma - 11));
            auto seed = std::stoull(gen.substr(comma + 6, gen.size() - comma - 7));
            seq = std::make_shared<DecodeStream>(
                oracle_, std::make_shared<ConcatStream>(std::move(bits), std::make_shared<SeededStream>(seed)));
        } else if (gen.rfind("free[seed=", 0) == 0) {
            auto seed = std::stoull(gen.substr(10, gen.size() - 11));
            seq = std::make_shared<SeededStream>(seed);
        } else if (gen == "window") {
            seq = std::make_shared<FixedStream>(word_from_string(window));
        } else {
            throw ConfigError("unparseable symbolic generator: " + s);
        }
        return {copy, seq};
    }

    SymPtr sample_stream(std::uint64_t seed, std::uint64_t index) const {
        switch (family_) {
            case SymbolicFamily::sturmian: {
                for (unsigned attempt = 0; attempt < 8; ++attempt) {
                    UnitFixed g = uf_random(seed, 13 + attempt, index);
                    SturmianParams p = *params_;
                    p.gamma = g;
                    auto m = std::make_shared<MechanicalStream>(std::move(p));
                    try {
                        materialize_window(*m);
                        return m;
                    } catch (const PrecisionExhaustedError&) {
                        continue; // intercept hit the ambiguous set; perturb
                    }
                }
                throw PrecisionExhaustedError("could not sample an unambiguous intercept");
            }
            case SymbolicFamily::substitution: {
                auto s = std::make_shared<DecodeStream>(oracle_,
                                                        std::make_shared<SeededStream>(hash_draw(seed, 19, index)));
                materialize_window(*s);
                return s;
            }
            case SymbolicFamily::full_shift:
                return std::make_shared<SeededStream>(hash_draw(seed, 17, index));
        }
        throw Error("unreachable");
    }

    SymPtr sample_stream_in_cylinder(const Word& prefix, std::uint64_t seed,
                                     std::uint64_t index) const {
        switch (family_) {
            case SymbolicFamily::sturmian: {
                auto arc = word_arc(*params_, prefix);
                if (!arc) throw EmptyRegionError("cylinder is not in the language");
                for (unsigned attempt = 0; attempt < 8; ++attempt) {
                    UnitFixed g = random_intercept_in_arc(*arc, seed, 43 + attempt, index);
                    SturmianParams p = *params_;
                    p.gamma = g;
                    auto m = std::make_shared<MechanicalStream>(std::move(p));
                    try {
                        materialize_window(*m);
                        return m;
                    } catch (const PrecisionExhaustedError&) {
                        continue;
                    }
                }
                throw PrecisionExhaustedError("could not sample an unambiguous intercept in cylinder");
            }
            case SymbolicFamily::substitution: {
                Word bits = branch_bits_of_prefix(*oracle_, prefix);
                auto tail = std::make_shared<SeededStream>(hash_draw(seed, 47, index));
                auto s = std::make_shared<DecodeStream>(
                    oracle_, std::make_shared<ConcatStream>(bits, std::move(tail)));
                materialize_window(*s);
                return s;
            }
            case SymbolicFamily::full_shift:
                return std::make_shared<ConcatStream>(
                    prefix, std::make_shared<SeededStream>(hash_draw(seed, 53, index)));
        }
        throw Error("unreachable");
    }

    // Canonical representative of a cylinder: forced path, zero branch bits.
    // The window is materialized eagerly so representatives can be shared
    // read-only across worker threads.
    SymPtr cylinder_representative(const Word& prefix) const {
        if (family_ == SymbolicFamily::sturmian) {
            auto arc = word_arc(*params_, prefix);
            if (!arc) throw EmptyRegionError("cylinder is not in the language");
            SturmianParams p = *params_;
            p.gamma = arc->midpoint();
            auto m = std::make_shared<MechanicalStream>(std::move(p));
            materialize_window(*m);
            return m;
        }
        Word bits = branch_bits_of_prefix(*oracle_, prefix);
        auto s = std::make_shared<DecodeStream>(
            oracle_, std::make_shared<ConcatStream>(bits, std::make_shared<ConstStream>(0)));
        materialize_window(*s);
        return s;
    }

    Point sample_one(std::uint64_t seed, std::uint64_t index) const override {
        return Point::symbolic('a', sample_stream(seed, index));
    }

    Point sample_in_ball_one(const Ball& ball, std::uint64_t seed, std::uint64_t index) const override {
        const auto& c = ball.center.as_symbolic();
        std::int64_t j = threshold_depth(std::min(ball.radius, 1.5));
        Word prefix = stream_prefix(*c.seq, j);
        return Point::symbolic(c.copy, sample_stream_in_cylinder(prefix, seed, index));
    }

    std::vector<Point> net(double eps) const override {
        std::int64_t j = threshold_depth(eps);
        auto words = oracle_->words_of_length(static_cast<std::size_t>(j));
        check_net_size(words.size());
        std::vector<Point> out;
        out.reserve(words.size());
        for (const auto& w : words) out.push_back(Point::symbolic('a', cylinder_representative(w)));
        return out;
    }

    NetIndex net_index(double net_eps, double ball_radius) const override {
        NetIndex idx;
        idx.radius = ball_radius;
        std::int64_t j = threshold_depth(net_eps);
        std::int64_t jr = threshold_depth(std::min(ball_radius, 1.5));
        auto words = oracle_->words_of_length(static_cast<std::size_t>(j));
        check_net_size(words.size());
        auto lookup = std::make_shared<std::map<Word, std::vector<int>>>();
        for (std::size_t i = 0; i < words.size(); ++i) {
            idx.centers.push_back(Point::symbolic('a', cylinder_representative(words[i])));
            (*lookup)[word_prefix(words[i], static_cast<std::size_t>(std::min(j, jr)))].push_back(
                static_cast<int>(i));
        }
        auto centers = idx.centers;
        auto key_len = static_cast<std::size_t>(std::min(j, jr));
        idx.locate = [lookup, centers, ball_radius, key_len](const Point& x, std::vector<int>& out) {
            const auto& sx = x.as_symbolic();
            Word key = stream_prefix(*sx.seq, static_cast<std::int64_t>(key_len));
            auto it = lookup->find(key);
            if (it == lookup->end()) return;
            for (int i : it->second) {
                if (symbolic_closer_than(centers[static_cast<std::size_t>(i)].as_symbolic(), sx,
                                         ball_radius)) {
                    out.push_back(i);
                }
            }
        };
        return idx;
    }

private:
    SymbolicFamily family_;
    OraclePtr oracle_;
    std::optional<SturmianParams> params_;
};

/*
 * Two disjoint copies of a plain symbolic space, tagged 'a' and 'b', at
 * declared cross-copy distance 2.
 */
class TwoCopySymbolicSpace final : public SpaceImpl {
public:
    explicit TwoCopySymbolicSpace(std::shared_ptr<const PlainSymbolicSpace> inner)
        : SpaceImpl(SpaceKind::two_copy_symbolic, "two-copy-" + inner->name(), kCrossComponentDistance),
          inner_(std::move(inner)) {}

    const PlainSymbolicSpace& inner() const { return *inner_; }

    double distance(const Point& a, const Point& b) const override {
        return PlainSymbolicSpace::symbolic_distance(a.as_symbolic(), b.as_symbolic());
    }

    bool closer_than(const Point& a, const Point& b, double eps) const override {
        return PlainSymbolicSpace::symbolic_closer_than(a.as_symbolic(), b.as_symbolic(), eps);
    }

    double distance_low(const Point& a, const Point& b, std::int64_t cap) const override {
        return PlainSymbolicSpace::symbolic_distance_low(a.as_symbolic(), b.as_symbolic(), cap);
    }

    std::string serialize(const Point& p) const override {
        return inner_->serialize_tagged(p.as_symbolic(), true);
    }

    Point parse(const std::string& s) const override {
        auto [copy, seq] = inner_->parse_tagged(s, true);
        return Point::symbolic(copy, std::move(seq));
    }

    Point sample_one(std::uint64_t seed, std::uint64_t index) const override {
        return Point::symbolic(index % 2 ? 'b' : 'a', inner_->sample_stream(seed, index));
    }

    Point sample_in_ball_one(const Ball& ball, std::uint64_t seed, std::uint64_t index) const override {
        const auto& c = ball.center.as_symbolic();
        std::int64_t j = threshold_depth(std::min(ball.radius, 1.5));
        Word prefix = stream_prefix(*c.seq, j);
        return Point::symbolic(c.copy, inner_->sample_stream_in_cylinder(prefix, seed, index));
    }

    std::vector<Point> net(double eps) const override {
        std::int64_t j = threshold_depth(eps);
        auto words = inner_->oracle()->words_of_length(static_cast<std::size_t>(j));
        check_net_size(2 * words.size());
        std::vector<Point> out;
        out.reserve(2 * words.size());
        for (char copy : {'a', 'b'}) {
            for (const auto& w : words) {
                out.push_back(Point::symbolic(copy, inner_->cylinder_representative(w)));
            }
        }
        return out;
    }

    NetIndex net_index(double net_eps, double ball_radius) const override {
        NetIndex sub = inner_->net_index(net_eps, ball_radius);
        NetIndex idx;
        idx.radius = ball_radius;
        auto m = sub.centers.size();
        for (char copy : {'a', 'b'}) {
            for (const auto& c : sub.centers) {
                idx.centers.push_back(Point::symbolic(copy, c.as_symbolic().seq));
            }
        }
        auto sub_locate = sub.locate;
        idx.locate = [sub_locate, m](const Point& x, std::vector<int>& out) {
            std::vector<int> tmp;
            sub_locate(Point::symbolic('a', x.as_symbolic().seq), tmp);
            std::size_t base = x.as_symbolic().copy == 'b' ? m : 0;
            for (int i : tmp) out.push_back(static_cast<int>(base + static_cast<std::size_t>(i)));
        };
        return idx;
    }

private:
    std::shared_ptr<const PlainSymbolicSpace> inner_;
};

// ---------------------------------------------------------------------------
// builders

inline StateSpace make_circle_space(std::vector<int> isolated_labels = {}) {
    return StateSpace(std::make_shared<CircleWithIsolatedSpace>(std::move(isolated_labels)));
}

inline StateSpace make_tangent_space() {
    return StateSpace(std::make_shared<TangentCirclesSpace>());
}

inline std::shared_ptr<const PlainSymbolicSpace> make_sturmian_space_impl(SturmianParams params) {
    auto oracle = std::make_shared<SturmianOracle>(params);
    return std::make_shared<PlainSymbolicSpace>("sturmian", SymbolicFamily::sturmian,
                                                std::move(oracle), std::move(params));
}

inline std::shared_ptr<const PlainSymbolicSpace> make_substitution_space_impl(
    std::shared_ptr<const SubstitutionOracle> oracle) {
    std::string nm = oracle->name();
    return std::make_shared<PlainSymbolicSpace>(std::move(nm), SymbolicFamily::substitution,
                                                std::move(oracle), std::nullopt);
}

inline std::shared_ptr<const PlainSymbolicSpace> make_full_shift_space_impl() {
    return std::make_shared<PlainSymbolicSpace>("binary-shift", SymbolicFamily::full_shift,
                                                std::make_shared<FullShiftOracle>(), std::nullopt);
}

inline StateSpace make_plain_space(std::shared_ptr<const PlainSymbolicSpace> impl) {
    return StateSpace(std::move(impl));
}

inline StateSpace make_two_copy_space(std::shared_ptr<const PlainSymbolicSpace> inner) {
    return StateSpace(std::make_shared<TwoCopySymbolicSpace>(std::move(inner)));
}

} // namespace orbitsense
