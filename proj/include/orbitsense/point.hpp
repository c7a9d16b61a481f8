#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "bigfixed.hpp"
#include "stream.hpp"

namespace orbitsense {

enum class SpaceKind {
    circle_with_isolated,
    two_tangent_circles,
    two_copy_symbolic,
    plain_symbolic,
};

inline const char* space_kind_name(SpaceKind k) {
    switch (k) {
        case SpaceKind::circle_with_isolated: return "circle-plus-isolated";
        case SpaceKind::two_tangent_circles: return "two-tangent-circles";
        case SpaceKind::two_copy_symbolic: return "two-copy-symbolic";
        case SpaceKind::plain_symbolic: return "plain-symbolic";
    }
    return "?";
}

// Angles live on the unit circle measured in turns; one turn = 2*pi radians.
struct CirclePoint {
    UnitFixed turns;
};

// Exact atom: membership and equality are label tests, never epsilon tests.
struct IsolatedPoint {
    int label; // 2 -> (2,0), 3 -> (3,0)
};

/*
 * Point on a union of two unit circles tangent at one point: circle A
 * centered at the origin, circle B centered at (2,0); the shared point is
 * A at angle 0, which equals B at angle 1/2 turn. The shared point is
 * canonicalized to the A presentation on construction.
 */
struct TangentPoint {
    char circle; // 'A' or 'B'
    UnitFixed turns;
};

inline TangentPoint make_tangent_point(char circle, UnitFixed turns) {
    if (circle == 'B' && turns.v * 2 == unit_one()) return TangentPoint{'A', UnitFixed{}};
    return TangentPoint{circle, std::move(turns)};
}

// Symbolic point with a copy tag; plain symbolic spaces use tag 'a'.
struct TaggedSymbolic {
    char copy; // 'a' or 'b'
    SymPtr seq;
};

struct Point {
    std::variant<CirclePoint, IsolatedPoint, TangentPoint, TaggedSymbolic> v;

    static Point circle(UnitFixed turns) { return Point{CirclePoint{std::move(turns)}}; }
    static Point isolated(int label) { return Point{IsolatedPoint{label}}; }
    static Point tangent(char c, UnitFixed turns) { return Point{make_tangent_point(c, std::move(turns))}; }
    static Point symbolic(char copy, SymPtr seq) { return Point{TaggedSymbolic{copy, std::move(seq)}}; }

    bool is_circle() const { return std::holds_alternative<CirclePoint>(v); }
    bool is_isolated() const { return std::holds_alternative<IsolatedPoint>(v); }
    bool is_tangent() const { return std::holds_alternative<TangentPoint>(v); }
    bool is_symbolic() const { return std::holds_alternative<TaggedSymbolic>(v); }

    const CirclePoint& as_circle() const { return std::get<CirclePoint>(v); }
    const IsolatedPoint& as_isolated() const { return std::get<IsolatedPoint>(v); }
    const TangentPoint& as_tangent() const { return std::get<TangentPoint>(v); }
    const TaggedSymbolic& as_symbolic() const { return std::get<TaggedSymbolic>(v); }
};

// Metric epsilon-entourage; membership is d(x,y) < eps. Composition E o E
// inside D is realized by halving: eps_E <= eps_D / 2.
struct Entourage {
    double eps;
};

struct Ball {
    Point center;
    double radius;
};

struct FiniteCover {
    std::vector<Ball> members;
    std::vector<Point> certified_on;
};

} // namespace orbitsense
