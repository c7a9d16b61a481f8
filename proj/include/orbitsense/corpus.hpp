#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "coding.hpp"
#include "errors.hpp"
#include "point.hpp"
#include "space.hpp"
#include "system.hpp"

namespace orbitsense {

enum class Tri { yes, no, untested };

inline const char* tri_name(Tri t) {
    switch (t) {
        case Tri::yes: return "true";
        case Tri::no: return "false";
        case Tri::untested: return "untested";
    }
    return "?";
}

// Expected verdict plus the structural reason it is expected.
struct ManifestEntry {
    Tri value = Tri::untested;
    std::string anchor;
};

struct Manifest {
    ManifestEntry minimal;
    ManifestEntry sensitive;
    ManifestEntry equicontinuous;
    ManifestEntry syndetically_equicontinuous;
    ManifestEntry thickly_sensitive;
    ManifestEntry induced_trans_empty;
    // True when the space has isolated points (voids the standing hypothesis
    // of the transitivity/dichotomy statements).
    bool has_isolated_points = false;
};

struct CorpusEntry {
    std::string id;
    std::string summary;
    StateSpace space;
    PeriodicSystem system;
    Manifest manifest;

    // Shared machinery for detectors and tests; null when not applicable.
    std::shared_ptr<const PlainSymbolicSpace> symbolic_impl;
    OraclePtr sturmian_oracle;
    OraclePtr substitution_oracle;
};

struct CorpusParams {
    UnitFixed rho = golden_slope(); // rotation number alpha / 2pi
    std::int64_t horizon_hint = 100000; // sizes substitution-prefix certification
    std::uint64_t seed = 1;
};

inline std::vector<std::string> corpus_ids() {
    return {"E1", "E2", "E3", "E4", "rotation", "sturmian", "odometer", "chacon", "identity"};
}

namespace detail {

inline SymPtr odometer_add_one(SymPtr bits) { return make_z2_add(std::move(bits), 1); }

inline SymPtr shift_once(SymPtr seq) { return make_shift(std::move(seq), 1); }

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ConstructionFailedError(what);
}

// Chacon oracle sized so certified walks cover half the horizon plus slack.
inline std::shared_ptr<const SubstitutionOracle> chacon_oracle_for(std::int64_t horizon_hint) {
    std::int64_t depth_needed = horizon_hint / 2 + 512;
    auto min_prefix = static_cast<std::size_t>(SubstitutionOracle::kRecurrenceMargin * depth_needed);
    return std::make_shared<SubstitutionOracle>(chacon_rule(), min_prefix);
}

inline CorpusEntry build_e1(const CorpusParams& params) {
    CorpusEntry e;
    e.id = "E1";
    e.summary = "rotation circle with a two-point isolated shuttle, period 2";
    e.space = make_circle_space({2, 3});
    UnitFixed half_alpha{params.rho.v / 2};

    MapHandle f1{"f1", [half_alpha](const Point& p) {
                     if (p.is_circle()) return Point::circle(uf_add(p.as_circle().turns, half_alpha));
                     return Point::isolated(p.as_isolated().label == 2 ? 3 : 2);
                 }};
    MapHandle f2{"f2", [half_alpha](const Point& p) {
                     if (p.is_circle()) return Point::circle(uf_add(p.as_circle().turns, half_alpha));
                     if (p.as_isolated().label == 2) return Point::circle(UnitFixed{}); // (1,0)
                     return Point::isolated(3);
                 }};
    e.system = PeriodicSystem(e.space, {f1, f2}, e.id);

    e.manifest.has_isolated_points = true;
    e.manifest.minimal = {Tri::no, "circle orbits stay on the circle, never reaching the isolated atoms"};
    e.manifest.induced_trans_empty = {Tri::no, "(2,0) maps through (3,0) and (1,0) onto a dense rotation orbit"};
    return e;
}

inline CorpusEntry build_e2(const CorpusParams& params) {
    CorpusEntry e;
    e.id = "E2";
    e.summary = "two tangent circles, pasted rotations, period 2";
    e.space = make_tangent_space();
    const UnitFixed rho = params.rho;
    const UnitFixed half{unit_one() / 2};

    // Partial maps kept separate so the pasting check can compare both
    // presentations of the tangent point.
    auto g1 = [rho](const UnitFixed& t) { return Point::tangent('B', uf_add(t, rho)); };
    auto g2 = [rho, half](const UnitFixed& t) { return Point::tangent('B', uf_add(uf_add(t, rho), half)); };
    auto g3 = [half](const UnitFixed& t) { return Point::tangent('A', uf_add(t, half)); };
    auto g4 = [](const UnitFixed& t) { return Point::tangent('A', t); };

    // Pasting well-definedness at p = A:0 = B:1/2, exact.
    Point p_as_a = g1(UnitFixed{});
    Point p_as_b = g2(half);
    require(p_as_a.as_tangent().circle == p_as_b.as_tangent().circle &&
                p_as_a.as_tangent().turns == p_as_b.as_tangent().turns,
            "tangent pasting failed for the first map");
    Point q_as_a = g3(UnitFixed{});
    Point q_as_b = g4(half);
    require(q_as_a.as_tangent().circle == q_as_b.as_tangent().circle &&
                q_as_a.as_tangent().turns == q_as_b.as_tangent().turns,
            "tangent pasting failed for the second map");

    MapHandle f1{"f1", [g1, g2](const Point& p) {
                     const auto& t = p.as_tangent();
                     return t.circle == 'A' ? g1(t.turns) : g2(t.turns);
                 }};
    MapHandle f2{"f2", [g3, g4](const Point& p) {
                     const auto& t = p.as_tangent();
                     return t.circle == 'A' ? g3(t.turns) : g4(t.turns);
                 }};
    e.system = PeriodicSystem(e.space, {f1, f2}, e.id);

    e.manifest.minimal = {Tri::yes, "alternating the pasted rotations carries every arc across both circles"};
    e.manifest.induced_trans_empty = {Tri::yes, "the induced map sends the whole space into circle A"};
    e.manifest.sensitive = {Tri::no, "every map preserves same-circle arc length"};
    e.manifest.equicontinuous = {Tri::yes, "all maps are arc-length isometries onto their images"};
    e.manifest.syndetically_equicontinuous = {Tri::yes, "equicontinuity makes every stability set all of N"};
    e.manifest.thickly_sensitive = {Tri::no, "isometries never separate pairs"};
    return e;
}

inline CorpusEntry build_two_copy(const CorpusParams& params, bool chacon_role) {
    CorpusEntry e;
    auto st_impl = make_sturmian_space_impl(make_sturmian_params(params.rho, UnitFixed{}));
    e.symbolic_impl = st_impl;
    e.sturmian_oracle = st_impl->oracle();
    e.space = make_two_copy_space(st_impl);

    OraclePtr st = e.sturmian_oracle;
    MapHandle f1;
    if (!chacon_role) {
        e.id = "E3";
        e.summary = "two Sturmian copies: conjugated odometer a->b, shift b->a, period 2";
        OraclePtr z2 = std::make_shared<FullShiftOracle>();
        f1 = MapHandle{"f1", [st, z2](const Point& p) {
                           const auto& t = p.as_symbolic();
                           if (t.copy == 'a') {
                               return Point::symbolic('b', conjugate_point(st, z2, odometer_add_one, t.seq));
                           }
                           return Point::symbolic('a', shift_once(t.seq));
                       }};
    } else {
        e.id = "E4";
        e.summary = "two Sturmian copies: shift a->b, conjugated substitution shift b->a, period 2";
        auto cha = chacon_oracle_for(params.horizon_hint);
        e.substitution_oracle = cha;
        OraclePtr chao = cha;
        f1 = MapHandle{"f1", [st, chao](const Point& p) {
                           const auto& t = p.as_symbolic();
                           if (t.copy == 'a') return Point::symbolic('b', shift_once(t.seq));
                           return Point::symbolic('a', conjugate_point(st, chao, shift_once, t.seq));
                       }};
    }
    MapHandle f2{"f2 (copy swap)", [](const Point& p) {
                     const auto& t = p.as_symbolic();
                     return Point::symbolic(t.copy == 'a' ? 'b' : 'a', t.seq);
                 }};
    e.system = PeriodicSystem(e.space, {f1, f2}, e.id);

    // Swap involution spot check.
    Point probe = e.space.sample_points(2, params.seed)[1];
    Point back = f2(f2(probe));
    require(back.as_symbolic().copy == probe.as_symbolic().copy, "copy swap is not an involution");

    e.manifest.induced_trans_empty = {Tri::yes, "the induced map preserves each copy"};
    e.manifest.minimal = {Tri::yes, "both copy factors are minimal and the first map links the copies"};
    if (!chacon_role) {
        e.manifest.sensitive = {Tri::no, "the odometer factor preserves prefix agreement, so copy-a regions never separate"};
        e.manifest.equicontinuous = {Tri::no, "the shift factor separates every cylinder"};
        e.manifest.syndetically_equicontinuous =
            {Tri::yes, "odometer stability is all of N and Sturmian stability sets have bounded gaps"};
        e.manifest.thickly_sensitive = {Tri::no, "Sturmian separation sets have bounded runs"};
    } else {
        e.manifest.sensitive = {Tri::yes, "both the shift factor and the conjugated substitution factor separate cylinders"};
        e.manifest.equicontinuous = {Tri::no, "sensitivity of either factor refutes equicontinuity"};
        e.manifest.syndetically_equicontinuous =
            {Tri::no, "the conjugated weakly mixing factor has thick separation sets, forcing long stability gaps"};
        e.manifest.thickly_sensitive = {Tri::no, "the Sturmian factor's separation sets are not thick"};
    }
    return e;
}

inline CorpusEntry build_rotation(const CorpusParams& params) {
    CorpusEntry e;
    e.id = "rotation";
    e.summary = "irrational circle rotation, period 1";
    e.space = make_circle_space({});
    UnitFixed rho = params.rho;
    MapHandle f{"rotate", [rho](const Point& p) { return Point::circle(uf_add(p.as_circle().turns, rho)); }};
    e.system = PeriodicSystem(e.space, {f}, e.id);
    e.manifest.minimal = {Tri::yes, "irrational rotation orbits are dense"};
    e.manifest.sensitive = {Tri::no, "rotations are isometries"};
    e.manifest.equicontinuous = {Tri::yes, "rotations are isometries"};
    e.manifest.syndetically_equicontinuous = {Tri::yes, "equicontinuity makes every stability set all of N"};
    e.manifest.thickly_sensitive = {Tri::no, "rotations are isometries"};
    e.manifest.induced_trans_empty = {Tri::no, "every rotation orbit is dense"};
    return e;
}

inline CorpusEntry build_identity(const CorpusParams&) {
    CorpusEntry e;
    e.id = "identity";
    e.summary = "identity map on the circle, period 1";
    e.space = make_circle_space({});
    MapHandle f{"id", [](const Point& p) { return p; }};
    e.system = PeriodicSystem(e.space, {f}, e.id);
    e.manifest.minimal = {Tri::no, "orbits are fixed points"};
    e.manifest.sensitive = {Tri::no, "nothing moves"};
    e.manifest.equicontinuous = {Tri::yes, "nothing moves"};
    e.manifest.syndetically_equicontinuous = {Tri::yes, "nothing moves"};
    e.manifest.thickly_sensitive = {Tri::no, "nothing moves"};
    e.manifest.induced_trans_empty = {Tri::yes, "orbits are fixed points"};
    return e;
}

inline CorpusEntry build_sturmian(const CorpusParams& params) {
    CorpusEntry e;
    e.id = "sturmian";
    e.summary = "Sturmian subshift under the shift map, period 1";
    auto impl = make_sturmian_space_impl(make_sturmian_params(params.rho, UnitFixed{}));
    e.symbolic_impl = impl;
    e.sturmian_oracle = impl->oracle();
    e.space = make_plain_space(impl);
    MapHandle f{"shift", [](const Point& p) {
                    return Point::symbolic(p.as_symbolic().copy, shift_once(p.as_symbolic().seq));
                }};
    e.system = PeriodicSystem(e.space, {f}, e.id);
    e.manifest.minimal = {Tri::yes, "every factor recurs in every orbit (bounded gaps)"};
    e.manifest.sensitive = {Tri::yes, "shifting exposes the first disagreement of any two distinct points"};
    e.manifest.equicontinuous = {Tri::no, "sensitivity refutes equicontinuity"};
    e.manifest.syndetically_equicontinuous =
        {Tri::yes, "cylinder stability times recur with bounded gaps, mirroring the underlying rotation"};
    e.manifest.thickly_sensitive = {Tri::no, "separation runs are cut by the bounded-gap stability times"};
    e.manifest.induced_trans_empty = {Tri::no, "minimality gives transitive points"};
    return e;
}

inline CorpusEntry build_odometer(const CorpusParams&) {
    CorpusEntry e;
    e.id = "odometer";
    e.summary = "binary odometer (add one with carry), period 1";
    auto impl = make_full_shift_space_impl();
    e.symbolic_impl = impl;
    e.space = make_plain_space(impl);
    MapHandle f{"add1", [](const Point& p) {
                    return Point::symbolic(p.as_symbolic().copy, odometer_add_one(p.as_symbolic().seq));
                }};
    e.system = PeriodicSystem(e.space, {f}, e.id);
    e.manifest.minimal = {Tri::yes, "addition cycles through every finite-prefix cylinder"};
    e.manifest.sensitive = {Tri::no, "carry propagation preserves prefix agreement"};
    e.manifest.equicontinuous = {Tri::yes, "carry propagation preserves prefix agreement"};
    e.manifest.syndetically_equicontinuous = {Tri::yes, "stability sets are all of N"};
    e.manifest.thickly_sensitive = {Tri::no, "no pair ever separates beyond its initial distance"};
    e.manifest.induced_trans_empty = {Tri::no, "minimality gives transitive points"};
    return e;
}

inline CorpusEntry build_chacon(const CorpusParams& params) {
    CorpusEntry e;
    e.id = "chacon";
    e.summary = "Chacon substitution subshift under the shift map, period 1";
    auto oracle = chacon_oracle_for(params.horizon_hint);
    e.substitution_oracle = oracle;
    auto impl = make_substitution_space_impl(oracle);
    e.symbolic_impl = impl;
    e.space = make_plain_space(impl);
    MapHandle f{"shift", [](const Point& p) {
                    return Point::symbolic(p.as_symbolic().copy, shift_once(p.as_symbolic().seq));
                }};
    e.system = PeriodicSystem(e.space, {f}, e.id);
    e.manifest.minimal = {Tri::yes, "the substitution fixed point is uniformly recurrent"};
    e.manifest.sensitive = {Tri::yes, "shifting exposes the first disagreement of any two distinct points"};
    e.manifest.equicontinuous = {Tri::no, "sensitivity refutes equicontinuity"};
    e.manifest.syndetically_equicontinuous = {Tri::no, "thick separation forces unbounded stability gaps"};
    e.manifest.thickly_sensitive = {Tri::yes, "weak mixing of the subshift forces arbitrarily long separation runs"};
    e.manifest.induced_trans_empty = {Tri::no, "minimality gives transitive points"};
    return e;
}

} // namespace detail

inline CorpusEntry build_example(const std::string& id, const CorpusParams& params = {}) {
    if (id == "E1") return detail::build_e1(params);
    if (id == "E2") return detail::build_e2(params);
    if (id == "E3") return detail::build_two_copy(params, false);
    if (id == "E4") return detail::build_two_copy(params, true);
    if (id == "rotation") return detail::build_rotation(params);
    if (id == "sturmian") return detail::build_sturmian(params);
    if (id == "odometer") return detail::build_odometer(params);
    if (id == "chacon") return detail::build_chacon(params);
    if (id == "identity") return detail::build_identity(params);
    throw ConfigError("unknown corpus id: " + id);
}

} // namespace orbitsense
