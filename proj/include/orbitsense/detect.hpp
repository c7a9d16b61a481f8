#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "corpus.hpp"
#include "hitting.hpp"
#include "point.hpp"
#include "prng.hpp"
#include "space.hpp"
#include "system.hpp"

namespace orbitsense {

using Json = nlohmann::ordered_json;

enum class Outcome { evidence_for, evidence_against, inconclusive };

inline const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::evidence_for: return "evidence-for";
        case Outcome::evidence_against: return "evidence-against";
        case Outcome::inconclusive: return "inconclusive";
    }
    return "?";
}

/*
 * Every detector verdict is finite-horizon evidence, never a proof:
 * evidence-against a universally quantified property means exhaustive
 * failure over the sampled family. Certificates carry enough data to
 * re-run the claim.
 */
struct Verdict {
    std::string property;
    Outcome outcome = Outcome::inconclusive;
    Json details = Json::object();
};

struct DetectorParams {
    std::int64_t horizon = 2000;  // N
    int pair_samples = 8;         // points sampled per region
    double net_eps = 0.25;        // region source: epsilon-net radius
    double eps_D = 0.5;           // separation entourage
    double eps_E = 0.125;         // stability entourage
    int basis_min_j = 1;          // neighborhood basis radii 2^-j, j in [min,max]
    int basis_max_j = 8;
    std::int64_t syndetic_M = 0;  // 0 = bound search
    std::int64_t thick_k = 10;
    int multi_m = 3;
    int start_samples = 8;        // orbit starts for minimality / eventual
    std::int64_t eventual_cap = 256; // n,k search cap for eventual sensitivity
    double cover_eps = 0.5;       // default cover ball radius
    double containment_margin = 0.10;
    std::uint64_t seed = 1;
    int workers = 1;

    Json echo() const {
        return Json{{"horizon", horizon},
                    {"pair_samples", pair_samples},
                    {"net_eps", net_eps},
                    {"eps_D", eps_D},
                    {"eps_E", eps_E},
                    {"basis_min_j", basis_min_j},
                    {"basis_max_j", basis_max_j},
                    {"syndetic_M", syndetic_M},
                    {"thick_k", thick_k},
                    {"multi_m", multi_m},
                    {"start_samples", start_samples},
                    {"eventual_cap", eventual_cap},
                    {"cover_eps", cover_eps},
                    {"containment_margin", containment_margin},
                    {"seed", seed},
                    {"workers", workers}};
    }
};

// Deterministic parallel map: task i writes slot i; worker count never
// changes results, only scheduling.
template <typename F>
inline void parallel_tasks(std::size_t n, int workers, F&& fn) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t stride = static_cast<std::size_t>(workers);
    for (std::size_t w = 0; w < stride; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += stride) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

struct PairWitness {
    int i = 0, j = 0;
    std::int64_t time = 0;
    double separation = 0;
    std::string x, y; // serialized sample points (re-runnable generators)

    Json to_json() const {
        return Json{{"i", i}, {"j", j}, {"n", time}, {"separation", separation}, {"x", x}, {"y", y}};
    }
};

struct Region {
    Ball ball;
    std::string label;
};

// Net-ball regions: the finite stand-in for "every non-empty open set".
inline std::vector<Region> net_regions(const StateSpace& space, const DetectorParams& P) {
    std::vector<Region> out;
    auto centers = space.epsilon_net(P.net_eps, P.seed);
    for (std::size_t i = 0; i < centers.size(); ++i) {
        out.push_back(Region{Ball{centers[i], P.net_eps}, "net[" + std::to_string(i) + "]"});
    }
    return out;
}

struct SeparationResult {
    HittingSet set;
    std::vector<PairWitness> witnesses; // one per member, maximizing pair
    double max_separation = 0;
    double initial_max_separation = 0;
};

/*
 * N(U, D) truncated to the horizon: times at which some sampled pair of U
 * is separated at least eps_D. Members only ever grow with more samples or
 * a longer horizon.
 */
inline SeparationResult separation_hitting_set(const PeriodicSystem& sys, const Ball& U,
                                               double eps_D, const DetectorParams& P,
                                               std::uint64_t region_tag = 0) {
    const auto& space = sys.space();
    auto pts = space.sample_in_ball(U, static_cast<std::size_t>(P.pair_samples),
                                    subseed(P.seed, region_tag));
    if (pts.empty()) throw EmptyRegionError("no samples in region");
    std::vector<std::string> ser;
    ser.reserve(pts.size());
    for (const auto& p : pts) ser.push_back(space.serialize(p));

    std::vector<OrbitCursor> cursors;
    cursors.reserve(pts.size());
    for (const auto& p : pts) cursors.emplace_back(sys, p);

    SeparationResult res;
    res.set.horizon = P.horizon;
    res.set.role = HittingRole::separation;
    for (std::int64_t n = 0; n <= P.horizon; ++n) {
        double best = -1;
        int bi = -1, bj = -1;
        for (std::size_t i = 0; i < cursors.size(); ++i) {
            for (std::size_t j = i + 1; j < cursors.size(); ++j) {
                if (space.at_least(cursors[i].current(), cursors[j].current(), eps_D)) {
                    double d = space.distance_low(cursors[i].current(), cursors[j].current(),
                                                  kDefaultWindow);
                    if (d > best) {
                        best = d;
                        bi = static_cast<int>(i);
                        bj = static_cast<int>(j);
                    }
                }
            }
        }
        if (bi >= 0) {
            res.set.members.push_back(n);
            res.witnesses.push_back(PairWitness{bi, bj, n, best, ser[static_cast<std::size_t>(bi)],
                                                ser[static_cast<std::size_t>(bj)]});
            res.max_separation = std::max(res.max_separation, best);
        }
        if (n == 0) {
            for (std::size_t i = 0; i < cursors.size(); ++i) {
                for (std::size_t j = i + 1; j < cursors.size(); ++j) {
                    res.initial_max_separation =
                        std::max(res.initial_max_separation,
                                 space.distance_low(cursors[i].current(), cursors[j].current(),
                                                    kDefaultWindow));
                }
            }
        }
        if (n < P.horizon) {
            for (auto& c : cursors) c.advance();
        }
    }
    return res;
}

namespace detail_detect {

inline Json witness_sample(const std::vector<PairWitness>& ws, std::size_t cap = 8) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < ws.size() && i < cap; ++i) arr.push_back(ws[i].to_json());
    return arr;
}

struct RegionOutcome {
    std::string label;
    HittingSet set;
    std::vector<PairWitness> witnesses;
    double max_separation = 0;
    double initial_max_separation = 0;
    ClassifyResult classify;
};

} // namespace detail_detect

/*
 * Sensitivity detectors. One region scan feeds all four modes: plain needs
 * every region's separation set nonempty, syndetic/thick classify each
 * region's set, multi intersects the sets over m-tuples of regions.
 */
inline std::vector<detail_detect::RegionOutcome> separation_region_scan(
    const PeriodicSystem& sys, const DetectorParams& P,
    const std::vector<Region>* regions_in = nullptr) {
    std::vector<Region> regions = regions_in ? *regions_in : net_regions(sys.space(), P);
    std::vector<detail_detect::RegionOutcome> out(regions.size());
    parallel_tasks(regions.size(), P.workers, [&](std::size_t i) {
        auto r = separation_hitting_set(sys, regions[i].ball, P.eps_D, P, i);
        detail_detect::RegionOutcome o;
        o.label = regions[i].label;
        o.set = std::move(r.set);
        o.witnesses = std::move(r.witnesses);
        o.max_separation = r.max_separation;
        o.initial_max_separation = r.initial_max_separation;
        out[i] = std::move(o);
    });
    return out;
}

inline Verdict aggregate_sensitivity(const std::vector<detail_detect::RegionOutcome>& out,
                                     const std::string& mode, const DetectorParams& P,
                                     const std::string& property_prefix = "sensitivity") {
    Verdict v;
    v.property = property_prefix + "(" + mode + ")";
    v.details["mode"] = mode;
    v.details["eps_D"] = P.eps_D;
    v.details["regions"] = Json::array();
    double growth = 0;
    for (auto& o : out) {
        Json r{{"label", o.label},
               {"members", o.set.members.size()},
               {"max_separation", o.max_separation},
               {"initial_max_separation", o.initial_max_separation},
               {"min_syndetic_bound", o.set.members.empty() ? -1 : min_syndetic_bound(o.set)},
               {"max_thick_run", max_thick_run(o.set)},
               {"witnesses", detail_detect::witness_sample(o.witnesses)}};
        v.details["regions"].push_back(std::move(r));
        growth = std::max(growth, o.max_separation - o.initial_max_separation);
    }
    v.details["max_separation_growth"] = growth;

    if (mode == "plain") {
        bool all_nonempty = true;
        for (auto& o : out) all_nonempty &= !o.set.members.empty();
        v.outcome = all_nonempty ? Outcome::evidence_for : Outcome::evidence_against;
        if (!all_nonempty) {
            for (auto& o : out) {
                if (o.set.members.empty()) {
                    v.details["certificate"] =
                        Json{{"empty_region", o.label},
                             {"note", "max separation over all sampled pairs stayed below eps_D"},
                             {"max_separation_observed", o.max_separation},
                             {"initial_max_separation", o.initial_max_separation}};
                    break;
                }
            }
        }
    } else if (mode == "syndetic" || mode == "thick") {
        bool any_fails = false, any_inconclusive = false;
        Json cls = Json::array();
        for (auto& o : out) {
            ClassifyResult c;
            if (mode == "syndetic") {
                std::int64_t M = P.syndetic_M > 0 ? P.syndetic_M : min_syndetic_bound(o.set);
                c = classify_syndetic(o.set, M);
            } else {
                c = classify_thick(o.set, P.thick_k);
            }
            cls.push_back(Json{{"label", o.label},
                               {"bound", c.bound},
                               {"verdict", verdict3_name(c.verdict)},
                               {"measured", c.measured}});
            any_fails |= c.verdict == Verdict3::fails;
            any_inconclusive |= c.verdict == Verdict3::inconclusive;
        }
        v.details["classification"] = std::move(cls);
        v.outcome = any_fails ? Outcome::evidence_against
                              : (any_inconclusive ? Outcome::inconclusive : Outcome::evidence_for);
    } else if (mode == "multi") {
        std::size_t m = static_cast<std::size_t>(P.multi_m);
        std::vector<std::vector<bool>> bitmap(out.size(),
                                              std::vector<bool>(static_cast<std::size_t>(P.horizon) + 1, false));
        for (std::size_t i = 0; i < out.size(); ++i) {
            for (auto n : out[i].set.members) bitmap[i][static_cast<std::size_t>(n)] = true;
        }
        bool all_tuples_meet = true;
        Json empty_tuple;
        std::vector<std::size_t> idx(m);
        std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t from) {
            if (pos == m) {
                for (std::size_t n = 0; n <= static_cast<std::size_t>(P.horizon); ++n) {
                    bool all = true;
                    for (std::size_t t = 0; t < m && all; ++t) all = bitmap[idx[t]][n];
                    if (all) return true;
                }
                Json labels = Json::array();
                for (auto t : idx) labels.push_back(out[t].label);
                empty_tuple = labels;
                return false;
            }
            for (std::size_t i = from; i < out.size(); ++i) {
                idx[pos] = i;
                if (!rec(pos + 1, i + 1)) return false;
            }
            return true;
        };
        if (out.size() >= m) all_tuples_meet = rec(0, 0);
        v.outcome = all_tuples_meet ? Outcome::evidence_for : Outcome::evidence_against;
        if (!all_tuples_meet) v.details["certificate"] = Json{{"empty_intersection_tuple", empty_tuple}};
        v.details["tuple_size"] = P.multi_m;
    } else {
        throw ConfigError("unknown sensitivity mode: " + mode);
    }
    return v;
}

inline Verdict sensitivity_verdict(const PeriodicSystem& sys, const std::string& mode,
                                   const DetectorParams& P,
                                   const std::vector<Region>* regions_in = nullptr) {
    return aggregate_sensitivity(separation_region_scan(sys, P, regions_in), mode, P);
}

/*
 * Equicontinuity at a point: the largest basis radius delta keeping every
 * sampled delta-close companion within eps_E along the whole horizon.
 */
inline Verdict equicontinuity_at(const PeriodicSystem& sys, const Point& x, double eps_E,
                                 const DetectorParams& P) {
    const auto& space = sys.space();
    Verdict v;
    v.property = "equicontinuity-at";
    v.details["x"] = space.serialize(x);
    v.details["eps_E"] = eps_E;
    Json tries = Json::array();
    for (int j = P.basis_min_j; j <= P.basis_max_j; ++j) {
        double delta = std::ldexp(1.0, -j);
        auto ys = space.sample_in_ball(Ball{x, delta}, static_cast<std::size_t>(P.pair_samples),
                                       subseed(P.seed, 1000 + static_cast<std::uint64_t>(j)));
        OrbitCursor cx(sys, x);
        std::vector<OrbitCursor> cy;
        for (const auto& y : ys) cy.emplace_back(sys, y);
        bool ok = true;
        Json violation;
        for (std::int64_t n = 0; n <= P.horizon && ok; ++n) {
            for (std::size_t i = 0; i < cy.size(); ++i) {
                if (space.at_least(cx.current(), cy[i].current(), eps_E)) {
                    ok = false;
                    violation = Json{{"delta", delta},
                                     {"y", space.serialize(ys[i])},
                                     {"n", n},
                                     {"separation",
                                      space.distance_low(cx.current(), cy[i].current(), kDefaultWindow)}};
                    break;
                }
            }
            if (ok && n < P.horizon) {
                cx.advance();
                for (auto& c : cy) c.advance();
            }
        }
        if (ok) {
            v.outcome = Outcome::evidence_for;
            v.details["delta"] = delta;
            v.details["tried"] = std::move(tries);
            return v;
        }
        tries.push_back(std::move(violation));
    }
    v.outcome = Outcome::evidence_against;
    v.details["violations"] = std::move(tries);
    return v;
}

struct StabilityResult {
    HittingSet stable;   // J(U, E) surrogate
    double delta = 0;
    ClassifyResult syndetic;
    ClassifyResult complement_thick;
};

// J(U, E): times at which all sampled pairs of U are within eps_E.
inline HittingSet stability_set(const PeriodicSystem& sys, const std::vector<Point>& pts,
                                double eps_E, std::int64_t horizon) {
    const auto& space = sys.space();
    std::vector<OrbitCursor> cursors;
    for (const auto& p : pts) cursors.emplace_back(sys, p);
    HittingSet J;
    J.horizon = horizon;
    J.role = HittingRole::stability;
    for (std::int64_t n = 0; n <= horizon; ++n) {
        bool all_close = true;
        for (std::size_t i = 0; i < cursors.size() && all_close; ++i) {
            for (std::size_t j = i + 1; j < cursors.size(); ++j) {
                if (!space.closer_than(cursors[i].current(), cursors[j].current(), eps_E)) {
                    all_close = false;
                    break;
                }
            }
        }
        if (all_close) J.members.push_back(n);
        if (n < horizon) {
            for (auto& c : cursors) c.advance();
        }
    }
    return J;
}

/*
 * Syndetic equicontinuity at a point. Evidence for: some basis ball around
 * x has a syndetic stability set (minimal bound measured, horizon-adequate).
 * Evidence against: for every basis ball the complement of the stability
 * set is thick at the configured run length — the dual reading, since a
 * syndetic set is exactly one whose complement is not thick.
 */
inline Verdict syndetic_equicontinuity_at(const PeriodicSystem& sys, const Point& x, double eps_E,
                                          const DetectorParams& P) {
    const auto& space = sys.space();
    Verdict v;
    v.property = "syndetic-equicontinuity-at";
    v.details["x"] = space.serialize(x);
    v.details["eps_E"] = eps_E;
    Json rows = Json::array();
    bool all_against = true;
    bool any_inconclusive = false;
    for (int j = P.basis_min_j; j <= P.basis_max_j; ++j) {
        double delta = std::ldexp(1.0, -j);
        auto pts = space.sample_in_ball(Ball{x, delta}, static_cast<std::size_t>(P.pair_samples),
                                        subseed(P.seed, 2000 + static_cast<std::uint64_t>(j)));
        pts.push_back(x);
        HittingSet J = stability_set(sys, pts, eps_E, P.horizon);
        std::int64_t M = P.syndetic_M > 0 ? P.syndetic_M : min_syndetic_bound(J);
        ClassifyResult cj = classify_syndetic(J, M);
        ClassifyResult ct = classify_thick(complement_set(J), P.thick_k);
        rows.push_back(Json{{"delta", delta},
                            {"stable_members", J.members.size()},
                            {"measured_M", min_syndetic_bound(J)},
                            {"syndetic", verdict3_name(cj.verdict)},
                            {"complement_thick", verdict3_name(ct.verdict)},
                            {"complement_max_run", max_thick_run(complement_set(J))}});
        if (cj.verdict == Verdict3::holds) {
            v.outcome = Outcome::evidence_for;
            v.details["delta"] = delta;
            v.details["measured_M"] = min_syndetic_bound(J);
            v.details["rows"] = std::move(rows);
            return v;
        }
        if (ct.verdict != Verdict3::holds) all_against = false;
        if (cj.verdict == Verdict3::inconclusive && ct.verdict == Verdict3::inconclusive) {
            any_inconclusive = true;
        }
    }
    v.details["rows"] = std::move(rows);
    v.outcome = all_against && !any_inconclusive ? Outcome::evidence_against : Outcome::inconclusive;
    return v;
}

/*
 * Eventual sensitivity: for each sampled x and each basis eps_E, search for
 * n, k and a companion y near the time-n image of x whose own orbit leaves
 * eps_D of x's delayed orbit. Every (x, eps_E) must produce a witness.
 */
inline Verdict eventual_sensitivity_check(const PeriodicSystem& sys, const DetectorParams& P,
                                          double eps_D) {
    const auto& space = sys.space();
    Verdict v;
    v.property = "eventual-sensitivity";
    v.details["eps_D"] = eps_D;
    std::int64_t cap = std::min<std::int64_t>(P.horizon, P.eventual_cap);
    auto starts = space.sample_points(static_cast<std::size_t>(P.start_samples), subseed(P.seed, 31));
    Json wits = Json::array();
    bool all_found = true;
    Json failure;
    for (std::size_t xi = 0; xi < starts.size() && all_found; ++xi) {
        // Orbit of x up to 2*cap, stored for delayed comparisons.
        auto xorb = orbit_segment(sys, starts[xi], 2 * cap).states;
        for (int j = P.basis_min_j; j <= P.basis_max_j; ++j) {
            double eps_E = std::ldexp(1.0, -j);
            bool found = false;
            for (std::int64_t n = 0; n <= cap && !found; ++n) {
                auto ys = space.sample_in_ball(Ball{xorb[static_cast<std::size_t>(n)], eps_E}, 2,
                                               subseed(P.seed, 7000 + 31 * static_cast<std::uint64_t>(n) +
                                                                  static_cast<std::uint64_t>(j)));
                for (const auto& y : ys) {
                    OrbitCursor cy(sys, y);
                    for (std::int64_t k = 0; k <= cap; ++k) {
                        if (space.at_least(xorb[static_cast<std::size_t>(n + k)], cy.current(), eps_D)) {
                            found = true;
                            if (wits.size() < 8) {
                                wits.push_back(Json{{"x", space.serialize(starts[xi])},
                                                    {"eps_E", eps_E},
                                                    {"n", n},
                                                    {"k", k},
                                                    {"y", space.serialize(y)}});
                            }
                            break;
                        }
                        cy.advance();
                    }
                    if (found) break;
                }
            }
            if (!found) {
                all_found = false;
                failure = Json{{"x", space.serialize(starts[xi])}, {"eps_E", eps_E},
                               {"search_cap", cap}};
                break;
            }
        }
    }
    v.outcome = all_found ? Outcome::evidence_for : Outcome::evidence_against;
    v.details["witnesses"] = std::move(wits);
    if (!all_found) v.details["exhausted_at"] = failure;
    return v;
}

// Cover whose members are net balls of radius cover_eps (overlapping on
// circles, clopen cylinders on symbolic spaces).
inline FiniteCover cover_from_net(const StateSpace& space, double eps, std::uint64_t seed,
                                  std::size_t certify_samples = 64) {
    FiniteCover cover;
    for (auto& c : space.epsilon_net(eps, seed)) cover.members.push_back(Ball{c, eps});
    certify_cover(space, cover, space.sample_points(certify_samples, subseed(seed, 77)));
    return cover;
}

struct CoverSeparationResult {
    HittingSet set;
    std::vector<PairWitness> witnesses;
};

/*
 * N(V, U-cover): times at which two sampled points of V land in disjoint
 * sets of cover members. A point in no member at any time is a coverage
 * gap and aborts the run.
 */
inline CoverSeparationResult cover_hitting_set(const PeriodicSystem& sys, const Ball& V,
                                               const FiniteCover& cover, const DetectorParams& P,
                                               std::uint64_t region_tag = 0) {
    const auto& space = sys.space();
    auto pts = space.sample_in_ball(V, static_cast<std::size_t>(P.pair_samples),
                                    subseed(P.seed, 4000 + region_tag));
    std::vector<std::string> ser;
    for (const auto& p : pts) ser.push_back(space.serialize(p));
    std::vector<OrbitCursor> cursors;
    for (const auto& p : pts) cursors.emplace_back(sys, p);

    CoverSeparationResult res;
    res.set.horizon = P.horizon;
    res.set.role = HittingRole::cover_separation;
    std::vector<std::vector<int>> locs(pts.size());
    for (std::int64_t n = 0; n <= P.horizon; ++n) {
        for (std::size_t i = 0; i < cursors.size(); ++i) {
            locs[i] = locate_in_cover(space, cover, cursors[i].current());
            if (locs[i].empty()) {
                throw CoverageGapError("image point escaped the cover at time " + std::to_string(n));
            }
        }
        bool member = false;
        for (std::size_t i = 0; i < cursors.size() && !member; ++i) {
            for (std::size_t j = i + 1; j < cursors.size(); ++j) {
                bool disjoint = true;
                for (int a : locs[i]) {
                    if (std::find(locs[j].begin(), locs[j].end(), a) != locs[j].end()) {
                        disjoint = false;
                        break;
                    }
                }
                if (disjoint) {
                    member = true;
                    res.set.members.push_back(n);
                    if (res.witnesses.size() < 64) {
                        res.witnesses.push_back(PairWitness{static_cast<int>(i), static_cast<int>(j), n,
                                                            0.0, ser[i], ser[j]});
                    }
                    break;
                }
            }
        }
        if (n < P.horizon) {
            for (auto& c : cursors) c.advance();
        }
    }
    return res;
}

// Hausdorff sensitivity: cover-separation sets aggregated over net regions.
struct CoverScan {
    FiniteCover cover;
    std::vector<Region> regions;
    std::vector<CoverSeparationResult> outcomes;
    double lebesgue = 0;
};

inline CoverScan cover_region_scan(const PeriodicSystem& sys, const DetectorParams& P,
                                   const FiniteCover* cover_in = nullptr) {
    CoverScan scan;
    scan.cover = cover_in ? *cover_in : cover_from_net(sys.space(), P.cover_eps, P.seed);
    scan.regions = net_regions(sys.space(), P);
    scan.outcomes.resize(scan.regions.size());
    std::vector<std::string> errors(scan.regions.size());
    parallel_tasks(scan.regions.size(), P.workers, [&](std::size_t i) {
        try {
            scan.outcomes[i] = cover_hitting_set(sys, scan.regions[i].ball, scan.cover, P, i);
        } catch (const CoverageGapError& e) {
            errors[i] = e.what();
        }
    });
    for (auto& e : errors) {
        if (!e.empty()) throw CoverageGapError(e);
    }
    scan.lebesgue = lebesgue_radius(sys.space(), scan.cover,
                                    sys.space().sample_points(64, subseed(P.seed, 99)));
    return scan;
}

inline Verdict aggregate_hausdorff(const CoverScan& scan, const std::string& mode,
                                   const DetectorParams& P) {
    const auto& out = scan.outcomes;
    const auto& regions = scan.regions;
    Verdict v;
    v.property = "hausdorff-sensitivity(" + mode + ")";
    v.details["mode"] = mode;
    v.details["cover_members"] = scan.cover.members.size();
    v.details["cover_lebesgue_radius"] = scan.lebesgue;
    Json rows = Json::array();
    for (std::size_t i = 0; i < out.size(); ++i) {
        rows.push_back(Json{{"label", regions[i].label},
                            {"members", out[i].set.members.size()},
                            {"max_thick_run", max_thick_run(out[i].set)},
                            {"min_syndetic_bound",
                             out[i].set.members.empty() ? -1 : min_syndetic_bound(out[i].set)}});
    }
    v.details["regions"] = std::move(rows);

    if (mode == "plain") {
        bool all_nonempty = true;
        std::string empty_label;
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (out[i].set.members.empty()) {
                all_nonempty = false;
                empty_label = regions[i].label;
            }
        }
        v.outcome = all_nonempty ? Outcome::evidence_for : Outcome::evidence_against;
        if (!all_nonempty) v.details["certificate"] = Json{{"empty_region", empty_label}};
    } else if (mode == "thick") {
        bool any_fails = false, any_inc = false;
        for (auto& o : out) {
            auto c = classify_thick(o.set, P.thick_k);
            any_fails |= c.verdict == Verdict3::fails;
            any_inc |= c.verdict == Verdict3::inconclusive;
        }
        v.outcome = any_fails ? Outcome::evidence_against
                              : (any_inc ? Outcome::inconclusive : Outcome::evidence_for);
    } else if (mode == "multi") {
        std::size_t m = static_cast<std::size_t>(P.multi_m);
        bool all_meet = true;
        Json bad;
        if (out.size() >= m) {
            std::vector<std::vector<bool>> bitmap(out.size(),
                                                  std::vector<bool>(static_cast<std::size_t>(P.horizon) + 1,
                                                                    false));
            for (std::size_t i = 0; i < out.size(); ++i) {
                for (auto n : out[i].set.members) bitmap[i][static_cast<std::size_t>(n)] = true;
            }
            std::vector<std::size_t> idx(m);
            std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t from) {
                if (pos == m) {
                    for (std::size_t n = 0; n <= static_cast<std::size_t>(P.horizon); ++n) {
                        bool all = true;
                        for (std::size_t t = 0; t < m && all; ++t) all = bitmap[idx[t]][n];
                        if (all) return true;
                    }
                    Json labels = Json::array();
                    for (auto t : idx) labels.push_back(regions[t].label);
                    bad = labels;
                    return false;
                }
                for (std::size_t i = from; i < out.size(); ++i) {
                    idx[pos] = i;
                    if (!rec(pos + 1, i + 1)) return false;
                }
                return true;
            };
            all_meet = rec(0, 0);
        }
        v.outcome = all_meet ? Outcome::evidence_for : Outcome::evidence_against;
        if (!all_meet) v.details["certificate"] = Json{{"empty_intersection_tuple", bad}};
        v.details["tuple_size"] = P.multi_m;
    } else {
        throw ConfigError("unknown hausdorff mode: " + mode);
    }
    return v;
}

inline Verdict hausdorff_sensitivity_verdict(const PeriodicSystem& sys, const std::string& mode,
                                             const DetectorParams& P,
                                             const FiniteCover* cover_in = nullptr) {
    return aggregate_hausdorff(cover_region_scan(sys, P, cover_in), mode, P);
}

} // namespace orbitsense

#include "detect_pairs.hpp"
#include "detect_report.hpp"
