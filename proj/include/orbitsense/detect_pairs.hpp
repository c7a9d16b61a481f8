#pragma once

/*
 * Neighborhood-pair detectors (topological equicontinuity and its syndetic
 * form), visit-time and minimality estimators, and the omega /
 * non-wandering coverage surrogates. Included through detect.hpp.
 */

#include <cstdint>
#include <string>
#include <vector>

namespace orbitsense {

// First hit time of each target ball along the orbit of x, or -1 if the
// target is never entered within the horizon.
inline std::vector<std::int64_t> visit_times(const PeriodicSystem& sys, const Point& x,
                                             const std::vector<Ball>& targets, std::int64_t horizon) {
    const auto& space = sys.space();
    std::vector<std::int64_t> first(targets.size(), -1);
    std::size_t remaining = targets.size();
    OrbitCursor c(sys, x);
    for (std::int64_t n = 0; n <= horizon && remaining > 0; ++n) {
        for (std::size_t t = 0; t < targets.size(); ++t) {
            if (first[t] < 0 &&
                space.closer_than(targets[t].center, c.current(), targets[t].radius)) {
                first[t] = n;
                --remaining;
            }
        }
        if (n < horizon) c.advance();
    }
    return first;
}

/*
 * Minimality surrogate: every sampled start must enter every net ball
 * within the horizon. Uses the space's net index so membership per step is
 * cheap even for fine nets.
 */
inline Verdict minimality_estimate(const PeriodicSystem& sys, const DetectorParams& P) {
    const auto& space = sys.space();
    NetIndex net = space.net_index(P.net_eps, P.net_eps);
    auto starts = space.sample_points(static_cast<std::size_t>(P.start_samples), subseed(P.seed, 51));

    struct StartResult {
        std::int64_t worst_hit = -1;
        int unhit = -1;
    };
    std::vector<StartResult> results(starts.size());
    parallel_tasks(starts.size(), P.workers, [&](std::size_t si) {
        std::vector<std::int64_t> first(net.centers.size(), -1);
        std::size_t remaining = net.centers.size();
        OrbitCursor c(sys, starts[si]);
        std::vector<int> hits;
        for (std::int64_t n = 0; n <= P.horizon && remaining > 0; ++n) {
            hits.clear();
            net.locate(c.current(), hits);
            for (int h : hits) {
                if (first[static_cast<std::size_t>(h)] < 0) {
                    first[static_cast<std::size_t>(h)] = n;
                    --remaining;
                }
            }
            if (n < P.horizon) c.advance();
        }
        StartResult r;
        for (std::size_t t = 0; t < first.size(); ++t) {
            if (first[t] < 0) {
                r.unhit = static_cast<int>(t);
                break;
            }
            r.worst_hit = std::max(r.worst_hit, first[t]);
        }
        results[si] = r;
    });

    Verdict v;
    v.property = "minimality";
    v.details["net_eps"] = P.net_eps;
    v.details["net_size"] = net.centers.size();
    std::int64_t worst = -1;
    for (std::size_t si = 0; si < results.size(); ++si) {
        if (results[si].unhit >= 0) {
            v.outcome = Outcome::evidence_against;
            v.details["certificate"] = Json{
                {"start", space.serialize(starts[si])},
                {"unhit_ball", space.serialize(net.centers[static_cast<std::size_t>(results[si].unhit)])}};
            return v;
        }
        worst = std::max(worst, results[si].worst_hit);
    }
    v.outcome = Outcome::evidence_for;
    v.details["worst_first_hit"] = worst;
    return v;
}

// Some sampled start is transitive (hits every net ball): finite surrogate
// for Trans being non-empty.
inline Verdict transitivity_estimate(const PeriodicSystem& sys, const DetectorParams& P) {
    const auto& space = sys.space();
    NetIndex net = space.net_index(P.net_eps, P.net_eps);
    auto starts = space.sample_points(static_cast<std::size_t>(P.start_samples), subseed(P.seed, 53));
    Verdict v;
    v.property = "has-transitive-point";
    v.details["net_eps"] = P.net_eps;
    Json rows = Json::array();
    bool any = false;
    for (const auto& s : starts) {
        std::vector<std::int64_t> first(net.centers.size(), -1);
        std::size_t remaining = net.centers.size();
        OrbitCursor c(sys, s);
        std::vector<int> hits;
        for (std::int64_t n = 0; n <= P.horizon && remaining > 0; ++n) {
            hits.clear();
            net.locate(c.current(), hits);
            for (int h : hits) {
                if (first[static_cast<std::size_t>(h)] < 0) {
                    first[static_cast<std::size_t>(h)] = n;
                    --remaining;
                }
            }
            if (n < P.horizon) c.advance();
        }
        rows.push_back(Json{{"start", space.serialize(s)}, {"unhit_balls", remaining}});
        any |= remaining == 0;
    }
    v.details["starts"] = std::move(rows);
    v.outcome = any ? Outcome::evidence_for : Outcome::evidence_against;
    return v;
}

/*
 * Omega-limit and non-wandering surrogates. The omega side marks net balls
 * entered by the orbit tail n in (N/2, N]; the non-wandering side marks
 * net balls met by images of basis balls around x at some n > N/2.
 */
inline Verdict omega_nonwandering_estimate(const PeriodicSystem& sys, const Point& x,
                                           const DetectorParams& P) {
    const auto& space = sys.space();
    NetIndex net = space.net_index(P.net_eps, P.net_eps);
    std::vector<bool> omega(net.centers.size(), false);
    std::vector<bool> nonwandering(net.centers.size(), false);

    OrbitCursor c(sys, x);
    std::vector<int> hits;
    for (std::int64_t n = 0; n <= P.horizon; ++n) {
        if (n > P.horizon / 2) {
            hits.clear();
            net.locate(c.current(), hits);
            for (int h : hits) omega[static_cast<std::size_t>(h)] = true;
        }
        if (n < P.horizon) c.advance();
    }

    for (int j = P.basis_min_j; j <= P.basis_max_j; ++j) {
        double delta = std::ldexp(1.0, -j);
        auto pts = space.sample_in_ball(Ball{x, delta}, static_cast<std::size_t>(P.pair_samples),
                                        subseed(P.seed, 6000 + static_cast<std::uint64_t>(j)));
        pts.push_back(x);
        for (const auto& p : pts) {
            OrbitCursor cp(sys, p);
            for (std::int64_t n = 0; n <= P.horizon; ++n) {
                if (n > P.horizon / 2) {
                    hits.clear();
                    net.locate(cp.current(), hits);
                    for (int h : hits) nonwandering[static_cast<std::size_t>(h)] = true;
                }
                if (n < P.horizon) cp.advance();
            }
        }
    }

    Verdict v;
    v.property = "omega-vs-nonwandering";
    v.details["x"] = space.serialize(x);
    Json om = Json::array(), nw = Json::array(), om_miss = Json::array(), nw_miss = Json::array();
    bool equal = true;
    for (std::size_t t = 0; t < net.centers.size(); ++t) {
        om.push_back(omega[t] ? 1 : 0);
        nw.push_back(nonwandering[t] ? 1 : 0);
        if (!omega[t]) om_miss.push_back(space.serialize(net.centers[t]));
        if (!nonwandering[t]) nw_miss.push_back(space.serialize(net.centers[t]));
        equal &= omega[t] == nonwandering[t];
    }
    v.details["omega_bitmap"] = std::move(om);
    v.details["nonwandering_bitmap"] = std::move(nw);
    v.details["omega_missed"] = std::move(om_miss);
    v.details["nonwandering_missed"] = std::move(nw_miss);
    v.outcome = equal ? Outcome::evidence_for : Outcome::evidence_against;
    v.details["note"] = "evidence-for means the two coverage bitmaps agree";
    return v;
}

namespace detail_detect {

struct PairGridResult {
    // alive[jU][jV]: no violation seen yet for U=ball(x,2^-jU), V=ball(y,2^-jV)
    std::vector<std::vector<bool>> alive;
    std::vector<std::vector<Json>> violation;
    std::vector<std::vector<HittingSet>> holds_at; // times the implication held
};

/*
 * Shared scan for equicontinuity pairs: for each basis U around x, push the
 * sampled points of U along the orbit; at each time test membership of the
 * images in each basis V around y and containment in O (shrunk by the
 * declared margin). A violation at time n is: images meet V but some image
 * leaves the shrunk O.
 */
inline PairGridResult scan_pair_grid(const PeriodicSystem& sys, const Point& x, const Point& y,
                                     const Ball& O, const DetectorParams& P, bool track_sets) {
    const auto& space = sys.space();
    int jn = P.basis_max_j - P.basis_min_j + 1;
    PairGridResult R;
    R.alive.assign(static_cast<std::size_t>(jn), std::vector<bool>(static_cast<std::size_t>(jn), true));
    R.violation.assign(static_cast<std::size_t>(jn), std::vector<Json>(static_cast<std::size_t>(jn)));
    R.holds_at.assign(static_cast<std::size_t>(jn), std::vector<HittingSet>(static_cast<std::size_t>(jn)));
    double o_shrunk = O.radius * (1.0 - P.containment_margin);

    for (int ju = 0; ju < jn; ++ju) {
        double delta_u = std::ldexp(1.0, -(P.basis_min_j + ju));
        auto pts = space.sample_in_ball(Ball{x, delta_u}, static_cast<std::size_t>(P.pair_samples),
                                        subseed(P.seed, 5000 + static_cast<std::uint64_t>(ju)));
        pts.push_back(x);
        std::vector<OrbitCursor> cursors;
        for (const auto& p : pts) cursors.emplace_back(sys, p);
        for (auto& row : R.holds_at[static_cast<std::size_t>(ju)]) {
            row.horizon = P.horizon;
            row.role = HittingRole::stability;
        }

        for (std::int64_t n = 0; n <= P.horizon; ++n) {
            bool contained = true;
            for (auto& c : cursors) {
                if (!space.closer_than(O.center, c.current(), o_shrunk)) {
                    contained = false;
                    break;
                }
            }
            for (int jv = 0; jv < jn; ++jv) {
                double delta_v = std::ldexp(1.0, -(P.basis_min_j + jv));
                bool meets_v = false;
                for (auto& c : cursors) {
                    if (space.closer_than(y, c.current(), delta_v)) {
                        meets_v = true;
                        break;
                    }
                }
                bool violated = meets_v && !contained;
                if (violated && R.alive[static_cast<std::size_t>(ju)][static_cast<std::size_t>(jv)]) {
                    R.alive[static_cast<std::size_t>(ju)][static_cast<std::size_t>(jv)] = false;
                    R.violation[static_cast<std::size_t>(ju)][static_cast<std::size_t>(jv)] =
                        Json{{"delta_U", delta_u}, {"delta_V", delta_v}, {"n", n}};
                }
                if (track_sets && !violated) {
                    R.holds_at[static_cast<std::size_t>(ju)][static_cast<std::size_t>(jv)].members
                        .push_back(n);
                }
            }
            if (n < P.horizon) {
                for (auto& c : cursors) c.advance();
            }
        }
    }
    return R;
}

} // namespace detail_detect

/*
 * Topological equicontinuity pair check: some basis pair (U, V) must make
 * "images of U meet V implies images of U lie inside O" hold at every time.
 * When every pair fails, O is reported as a splitting neighborhood of y
 * with respect to x.
 */
inline Verdict eqp_check(const PeriodicSystem& sys, const Point& x, const Point& y, const Ball& O,
                         const DetectorParams& P) {
    const auto& space = sys.space();
    if (!space.closer_than(O.center, y, O.radius)) throw Error("eqp_check requires y inside O");
    auto R = detail_detect::scan_pair_grid(sys, x, y, O, P, false);
    Verdict v;
    v.property = "equicontinuity-pair";
    v.details["x"] = space.serialize(x);
    v.details["y"] = space.serialize(y);
    v.details["O_radius"] = O.radius;
    v.details["containment_margin"] = P.containment_margin;
    int jn = P.basis_max_j - P.basis_min_j + 1;
    for (int ju = 0; ju < jn; ++ju) {
        for (int jv = 0; jv < jn; ++jv) {
            if (R.alive[static_cast<std::size_t>(ju)][static_cast<std::size_t>(jv)]) {
                v.outcome = Outcome::evidence_for;
                v.details["witness_pair"] = Json{{"delta_U", std::ldexp(1.0, -(P.basis_min_j + ju))},
                                                 {"delta_V", std::ldexp(1.0, -(P.basis_min_j + jv))}};
                return v;
            }
        }
    }
    v.outcome = Outcome::evidence_against;
    Json viols = Json::array();
    for (int ju = 0; ju < jn; ++ju) {
        for (int jv = 0; jv < jn; ++jv) {
            viols.push_back(R.violation[static_cast<std::size_t>(ju)][static_cast<std::size_t>(jv)]);
        }
    }
    v.details["splitting_neighborhood"] = Json{{"center", space.serialize(O.center)}, {"radius", O.radius}};
    v.details["violations"] = std::move(viols);
    return v;
}

/*
 * Syndetic equicontinuity pair: the set of times at which the implication
 * holds must be syndetic for some basis pair. Dual evidence against: the
 * violation times are thick for every basis pair.
 */
inline Verdict seqp_check(const PeriodicSystem& sys, const Point& x, const Point& y, const Ball& O,
                          const DetectorParams& P) {
    const auto& space = sys.space();
    if (!space.closer_than(O.center, y, O.radius)) throw Error("seqp_check requires y inside O");
    auto R = detail_detect::scan_pair_grid(sys, x, y, O, P, true);
    Verdict v;
    v.property = "syndetic-equicontinuity-pair";
    v.details["x"] = space.serialize(x);
    v.details["y"] = space.serialize(y);
    v.details["O_radius"] = O.radius;
    int jn = P.basis_max_j - P.basis_min_j + 1;
    bool all_thick_violations = true;
    bool any_inconclusive = false;
    Json rows = Json::array();
    for (int ju = 0; ju < jn; ++ju) {
        for (int jv = 0; jv < jn; ++jv) {
            const auto& J = R.holds_at[static_cast<std::size_t>(ju)][static_cast<std::size_t>(jv)];
            std::int64_t M = P.syndetic_M > 0 ? P.syndetic_M : min_syndetic_bound(J);
            auto cj = classify_syndetic(J, M);
            rows.push_back(Json{{"delta_U", std::ldexp(1.0, -(P.basis_min_j + ju))},
                                {"delta_V", std::ldexp(1.0, -(P.basis_min_j + jv))},
                                {"measured_M", min_syndetic_bound(J)},
                                {"syndetic", verdict3_name(cj.verdict)}});
            if (cj.verdict == Verdict3::holds) {
                v.outcome = Outcome::evidence_for;
                v.details["witness_pair"] = rows.back();
                v.details["rows"] = std::move(rows);
                return v;
            }
            auto ct = classify_thick(complement_set(J), P.thick_k);
            if (ct.verdict != Verdict3::holds) all_thick_violations = false;
            if (cj.verdict == Verdict3::inconclusive && ct.verdict == Verdict3::inconclusive) {
                any_inconclusive = true;
            }
        }
    }
    v.details["rows"] = std::move(rows);
    v.outcome = (all_thick_violations && !any_inconclusive) ? Outcome::evidence_against
                                                            : Outcome::inconclusive;
    return v;
}

} // namespace orbitsense
