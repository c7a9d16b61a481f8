#pragma once

/*
 * Dichotomy cross-check report: runs the detector suite on a corpus system
 * and its induced autonomous system and grades every dichotomy and
 * induced-system equivalence whose hypotheses the manifest settles.
 * Included through detect.hpp.
 */

#include <cstdint>
#include <string>
#include <vector>

namespace orbitsense {

inline Json manifest_json(const Manifest& m) {
    auto entry = [](const ManifestEntry& e) {
        return Json{{"value", tri_name(e.value)}, {"anchor", e.anchor}};
    };
    return Json{{"minimal", entry(m.minimal)},
                {"sensitive", entry(m.sensitive)},
                {"equicontinuous", entry(m.equicontinuous)},
                {"syndetically_equicontinuous", entry(m.syndetically_equicontinuous)},
                {"thickly_sensitive", entry(m.thickly_sensitive)},
                {"induced_trans_empty", entry(m.induced_trans_empty)},
                {"has_isolated_points", m.has_isolated_points}};
}

struct ConsistencyRow {
    std::string name;
    std::string hypothesis;
    std::string hypothesis_status; // holds | fails | undecided
    std::string flag;              // CONSISTENT | VIOLATION | INCONCLUSIVE | INFO
    Json horns = Json::object();
    std::string note;

    Json to_json() const {
        return Json{{"name", name},
                    {"hypothesis", hypothesis},
                    {"hypothesis_status", hypothesis_status},
                    {"flag", flag},
                    {"horns", horns},
                    {"note", note}};
    }
};

struct DichotomyReport {
    std::string system_id;
    Json manifest;
    Json verdicts = Json::object();
    Json manifest_agreement = Json::array();
    Json structural = Json::object();
    std::vector<ConsistencyRow> rows;

    bool any_violation() const {
        for (const auto& r : rows) {
            if (r.flag == "VIOLATION") return true;
        }
        for (const auto& m : manifest_agreement) {
            if (m.at("flag") == "VIOLATION") return true;
        }
        return false;
    }

    Json to_json() const {
        Json rj = Json::array();
        for (const auto& r : rows) rj.push_back(r.to_json());
        return Json{{"system", system_id},
                    {"manifest", manifest},
                    {"verdicts", verdicts},
                    {"manifest_agreement", manifest_agreement},
                    {"structural_certificates", structural},
                    {"consistency_matrix", rj}};
    }
};

namespace detail_report {

// Aggregate a pointwise detector over sampled points into a system verdict.
template <typename Fn>
inline Verdict aggregate_points(const PeriodicSystem& sys, const DetectorParams& P,
                                const std::string& property, Fn&& pointwise) {
    auto pts = sys.space().sample_points(static_cast<std::size_t>(P.start_samples),
                                         subseed(P.seed, 61));
    Verdict v;
    v.property = property;
    Json rows = Json::array();
    bool any_against = false, any_inconclusive = false;
    for (const auto& x : pts) {
        Verdict pv = pointwise(x);
        rows.push_back(Json{{"x", sys.space().serialize(x)},
                            {"outcome", outcome_name(pv.outcome)},
                            {"details", pv.details}});
        any_against |= pv.outcome == Outcome::evidence_against;
        any_inconclusive |= pv.outcome == Outcome::inconclusive;
    }
    v.details["points"] = std::move(rows);
    v.outcome = any_against ? Outcome::evidence_against
                            : (any_inconclusive ? Outcome::inconclusive : Outcome::evidence_for);
    return v;
}

// Pairwise detectors aggregated over a few sampled (x, y) pairs.
template <typename Fn>
inline Verdict aggregate_pairs(const PeriodicSystem& sys, const DetectorParams& P,
                               const std::string& property, double o_radius, Fn&& pairwise) {
    auto pts = sys.space().sample_points(static_cast<std::size_t>(std::max(P.start_samples, 2)),
                                         subseed(P.seed, 67));
    Verdict v;
    v.property = property;
    Json rows = Json::array();
    bool any_against = false, any_inconclusive = false;
    std::size_t pair_count = std::min<std::size_t>(pts.size() - 1, 4);
    for (std::size_t i = 0; i < pair_count; ++i) {
        const Point& x = pts[i];
        const Point& y = pts[i + 1];
        Verdict pv = pairwise(x, y, Ball{y, o_radius});
        rows.push_back(Json{{"x", sys.space().serialize(x)},
                            {"y", sys.space().serialize(y)},
                            {"outcome", outcome_name(pv.outcome)}});
        any_against |= pv.outcome == Outcome::evidence_against;
        any_inconclusive |= pv.outcome == Outcome::inconclusive;
    }
    v.details["pairs"] = std::move(rows);
    v.outcome = any_against ? Outcome::evidence_against
                            : (any_inconclusive ? Outcome::inconclusive : Outcome::evidence_for);
    return v;
}

inline Json verdict_json(const Verdict& v) {
    return Json{{"property", v.property}, {"outcome", outcome_name(v.outcome)}, {"details", v.details}};
}

struct TriState {
    bool known = false;
    bool value = false;
};

inline TriState tri_to_state(Tri t) {
    TriState s;
    s.known = t != Tri::untested;
    s.value = t == Tri::yes;
    return s;
}

} // namespace detail_report

/*
 * Exact structural certificates for the emptiness of Trans(X,g), where the
 * corpus structure provides one: the tangent-circle system maps everything
 * into circle A; the two-copy systems preserve each copy.
 */
inline Json structural_trans_certificate(const CorpusEntry& entry, const DetectorParams& P) {
    Json out = Json::object();
    auto g = induced(entry.system);
    auto samples = entry.space.sample_points(100, subseed(P.seed, 71));
    if (entry.space.kind() == SpaceKind::two_tangent_circles) {
        bool all_in_a = true;
        for (const auto& s : samples) all_in_a &= iterate(g, s, 1).as_tangent().circle == 'A';
        out["g_image_in_circle_A"] = all_in_a;
        out["samples"] = samples.size();
    } else if (entry.space.kind() == SpaceKind::two_copy_symbolic) {
        bool preserves = true;
        for (const auto& s : samples) {
            preserves &= iterate(g, s, 1).as_symbolic().copy == s.as_symbolic().copy;
        }
        out["g_preserves_copies"] = preserves;
        out["samples"] = samples.size();
    } else if (entry.space.kind() == SpaceKind::circle_with_isolated &&
               entry.manifest.has_isolated_points) {
        auto first_f = visit_times(entry.system, Point::isolated(3), {Ball{Point::isolated(2), 1.0}},
                                   P.horizon);
        auto first_g = visit_times(g, Point::isolated(3), {Ball{Point::isolated(2), 1.0}}, P.horizon);
        out["isolated_first_hit_under_f"] = first_f[0];
        out["isolated_first_hit_under_g"] = first_g[0];
    }
    return out;
}

inline DichotomyReport dichotomy_report(const CorpusEntry& entry, const DetectorParams& P) {
    const PeriodicSystem& f = entry.system;
    PeriodicSystem g = induced(f);
    DichotomyReport rep;
    rep.system_id = entry.id;
    rep.manifest = manifest_json(entry.manifest);
    rep.structural = structural_trans_certificate(entry, P);

    // --- detector suite -----------------------------------------------------
    auto sep_f = separation_region_scan(f, P);
    auto sep_g = separation_region_scan(g, P);
    Verdict sens_f = aggregate_sensitivity(sep_f, "plain", P);
    Verdict thick_f = aggregate_sensitivity(sep_f, "thick", P);
    Verdict multi_f = aggregate_sensitivity(sep_f, "multi", P);
    Verdict sens_g = aggregate_sensitivity(sep_g, "plain", P);
    Verdict thick_g = aggregate_sensitivity(sep_g, "thick", P);

    auto cov_f = cover_region_scan(f, P);
    auto cov_g = cover_region_scan(g, P);
    Verdict haus_f = aggregate_hausdorff(cov_f, "plain", P);
    Verdict haus_thick_f = aggregate_hausdorff(cov_f, "thick", P);
    Verdict haus_multi_f = aggregate_hausdorff(cov_f, "multi", P);
    Verdict haus_g = aggregate_hausdorff(cov_g, "plain", P);
    Verdict haus_thick_g = aggregate_hausdorff(cov_g, "thick", P);

    Verdict min_f = minimality_estimate(f, P);
    Verdict trans_g = transitivity_estimate(g, P);

    Verdict eq_f = detail_report::aggregate_points(
        f, P, "equicontinuity", [&](const Point& x) { return equicontinuity_at(f, x, P.eps_E, P); });
    Verdict synd_eq_f = detail_report::aggregate_points(f, P, "syndetic-equicontinuity", [&](const Point& x) {
        return syndetic_equicontinuity_at(f, x, P.eps_E, P);
    });
    Verdict synd_eq_g = detail_report::aggregate_points(g, P, "syndetic-equicontinuity(induced)",
                                                        [&](const Point& x) {
                                                            return syndetic_equicontinuity_at(g, x, P.eps_E, P);
                                                        });
    Verdict eventual_f = eventual_sensitivity_check(f, P, P.eps_D);

    double o_radius = std::ldexp(1.0, -4);
    Verdict top_eq_f = detail_report::aggregate_pairs(
        f, P, "topological-equicontinuity", o_radius,
        [&](const Point& x, const Point& y, const Ball& O) { return eqp_check(f, x, y, O, P); });
    Verdict synd_top_eq_f = detail_report::aggregate_pairs(
        f, P, "syndetic-topological-equicontinuity", o_radius,
        [&](const Point& x, const Point& y, const Ball& O) { return seqp_check(f, x, y, O, P); });

    auto add = [&](const Verdict& v, const std::string& key) {
        rep.verdicts[key] = detail_report::verdict_json(v);
    };
    add(min_f, "minimal");
    add(trans_g, "induced_has_transitive_point");
    add(sens_f, "sensitive");
    add(thick_f, "thickly_sensitive");
    add(multi_f, "multi_sensitive");
    add(sens_g, "sensitive_induced");
    add(thick_g, "thickly_sensitive_induced");
    add(eq_f, "equicontinuous");
    add(synd_eq_f, "syndetically_equicontinuous");
    add(synd_eq_g, "syndetically_equicontinuous_induced");
    add(eventual_f, "eventually_sensitive");
    add(haus_f, "hausdorff_sensitive");
    add(haus_thick_f, "thickly_hausdorff_sensitive");
    add(haus_multi_f, "multi_hausdorff_sensitive");
    add(haus_g, "hausdorff_sensitive_induced");
    add(haus_thick_g, "thickly_hausdorff_sensitive_induced");
    add(top_eq_f, "topologically_equicontinuous");
    add(synd_top_eq_f, "syndetically_topologically_equicontinuous");

    // --- manifest agreement -------------------------------------------------
    auto grade_manifest = [&](const char* name, const ManifestEntry& expect, const Verdict& got) {
        if (expect.value == Tri::untested) return;
        bool want = expect.value == Tri::yes;
        std::string flag;
        if (got.outcome == Outcome::inconclusive) {
            flag = "INCONCLUSIVE";
        } else {
            flag = (want == (got.outcome == Outcome::evidence_for)) ? "CONSISTENT" : "VIOLATION";
        }
        rep.manifest_agreement.push_back(Json{{"property", name},
                                              {"expected", want},
                                              {"observed", outcome_name(got.outcome)},
                                              {"anchor", expect.anchor},
                                              {"flag", flag}});
    };
    grade_manifest("minimal", entry.manifest.minimal, min_f);
    grade_manifest("sensitive", entry.manifest.sensitive, sens_f);
    grade_manifest("equicontinuous", entry.manifest.equicontinuous, eq_f);
    grade_manifest("syndetically_equicontinuous", entry.manifest.syndetically_equicontinuous, synd_eq_f);
    grade_manifest("thickly_sensitive", entry.manifest.thickly_sensitive, thick_f);
    {
        const auto& expect = entry.manifest.induced_trans_empty;
        if (expect.value != Tri::untested) {
            bool want_empty = expect.value == Tri::yes;
            std::string flag;
            if (trans_g.outcome == Outcome::inconclusive) {
                flag = "INCONCLUSIVE";
            } else {
                bool observed_empty = trans_g.outcome == Outcome::evidence_against;
                flag = want_empty == observed_empty ? "CONSISTENT" : "VIOLATION";
            }
            rep.manifest_agreement.push_back(Json{{"property", "induced_trans_empty"},
                                                  {"expected", want_empty},
                                                  {"observed", outcome_name(trans_g.outcome)},
                                                  {"anchor", expect.anchor},
                                                  {"flag", flag}});
        }
    }

    // --- consistency matrix -------------------------------------------------
    auto minimal_state = detail_report::tri_to_state(entry.manifest.minimal.value);
    auto trans_state = detail_report::tri_to_state(entry.manifest.induced_trans_empty.value);
    bool trans_nonempty_known = trans_state.known;
    bool trans_nonempty = trans_state.known && !trans_state.value;
    bool perfect = !entry.manifest.has_isolated_points;

    auto horn_json = [](const Verdict& a, const char* an, const Verdict& b, const char* bn) {
        return Json{{an, outcome_name(a.outcome)}, {bn, outcome_name(b.outcome)}};
    };

    auto dichotomy_row = [&](const std::string& name, bool hyp_known, bool hyp_holds,
                             const std::string& hyp_desc, const Verdict& hornA, const char* nameA,
                             const Verdict& hornB, const char* nameB) {
        ConsistencyRow row;
        row.name = name;
        row.hypothesis = hyp_desc;
        row.horns = horn_json(hornA, nameA, hornB, nameB);
        bool a_for = hornA.outcome == Outcome::evidence_for;
        bool b_for = hornB.outcome == Outcome::evidence_for;
        bool a_against = hornA.outcome == Outcome::evidence_against;
        bool b_against = hornB.outcome == Outcome::evidence_against;
        if (!hyp_known) {
            row.hypothesis_status = "undecided";
            row.flag = "INFO";
            row.note = "hypothesis not settled by the manifest";
        } else if (!hyp_holds) {
            row.hypothesis_status = "fails";
            row.flag = "INFO";
            if (a_against && b_against) {
                row.note = "hypothesis fails; neither horn holds";
            } else if (a_for || b_for) {
                row.note = "hypothesis fails; a horn holds anyway";
            } else {
                row.note = "hypothesis fails";
            }
        } else {
            row.hypothesis_status = "holds";
            if (a_for || b_for) {
                row.flag = "CONSISTENT";
            } else if (a_against && b_against) {
                row.flag = "VIOLATION";
                row.note = "both horns refuted on samples";
            } else {
                row.flag = "INCONCLUSIVE";
            }
        }
        rep.rows.push_back(std::move(row));
    };

    auto equivalence_row = [&](const std::string& name, bool hyp_known, bool hyp_holds,
                               const std::string& hyp_desc, const Verdict& lhs, const char* ln,
                               const Verdict& rhs, const char* rn) {
        ConsistencyRow row;
        row.name = name;
        row.hypothesis = hyp_desc;
        row.horns = horn_json(lhs, ln, rhs, rn);
        bool l_dec = lhs.outcome != Outcome::inconclusive;
        bool r_dec = rhs.outcome != Outcome::inconclusive;
        if (!hyp_known) {
            row.hypothesis_status = "undecided";
            row.flag = "INFO";
        } else if (!hyp_holds) {
            row.hypothesis_status = "fails";
            row.flag = "INFO";
            row.note = "hypothesis fails; outcomes reported for information";
        } else {
            row.hypothesis_status = "holds";
            if (!l_dec || !r_dec) {
                row.flag = "INCONCLUSIVE";
            } else {
                row.flag = lhs.outcome == rhs.outcome ? "CONSISTENT" : "VIOLATION";
            }
        }
        rep.rows.push_back(std::move(row));
    };

    bool min_hyp_known = minimal_state.known && trans_nonempty_known;
    bool min_hyp = minimal_state.value && trans_nonempty && perfect;

    dichotomy_row("sensitive-or-equicontinuous", min_hyp_known,
                  min_hyp, "minimal, induced transitive point exists, no isolated points",
                  sens_f, "sensitive", eq_f, "equicontinuous");
    dichotomy_row("thick-sensitive-or-syndetically-equicontinuous", min_hyp_known, min_hyp,
                  "minimal, induced transitive point exists, no isolated points",
                  thick_f, "thickly_sensitive", synd_eq_f, "syndetically_equicontinuous");
    dichotomy_row("equicontinuous-or-eventually-sensitive", trans_nonempty_known,
                  trans_nonempty && perfect, "induced transitive point exists, no isolated points",
                  eq_f, "equicontinuous", eventual_f, "eventually_sensitive");
    dichotomy_row("multi-sensitive-or-syndetically-equicontinuous", min_hyp_known, min_hyp,
                  "minimal, induced transitive point exists, no isolated points",
                  multi_f, "multi_sensitive", synd_eq_f, "syndetically_equicontinuous");
    dichotomy_row("topologically-equicontinuous-or-hausdorff-sensitive", min_hyp_known, min_hyp,
                  "minimal, induced transitive point exists, no isolated points",
                  top_eq_f, "topologically_equicontinuous", haus_f, "hausdorff_sensitive");
    dichotomy_row("syndetically-topologically-equicontinuous-or-thickly-hausdorff-sensitive",
                  min_hyp_known, min_hyp,
                  "minimal, induced transitive point exists, no isolated points",
                  synd_top_eq_f, "syndetically_topologically_equicontinuous", haus_thick_f,
                  "thickly_hausdorff_sensitive");

    equivalence_row("induced-syndetic-equicontinuity-equivalence", true, true,
                    "compact state space", synd_eq_f, "system", synd_eq_g, "induced");
    equivalence_row("induced-thick-sensitivity-equivalence", true, true, "compact state space",
                    thick_f, "system", thick_g, "induced");
    equivalence_row("thick-multi-sensitivity-equivalence", trans_nonempty_known,
                    trans_nonempty, "induced transitive point exists",
                    thick_f, "thick", multi_f, "multi");
    equivalence_row("induced-hausdorff-sensitivity-equivalence", true, true, "none",
                    haus_f, "system", haus_g, "induced");
    equivalence_row("induced-thick-hausdorff-sensitivity-equivalence", true, true, "none",
                    haus_thick_f, "system", haus_thick_g, "induced");
    equivalence_row("thick-multi-hausdorff-sensitivity-equivalence", trans_nonempty_known,
                    trans_nonempty, "induced transitive point exists",
                    haus_thick_f, "thick", haus_multi_f, "multi");

    // Transitive-point comparison (exact at isolated atoms, sampled elsewhere).
    {
        ConsistencyRow row;
        row.name = "transitive-points-equality";
        row.hypothesis = "induced transitive point exists, no isolated points";
        Verdict trans_f_v = transitivity_estimate(f, P);
        rep.verdicts["has_transitive_point"] = detail_report::verdict_json(trans_f_v);
        row.horns = Json{{"system", outcome_name(trans_f_v.outcome)},
                         {"induced", outcome_name(trans_g.outcome)}};
        if (!trans_nonempty_known) {
            row.hypothesis_status = "undecided";
            row.flag = "INFO";
        } else if (!(trans_nonempty && perfect)) {
            row.hypothesis_status = "fails";
            row.flag = "INFO";
            row.note = "hypothesis fails; outcomes reported for information";
        } else {
            row.hypothesis_status = "holds";
            bool l_dec = trans_f_v.outcome != Outcome::inconclusive;
            bool r_dec = trans_g.outcome != Outcome::inconclusive;
            row.flag = (!l_dec || !r_dec)
                           ? "INCONCLUSIVE"
                           : (trans_f_v.outcome == trans_g.outcome ? "CONSISTENT" : "VIOLATION");
        }
        rep.rows.push_back(std::move(row));
    }

    return rep;
}

} // namespace orbitsense
