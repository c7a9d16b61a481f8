#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "detect.hpp"
#include "version.hpp"

namespace orbitsense {

/*
 * Experiment configuration. Text-based and schema-versioned; parsing is
 * strict (unknown fields are rejected with their path) and serialization
 * round-trips losslessly.
 */
struct DetectorSpec {
    std::string type;
    std::string mode;      // for sensitivity / hausdorff
    std::string start;     // serialized point, for visit/omega detectors
    std::string under = "system"; // system | induced | both
    std::vector<std::pair<std::string, double>> targets; // (point, radius)
    Json overrides = Json::object(); // DetectorParams overrides
};

struct ExperimentConfig {
    int schema_version = 1;
    std::string system_id = "E2";
    std::int64_t horizon_hint = 100000;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string output_dir = ".";
    DetectorParams params;
    std::vector<DetectorSpec> detectors;
};

namespace detail_config {

inline void reject_unknown(const Json& j, const std::set<std::string>& known,
                           const std::string& path) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) {
            throw ConfigError("unknown field " + path + "." + it.key());
        }
    }
}

inline void apply_params(DetectorParams& p, const Json& j, const std::string& path) {
    reject_unknown(j, {"horizon", "pair_samples", "net_eps", "eps_D", "eps_E", "basis_min_j",
                       "basis_max_j", "syndetic_M", "thick_k", "multi_m", "start_samples",
                       "eventual_cap", "cover_eps", "containment_margin", "seed", "workers"},
                   path);
    p.horizon = j.value("horizon", p.horizon);
    p.pair_samples = j.value("pair_samples", p.pair_samples);
    p.net_eps = j.value("net_eps", p.net_eps);
    p.eps_D = j.value("eps_D", p.eps_D);
    p.eps_E = j.value("eps_E", p.eps_E);
    p.basis_min_j = j.value("basis_min_j", p.basis_min_j);
    p.basis_max_j = j.value("basis_max_j", p.basis_max_j);
    p.syndetic_M = j.value("syndetic_M", p.syndetic_M);
    p.thick_k = j.value("thick_k", p.thick_k);
    p.multi_m = j.value("multi_m", p.multi_m);
    p.start_samples = j.value("start_samples", p.start_samples);
    p.eventual_cap = j.value("eventual_cap", p.eventual_cap);
    p.cover_eps = j.value("cover_eps", p.cover_eps);
    p.containment_margin = j.value("containment_margin", p.containment_margin);
    p.seed = j.value("seed", p.seed);
    p.workers = j.value("workers", p.workers);
}

} // namespace detail_config

inline Json config_to_json(const ExperimentConfig& c) {
    Json dets = Json::array();
    for (const auto& d : c.detectors) {
        Json jd{{"type", d.type}};
        if (!d.mode.empty()) jd["mode"] = d.mode;
        if (!d.start.empty()) jd["start"] = d.start;
        if (d.under != "system") jd["under"] = d.under;
        if (!d.targets.empty()) {
            Json t = Json::array();
            for (const auto& [pt, r] : d.targets) t.push_back(Json{{"point", pt}, {"radius", r}});
            jd["targets"] = t;
        }
        if (!d.overrides.empty()) jd["params"] = d.overrides;
        dets.push_back(std::move(jd));
    }
    return Json{{"schema_version", c.schema_version},
                {"system", Json{{"id", c.system_id}, {"horizon_hint", c.horizon_hint}}},
                {"seed", c.seed},
                {"workers", c.workers},
                {"output_dir", c.output_dir},
                {"params", c.params.echo()},
                {"detectors", dets}};
}

inline ExperimentConfig config_from_json(const Json& j) {
    detail_config::reject_unknown(
        j, {"schema_version", "system", "seed", "workers", "output_dir", "params", "detectors"},
        "config");
    ExperimentConfig c;
    c.schema_version = j.value("schema_version", 1);
    if (c.schema_version != 1) throw ConfigError("unsupported schema_version");
    if (j.contains("system")) {
        detail_config::reject_unknown(j.at("system"), {"id", "horizon_hint"}, "config.system");
        c.system_id = j.at("system").value("id", c.system_id);
        c.horizon_hint = j.at("system").value("horizon_hint", c.horizon_hint);
    }
    c.seed = j.value("seed", c.seed);
    c.workers = j.value("workers", c.workers);
    c.output_dir = j.value("output_dir", c.output_dir);
    c.params.seed = c.seed;
    c.params.workers = c.workers;
    if (j.contains("params")) detail_config::apply_params(c.params, j.at("params"), "config.params");
    if (j.contains("detectors")) {
        for (std::size_t i = 0; i < j.at("detectors").size(); ++i) {
            const Json& jd = j.at("detectors")[i];
            std::string path = "config.detectors[" + std::to_string(i) + "]";
            detail_config::reject_unknown(jd, {"type", "mode", "start", "under", "targets", "params"},
                                          path);
            DetectorSpec d;
            d.type = jd.value("type", "");
            if (d.type.empty()) throw ConfigError(path + ".type missing");
            d.mode = jd.value("mode", "");
            d.start = jd.value("start", "");
            d.under = jd.value("under", "system");
            if (jd.contains("targets")) {
                for (const auto& t : jd.at("targets")) {
                    detail_config::reject_unknown(t, {"point", "radius"}, path + ".targets[]");
                    d.targets.emplace_back(t.at("point").get<std::string>(),
                                           t.at("radius").get<double>());
                }
            }
            if (jd.contains("params")) {
                DetectorParams probe = c.params; // validates field names
                detail_config::apply_params(probe, jd.at("params"), path + ".params");
                d.overrides = jd.at("params");
            }
            c.detectors.push_back(std::move(d));
        }
    }
    return c;
}

// Strip fields that legitimately differ across reruns (timing, scheduling).
inline Json normalize_report(Json report) {
    report.erase("timing");
    if (report.contains("config") && report["config"].contains("workers")) {
        report["config"].erase("workers");
    }
    if (report.contains("config") && report["config"].contains("params") &&
        report["config"]["params"].contains("workers")) {
        report["config"]["params"].erase("workers");
    }
    if (report.contains("rows")) {
        for (auto& row : report["rows"]) row.erase("ms");
    }
    return report;
}

namespace detail_runner {

inline DetectorParams effective_params(const ExperimentConfig& c, const DetectorSpec& d) {
    DetectorParams p = c.params;
    if (!d.overrides.empty()) detail_config::apply_params(p, d.overrides, "override");
    p.workers = c.workers;
    return p;
}

inline Json verdict_row(const DetectorSpec& d, const Verdict& v) {
    Json row{{"detector", d.type}};
    if (!d.mode.empty()) row["mode"] = d.mode;
    if (d.under != "system") row["under"] = d.under;
    row["property"] = v.property;
    row["outcome"] = outcome_name(v.outcome);
    row["details"] = v.details;
    return row;
}

inline Verdict run_visit_times(const CorpusEntry& entry, const PeriodicSystem& sys,
                               const DetectorSpec& d, const DetectorParams& P) {
    const auto& space = entry.space;
    Point start = space.parse(d.start);
    std::vector<Ball> targets;
    Json labels = Json::array();
    if (!d.targets.empty()) {
        for (const auto& [pt, r] : d.targets) {
            targets.push_back(Ball{space.parse(pt), r});
            labels.push_back(pt);
        }
    } else {
        for (auto& c : space.epsilon_net(P.net_eps, P.seed)) {
            labels.push_back(space.serialize(c));
            targets.push_back(Ball{c, P.net_eps});
        }
    }
    auto hits = visit_times(sys, start, targets, P.horizon);
    Verdict v;
    v.property = "visit-times";
    v.details["start"] = d.start;
    Json table = Json::array();
    bool all_hit = true;
    for (std::size_t t = 0; t < hits.size(); ++t) {
        table.push_back(Json{{"target", labels[t]}, {"first_hit", hits[t]}});
        all_hit &= hits[t] >= 0;
    }
    v.details["first_hit_table"] = std::move(table);
    v.outcome = all_hit ? Outcome::evidence_for : Outcome::evidence_against;
    return v;
}

} // namespace detail_runner

struct ExperimentResult {
    Json report;
    bool any_violation = false;
};

/*
 * Run every detector row of the config against the chosen corpus system;
 * detector errors are embedded in their row, never aborting the run.
 * Deterministic given the seed: worker count and wall time never change
 * verdicts or certificates.
 */
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    CorpusParams cp;
    cp.horizon_hint = cfg.horizon_hint;
    cp.seed = cfg.seed;
    CorpusEntry entry = build_example(cfg.system_id, cp);
    PeriodicSystem ind = induced(entry.system);

    ExperimentResult result;
    Json& report = result.report;
    report["schema_version"] = 1;
    report["versions"] = Json{{"orbitsense", ORBITSENSE_VERSION}};
    report["config"] = config_to_json(cfg);
    report["system"] = Json{{"id", entry.id},
                            {"summary", entry.summary},
                            {"space", space_kind_name(entry.space.kind())},
                            {"period", entry.system.period()},
                            {"manifest", manifest_json(entry.manifest)}};
    report["rows"] = Json::array();

    for (const auto& d : cfg.detectors) {
        DetectorParams P = detail_runner::effective_params(cfg, d);
        std::vector<std::pair<std::string, const PeriodicSystem*>> runs;
        if (d.under == "system" || d.under == "both") runs.emplace_back("system", &entry.system);
        if (d.under == "induced" || d.under == "both") runs.emplace_back("induced", &ind);
        for (auto& [tag, sys] : runs) {
            auto r0 = std::chrono::steady_clock::now();
            Json row;
            try {
                Verdict v;
                if (d.type == "sensitivity") {
                    v = sensitivity_verdict(*sys, d.mode.empty() ? "plain" : d.mode, P);
                } else if (d.type == "hausdorff_sensitivity") {
                    v = hausdorff_sensitivity_verdict(*sys, d.mode.empty() ? "plain" : d.mode, P);
                } else if (d.type == "equicontinuity") {
                    v = detail_report::aggregate_points(*sys, P, "equicontinuity", [&](const Point& x) {
                        return equicontinuity_at(*sys, x, P.eps_E, P);
                    });
                } else if (d.type == "syndetic_equicontinuity") {
                    v = detail_report::aggregate_points(
                        *sys, P, "syndetic-equicontinuity",
                        [&](const Point& x) { return syndetic_equicontinuity_at(*sys, x, P.eps_E, P); });
                } else if (d.type == "eventual_sensitivity") {
                    v = eventual_sensitivity_check(*sys, P, P.eps_D);
                } else if (d.type == "eqp") {
                    v = detail_report::aggregate_pairs(
                        *sys, P, "topological-equicontinuity", std::ldexp(1.0, -4),
                        [&](const Point& x, const Point& y, const Ball& O) {
                            return eqp_check(*sys, x, y, O, P);
                        });
                } else if (d.type == "seqp") {
                    v = detail_report::aggregate_pairs(
                        *sys, P, "syndetic-topological-equicontinuity", std::ldexp(1.0, -4),
                        [&](const Point& x, const Point& y, const Ball& O) {
                            return seqp_check(*sys, x, y, O, P);
                        });
                } else if (d.type == "minimality") {
                    v = minimality_estimate(*sys, P);
                } else if (d.type == "transitivity") {
                    v = transitivity_estimate(*sys, P);
                } else if (d.type == "omega_nonwandering") {
                    Point x = d.start.empty() ? entry.space.sample_points(1, P.seed)[0]
                                              : entry.space.parse(d.start);
                    v = omega_nonwandering_estimate(*sys, x, P);
                } else if (d.type == "visit_times") {
                    v = detail_runner::run_visit_times(entry, *sys, d, P);
                } else if (d.type == "dichotomy_report") {
                    DichotomyReport rep = dichotomy_report(entry, P);
                    report["consistency"] = rep.to_json();
                    result.any_violation |= rep.any_violation();
                    v.property = "dichotomy-report";
                    v.outcome = rep.any_violation() ? Outcome::evidence_against : Outcome::evidence_for;
                    v.details["note"] = "evidence-for means no VIOLATION row";
                    if (tag == "induced") continue; // the report already covers both
                } else {
                    throw ConfigError("unknown detector type: " + d.type);
                }
                row = detail_runner::verdict_row(d, v);
                row["under"] = tag;
            } catch (const Error& e) {
                row = Json{{"detector", d.type}, {"under", tag}, {"error", e.what()}};
            }
            auto r1 = std::chrono::steady_clock::now();
            row["ms"] = std::chrono::duration<double, std::milli>(r1 - r0).count();
            report["rows"].push_back(std::move(row));
        }
    }

    auto t1 = std::chrono::steady_clock::now();
    report["timing"] = Json{{"wall_ms", std::chrono::duration<double, std::milli>(t1 - t0).count()}};
    return result;
}

/*
 * Plot data extraction: plain tabular text with a header row and stable
 * column order. Kinds: gaps, runs, separation, first-hit.
 */
inline std::string emit_plot_data(const Json& report, const std::string& kind) {
    std::string out;
    auto find_in_rows = [&](const std::function<bool(const Json&, std::string&)>& probe) {
        if (!report.contains("rows")) return false;
        for (const auto& row : report.at("rows")) {
            if (!row.contains("details")) continue;
            if (probe(row.at("details"), out)) return true;
        }
        return false;
    };

    if (kind == "gaps" || kind == "runs") {
        std::string key = kind == "gaps" ? "gap_histogram" : "run_histogram";
        std::string header = kind == "gaps" ? "gap,count\n" : "run,count\n";
        bool ok = find_in_rows([&](const Json& det, std::string& o) {
            const Json* hist = nullptr;
            if (det.contains(key)) {
                hist = &det.at(key);
            } else if (det.contains("regions")) {
                for (const auto& r : det.at("regions")) {
                    if (r.contains(key) && !r.at(key).empty()) {
                        hist = &r.at(key);
                        break;
                    }
                }
            }
            if (!hist || hist->empty()) return false;
            o = header;
            for (auto it = hist->begin(); it != hist->end(); ++it) {
                o += it.key() + "," + it.value().dump() + "\n";
            }
            return true;
        });
        if (!ok) throw MissingSeriesError("report contains no " + kind + " histogram");
        return out;
    }
    if (kind == "separation") {
        bool ok = find_in_rows([&](const Json& det, std::string& o) {
            const Json* series = nullptr;
            if (det.contains("separation_series")) {
                series = &det.at("separation_series");
            } else if (det.contains("regions")) {
                for (const auto& r : det.at("regions")) {
                    if (r.contains("separation_series") && !r.at("separation_series").empty()) {
                        series = &r.at("separation_series");
                        break;
                    }
                }
            }
            if (!series || series->empty()) return false;
            o = "n,distance\n";
            for (const auto& pt : *series) {
                o += pt.at(0).dump() + "," + pt.at(1).dump() + "\n";
            }
            return true;
        });
        if (!ok) throw MissingSeriesError("report contains no separation series");
        return out;
    }
    if (kind == "first-hit") {
        bool ok = find_in_rows([&](const Json& det, std::string& o) {
            if (!det.contains("first_hit_table") || det.at("first_hit_table").empty()) return false;
            o = "target_index,first_hit\n";
            int i = 0;
            for (const auto& r : det.at("first_hit_table")) {
                o += std::to_string(i++) + "," + r.at("first_hit").dump() + "\n";
            }
            return true;
        });
        if (!ok) throw MissingSeriesError("report contains no first-hit table");
        return out;
    }
    throw ConfigError("unknown plot kind: " + kind);
}

// Write the report and its CSV sidecars under the configured directory.
inline std::filesystem::path write_experiment_outputs(const ExperimentConfig& cfg,
                                                      const Json& report) {
    namespace fs = std::filesystem;
    fs::path dir = cfg.output_dir.empty() ? fs::path(".") : fs::path(cfg.output_dir);
    fs::create_directories(dir);
    fs::path report_path = dir / "report.json";
    {
        std::ofstream f(report_path);
        f << report.dump(2) << "\n";
    }
    for (const char* kind : {"gaps", "runs", "separation", "first-hit"}) {
        try {
            std::string data = emit_plot_data(report, kind);
            std::ofstream f(dir / (std::string(kind) + ".csv"));
            f << data;
        } catch (const MissingSeriesError&) {
            // nothing of that kind in this run
        }
    }
    return report_path;
}

} // namespace orbitsense
