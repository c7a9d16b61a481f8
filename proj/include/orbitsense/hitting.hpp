#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace orbitsense {

enum class Verdict3 { holds, fails, inconclusive };

inline const char* verdict3_name(Verdict3 v) {
    switch (v) {
        case Verdict3::holds: return "holds";
        case Verdict3::fails: return "fails";
        case Verdict3::inconclusive: return "inconclusive";
    }
    return "?";
}

enum class HittingRole { separation, stability, cover_separation };

inline const char* hitting_role_name(HittingRole r) {
    switch (r) {
        case HittingRole::separation: return "separation";
        case HittingRole::stability: return "stability";
        case HittingRole::cover_separation: return "cover-separation";
    }
    return "?";
}

/*
 * Finite-horizon subset of {0..N} with per-member witnesses. Witness
 * payloads are kept by the detector layer; here only the arithmetic of the
 * member set matters.
 */
struct HittingSet {
    std::int64_t horizon = 0;
    std::vector<std::int64_t> members; // sorted, unique
    HittingRole role = HittingRole::separation;

    bool contains(std::int64_t n) const {
        return std::binary_search(members.begin(), members.end(), n);
    }
};

inline HittingSet complement_set(const HittingSet& s) {
    HittingSet out;
    out.horizon = s.horizon;
    out.role = s.role;
    std::size_t j = 0;
    for (std::int64_t n = 0; n <= s.horizon; ++n) {
        if (j < s.members.size() && s.members[j] == n) {
            ++j;
        } else {
            out.members.push_back(n);
        }
    }
    return out;
}

// Longest run of consecutive members.
inline std::int64_t max_run_length(const HittingSet& s) {
    std::int64_t best = 0, cur = 0;
    std::int64_t prev = -2;
    for (auto n : s.members) {
        cur = (n == prev + 1) ? cur + 1 : 1;
        best = std::max(best, cur);
        prev = n;
    }
    return best;
}

// Longest stretch of [0..N] containing no member (boundary stretches count).
inline std::int64_t max_empty_stretch(const HittingSet& s) {
    if (s.members.empty()) return s.horizon + 1;
    std::int64_t best = s.members.front(); // [0, first)
    for (std::size_t i = 0; i + 1 < s.members.size(); ++i) {
        best = std::max(best, s.members[i + 1] - s.members[i] - 1);
    }
    best = std::max(best, s.horizon - s.members.back());
    return best;
}

struct ClassifyResult {
    Verdict3 verdict = Verdict3::inconclusive;
    std::string mode;          // "syndetic" or "thick"
    std::int64_t bound = 0;    // the M or k tested
    std::int64_t measured = 0; // minimal consistent M / maximal witnessed k
    // Certificate: violating window start for syndetic failure, run start
    // for thick success; -1 when not applicable.
    std::int64_t certificate_at = -1;
    std::string note;
};

/*
 * Syndetic(M): every window {t..t+M} inside [0, N-M] meets the set. The
 * verdict degrades to inconclusive when the horizon is shorter than ten
 * times the bound, since such a window count is no evidence about N.
 */
inline ClassifyResult classify_syndetic(const HittingSet& s, std::int64_t M) {
    if (M < 1) throw Error("syndetic bound must be >= 1");
    ClassifyResult r;
    r.mode = "syndetic";
    r.bound = M;
    r.measured = std::max<std::int64_t>(1, max_empty_stretch(s));
    if (s.horizon < 10 * M) {
        r.verdict = Verdict3::inconclusive;
        r.note = "horizon below 10x bound";
        return r;
    }
    // A window of length M+1 missing the set is exactly an empty stretch
    // of length > M.
    if (max_empty_stretch(s) <= M) {
        r.verdict = Verdict3::holds;
    } else {
        r.verdict = Verdict3::fails;
        // locate a violating window start
        std::int64_t prev = -1;
        for (auto n : s.members) {
            if (n - prev - 1 > M) break;
            prev = n;
        }
        r.certificate_at = prev + 1;
    }
    return r;
}

// Thick(k): some run of k+1 consecutive members exists within the horizon.
inline ClassifyResult classify_thick(const HittingSet& s, std::int64_t k) {
    if (k < 1) throw Error("thick run bound must be >= 1");
    ClassifyResult r;
    r.mode = "thick";
    r.bound = k;
    r.measured = std::max<std::int64_t>(0, max_run_length(s) - 1);
    if (s.horizon < 10 * k) {
        r.verdict = Verdict3::inconclusive;
        r.note = "horizon below 10x bound";
        return r;
    }
    std::int64_t cur = 0, prev = -2;
    for (auto n : s.members) {
        cur = (n == prev + 1) ? cur + 1 : 1;
        prev = n;
        if (cur >= k + 1) {
            r.verdict = Verdict3::holds;
            r.certificate_at = n - k;
            return r;
        }
    }
    r.verdict = Verdict3::fails;
    return r;
}

// Bound-search forms: the minimal syndetic bound / maximal thick run
// consistent with the data, for trend reporting.
inline std::int64_t min_syndetic_bound(const HittingSet& s) {
    return std::max<std::int64_t>(1, max_empty_stretch(s));
}

inline std::int64_t max_thick_run(const HittingSet& s) {
    return std::max<std::int64_t>(0, max_run_length(s) - 1);
}

inline std::map<std::int64_t, std::int64_t> gap_histogram(const HittingSet& s) {
    std::map<std::int64_t, std::int64_t> h;
    for (std::size_t i = 0; i + 1 < s.members.size(); ++i) {
        ++h[s.members[i + 1] - s.members[i]];
    }
    return h;
}

inline std::map<std::int64_t, std::int64_t> run_histogram(const HittingSet& s) {
    std::map<std::int64_t, std::int64_t> h;
    std::int64_t cur = 0, prev = -2;
    for (auto n : s.members) {
        if (n == prev + 1) {
            ++cur;
        } else {
            if (cur > 0) ++h[cur];
            cur = 1;
        }
        prev = n;
    }
    if (cur > 0) ++h[cur];
    return h;
}

// CSV dump: members plus both histograms, one block per section.
inline void hitting_set_csv(const HittingSet& s, std::ostream& os) {
    os << "section,key,value\n";
    for (auto n : s.members) os << "member," << n << ",1\n";
    for (auto& [gap, count] : gap_histogram(s)) os << "gap," << gap << "," << count << "\n";
    for (auto& [run, count] : run_histogram(s)) os << "run," << run << "," << count << "\n";
}

} // namespace orbitsense
