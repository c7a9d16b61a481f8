#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "point.hpp"
#include "space.hpp"

namespace orbitsense {

/*
 * A map handle is a pure function of the point; time dependence lives
 * entirely in the position within the maps list.
 */
struct MapHandle {
    std::string name;
    std::function<Point(const Point&)> fn;

    Point operator()(const Point& p) const { return fn(p); }
};

inline std::int64_t max_orbit_horizon() {
    static const std::int64_t cap = [] {
        if (const char* env = std::getenv("ORBITSENSE_MAX_HORIZON")) {
            long long v = std::atoll(env);
            if (v > 0) return static_cast<std::int64_t>(v);
        }
        return std::int64_t(10'000'000);
    }();
    return cap;
}

/*
 * Periodic non-autonomous system: maps applied cyclically, state at time n
 * is maps[(n-1) mod p] applied last. The induced autonomous system iterates
 * the full-period composition.
 */
class PeriodicSystem {
public:
    PeriodicSystem() = default;
    PeriodicSystem(StateSpace space, std::vector<MapHandle> maps, std::string id)
        : space_(std::move(space)), maps_(std::move(maps)), id_(std::move(id)) {
        if (maps_.empty()) throw ConstructionFailedError("a periodic system needs at least one map");
    }

    const StateSpace& space() const { return space_; }
    const std::string& id() const { return id_; }
    std::size_t period() const { return maps_.size(); }
    const MapHandle& map_at(std::size_t index1) const { return maps_[(index1 - 1) % maps_.size()]; }

    // One time step starting from time position `step` (0-based).
    Point apply_step(const Point& x, std::int64_t step) const {
        return maps_[static_cast<std::size_t>(step % static_cast<std::int64_t>(maps_.size()))](x);
    }

private:
    StateSpace space_;
    std::vector<MapHandle> maps_;
    std::string id_;
};

inline Point iterate(const PeriodicSystem& sys, const Point& x, std::int64_t n) {
    if (n < 0) throw Error("iterate needs n >= 0");
    if (n > max_orbit_horizon()) {
        throw HorizonTooLargeError("horizon " + std::to_string(n) + " beyond configured max");
    }
    Point cur = x;
    for (std::int64_t i = 0; i < n; ++i) cur = sys.apply_step(cur, i);
    return cur;
}

inline PeriodicSystem induced(const PeriodicSystem& sys) {
    auto p = sys.period();
    PeriodicSystem copy = sys;
    MapHandle g{
        "induced(" + sys.id() + ")",
        [copy](const Point& x) {
            Point cur = x;
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(copy.period()); ++i) {
                cur = copy.apply_step(cur, i);
            }
            return cur;
        }};
    (void)p;
    return PeriodicSystem(sys.space(), {std::move(g)}, sys.id() + ":induced");
}

// Handle computing the composition of k consecutive maps starting at f_i
// (1-based, cyclic).
inline MapHandle window_compose(const PeriodicSystem& sys, std::size_t i, std::size_t k) {
    if (i < 1) throw Error("window_compose needs i >= 1");
    PeriodicSystem copy = sys;
    return MapHandle{
        "window(" + std::to_string(i) + "," + std::to_string(k) + ")",
        [copy, i, k](const Point& x) {
            Point cur = x;
            for (std::size_t j = 0; j < k; ++j) {
                cur = copy.apply_step(cur, static_cast<std::int64_t>(i - 1 + j));
            }
            return cur;
        }};
}

struct OrbitSegment {
    Point start;
    std::int64_t horizon;
    std::vector<Point> states; // states[n] = state after n steps
};

inline OrbitSegment orbit_segment(const PeriodicSystem& sys, const Point& x, std::int64_t horizon) {
    if (horizon < 0) throw Error("orbit_segment needs N >= 0");
    if (horizon > max_orbit_horizon()) {
        throw HorizonTooLargeError("horizon " + std::to_string(horizon) + " beyond configured max");
    }
    OrbitSegment seg{x, horizon, {}};
    seg.states.reserve(static_cast<std::size_t>(horizon) + 1);
    seg.states.push_back(x);
    Point cur = x;
    for (std::int64_t n = 0; n < horizon; ++n) {
        cur = sys.apply_step(cur, n);
        seg.states.push_back(cur);
    }
    return seg;
}

// Streaming orbit: keeps only the current state, for long horizons.
class OrbitCursor {
public:
    OrbitCursor(const PeriodicSystem& sys, Point start)
        : sys_(&sys), current_(std::move(start)), step_(0) {}

    const Point& current() const { return current_; }
    std::int64_t step() const { return step_; }

    void advance() {
        current_ = sys_->apply_step(current_, step_);
        ++step_;
    }

private:
    const PeriodicSystem* sys_;
    Point current_;
    std::int64_t step_;
};

} // namespace orbitsense
