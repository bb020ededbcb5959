#pragma once

// Event-driven simulation of the continuous-time Markov chain. Waiting times
// are total-rate exponentials (Gillespie direct method); there is no time
// discretization and no rejection against a dominating rate.
//
// Two exact samplers realize the same state-trajectory law:
//
//   PlayerCentric    - the event is a firing player: an occupied site is
//                      selected proportionally to 1 + phi, dies with
//                      probability 1/(1 + phi), otherwise sends a child to a
//                      uniform neighbor. Births onto occupied targets
//                      coalesce (the event is consumed, nothing changes).
//   TransitionDirect - the event is a state change: deaths at rate 1 per
//                      occupied site, fills at rate psi(y) per empty site.
//                      Coalescences never occur as events. Required when
//                      phi is astronomically large (e.g. payoff >> 1), where
//                      the player-centric event stream is almost entirely
//                      no-ops.
//
// Identical (seed, replicate, params, initial state, mode) reproduce the
// trajectory bit-for-bit. Draw order per event, PlayerCentric: waiting time,
// site, death-vs-birth, target index. TransitionDirect: waiting time, site.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "dcp/configuration.hpp"
#include "dcp/errors.hpp"
#include "dcp/params.hpp"
#include "dcp/rng.hpp"
#include "dcp/torus.hpp"
#include "dcp/weighted_index.hpp"

namespace dcp {

enum class EventMode { PlayerCentric, TransitionDirect };

inline const char* to_string(EventMode m) {
    return m == EventMode::PlayerCentric ? "player-centric" : "transition-direct";
}

// Rates become numerically hostile to player-centric sampling long before
// this; the auto rule just has to pick a side deterministically.
inline EventMode resolve_mode(const Params& p) {
    return p.max_birth_rate() > 1e6 ? EventMode::TransitionDirect
                                    : EventMode::PlayerCentric;
}

struct StopRule {
    std::optional<double> horizon;
    bool stop_on_extinction = true;
    std::optional<std::int64_t> population_cap;
    std::optional<int> escape_radius;  // wrapped L-infinity distance from origin

    void validate() const {
        if (!horizon && !stop_on_extinction && !population_cap && !escape_radius)
            throw DomainError("stop rule: no stopping condition enabled");
        if (horizon && *horizon < 0.0) throw DomainError("stop rule: negative horizon");
    }

    static StopRule until(double t) {
        StopRule s;
        s.horizon = t;
        return s;
    }
};

enum class StopReason { Extinct, Horizon, Escaped, Capped };

inline const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::Extinct: return "extinct";
        case StopReason::Horizon: return "horizon";
        case StopReason::Escaped: return "escaped";
        case StopReason::Capped: return "capped";
    }
    return "?";
}

struct RunTallies {
    std::uint64_t births = 0;
    std::uint64_t deaths = 0;
    std::uint64_t coalescences = 0;  // no-op events: occupied or disallowed targets

    std::uint64_t total() const { return births + deaths + coalescences; }
};

struct RunOutcome {
    StopReason reason = StopReason::Horizon;
    double final_time = 0.0;
    std::optional<double> extinction_time;
    std::int64_t max_population = 0;
    std::int64_t ever_occupied_count = 0;
    std::uint64_t event_count = 0;
    RunTallies tallies;
};

struct EventRecord {
    enum class Kind { Birth, Death, Coalescence };
    Kind kind = Kind::Death;
    Site site = kOutside;    // the site that changed (or was targeted, for coalescence)
    Site parent = kOutside;  // firing site for player-centric births/coalescences
    double time = 0.0;
};

// Weighted index over state-changing transitions: weight 1 for each occupied
// site (death), psi for each empty birth-allowed site (fill). Weights are
// pure functions of the local configuration, recomputed over the radius-2
// ball around each flip.
class TransitionIndex {
public:
    TransitionIndex(const Configuration& config, const std::vector<std::uint8_t>* allowed)
        : config_(&config), allowed_(allowed) {
        index_.reset(static_cast<std::size_t>(config.geometry().num_sites()));
        rebuild();
    }

    double total() const { return index_.total(); }

    Site sample(double r) const { return static_cast<Site>(index_.sample(r)); }

    void on_flip(Site s) {
        const auto& geo = config_->geometry();
        refresh(s);
        for (int j = 0; j < geo.degree(); ++j) {
            const Site y = geo.neighbor(s, j);
            if (y == kOutside) continue;
            refresh(y);
            for (int i = 0; i < geo.degree(); ++i) {
                const Site z = geo.neighbor(y, i);
                if (z != kOutside && z != s) refresh(z);
            }
        }
    }

    void rebuild() {
        const Site n = config_->geometry().num_sites();
        std::vector<double> w(static_cast<std::size_t>(n));
        for (Site s = 0; s < n; ++s) w[static_cast<std::size_t>(s)] = weight(s);
        index_.assign(w);
    }

    double weight(Site s) const {
        if (config_->occupied(s)) return 1.0;
        if (allowed_ && !(*allowed_)[static_cast<std::size_t>(s)]) return 0.0;
        return config_->fill_rate_unchecked(s);
    }

private:
    void refresh(Site s) { index_.set(static_cast<std::size_t>(s), weight(s)); }

    const Configuration* config_;
    const std::vector<std::uint8_t>* allowed_;
    WeightedIndex index_;
};

class SimState {
public:
    SimState(const Params& params, const TorusGeometry& geo,
             const std::vector<Site>& initially_occupied, std::uint64_t seed,
             std::uint64_t replicate_id = 0,
             EventMode mode = EventMode::PlayerCentric)
        : config_(params, geo, initially_occupied),
          rng_(seed, replicate_id),
          mode_(mode) {}

    const Params& params() const { return config_.params(); }
    const TorusGeometry& geometry() const { return config_.geometry(); }
    Configuration& config() { return config_; }
    const Configuration& config() const { return config_; }
    RngStream& rng() { return rng_; }
    EventMode mode() const { return mode_; }
    double time() const { return time_; }
    std::uint64_t event_count() const { return event_count_; }
    const RunTallies& tallies() const { return tallies_; }

    // Suppress births outside `allowed` (e.g. the Lambda+ window of the
    // doubling construction). Suppressed events are consumed as no-ops in
    // player-centric mode and excluded from fill rates in transition mode.
    void restrict_births_to(const std::vector<Site>& allowed) {
        birth_window_.assign(static_cast<std::size_t>(geometry().num_sites()), 0);
        for (Site s : allowed) {
            geometry().check_site(s);
            birth_window_[static_cast<std::size_t>(s)] = 1;
        }
    }

    bool birth_allowed(Site s) const {
        return birth_window_.empty() || birth_window_[static_cast<std::size_t>(s)] != 0;
    }

    const std::vector<std::uint8_t>* birth_window() const {
        return birth_window_.empty() ? nullptr : &birth_window_;
    }

    // One player-centric event (see file comment for draw order).
    EventRecord step() {
        const double total = config_.total_rate();
        if (config_.occupied_count() == 0 || total <= 0.0)
            throw AbsorbingStateError("step: total rate is zero");
        return fire_player_event_at(time_ + rng_.next_exponential(total));
    }

    // One transition-direct event against the supplied index.
    EventRecord step_transition(TransitionIndex& tindex) {
        const double total = tindex.total();
        if (total <= 0.0) throw AbsorbingStateError("step: total rate is zero");
        return fire_transition_at(time_ + rng_.next_exponential(total), tindex);
    }

    // Event bodies with the waiting time already drawn; run() uses these so
    // recorder samples can be emitted between the clock and the event.
    EventRecord fire_player_event_at(double t) {
        time_ = t;
        ++event_count_;
        const double total = config_.total_rate();
        const Site site = config_.sample_site(rng_.next_double() * total);
        const double phi = config_.cached_phi(site);
        EventRecord ev;
        ev.time = time_;
        if (rng_.next_double() * (1.0 + phi) < 1.0) {
            config_.apply_death(site);
            ev.kind = EventRecord::Kind::Death;
            ev.site = site;
            ++tallies_.deaths;
            return ev;
        }
        const int j = static_cast<int>(rng_.next_index(static_cast<std::uint64_t>(geometry().degree())));
        const Site target = geometry().neighbor(site, j);
        ev.parent = site;
        ev.site = target;
        if (target == kOutside || !birth_allowed(target)) {
            ev.kind = EventRecord::Kind::Coalescence;
            ++tallies_.coalescences;
            return ev;
        }
        const ChangeSet ch = config_.apply_birth(site, target);
        if (ch.no_change()) {
            ev.kind = EventRecord::Kind::Coalescence;
            ++tallies_.coalescences;
        } else {
            ev.kind = EventRecord::Kind::Birth;
            ++tallies_.births;
        }
        return ev;
    }

    EventRecord fire_transition_at(double t, TransitionIndex& tindex) {
        time_ = t;
        ++event_count_;
        const Site site = tindex.sample(rng_.next_double() * tindex.total());
        EventRecord ev;
        ev.time = time_;
        ev.site = site;
        if (config_.occupied(site)) {
            config_.apply_death(site);
            ev.kind = EventRecord::Kind::Death;
            ++tallies_.deaths;
        } else {
            config_.force_occupy(site);
            ev.kind = EventRecord::Kind::Birth;
            ++tallies_.births;
        }
        tindex.on_flip(site);
        return ev;
    }

    void rebuild_caches() { config_.rebuild(); }

private:
    Configuration config_;
    RngStream rng_;
    EventMode mode_;
    std::vector<std::uint8_t> birth_window_;
    double time_ = 0.0;
    std::uint64_t event_count_ = 0;
    RunTallies tallies_;
};

// Configuration snapshots on a fixed time grid. The callback sees the state
// as of the grid time (no events lie between the grid point and the state).
struct Recorder {
    std::vector<double> times;  // ascending
    std::function<void(const SimState&, double, const RunTallies&)> on_sample;
};

namespace detail {
constexpr std::uint64_t kRebuildInterval = 1u << 20;
}

inline RunOutcome run(SimState& state, const StopRule& stop, Recorder* recorder = nullptr) {
    stop.validate();
    const auto& geo = state.geometry();
    RunOutcome out;
    out.max_population = state.config().occupied_count();

    std::vector<std::uint8_t> ever(static_cast<std::size_t>(geo.num_sites()), 0);
    std::int64_t ever_count = 0;
    for (Site s = 0; s < geo.num_sites(); ++s)
        if (state.config().occupied(s)) {
            ever[static_cast<std::size_t>(s)] = 1;
            ++ever_count;
        }

    auto escaped = [&](Site s) {
        return stop.escape_radius && geo.linf_from_origin(s) >= *stop.escape_radius;
    };

    bool escape_flag = false;
    if (stop.escape_radius)
        for (Site s = 0; s < geo.num_sites() && !escape_flag; ++s)
            if (state.config().occupied(s) && escaped(s)) escape_flag = true;

    std::size_t next_sample = 0;
    if (recorder)
        while (next_sample < recorder->times.size() &&
               recorder->times[next_sample] < state.time())
            ++next_sample;
    auto emit_until = [&](double t) {
        if (!recorder) return;
        while (next_sample < recorder->times.size() && recorder->times[next_sample] <= t) {
            recorder->on_sample(state, recorder->times[next_sample], state.tallies());
            ++next_sample;
        }
    };

    std::optional<TransitionIndex> tindex;
    if (state.mode() == EventMode::TransitionDirect)
        tindex.emplace(state.config(), state.birth_window());

    std::uint64_t since_rebuild = 0;
    const double horizon = stop.horizon ? *stop.horizon
                                        : std::numeric_limits<double>::infinity();

    auto finish = [&](StopReason reason, double t) {
        emit_until(t);
        out.reason = reason;
        out.final_time = t;
        out.event_count = state.tallies().total();
        out.tallies = state.tallies();
        out.ever_occupied_count = ever_count;
        return out;
    };

    while (true) {
        const std::int64_t pop = state.config().occupied_count();
        if (pop == 0) {
            if (!out.extinction_time) out.extinction_time = state.time();
            if (stop.stop_on_extinction) return finish(StopReason::Extinct, state.time());
        }
        if (stop.population_cap && pop >= *stop.population_cap)
            return finish(StopReason::Capped, state.time());
        if (escape_flag) return finish(StopReason::Escaped, state.time());
        if (state.time() >= horizon) return finish(StopReason::Horizon, horizon);

        const double total = tindex ? tindex->total() : state.config().total_rate();
        if (total <= 0.0) {
            // Nothing can ever happen again; only the horizon can stop us.
            if (stop.horizon) return finish(StopReason::Horizon, horizon);
            throw AbsorbingStateError("run: absorbing state with no horizon");
        }

        // Peek the event time so grid samples in between are emitted first.
        const double wait = state.rng().next_exponential(total);
        const double t_next = state.time() + wait;
        emit_until(std::min(t_next, horizon));
        if (t_next >= horizon) return finish(StopReason::Horizon, horizon);

        EventRecord ev = tindex ? state.fire_transition_at(t_next, *tindex)
                                : state.fire_player_event_at(t_next);
        if (ev.kind == EventRecord::Kind::Birth) {
            const auto i = static_cast<std::size_t>(ev.site);
            if (!ever[i]) {
                ever[i] = 1;
                ++ever_count;
            }
            out.max_population = std::max(out.max_population, state.config().occupied_count());
            if (escaped(ev.site)) escape_flag = true;
        }
        if (++since_rebuild >= detail::kRebuildInterval) {
            since_rebuild = 0;
            state.rebuild_caches();
            if (tindex) tindex->rebuild();
        }
    }
}

}  // namespace dcp
