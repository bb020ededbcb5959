#pragma once

// Joint construction of several processes on one randomness source.
//
// The shared graphical representation: every directed edge carries Poisson
// arrow times at a dominating rate D/2d with i.i.d. uniform marks, every site
// carries death-mark times at rate one. A process with birth table phi
// accepts an arrow u -> v (occupied tail, empty head) iff mark * D <= phi(u);
// death marks kill in every process occupying the site. Each marginal then
// evolves with its own exact law, while ordered parameters keep ordered
// configurations ordered pathwise. Arrow types i = 0..2d of the perturbation
// representation (rates lambda e^{i a/2d} / 2d) correspond to the mark
// thresholds: an arrow acts as type i exactly when the tail has i occupied
// neighbors and the mark clears lambda e^{i a/2d} / D.
//
// Two realizations:
//   EventStream   - the stream itself, event by event, including arrows that
//                   touch nothing. Direct transcription; feasible only when
//                   D is moderate. Also generates the typed streams used by
//                   the non-interacting comparison.
//   CoupledFamily - thinned to visible events: arrows are sampled through a
//                   per-edge weight equal to the largest rate any process
//                   would accept there, and the conditional mark is drawn on
//                   the accepted range. Same law of every visible event, no
//                   wasted work when D is astronomical.
//
// Containment claims are verified on every event, never on samples.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dcp/errors.hpp"
#include "dcp/params.hpp"
#include "dcp/rng.hpp"
#include "dcp/torus.hpp"
#include "dcp/weighted_index.hpp"

namespace dcp {

// ---------------------------------------------------------------------------
// EventStream: the raw stream. With `types` > 1 every type owns independent
// arrow clocks (rate arrow_rate per directed edge) and death clocks (rate one
// per site), as in the typed construction for non-interacting copies.
// Draw order per event: waiting time, type, death-vs-arrow, site-or-edge,
// mark (arrows only).
// ---------------------------------------------------------------------------

struct StreamEvent {
    double time = 0.0;
    bool is_death = false;
    int type = 0;
    Site site = kOutside;  // death site, or arrow tail
    Site to = kOutside;    // arrow head (kOutside if it leaves the window)
    double mark = 0.0;
};

class EventStream {
public:
    EventStream(const TorusGeometry& geo, int types, double arrow_rate,
                std::uint64_t seed, std::uint64_t stream_id)
        : geo_(&geo), types_(types), arrow_rate_(arrow_rate), rng_(seed, stream_id) {
        if (types < 1) throw DomainError("event stream: need at least one type");
        if (!(arrow_rate >= 0.0)) throw DomainError("event stream: negative arrow rate");
        per_site_rate_ = 1.0 + geo.degree() * arrow_rate_;
        total_rate_ = static_cast<double>(types_) * static_cast<double>(geo.num_sites()) *
                      per_site_rate_;
    }

    double total_rate() const { return total_rate_; }

    StreamEvent next() {
        StreamEvent ev;
        time_ += rng_.next_exponential(total_rate_);
        ev.time = time_;
        ev.type = types_ == 1 ? 0 : static_cast<int>(rng_.next_index(static_cast<std::uint64_t>(types_)));
        if (rng_.next_double() * per_site_rate_ < 1.0) {
            ev.is_death = true;
            ev.site = static_cast<Site>(rng_.next_index(static_cast<std::uint64_t>(geo_->num_sites())));
        } else {
            const auto deg = static_cast<std::uint64_t>(geo_->degree());
            const std::uint64_t edge =
                rng_.next_index(static_cast<std::uint64_t>(geo_->num_sites()) * deg);
            ev.site = static_cast<Site>(edge / deg);
            ev.to = geo_->neighbor(ev.site, static_cast<int>(edge % deg));
            ev.mark = rng_.next_double();
        }
        return ev;
    }

private:
    const TorusGeometry* geo_;
    int types_;
    double arrow_rate_;
    double per_site_rate_;
    double total_rate_;
    RngStream rng_;
    double time_ = 0.0;
};

// ---------------------------------------------------------------------------
// Coupled family on the thinned stream.
// ---------------------------------------------------------------------------

struct ContainmentClaim {
    std::size_t inner = 0;
    std::size_t outer = 0;
    // Check phi_inner(x) <= phi_outer(x) at every arrow tail occupied in both
    // (valid whenever lambda1 <= lambda2 and a1 v 0 <= a2). Claims that rely
    // on the empty-head bound (the lambda e^{a(1-1/2d)} comparison) check the
    // same inequality restricted to arrows whose head is empty in both.
    bool unconditional_threshold = false;
};

struct ContainmentReport {
    double horizon = 0.0;
    std::uint64_t violations = 0;            // events after which some claim fails
    std::uint64_t threshold_violations = 0;  // per-arrow rate-monotonicity failures
    std::optional<std::pair<Site, double>> first_violation;
    std::uint64_t events = 0;

    std::vector<double> trace_times;
    std::vector<std::vector<std::int64_t>> population_traces;  // [process][grid index]
    std::vector<std::int64_t> final_population;
    std::vector<std::int64_t> max_population;
    std::vector<std::optional<double>> extinction_time;
};

class CoupledFamily {
public:
    CoupledFamily(std::vector<Params> params_list, const TorusGeometry& geo,
                  std::vector<std::vector<Site>> inits, std::uint64_t seed,
                  std::uint64_t stream_id = 0)
        : geo_(&geo), rng_(seed, stream_id) {
        if (params_list.empty() || params_list.size() != inits.size())
            throw DomainError("coupled family: params/init size mismatch");
        const auto n = static_cast<std::size_t>(geo.num_sites());
        union_count_.assign(n, 0);
        for (std::size_t k = 0; k < params_list.size(); ++k) {
            params_list[k].validate();
            if (params_list[k].dim != geo.dim())
                throw DomainError("coupled family: params dimension mismatch");
            Proc p;
            p.params = params_list[k];
            p.table = p.params.rate_table();
            p.occ.assign(n, 0);
            p.kcount.assign(n, 0);
            procs_.push_back(std::move(p));
            for (Site s : inits[k]) {
                geo.check_site(s);
                if (!procs_[k].occ[static_cast<std::size_t>(s)]) {
                    procs_[k].occ[static_cast<std::size_t>(s)] = 1;
                    ++procs_[k].population;
                    ++union_count_[static_cast<std::size_t>(s)];
                }
            }
            procs_[k].max_population = procs_[k].population;
        }
        for (auto& p : procs_)
            for (Site s = 0; s < geo.num_sites(); ++s)
                if (p.occ[static_cast<std::size_t>(s)])
                    for (int j = 0; j < geo.degree(); ++j) {
                        const Site y = geo.neighbor(s, j);
                        if (y != kOutside) ++p.kcount[static_cast<std::size_t>(y)];
                    }
        index_.reset(n + n * static_cast<std::size_t>(geo.degree()));
        rebuild_index();
    }

    void add_claim(std::size_t inner, std::size_t outer, bool unconditional = false) {
        claims_.push_back({inner, outer, unconditional});
        claim_bad_sites_.push_back(0);
        // count violations already present in the initial condition
        for (Site s = 0; s < geo_->num_sites(); ++s)
            if (procs_[inner].occ[static_cast<std::size_t>(s)] &&
                !procs_[outer].occ[static_cast<std::size_t>(s)])
                ++claim_bad_sites_.back();
    }

    void restrict_births_to(const std::vector<Site>& allowed) {
        allowed_.assign(static_cast<std::size_t>(geo_->num_sites()), 0);
        for (Site s : allowed) {
            geo_->check_site(s);
            allowed_[static_cast<std::size_t>(s)] = 1;
        }
        rebuild_index();
    }

    std::size_t process_count() const { return procs_.size(); }
    bool occupied(std::size_t k, Site s) const {
        return procs_[k].occ[static_cast<std::size_t>(s)] != 0;
    }
    std::int64_t population(std::size_t k) const { return procs_[k].population; }
    double time() const { return time_; }

    ContainmentReport evolve(double horizon, const std::vector<double>& trace_times = {}) {
        ContainmentReport rep;
        rep.horizon = horizon;
        rep.trace_times = trace_times;
        rep.population_traces.assign(procs_.size(), {});
        std::size_t next_grid = 0;
        auto emit_until = [&](double t) {
            while (next_grid < trace_times.size() && trace_times[next_grid] <= t) {
                for (std::size_t k = 0; k < procs_.size(); ++k)
                    rep.population_traces[k].push_back(procs_[k].population);
                ++next_grid;
            }
        };

        while (true) {
            const double total = index_.total();
            if (total <= 0.0) break;  // everything dead; nothing can revive
            const double wait = rng_.next_exponential(total);
            const double t_next = time_ + wait;
            emit_until(std::min(t_next, horizon));
            if (t_next >= horizon) break;
            time_ = t_next;
            fire(rep);
        }
        time_ = horizon;
        emit_until(horizon);

        for (auto& p : procs_) {
            rep.final_population.push_back(p.population);
            rep.max_population.push_back(p.max_population);
            rep.extinction_time.push_back(p.extinction_time);
        }
        rep.events = events_;
        return rep;
    }

private:
    struct Proc {
        Params params;
        std::vector<double> table;
        std::vector<std::uint8_t> occ;
        std::vector<std::uint16_t> kcount;
        std::int64_t population = 0;
        std::int64_t max_population = 0;
        std::optional<double> extinction_time;

        double phi_at(Site s) const {
            const auto i = static_cast<std::size_t>(s);
            return occ[i] ? table[kcount[i]] : 0.0;
        }
    };

    bool head_allowed(Site v) const {
        return v != kOutside && (allowed_.empty() || allowed_[static_cast<std::size_t>(v)] != 0);
    }

    // Largest rate any process would accept on u -> v, scaled to the edge's
    // Poisson intensity (division by 2d).
    double edge_weight(Site u, int dir) const {
        const Site v = geo_->neighbor(u, dir);
        if (!head_allowed(v)) return 0.0;
        const auto ui = static_cast<std::size_t>(u);
        const auto vi = static_cast<std::size_t>(v);
        double w = 0.0;
        for (const auto& p : procs_)
            if (p.occ[ui] && !p.occ[vi]) w = std::max(w, p.table[p.kcount[ui]]);
        return w / geo_->degree();
    }

    std::size_t edge_leaf(Site u, int dir) const {
        return static_cast<std::size_t>(geo_->num_sites()) +
               static_cast<std::size_t>(u) * static_cast<std::size_t>(geo_->degree()) +
               static_cast<std::size_t>(dir);
    }

    void refresh_around(Site s) {
        index_.set(static_cast<std::size_t>(s), union_count_[static_cast<std::size_t>(s)] > 0 ? 1.0 : 0.0);
        for (int dir = 0; dir < geo_->degree(); ++dir)
            index_.set(edge_leaf(s, dir), edge_weight(s, dir));
        for (int j = 0; j < geo_->degree(); ++j) {
            const Site y = geo_->neighbor(s, j);
            if (y == kOutside) continue;
            for (int dir = 0; dir < geo_->degree(); ++dir)
                index_.set(edge_leaf(y, dir), edge_weight(y, dir));
        }
    }

    void rebuild_index() {
        const auto n = static_cast<std::size_t>(geo_->num_sites());
        std::vector<double> w(n + n * static_cast<std::size_t>(geo_->degree()), 0.0);
        for (Site s = 0; s < geo_->num_sites(); ++s) {
            w[static_cast<std::size_t>(s)] = union_count_[static_cast<std::size_t>(s)] > 0 ? 1.0 : 0.0;
            for (int dir = 0; dir < geo_->degree(); ++dir)
                w[edge_leaf(s, dir)] = edge_weight(s, dir);
        }
        index_.assign(w);
    }

    void flip(std::size_t k, Site s, bool on) {
        auto& p = procs_[k];
        const auto i = static_cast<std::size_t>(s);
        p.occ[i] = on ? 1 : 0;
        p.population += on ? 1 : -1;
        if (on) p.max_population = std::max(p.max_population, p.population);
        if (!on && p.population == 0 && !p.extinction_time) p.extinction_time = time_;
        union_count_[i] = static_cast<std::uint16_t>(union_count_[i] + (on ? 1 : -1));
        const int delta = on ? 1 : -1;
        for (int j = 0; j < geo_->degree(); ++j) {
            const Site y = geo_->neighbor(s, j);
            if (y != kOutside) {
                auto& c = p.kcount[static_cast<std::size_t>(y)];
                c = static_cast<std::uint16_t>(c + delta);
            }
        }
    }

    void fire(ContainmentReport& rep) {
        ++events_;
        const double total = index_.total();
        const std::size_t leaf = index_.sample(rng_.next_double() * total);
        const auto n = static_cast<std::size_t>(geo_->num_sites());

        Site s;
        std::vector<std::uint8_t> before(procs_.size());
        if (leaf < n) {
            s = static_cast<Site>(leaf);
            for (std::size_t k = 0; k < procs_.size(); ++k) {
                before[k] = procs_[k].occ[leaf];
                if (before[k]) flip(k, s, false);
            }
        } else {
            const auto e = leaf - n;
            const Site u = static_cast<Site>(e / static_cast<std::size_t>(geo_->degree()));
            const int dir = static_cast<int>(e % static_cast<std::size_t>(geo_->degree()));
            const Site v = geo_->neighbor(u, dir);
            s = v;
            const auto ui = static_cast<std::size_t>(u);
            const auto vi = static_cast<std::size_t>(v);

            double w = 0.0;
            for (const auto& p : procs_)
                if (p.occ[ui] && !p.occ[vi]) w = std::max(w, p.table[p.kcount[ui]]);
            check_thresholds(u, v, rep);
            if (w <= 0.0) return;  // stale weight rounding; arrow touches nothing

            const double threshold = rng_.next_double() * w;
            for (std::size_t k = 0; k < procs_.size(); ++k) {
                before[k] = procs_[k].occ[vi];
                auto& p = procs_[k];
                if (p.occ[ui] && !p.occ[vi] && threshold <= p.table[p.kcount[ui]])
                    flip(k, v, true);
            }
        }

        // claim counters at the flipped site
        bool any_bad = false;
        for (std::size_t c = 0; c < claims_.size(); ++c) {
            const auto i = static_cast<std::size_t>(s);
            const bool was_bad = before[claims_[c].inner] && !before[claims_[c].outer];
            const bool is_bad = procs_[claims_[c].inner].occ[i] && !procs_[claims_[c].outer].occ[i];
            claim_bad_sites_[c] += static_cast<std::int64_t>(is_bad) - static_cast<std::int64_t>(was_bad);
            if (claim_bad_sites_[c] > 0) any_bad = true;
            if (is_bad && !rep.first_violation) rep.first_violation = {s, time_};
        }
        if (any_bad) ++rep.violations;

        refresh_around(s);
    }

    void check_thresholds(Site u, Site v, ContainmentReport& rep) const {
        const auto ui = static_cast<std::size_t>(u);
        const auto vi = static_cast<std::size_t>(v);
        for (const auto& c : claims_) {
            const auto& pi = procs_[c.inner];
            const auto& po = procs_[c.outer];
            if (!pi.occ[ui] || !po.occ[ui]) continue;
            if (!c.unconditional_threshold && (pi.occ[vi] || po.occ[vi])) continue;
            if (pi.table[pi.kcount[ui]] > po.table[po.kcount[ui]] * (1.0 + 1e-15))
                ++rep.threshold_violations;
        }
    }

    const TorusGeometry* geo_;
    std::vector<Proc> procs_;
    std::vector<std::uint16_t> union_count_;
    std::vector<std::uint8_t> allowed_;
    WeightedIndex index_;
    std::vector<ContainmentClaim> claims_;
    std::vector<std::int64_t> claim_bad_sites_;
    RngStream rng_;
    double time_ = 0.0;
    std::uint64_t events_ = 0;
};

// ---------------------------------------------------------------------------
// The three coupling operations.
// ---------------------------------------------------------------------------

namespace detail {

inline double payoff_or_zero(const Params& p) {
    return p.variant == Variant::HardCore ? 0.0 : std::max(p.payoff, 0.0);
}

inline bool same_params(const Params& a, const Params& b) {
    return a.lambda == b.lambda && a.payoff == b.payoff && a.dim == b.dim &&
           a.variant == b.variant;
}

}  // namespace detail

// lambda1 <= lambda2 and a1 v 0 <= a2 (identical parameters trivially admissible).
inline void check_pair_order(const Params& p1, const Params& p2) {
    if (detail::same_params(p1, p2)) return;
    if (p1.dim != p2.dim)
        throw ParameterOrderError("coupled pair: dimension mismatch");
    if (p1.variant == Variant::FloorRate || p2.variant == Variant::FloorRate) {
        if (p1.variant != Variant::FloorRate || p2.variant != Variant::FloorRate)
            throw ParameterOrderError("coupled pair: cannot mix floor-rate with other variants");
        if (!(p1.lambda <= p2.lambda && p1.payoff <= p2.payoff))
            throw ParameterOrderError("coupled pair: need lambda1 <= lambda2 and a1 <= a2");
        return;
    }
    if (p2.variant == Variant::HardCore)
        throw ParameterOrderError("coupled pair: hard-core cannot dominate");
    const double a1 = p1.variant == Variant::HardCore ? 0.0 : std::max(p1.payoff, 0.0);
    if (!(p1.lambda <= p2.lambda && a1 <= p2.payoff))
        throw ParameterOrderError("coupled pair: need lambda1 <= lambda2 and a1 v 0 <= a2");
}

inline ContainmentReport evolve_coupled_pair(const Params& p1, const Params& p2,
                                             const std::vector<Site>& init1,
                                             const std::vector<Site>& init2,
                                             const TorusGeometry& geo, double horizon,
                                             std::uint64_t seed, std::uint64_t stream_id = 0,
                                             const std::vector<double>& trace_times = {}) {
    check_pair_order(p1, p2);
    {
        std::vector<std::uint8_t> in2(static_cast<std::size_t>(geo.num_sites()), 0);
        for (Site s : init2) in2[static_cast<std::size_t>(s)] = 1;
        for (Site s : init1)
            if (!in2[static_cast<std::size_t>(s)])
                throw ParameterOrderError("coupled pair: init1 must be contained in init2");
    }
    CoupledFamily family({p1, p2}, geo, {init1, init2}, seed, stream_id);
    family.add_claim(0, 1, /*unconditional=*/true);
    return family.evolve(horizon, trace_times);
}

// eta (contact at lambda), xi (model at lambda, a), zeta (contact at
// lambda e^{a(1 - 1/2d)}), all from the same initial set; containment
// orientation follows the sign of a. Process order in the report: eta, xi,
// zeta.
inline ContainmentReport evolve_sandwich(double lambda, double a, const TorusGeometry& geo,
                                         const std::vector<Site>& init, double horizon,
                                         std::uint64_t seed, std::uint64_t stream_id = 0,
                                         const std::vector<double>& trace_times = {}) {
    if (std::isinf(a))
        throw UnsupportedError("sandwich coupling needs finite a; use the hard-core comparison");
    const int dim = geo.dim();
    // lambda e^{a (1 - 1/2d)}, written so it lands bit-identically on the xi
    // rate table entry at k = 2d - 1; the boundary thresholds then tie exactly
    // and floating rounding cannot split the coupled decisions.
    const double zeta_rate =
        lambda * std::exp(a * (static_cast<double>(2 * dim - 1) / (2 * dim)));
    CoupledFamily family({Params::standard(lambda, 0.0, dim), Params::standard(lambda, a, dim),
                          Params::standard(zeta_rate, 0.0, dim)},
                         geo, {init, init, init}, seed, stream_id);
    if (a <= 0.0) {
        family.add_claim(2, 1);                         // zeta inside xi (empty-head bound)
        family.add_claim(1, 0, /*unconditional=*/true); // xi inside eta
    } else {
        family.add_claim(0, 1, /*unconditional=*/true); // eta inside xi
        family.add_claim(1, 2);                         // xi inside zeta (empty-head bound)
    }
    return family.evolve(horizon, trace_times);
}

// ---------------------------------------------------------------------------
// Hard-core comparison with non-interacting copies (typed stream): the
// process from A, with players typed by their seed, against independent
// single-seed copies, one per z in A. A type-z arrow tries a birth in the
// joint process only if the tail's whole neighborhood is empty, and in copy z
// only if the neighborhood holds no type-z player; a type-z cross kills type-z
// players on both sides.
// ---------------------------------------------------------------------------

struct NonInteractingReport {
    double horizon = 0.0;
    std::uint64_t violations = 0;  // typed domination failures xi^A(x) > Xi^A(x)
    std::uint64_t events = 0;
    int max_copy_stack = 0;  // most copies seen on one site (can exceed 1)
    bool processes_coincide = true;  // stayed identical throughout (|A| = 1 case)
    std::optional<double> extinction_time_joint;
    std::optional<double> extinction_time_copies;
};

inline NonInteractingReport evolve_vs_noninteracting(const std::vector<Site>& seeds_sites,
                                                     double lambda, const TorusGeometry& geo,
                                                     double horizon, std::uint64_t seed,
                                                     std::uint64_t stream_id = 0) {
    if (seeds_sites.empty()) throw DomainError("non-interacting comparison: empty seed set");
    const int m = static_cast<int>(seeds_sites.size());
    const auto n = static_cast<std::size_t>(geo.num_sites());

    std::vector<int> joint_type(n, -1);  // type of the player at each site, -1 empty
    std::vector<std::vector<std::uint8_t>> copy(static_cast<std::size_t>(m),
                                                std::vector<std::uint8_t>(n, 0));
    std::int64_t joint_pop = 0;
    std::int64_t copy_pop = 0;
    for (int z = 0; z < m; ++z) {
        const Site s = seeds_sites[static_cast<std::size_t>(z)];
        geo.check_site(s);
        if (joint_type[static_cast<std::size_t>(s)] != -1)
            throw DomainError("non-interacting comparison: duplicate seed site");
        joint_type[static_cast<std::size_t>(s)] = z;
        copy[static_cast<std::size_t>(z)][static_cast<std::size_t>(s)] = 1;
        ++joint_pop;
        ++copy_pop;
    }

    NonInteractingReport rep;
    rep.horizon = horizon;

    EventStream stream(geo, m, lambda / geo.degree(), seed, stream_id);
    auto neighborhood_empty_joint = [&](Site x) {
        for (int j = 0; j < geo.degree(); ++j) {
            const Site y = geo.neighbor(x, j);
            if (y != kOutside && joint_type[static_cast<std::size_t>(y)] != -1) return false;
        }
        return true;
    };
    auto neighborhood_empty_copy = [&](int z, Site x) {
        for (int j = 0; j < geo.degree(); ++j) {
            const Site y = geo.neighbor(x, j);
            if (y != kOutside && copy[static_cast<std::size_t>(z)][static_cast<std::size_t>(y)])
                return false;
        }
        return true;
    };

    while (joint_pop > 0 || copy_pop > 0) {
        const StreamEvent ev = stream.next();
        if (ev.time >= horizon) break;
        ++rep.events;
        const int z = ev.type;
        if (ev.is_death) {
            const auto i = static_cast<std::size_t>(ev.site);
            if (joint_type[i] == z) {
                joint_type[i] = -1;
                if (--joint_pop == 0 && !rep.extinction_time_joint)
                    rep.extinction_time_joint = ev.time;
            }
            if (copy[static_cast<std::size_t>(z)][i]) {
                copy[static_cast<std::size_t>(z)][i] = 0;
                if (--copy_pop == 0 && !rep.extinction_time_copies)
                    rep.extinction_time_copies = ev.time;
            }
        } else if (ev.to != kOutside) {
            const auto from = static_cast<std::size_t>(ev.site);
            const auto to = static_cast<std::size_t>(ev.to);
            if (joint_type[from] == z && neighborhood_empty_joint(ev.site)) {
                joint_type[to] = z;
                ++joint_pop;
            }
            if (copy[static_cast<std::size_t>(z)][from] && neighborhood_empty_copy(z, ev.site)) {
                if (!copy[static_cast<std::size_t>(z)][to]) {
                    copy[static_cast<std::size_t>(z)][to] = 1;
                    ++copy_pop;
                }
            }
        }
        // typed domination and stack statistics, checked on every event
        for (std::size_t i = 0; i < n; ++i) {
            int stack = 0;
            for (int zz = 0; zz < m; ++zz) stack += copy[static_cast<std::size_t>(zz)][i];
            rep.max_copy_stack = std::max(rep.max_copy_stack, stack);
            const int jt = joint_type[i];
            if (jt != -1 && !copy[static_cast<std::size_t>(jt)][i]) ++rep.violations;
            if (m == 1) {
                const bool same = (jt == 0) == (copy[0][i] != 0);
                if (!same) rep.processes_coincide = false;
            }
        }
    }
    return rep;
}

inline NonInteractingReport evolve_vs_noninteracting(const Params& params,
                                                     const std::vector<Site>& seeds_sites,
                                                     const TorusGeometry& geo, double horizon,
                                                     std::uint64_t seed,
                                                     std::uint64_t stream_id = 0) {
    if (params.variant != Variant::HardCore)
        throw UnsupportedError("non-interacting comparison is stated at a = -infinity");
    return evolve_vs_noninteracting(seeds_sites, params.lambda, geo, horizon, seed, stream_id);
}

}  // namespace dcp
