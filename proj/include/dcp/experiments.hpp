#pragma once

// Monte Carlo estimators and closed-form bound calculators at desk scale:
// horizon-censored survival, critical-value brackets, phase scans, hard-core
// statistics, the doubling and empty-block probabilities of the block
// constructions, and the three closed forms they are checked against.
//
// Survival on a finite torus is horizon-censored by construction: the
// estimate is the fraction of replicates not extinct by the horizon. Common
// random numbers = replicate r always draws from stream (seed, r), so scans
// across parameters reuse the same randomness per replicate; for admissible
// parameter pairs the comparison is made pathwise through the coupling
// module, which removes Monte Carlo noise from orderings entirely.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dcp/coupling.hpp"
#include "dcp/engine.hpp"
#include "dcp/errors.hpp"
#include "dcp/estimate.hpp"
#include "dcp/params.hpp"
#include "dcp/replicate.hpp"
#include "dcp/torus.hpp"

namespace dcp {
namespace experiments {

enum class InitKind { SingleSeed, FullTorus, Box };

inline const char* to_string(InitKind k) {
    switch (k) {
        case InitKind::SingleSeed: return "single";
        case InitKind::FullTorus: return "full";
        case InitKind::Box: return "box";
    }
    return "?";
}

// SingleSeed: the origin. Box: Lambda_minus = {0,1}^d.
inline std::vector<Site> make_init(const TorusGeometry& geo, InitKind kind) {
    std::vector<Site> init;
    switch (kind) {
        case InitKind::SingleSeed:
            init.push_back(0);
            break;
        case InitKind::FullTorus:
            init.resize(static_cast<std::size_t>(geo.num_sites()));
            for (Site s = 0; s < geo.num_sites(); ++s)
                init[static_cast<std::size_t>(s)] = s;
            break;
        case InitKind::Box: {
            std::vector<int> c(static_cast<std::size_t>(geo.dim()), 0);
            const int corners = 1 << geo.dim();
            for (int mask = 0; mask < corners; ++mask) {
                for (int i = 0; i < geo.dim(); ++i) c[static_cast<std::size_t>(i)] = (mask >> i) & 1;
                init.push_back(geo.site_of(c));
            }
            break;
        }
    }
    return init;
}

// Sites of the cube {-1,0,1,2}^d (Lambda_plus), wrapped onto the torus.
inline std::vector<Site> lambda_plus(const TorusGeometry& geo) {
    std::vector<Site> sites;
    std::vector<int> c(static_cast<std::size_t>(geo.dim()), 0);
    std::int64_t total = 1;
    for (int i = 0; i < geo.dim(); ++i) total *= 4;
    for (std::int64_t idx = 0; idx < total; ++idx) {
        std::int64_t rest = idx;
        for (int i = 0; i < geo.dim(); ++i) {
            c[static_cast<std::size_t>(i)] = static_cast<int>(rest % 4) - 1;
            rest /= 4;
        }
        sites.push_back(geo.site_of(c));
    }
    return sites;
}

// ---------------------------------------------------------------------------
// Survival
// ---------------------------------------------------------------------------

inline Estimate estimate_survival(const Params& params, const TorusGeometry& geo,
                                  InitKind init, double horizon, std::int64_t replicates,
                                  std::uint64_t seed, int workers = 1,
                                  std::optional<EventMode> mode = {}) {
    if (replicates <= 0) throw DomainError("estimate_survival: need replicates > 0");
    params.validate();
    const auto init_sites = make_init(geo, init);
    const EventMode m = mode.value_or(resolve_mode(params));
    StopRule stop;
    stop.horizon = horizon;
    const auto survived = run_replicates(replicates, workers, [&](std::int64_t r) -> char {
        SimState st(params, geo, init_sites, seed, static_cast<std::uint64_t>(r), m);
        return run(st, stop).reason != StopReason::Extinct ? 1 : 0;
    });
    std::int64_t successes = 0;
    for (char s : survived) successes += s;
    return wilson_estimate(successes, replicates, seed, "wilson95, horizon-censored survival");
}

inline std::string survival_csv_header() {
    return "lambda,a,estimate,ci_low,ci_high,replicates";
}

// ---------------------------------------------------------------------------
// Coupled survival comparison: pathwise-ordered indicators for admissible
// parameter pairs (the CRN mechanism for monotonicity checks).
// ---------------------------------------------------------------------------

struct CoupledSurvival {
    Estimate inner;
    Estimate outer;
    std::int64_t pointwise_violations = 0;  // replicates with inner surviving, outer not
    std::uint64_t containment_violations = 0;
};

inline CoupledSurvival coupled_survival_pair(const Params& p1, const Params& p2,
                                             const TorusGeometry& geo, InitKind init,
                                             double horizon, std::int64_t replicates,
                                             std::uint64_t seed, int workers = 1) {
    if (replicates <= 0) throw DomainError("coupled_survival_pair: need replicates > 0");
    check_pair_order(p1, p2);
    const auto init_sites = make_init(geo, init);
    struct Row {
        char s1 = 0, s2 = 0;
        std::uint64_t violations = 0;
    };
    const auto rows = run_replicates(replicates, workers, [&](std::int64_t r) -> Row {
        const auto rep = evolve_coupled_pair(p1, p2, init_sites, init_sites, geo, horizon, seed,
                                             static_cast<std::uint64_t>(r));
        Row row;
        row.s1 = rep.final_population[0] > 0 ? 1 : 0;
        row.s2 = rep.final_population[1] > 0 ? 1 : 0;
        row.violations = rep.violations;
        return row;
    });
    CoupledSurvival out;
    std::int64_t n1 = 0, n2 = 0;
    for (const auto& row : rows) {
        n1 += row.s1;
        n2 += row.s2;
        if (row.s1 && !row.s2) ++out.pointwise_violations;
        out.containment_violations += row.violations;
    }
    out.inner = wilson_estimate(n1, replicates, seed, "wilson95, coupled marginal");
    out.outer = wilson_estimate(n2, replicates, seed, "wilson95, coupled marginal");
    return out;
}

// ---------------------------------------------------------------------------
// Critical-value bracket
// ---------------------------------------------------------------------------

struct CriticalBracket {
    double a = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    std::string note;
    double measured_lambda_c0 = 0.0;  // the a = 0 bracket midpoint used below
    double sandwich_lo = 0.0;         // theoretical bounds via the contact-process comparison
    double sandwich_hi = 0.0;
};

struct LambdaCSettings {
    double horizon = 2000.0;
    std::int64_t replicates = 500;
    double threshold = 0.02;
    double bracket_width = 0.05;
    double initial_lo = 1.0;
    double initial_hi = 6.0;
    int max_widenings = 8;
    int workers = 1;
    std::optional<double> lambda_c0;  // reuse a measured a = 0 value
};

inline CriticalBracket estimate_lambda_c(double a, const TorusGeometry& geo,
                                         std::uint64_t seed, const LambdaCSettings& cfg) {
    if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0))
        throw DomainError("estimate_lambda_c: threshold must lie in (0,1)");
    auto survival = [&](double lambda) {
        return estimate_survival(Params::standard(lambda, a, geo.dim()), geo,
                                 InitKind::SingleSeed, cfg.horizon, cfg.replicates, seed,
                                 cfg.workers)
            .value;
    };
    double lo = cfg.initial_lo;
    double hi = cfg.initial_hi;
    double est_lo = survival(lo);
    double est_hi = survival(hi);
    for (int i = 0; i < cfg.max_widenings && est_lo >= cfg.threshold; ++i) {
        lo *= 0.5;
        est_lo = survival(lo);
    }
    for (int i = 0; i < cfg.max_widenings && est_hi < cfg.threshold; ++i) {
        hi *= 2.0;
        est_hi = survival(hi);
    }
    if (est_lo >= cfg.threshold || est_hi < cfg.threshold)
        throw DomainError("estimate_lambda_c: could not bracket the threshold crossing");
    while (hi - lo >= cfg.bracket_width) {
        const double mid = 0.5 * (lo + hi);
        (survival(mid) < cfg.threshold ? lo : hi) = mid;
    }
    CriticalBracket out;
    out.a = a;
    out.lo = lo;
    out.hi = hi;
    out.note = "survival threshold " + std::to_string(cfg.threshold) +
               " crossing, horizon-censored single-seed estimates";
    if (a == 0.0) {
        out.measured_lambda_c0 = 0.5 * (lo + hi);
    } else if (cfg.lambda_c0) {
        out.measured_lambda_c0 = *cfg.lambda_c0;
    } else {
        LambdaCSettings base = cfg;
        base.lambda_c0.reset();
        out.measured_lambda_c0 = estimate_lambda_c(0.0, geo, seed, base).measured_lambda_c0;
    }
    const double factor = std::exp(-a * (1.0 - 1.0 / (2.0 * geo.dim())));
    out.sandwich_lo = std::min(out.measured_lambda_c0, out.measured_lambda_c0 * factor);
    out.sandwich_hi = std::max(out.measured_lambda_c0, out.measured_lambda_c0 * factor);
    return out;
}

// ---------------------------------------------------------------------------
// Phase scan
// ---------------------------------------------------------------------------

struct PhaseCell {
    int i = 0;  // lambda index
    int j = 0;  // a index
    double lambda = 0.0;
    double a = 0.0;
    Estimate estimate;
};

inline std::vector<PhaseCell> phase_scan(const std::vector<double>& lambda_grid,
                                         const std::vector<double>& a_grid,
                                         const TorusGeometry& geo, InitKind init,
                                         double horizon, std::int64_t replicates,
                                         std::uint64_t seed, int workers = 1) {
    if (lambda_grid.empty() || a_grid.empty())
        throw DomainError("phase_scan: empty parameter grid");
    std::vector<PhaseCell> cells;
    for (std::size_t j = 0; j < a_grid.size(); ++j) {
        for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
            PhaseCell cell;
            cell.i = static_cast<int>(i);
            cell.j = static_cast<int>(j);
            cell.lambda = lambda_grid[i];
            cell.a = a_grid[j];
            // same seed for every cell: common random numbers across the scan
            cell.estimate = estimate_survival(Params::standard(cell.lambda, cell.a, geo.dim()),
                                              geo, init, horizon, replicates, seed, workers);
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

inline std::string phase_csv_header() {
    return "i,j,lambda,a,estimate,ci_low,ci_high,replicates";
}

// ---------------------------------------------------------------------------
// Hard-core statistics (a = -infinity, single seed)
// ---------------------------------------------------------------------------

struct HardcoreStats {
    double lambda = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::int64_t> generations;      // N per replicate (birth count)
    std::vector<double> extinction_times;       // T per replicate
    std::vector<std::int64_t> ever_occupied;    // |xi^0| per replicate

    // P[N = k] = p (1-p)^k with p = 1/(1+lambda), support {0,1,...}.
    double geometric_p() const { return 1.0 / (1.0 + lambda); }
};

inline HardcoreStats hardcore_stats(double lambda, std::int64_t replicates, std::uint64_t seed,
                                    int workers = 1, int side = 128, int dim = 1) {
    if (replicates <= 0) throw DomainError("hardcore_stats: need replicates > 0");
    const TorusGeometry geo = TorusGeometry::cubic(side, dim);
    const Params params = Params::hard_core(lambda, dim);
    StopRule stop;  // run to extinction (almost surely finite)
    stop.stop_on_extinction = true;
    struct Row {
        std::int64_t n = 0;
        double t = 0.0;
        std::int64_t ever = 0;
    };
    const std::vector<Site> init{geo.site_of(std::vector<int>(static_cast<std::size_t>(dim),
                                                              side / 2))};
    const auto rows = run_replicates(replicates, workers, [&](std::int64_t r) -> Row {
        SimState st(params, geo, init, seed, static_cast<std::uint64_t>(r));
        const auto out = run(st, stop);
        return {static_cast<std::int64_t>(out.tallies.births), out.final_time,
                out.ever_occupied_count};
    });
    HardcoreStats stats;
    stats.lambda = lambda;
    stats.seed = seed;
    for (const auto& row : rows) {
        stats.generations.push_back(row.n);
        stats.extinction_times.push_back(row.t);
        stats.ever_occupied.push_back(row.ever);
    }
    return stats;
}

// Rows n, empirical tail P[N > n], and the bound curve (lambda/(1+lambda))^n.
struct TailRow {
    std::int64_t n = 0;
    double empirical_tail = 0.0;
    double geometric_tail = 0.0;
};

inline std::vector<TailRow> hardcore_tail_table(const HardcoreStats& stats) {
    std::int64_t max_n = 0;
    for (auto n : stats.generations) max_n = std::max(max_n, n);
    const auto total = static_cast<double>(stats.generations.size());
    std::vector<TailRow> rows;
    const double q = stats.lambda / (1.0 + stats.lambda);
    for (std::int64_t n = 0; n <= max_n; ++n) {
        std::int64_t above = 0;
        for (auto g : stats.generations) above += g > n ? 1 : 0;
        rows.push_back({n, static_cast<double>(above) / total, std::pow(q, static_cast<double>(n))});
    }
    return rows;
}

inline std::string hardcore_csv_header() { return "n,empirical_tail,geometric_tail"; }

// ---------------------------------------------------------------------------
// Closed forms of the block constructions
// ---------------------------------------------------------------------------

struct BoundsRecord {
    double epsilon = 0.0;
    int d = 1;
    double lambda = 0.0;
    double a = 0.0;
    int L = 0;
    double tau = 0.0;               // as supplied (or derived from epsilon)
    double tau_from_epsilon = 0.0;  // -ln(1 - eps/2) / 4^d
    double invasion_stage_bound = 0.0;  // (1 - exp(-lambda tau e^{a/2d} / 2d^2))^{4^d}
    double invasion_pipeline_bound = 0.0;  // 1 - d (1 - stage) - eps/2
    double poisson_agreement = 0.0;  // exp(-2L (4L+1)^d 2 lambda e^{a/2d})
};

inline double tau_from_epsilon(double epsilon, int d) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw DomainError("bounds: epsilon must lie in (0,1)");
    return -std::log1p(-epsilon / 2.0) / std::pow(4.0, d);
}

inline double invasion_stage_bound(double lambda, double a, double tau, int d) {
    const double rate = lambda * tau * std::exp(a / (2.0 * d)) / (2.0 * d * d);
    return std::pow(-std::expm1(-rate), std::pow(4.0, d));
}

inline double poisson_agreement_bound(double lambda, double a, int L, int d) {
    const double block = 2.0 * L * std::pow(4.0 * L + 1.0, d);
    return std::exp(-block * 2.0 * lambda * std::exp(a / (2.0 * d)));
}

inline BoundsRecord bounds(double epsilon, int d, double lambda, double a, int L,
                           std::optional<double> tau = {}) {
    if (d < 1) throw DomainError("bounds: d must be >= 1");
    if (L < 1) throw DomainError("bounds: L must be >= 1");
    BoundsRecord rec;
    rec.epsilon = epsilon;
    rec.d = d;
    rec.lambda = lambda;
    rec.a = a;
    rec.L = L;
    rec.tau_from_epsilon = tau_from_epsilon(epsilon, d);
    rec.tau = tau.value_or(rec.tau_from_epsilon);
    rec.invasion_stage_bound = invasion_stage_bound(lambda, a, rec.tau, d);
    rec.invasion_pipeline_bound = 1.0 - d * (1.0 - rec.invasion_stage_bound) - epsilon / 2.0;
    rec.poisson_agreement = poisson_agreement_bound(lambda, a, L, d);
    return rec;
}

// ---------------------------------------------------------------------------
// Doubling probability: the floor-rate process from Lambda_minus with births
// suppressed outside Lambda_plus; success = Lambda_plus fully occupied at tau.
// A whole a-grid evolves as one nested coupled family per replicate, so the
// indicators (and hence the estimates) are monotone along the grid surely.
// ---------------------------------------------------------------------------

struct DoublingResult {
    double epsilon = 0.0;
    double tau = 0.0;
    std::vector<double> a_values;
    std::vector<Estimate> estimates;        // per a
    std::vector<double> stage_bounds;       // per a
    std::vector<double> pipeline_bounds;    // per a
    std::uint64_t containment_violations = 0;
    std::int64_t nesting_violations = 0;    // replicates with non-monotone indicators
};

inline DoublingResult doubling_probability(double lambda, std::vector<double> a_values,
                                           double epsilon, int d, std::int64_t replicates,
                                           std::uint64_t seed, int workers = 1, int side = 12) {
    if (replicates <= 0) throw DomainError("doubling_probability: need replicates > 0");
    if (a_values.empty()) throw DomainError("doubling_probability: empty a grid");
    std::sort(a_values.begin(), a_values.end());
    for (double a : a_values)
        if (!(a >= 0.0))
            throw DomainError("doubling_probability: needs a >= 0 (attractive regime)");
    if (side < 6) throw DomainError("doubling_probability: torus side must be >= 6");

    const double tau = tau_from_epsilon(epsilon, d);
    const TorusGeometry geo = TorusGeometry::cubic(side, d);
    const auto window = lambda_plus(geo);
    const auto init = make_init(geo, InitKind::Box);
    const std::size_t procs = a_values.size();

    std::vector<Params> family_params;
    std::vector<std::vector<Site>> inits;
    for (double a : a_values) {
        family_params.push_back(Params::floor_rate(lambda, a, d));
        inits.push_back(init);
    }

    struct Row {
        std::vector<char> success;
        std::uint64_t violations = 0;
        char nesting_broken = 0;
    };
    const auto rows = run_replicates(replicates, workers, [&](std::int64_t r) -> Row {
        CoupledFamily family(family_params, geo, inits, seed, static_cast<std::uint64_t>(r));
        for (std::size_t k = 0; k + 1 < procs; ++k) family.add_claim(k, k + 1);
        family.restrict_births_to(window);
        const auto rep = family.evolve(tau);
        Row row;
        row.violations = rep.violations;
        row.success.resize(procs, 1);
        for (std::size_t k = 0; k < procs; ++k)
            for (Site s : window)
                if (!family.occupied(k, s)) {
                    row.success[k] = 0;
                    break;
                }
        for (std::size_t k = 0; k + 1 < procs; ++k)
            if (row.success[k] && !row.success[k + 1]) row.nesting_broken = 1;
        return row;
    });

    DoublingResult out;
    out.epsilon = epsilon;
    out.tau = tau;
    out.a_values = a_values;
    std::vector<std::int64_t> successes(procs, 0);
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < procs; ++k) successes[k] += row.success[k];
        out.containment_violations += row.violations;
        out.nesting_violations += row.nesting_broken;
    }
    for (std::size_t k = 0; k < procs; ++k) {
        out.estimates.push_back(wilson_estimate(successes[k], replicates, seed,
                                                "wilson95, coupled doubling indicators"));
        out.stage_bounds.push_back(invasion_stage_bound(lambda, a_values[k], tau, d));
        out.pipeline_bounds.push_back(1.0 - d * (1.0 - out.stage_bounds.back()) - epsilon / 2.0);
    }
    return out;
}

inline DoublingResult doubling_probability(double lambda, double a, double epsilon, int d,
                                           std::int64_t replicates, std::uint64_t seed,
                                           int workers = 1, int side = 12) {
    return doubling_probability(lambda, std::vector<double>{a}, epsilon, d, replicates, seed,
                                workers, side);
}

// ---------------------------------------------------------------------------
// Empty-block probability: worst-case (fully occupied) start on a torus of
// side 4L+1; success = the spatial box [-L, L]^d holds no player at any time
// in [L, 2L]. Reported next to the Poisson agreement bound of the
// perturbation argument.
// ---------------------------------------------------------------------------

struct EmptyBlockResult {
    Estimate estimate;
    double poisson_agreement = 0.0;
    double lambda = 0.0;
    double a = 0.0;
    int L = 0;
    int d = 1;
};

inline EmptyBlockResult empty_block_probability(double lambda, double a, int L, int d,
                                                std::int64_t replicates, std::uint64_t seed,
                                                int workers = 1) {
    if (L < 1) throw DomainError("empty_block_probability: L must be >= 1");
    if (replicates <= 0) throw DomainError("empty_block_probability: need replicates > 0");
    if (!(a < 0.0))
        throw DomainError("empty_block_probability: needs a < 0 (competitive regime)");
    const bool hard_core = std::isinf(a);
    const Params params = hard_core ? Params::hard_core(lambda, d)
                                    : Params::standard(lambda, a, d);
    const int side = 4 * L + 1;
    const TorusGeometry geo = TorusGeometry::cubic(side, d);
    const auto init = make_init(geo, InitKind::FullTorus);

    // in-box flag per site: every signed coordinate within [-L, L]
    std::vector<std::uint8_t> in_box(static_cast<std::size_t>(geo.num_sites()), 0);
    for (Site s = 0; s < geo.num_sites(); ++s) {
        bool inside = true;
        for (int c : geo.coords_of(s)) {
            const int signed_c = c <= 2 * L ? c : c - side;
            if (signed_c < -L || signed_c > L) {
                inside = false;
                break;
            }
        }
        in_box[static_cast<std::size_t>(s)] = inside ? 1 : 0;
    }

    const double t_lo = static_cast<double>(L);
    const double t_hi = 2.0 * static_cast<double>(L);
    const auto empty_throughout = run_replicates(replicates, workers, [&](std::int64_t r) -> char {
        SimState st(params, geo, init, seed, static_cast<std::uint64_t>(r));
        std::int64_t box_pop = 0;
        for (Site s = 0; s < geo.num_sites(); ++s)
            if (st.config().occupied(s) && in_box[static_cast<std::size_t>(s)]) ++box_pop;
        while (true) {
            if (st.config().occupied_count() == 0) return 1;  // extinct: box stays empty
            const double t_before = st.time();
            const EventRecord ev = st.step();
            // the configuration on [t_before, ev.time) carried box_pop players
            if (box_pop > 0 && ev.time > t_lo && t_before < t_hi) return 0;
            if (ev.time >= t_hi) return 1;
            if (in_box[static_cast<std::size_t>(ev.site)]) {
                if (ev.kind == EventRecord::Kind::Birth) ++box_pop;
                else if (ev.kind == EventRecord::Kind::Death) --box_pop;
            }
        }
    });
    std::int64_t successes = 0;
    for (char s : empty_throughout) successes += s;
    EmptyBlockResult out;
    out.estimate = wilson_estimate(successes, replicates, seed,
                                   "wilson95, block empty throughout [L,2L]");
    out.poisson_agreement = poisson_agreement_bound(lambda, a, L, d);  // e^{a/2d} -> 0 at a = -inf
    out.lambda = lambda;
    out.a = a;
    out.L = L;
    out.d = d;
    return out;
}

}  // namespace experiments
}  // namespace dcp
