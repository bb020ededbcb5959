#pragma once

// Occupancy state on a torus with incrementally maintained rate caches.
//
// Per site the configuration keeps: the occupancy bit, the occupied-neighbor
// count k (kept as an integer so cache updates are exact; the division by 2d
// happens only inside rate evaluation), and for occupied sites the birth rate
// phi(k) read from the parameter rate table. A weighted sampling index stores
// 1 + phi for occupied sites (death rate one plus total birth rate), which is
// what event-driven sampling selects against.
//
// Every cached value is a pure function of local integer state, recomputed on
// change rather than adjusted by deltas, so cached rates stay bit-identical
// to from-scratch evaluation. rebuild() recomputes everything from the
// occupancy alone.

#include <cstdint>
#include <vector>

#include "dcp/errors.hpp"
#include "dcp/params.hpp"
#include "dcp/torus.hpp"
#include "dcp/weighted_index.hpp"

namespace dcp {

// Sites whose cached rate was recomputed by an event: the flipped site plus
// its occupied neighbors. Empty for coalescences.
struct ChangeSet {
    Site flipped = kOutside;        // kOutside when the event changed nothing
    bool occupied_after = false;    // new occupancy of `flipped`
    std::vector<Site> rate_changed;

    bool no_change() const { return flipped == kOutside; }
};

struct RateQuery {
    Site site = 0;
    int occupied_neighbors = 0;  // k, numerator of f1
    double f1 = 0.0;             // k / 2d
    double phi = 0.0;            // birth rate, when occupied
    double psi = 0.0;            // fill rate, when empty
};

class Configuration {
public:
    Configuration(const Params& params, const TorusGeometry& geo,
                  const std::vector<Site>& initially_occupied = {})
        : params_(params), geo_(&geo), phi_table_(params.rate_table()) {
        params_.validate();
        const auto n = static_cast<std::size_t>(geo.num_sites());
        occupancy_.assign(n, 0);
        count_.assign(n, 0);
        phi_.assign(n, 0.0);
        index_.reset(n);
        for (Site s : initially_occupied) {
            geo.check_site(s);
            occupancy_[static_cast<std::size_t>(s)] = 1;
        }
        rebuild();
    }

    const Params& params() const { return params_; }
    const TorusGeometry& geometry() const { return *geo_; }
    const std::vector<double>& phi_table() const { return phi_table_; }

    std::int64_t occupied_count() const { return occupied_count_; }
    bool occupied(Site s) const { return occupancy_[static_cast<std::size_t>(s)] != 0; }
    int occupied_neighbors(Site s) const { return count_[static_cast<std::size_t>(s)]; }
    double cached_phi(Site s) const { return phi_[static_cast<std::size_t>(s)]; }

    // f1(x, xi): fraction of occupied neighbors, denominator 2d.
    double neighbor_fraction(Site s) const {
        geo_->check_site(s);
        return static_cast<double>(count_[static_cast<std::size_t>(s)]) / geo_->degree();
    }

    // Birth rate phi of an occupied site.
    double birth_rate(Site s) const {
        geo_->check_site(s);
        if (!occupied(s)) throw StateError("birth_rate: site is empty");
        return phi_[static_cast<std::size_t>(s)];
    }

    // Fill rate psi of an empty site: sum over occupied neighbors y of
    // phi(y)/2d (each occupied y fires at phi(y) and aims at a uniform
    // neighbor).
    double fill_rate(Site s) const {
        geo_->check_site(s);
        if (occupied(s)) throw StateError("fill_rate: site is occupied");
        return fill_rate_unchecked(s);
    }

    double fill_rate_unchecked(Site s) const {
        double acc = 0.0;
        for (int j = 0; j < geo_->degree(); ++j) {
            const Site y = geo_->neighbor(s, j);
            if (y != kOutside && occupied(y)) acc += phi_[static_cast<std::size_t>(y)];
        }
        return acc / geo_->degree();
    }

    RateQuery query(Site s) const {
        geo_->check_site(s);
        RateQuery q;
        q.site = s;
        q.occupied_neighbors = count_[static_cast<std::size_t>(s)];
        q.f1 = static_cast<double>(q.occupied_neighbors) / geo_->degree();
        if (occupied(s)) {
            q.phi = phi_[static_cast<std::size_t>(s)];
        } else {
            q.psi = fill_rate_unchecked(s);
        }
        return q;
    }

    // Birth fired by `parent` toward `target`. A target already occupied
    // coalesces: the event is consumed, no state changes.
    ChangeSet apply_birth(Site parent, Site target) {
        geo_->check_site(parent);
        if (!occupied(parent)) throw StateError("apply_birth: parent is empty");
        if (target == kOutside) return {};  // frozen-empty boundary swallows the child
        geo_->check_site(target);
        if (!geo_->adjacent(parent, target))
            throw TopologyError("apply_birth: target not adjacent to parent");
        if (occupied(target)) return {};  // coalescence
        return flip(target, true);
    }

    ChangeSet apply_death(Site s) {
        geo_->check_site(s);
        if (!occupied(s)) throw StateError("apply_death: site is empty");
        return flip(s, false);
    }

    // Occupy a site outside the event flow (initial conditions).
    ChangeSet force_occupy(Site s) {
        geo_->check_site(s);
        if (occupied(s)) return {};
        return flip(s, true);
    }

    // Total transition rate occupied_count + sum phi, as maintained by the
    // sampling index.
    double total_rate() const { return index_.total(); }

    // Occupied site proportional to 1 + phi; r in [0, total_rate()).
    Site sample_site(double r) const { return static_cast<Site>(index_.sample(r)); }

    const WeightedIndex& rate_index() const { return index_; }

    std::vector<Site> occupied_sites() const {
        std::vector<Site> out;
        out.reserve(static_cast<std::size_t>(occupied_count_));
        for (Site s = 0; s < geo_->num_sites(); ++s)
            if (occupied(s)) out.push_back(s);
        return out;
    }

    // Recompute neighbor counts, cached rates and index weights from the
    // occupancy field.
    void rebuild() {
        occupied_count_ = 0;
        const Site n = geo_->num_sites();
        for (Site s = 0; s < n; ++s) {
            int k = 0;
            for (int j = 0; j < geo_->degree(); ++j) {
                const Site y = geo_->neighbor(s, j);
                if (y != kOutside && occupied(y)) ++k;
            }
            count_[static_cast<std::size_t>(s)] = static_cast<std::uint16_t>(k);
        }
        std::vector<double> w(static_cast<std::size_t>(n), 0.0);
        for (Site s = 0; s < n; ++s) {
            const auto i = static_cast<std::size_t>(s);
            if (occupancy_[i]) {
                ++occupied_count_;
                phi_[i] = phi_table_[count_[i]];
                w[i] = 1.0 + phi_[i];
            } else {
                phi_[i] = 0.0;
            }
        }
        index_.assign(w);
    }

private:
    ChangeSet flip(Site s, bool to_occupied) {
        const auto i = static_cast<std::size_t>(s);
        ChangeSet ch;
        ch.flipped = s;
        ch.occupied_after = to_occupied;
        occupancy_[i] = to_occupied ? 1 : 0;
        occupied_count_ += to_occupied ? 1 : -1;
        const int delta = to_occupied ? 1 : -1;
        for (int j = 0; j < geo_->degree(); ++j) {
            const Site y = geo_->neighbor(s, j);
            if (y == kOutside) continue;
            const auto yi = static_cast<std::size_t>(y);
            count_[yi] = static_cast<std::uint16_t>(count_[yi] + delta);
            if (occupancy_[yi]) {
                phi_[yi] = phi_table_[count_[yi]];
                index_.set(yi, 1.0 + phi_[yi]);
                ch.rate_changed.push_back(y);
            }
        }
        if (to_occupied) {
            phi_[i] = phi_table_[count_[i]];
            index_.set(i, 1.0 + phi_[i]);
        } else {
            phi_[i] = 0.0;
            index_.set(i, 0.0);
        }
        ch.rate_changed.push_back(s);
        return ch;
    }

    Params params_;
    const TorusGeometry* geo_;
    std::vector<double> phi_table_;
    std::vector<std::uint8_t> occupancy_;
    std::vector<std::uint16_t> count_;
    std::vector<double> phi_;
    WeightedIndex index_;
    std::int64_t occupied_count_ = 0;
};

}  // namespace dcp
