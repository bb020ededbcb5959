#pragma once

// From-scratch rate evaluation used as an oracle against the incrementally
// maintained caches. Reads only the occupancy and the parameter formulas;
// never touches the cached counts, rates, or the sampling index.

#include <cmath>
#include <vector>

#include "dcp/configuration.hpp"
#include "dcp/params.hpp"
#include "dcp/torus.hpp"

namespace brute {

inline int neighbor_count(const dcp::Configuration& cfg, dcp::Site s) {
    const auto& geo = cfg.geometry();
    int k = 0;
    for (int j = 0; j < geo.degree(); ++j) {
        const dcp::Site y = geo.neighbor(s, j);
        if (y != dcp::kOutside && cfg.occupied(y)) ++k;
    }
    return k;
}

inline double phi_of_count(const dcp::Params& p, int k) {
    const int deg = 2 * p.dim;
    switch (p.variant) {
        case dcp::Variant::Standard:
            return p.lambda * std::exp(p.payoff * (static_cast<double>(k) / deg));
        case dcp::Variant::FloorRate:
            return k > 0 ? p.lambda * std::exp(p.payoff / deg) : 0.0;
        case dcp::Variant::HardCore:
            return k == 0 ? p.lambda : 0.0;
    }
    return 0.0;
}

inline double phi(const dcp::Configuration& cfg, dcp::Site s) {
    return cfg.occupied(s) ? phi_of_count(cfg.params(), neighbor_count(cfg, s)) : 0.0;
}

inline double psi(const dcp::Configuration& cfg, dcp::Site s) {
    const auto& geo = cfg.geometry();
    double acc = 0.0;
    for (int j = 0; j < geo.degree(); ++j) {
        const dcp::Site y = geo.neighbor(s, j);
        if (y != dcp::kOutside && cfg.occupied(y)) acc += phi(cfg, y);
    }
    return acc / geo.degree();
}

inline double total_rate(const dcp::Configuration& cfg) {
    double acc = 0.0;
    for (dcp::Site s = 0; s < cfg.geometry().num_sites(); ++s)
        if (cfg.occupied(s)) acc += 1.0 + phi(cfg, s);
    return acc;
}

}  // namespace brute
