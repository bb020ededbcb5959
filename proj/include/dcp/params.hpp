#pragma once

// Model parameters and the per-site birth-rate law. A site occupied by a
// player dies at rate one and gives birth at rate phi(k) where k is its
// number of occupied neighbors out of 2d:
//
//   Standard:  phi(k) = lambda * h(a * k/2d)   (h increasing, h(0) = 1)
//   FloorRate: phi(k) = lambda * e^{a/2d} if k > 0, else 0
//   HardCore:  phi(k) = lambda if k == 0, else 0   (the a = -infinity limit)
//
// Rates depend on the neighborhood only through the integer count k, so the
// law is tabulated once per parameter set; every module reads the same table
// and cached rates stay exactly equal to from-scratch evaluation.

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "dcp/errors.hpp"

namespace dcp {

enum class Variant { Standard, FloorRate, HardCore };

enum class HKind { Exp, Custom };

inline const char* to_string(Variant v) {
    switch (v) {
        case Variant::Standard: return "standard";
        case Variant::FloorRate: return "floor-rate";
        case Variant::HardCore: return "hard-core";
    }
    return "?";
}

struct Params {
    double lambda = 1.0;             // natural birth rate
    double payoff = 0.0;             // payoff coefficient a; -infinity allowed
    int dim = 1;                     // lattice dimension d
    Variant variant = Variant::Standard;
    HKind h_kind = HKind::Exp;
    std::function<double(double)> h_custom;  // used when h_kind == Custom

    static constexpr double minus_infinity() {
        return -std::numeric_limits<double>::infinity();
    }

    // HardCore parameters for the a = -infinity limit.
    static Params hard_core(double lambda, int dim) {
        Params p;
        p.lambda = lambda;
        p.payoff = minus_infinity();
        p.dim = dim;
        p.variant = Variant::HardCore;
        return p;
    }

    static Params standard(double lambda, double payoff, int dim) {
        Params p;
        p.lambda = lambda;
        p.payoff = payoff;
        p.dim = dim;
        return p;
    }

    static Params floor_rate(double lambda, double payoff, int dim) {
        Params p;
        p.lambda = lambda;
        p.payoff = payoff;
        p.dim = dim;
        p.variant = Variant::FloorRate;
        return p;
    }

    int degree() const { return 2 * dim; }

    void validate() const {
        if (!(lambda >= 0.0))
            throw DomainError("params: lambda must be >= 0");
        if (dim < 1)
            throw DomainError("params: dim must be >= 1");
        const bool a_is_minus_inf = std::isinf(payoff) && payoff < 0.0;
        if ((variant == Variant::HardCore) != a_is_minus_inf)
            throw DomainError("params: variant is hard-core iff payoff is -infinity");
        if (std::isnan(payoff) || (std::isinf(payoff) && payoff > 0.0))
            throw DomainError("params: payoff must lie in [-infinity, +infinity)");
        if (h_kind == HKind::Custom) {
            if (!h_custom) throw DomainError("params: custom h not set");
            if (std::abs(h_custom(0.0) - 1.0) > 1e-12)
                throw DomainError("params: h(0) must equal 1");
        }
    }

    double h(double r) const {
        return h_kind == HKind::Exp ? std::exp(r) : h_custom(r);
    }

    // Birth rate of an occupied site with k occupied neighbors.
    double phi_of_count(int k) const {
        switch (variant) {
            case Variant::Standard:
                return lambda * h(payoff * (static_cast<double>(k) / degree()));
            case Variant::FloorRate:
                return k > 0 ? lambda * std::exp(payoff / degree()) : 0.0;
            case Variant::HardCore:
                return k == 0 ? lambda : 0.0;
        }
        return 0.0;
    }

    // phi tabulated over k = 0..2d.
    std::vector<double> rate_table() const {
        std::vector<double> t(static_cast<std::size_t>(degree()) + 1);
        for (int k = 0; k <= degree(); ++k) t[static_cast<std::size_t>(k)] = phi_of_count(k);
        return t;
    }

    double max_birth_rate() const {
        double m = 0.0;
        for (int k = 0; k <= degree(); ++k) m = std::max(m, phi_of_count(k));
        return m;
    }
};

}  // namespace dcp
