#pragma once

// Finite d-dimensional torus geometry. Sites are flat indices in row-major
// order over the side lengths; the neighbor table lists the 2d nearest
// neighbors of each site in the pinned order (-dim0, +dim0, -dim1, +dim1, ...),
// which event sampling relies on for reproducibility.
//
// Boundary policies:
//   Periodic    - coordinates wrap; every site has exactly 2d neighbors.
//   EmptyFrozen - the box is a window into empty space: out-of-window
//                 neighbors are permanently empty (they still count in the
//                 2d denominator of f1 and swallow births aimed at them).

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "dcp/errors.hpp"

namespace dcp {

enum class Boundary { Periodic, EmptyFrozen };

inline const char* to_string(Boundary b) {
    return b == Boundary::Periodic ? "periodic" : "empty-frozen";
}

using Site = std::int64_t;  // flat site index; kOutside marks a frozen-empty neighbor

constexpr Site kOutside = -1;

class TorusGeometry {
public:
    TorusGeometry() = default;

    TorusGeometry(std::vector<int> side_lengths, Boundary boundary = Boundary::Periodic)
        : sides_(std::move(side_lengths)), boundary_(boundary) {
        if (sides_.empty()) throw DomainError("torus: need at least one side length");
        for (int s : sides_)
            if (s < 1) throw DomainError("torus: side lengths must be positive");
        strides_.resize(sides_.size());
        std::int64_t acc = 1;
        for (std::size_t i = 0; i < sides_.size(); ++i) {
            strides_[i] = acc;
            acc *= sides_[i];
        }
        num_sites_ = acc;
        build_neighbors();
    }

    // Cubic torus: side repeated in every dimension.
    static TorusGeometry cubic(int side, int dim, Boundary boundary = Boundary::Periodic) {
        return TorusGeometry(std::vector<int>(static_cast<std::size_t>(dim), side), boundary);
    }

    int dim() const { return static_cast<int>(sides_.size()); }
    int degree() const { return 2 * dim(); }
    std::int64_t num_sites() const { return num_sites_; }
    const std::vector<int>& sides() const { return sides_; }
    Boundary boundary() const { return boundary_; }

    bool contains(Site s) const { return s >= 0 && s < num_sites_; }

    void check_site(Site s) const {
        if (!contains(s))
            throw CoordinateError("site " + std::to_string(s) + " outside geometry");
    }

    // j-th neighbor of s (pinned order); kOutside under EmptyFrozen when the
    // step leaves the window.
    Site neighbor(Site s, int j) const { return neighbors_[static_cast<std::size_t>(s) * degree() + j]; }

    std::vector<int> coords_of(Site s) const {
        std::vector<int> c(sides_.size());
        for (std::size_t i = 0; i < sides_.size(); ++i) {
            c[i] = static_cast<int>((s / strides_[i]) % sides_[i]);
        }
        return c;
    }

    // Coordinates may be any integers; they wrap onto the torus.
    Site site_of(const std::vector<int>& coords) const {
        if (coords.size() != sides_.size())
            throw CoordinateError("coordinate dimension mismatch");
        Site s = 0;
        for (std::size_t i = 0; i < sides_.size(); ++i) {
            int c = coords[i] % sides_[i];
            if (c < 0) c += sides_[i];
            s += static_cast<std::int64_t>(c) * strides_[i];
        }
        return s;
    }

    bool adjacent(Site a, Site b) const {
        for (int j = 0; j < degree(); ++j)
            if (neighbor(a, j) == b) return true;
        return false;
    }

    // Wrapped L-infinity distance from the origin site (0,...,0).
    int linf_from_origin(Site s) const {
        int m = 0;
        const auto c = coords_of(s);
        for (std::size_t i = 0; i < c.size(); ++i) {
            int di = c[i];
            if (boundary_ == Boundary::Periodic) di = std::min(di, sides_[i] - di);
            m = std::max(m, di);
        }
        return m;
    }

    std::string shape_string() const {
        std::string out;
        for (std::size_t i = 0; i < sides_.size(); ++i) {
            if (i) out += 'x';
            out += std::to_string(sides_[i]);
        }
        return out;
    }

private:
    void build_neighbors() {
        neighbors_.resize(static_cast<std::size_t>(num_sites_) * degree());
        std::vector<int> c(sides_.size());
        for (Site s = 0; s < num_sites_; ++s) {
            for (std::size_t i = 0; i < sides_.size(); ++i)
                c[i] = static_cast<int>((s / strides_[i]) % sides_[i]);
            for (std::size_t i = 0; i < sides_.size(); ++i) {
                for (int dir = 0; dir < 2; ++dir) {
                    const int step = dir == 0 ? -1 : +1;
                    Site n;
                    const int moved = c[i] + step;
                    if (moved < 0 || moved >= sides_[i]) {
                        if (boundary_ == Boundary::EmptyFrozen) {
                            n = kOutside;
                        } else {
                            const int wrapped = moved < 0 ? sides_[i] - 1 : 0;
                            n = s + static_cast<std::int64_t>(wrapped - c[i]) * strides_[i];
                        }
                    } else {
                        n = s + step * strides_[i];
                    }
                    neighbors_[static_cast<std::size_t>(s) * degree() +
                               static_cast<std::size_t>(2 * i) + static_cast<std::size_t>(dir)] = n;
                }
            }
        }
    }

    std::vector<int> sides_;
    Boundary boundary_ = Boundary::Periodic;
    std::vector<std::int64_t> strides_;
    std::int64_t num_sites_ = 0;
    std::vector<Site> neighbors_;
};

}  // namespace dcp
