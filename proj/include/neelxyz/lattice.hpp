#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "neelxyz/errors.hpp"

namespace neelxyz {

struct SiteIndex {
    std::vector<int> coords;
    std::int64_t flat = 0;
};

/// Periodic d-dimensional cubic lattice with even extents (bipartite by
/// construction). Sites are linearized row-major: coordinate 0 is slowest.
struct Lattice {
    int dim = 1;
    std::vector<int> extents;

    Lattice(int d, std::vector<int> ext) : dim(d), extents(std::move(ext)) {
        if (dim < 1 || static_cast<int>(extents.size()) != dim) {
            throw DimensionMismatch("lattice: need one extent per dimension, d >= 1");
        }
        for (int L : extents) {
            if (L < 2 || L % 2 != 0) {
                throw DimensionMismatch("lattice: every extent must be a positive even integer, got " +
                                        std::to_string(L));
            }
        }
    }

    std::int64_t num_sites() const {
        std::int64_t n = 1;
        for (int L : extents) n *= L;
        return n;
    }

    std::int64_t flatten(const std::vector<int>& coords) const {
        std::int64_t f = 0;
        for (int i = 0; i < dim; ++i) f = f * extents[i] + coords[i];
        return f;
    }

    SiteIndex site(std::int64_t flat) const {
        SiteIndex s;
        s.flat = flat;
        s.coords.assign(dim, 0);
        for (int i = dim - 1; i >= 0; --i) {
            s.coords[i] = static_cast<int>(flat % extents[i]);
            flat /= extents[i];
        }
        return s;
    }
};

inline std::vector<SiteIndex> sites(const Lattice& lat) {
    std::vector<SiteIndex> out;
    const std::int64_t n = lat.num_sites();
    out.reserve(n);
    for (std::int64_t f = 0; f < n; ++f) out.push_back(lat.site(f));
    return out;
}

/// One directed bond (l, l+e_i mod extents) per site per direction: N*d pairs.
/// For an extent of 2 the same geometric pair appears twice; that double count
/// is intentional and keeps the per-site energy bookkeeping exact.
/// Enumeration order is flat-index major, direction minor.
inline std::vector<std::pair<SiteIndex, SiteIndex>> directed_bonds(const Lattice& lat) {
    std::vector<std::pair<SiteIndex, SiteIndex>> out;
    const std::int64_t n = lat.num_sites();
    out.reserve(n * lat.dim);
    for (std::int64_t f = 0; f < n; ++f) {
        const SiteIndex from = lat.site(f);
        for (int i = 0; i < lat.dim; ++i) {
            std::vector<int> c = from.coords;
            c[i] = (c[i] + 1) % lat.extents[i];
            SiteIndex to;
            to.coords = c;
            to.flat = lat.flatten(c);
            out.emplace_back(from, to);
        }
    }
    return out;
}

/// Sublattice label: (sum of coordinates) mod 2. 0 picks the first Neel
/// direction, 1 the second. Even extents guarantee it alternates across
/// every bond.
inline int parity(const SiteIndex& site) {
    int s = std::accumulate(site.coords.begin(), site.coords.end(), 0);
    return ((s % 2) + 2) % 2;
}

}  // namespace neelxyz
