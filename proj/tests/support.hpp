#pragma once

// Shared test helpers: independent dense-Hamiltonian oracle (explicit
// Kronecker assembly, no reuse of the matrix-free path), random samplers for
// valid parameter sets and generic angle pairs.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

#include "neelxyz/factor_core.hpp"
#include "neelxyz/lattice.hpp"
#include "neelxyz/spin_algebra.hpp"

namespace testsupport {

using namespace neelxyz;

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Operator `op` embedded at one site of the N-site chain by explicit
/// Kronecker products (site 0 leftmost / slowest).
inline Eigen::MatrixXcd embed_site(const Eigen::MatrixXcd& op, std::int64_t site,
                                   std::int64_t n_sites, int m) {
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(m, m);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (std::int64_t k = 0; k < n_sites; ++k) out = kron(out, k == site ? op : id);
    return out;
}

/// Fully independent dense assembly of the lattice Hamiltonian.
inline Eigen::MatrixXcd dense_hamiltonian(const Params& p, const Lattice& lat, SpinQuantum s) {
    const SpinMatrices sm = spin_matrices(s);
    const std::int64_t n = lat.num_sites();
    const int m = s.multiplicity();
    std::int64_t dim = 1;
    for (std::int64_t i = 0; i < n; ++i) dim *= m;

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& [from, to] : directed_bonds(lat)) {
        h += p.jx * embed_site(sm.sx, from.flat, n, m) * embed_site(sm.sx, to.flat, n, m);
        h += p.jy * embed_site(sm.sy, from.flat, n, m) * embed_site(sm.sy, to.flat, n, m);
        h += p.jz * embed_site(sm.sz, from.flat, n, m) * embed_site(sm.sz, to.flat, n, m);
    }
    for (std::int64_t k = 0; k < n; ++k) {
        h -= p.hx * embed_site(sm.sx, k, n, m);
        h -= p.hy * embed_site(sm.sy, k, n, m);
        h -= p.hz * embed_site(sm.sz, k, n, m);
    }
    return h;
}

/// Random parameter set on the factorization surface: random exchange with
/// safely nonzero pairwise sums, random field direction with a positive
/// condition quadratic form, field magnitude fixed by the scan.
inline Params random_factorizing_params(std::mt19937& rng, const ModelContext& ctx) {
    std::uniform_real_distribution<double> uj(-1.0, 1.0);
    for (;;) {
        Params p;
        p.jx = uj(rng);
        p.jy = uj(rng);
        p.jz = uj(rng);
        const double max_j = std::max({std::abs(p.jx), std::abs(p.jy), std::abs(p.jz)});
        if (std::abs(p.jx + p.jy) < 0.2 || std::abs(p.jx + p.jz) < 0.2 ||
            std::abs(p.jy + p.jz) < 0.2 || max_j < 0.3) {
            continue;
        }
        Vector6d dir = Vector6d::Zero();
        double norm = 0.0;
        for (int i = 3; i < 6; ++i) {
            dir(i) = uj(rng);
            norm += dir(i) * dir(i);
        }
        if (norm < 0.1) continue;
        dir.tail(3) /= std::sqrt(norm);

        // Positive quadratic form along this field direction means a
        // factorizing field magnitude exists.
        const double f = ctx.field_scale();
        const Params unit_field = Params::from_vec(p.vec() + dir);
        const double quad = condition_residual(unit_field, ctx) + f * f;
        if (quad < 0.05) continue;

        const auto roots = factorizing_field_scan(p, dir, ctx, 0.0, 4.0 * f / std::sqrt(quad), 201);
        return Params::from_vec(p.vec() + roots.front() * dir);
    }
}

/// Generic angle pair: tangents of moderate size, sublattice directions well
/// away from the degenerate families (|chi| and the closed-form denominator
/// bounded below).
inline NeelAngles random_generic_angles(std::mt19937& rng, const ModelContext& ctx,
                                        double min_chi = 1e-3) {
    const double pi = std::numbers::pi;
    std::uniform_real_distribution<double> uth(0.3, 2.7);
    std::uniform_real_distribution<double> uph(-pi, pi);
    for (;;) {
        NeelAngles a{Direction::canonical(uth(rng), uph(rng)),
                     Direction::canonical(uth(rng), uph(rng))};
        const AngleInvariants inv = angle_invariants(a);
        if (std::abs(inv.chi) < min_chi) continue;
        const double den = inv.chi * (inv.chi * inv.chi + inv.gamma * inv.gamma -
                                      inv.delta * inv.delta + inv.zeta * inv.zeta - 1.0) +
                           2.0 * inv.gamma * inv.delta * inv.zeta;
        if (std::abs(den) < 1e-2) continue;
        (void)ctx;
        return a;
    }
}

/// Max componentwise angle distance, treating phi modulo 2 pi and ignoring
/// phi at the poles.
inline double direction_distance(const Direction& a, const Direction& b) {
    double d = std::abs(a.theta - b.theta);
    if (!a.at_pole() && !b.at_pole()) {
        d = std::max(d, std::abs(std::remainder(a.phi - b.phi, 2.0 * std::numbers::pi)));
    }
    return d;
}

inline double angles_distance_up_to_swap(const NeelAngles& a, const NeelAngles& b) {
    const double direct = std::max(direction_distance(a.dir1, b.dir1),
                                   direction_distance(a.dir2, b.dir2));
    const double swapped = std::max(direction_distance(a.dir1, b.dir2),
                                    direction_distance(a.dir2, b.dir1));
    return std::min(direct, swapped);
}

}  // namespace testsupport
