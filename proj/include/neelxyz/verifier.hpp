#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "neelxyz/errors.hpp"
#include "neelxyz/factor_core.hpp"
#include "neelxyz/lattice.hpp"
#include "neelxyz/spin_algebra.hpp"

namespace neelxyz {

/// Amplitudes over the site-ordered tensor basis: site flat index 0 is the
/// slowest-varying factor.
using StateVector = Eigen::VectorXcd;

inline std::int64_t hilbert_dim(const Lattice& lat, SpinQuantum s,
                                std::int64_t budget = std::int64_t(1) << 20) {
    const std::int64_t n = lat.num_sites();
    std::int64_t dim = 1;
    for (std::int64_t i = 0; i < n; ++i) {
        if (dim > budget / s.multiplicity()) {
            throw BudgetExceeded("state of dimension (2s+1)^" + std::to_string(n) +
                                 " exceeds the budget of " + std::to_string(budget));
        }
        dim *= s.multiplicity();
    }
    return dim;
}

/// Tensor product over sites of the coherent state selected by sublattice
/// parity. Unit norm by construction.
inline StateVector build_neel_state(const Lattice& lat, const NeelAngles& a, SpinQuantum s,
                                    std::int64_t budget = std::int64_t(1) << 20) {
    hilbert_dim(lat, s, budget);
    const Eigen::VectorXcd c0 = coherent_state(s, a.dir1);
    const Eigen::VectorXcd c1 = coherent_state(s, a.dir2);
    const int m = s.multiplicity();

    StateVector state(1);
    state(0) = 1.0;
    for (const SiteIndex& site : sites(lat)) {
        const Eigen::VectorXcd& c = parity(site) == 0 ? c0 : c1;
        StateVector next(state.size() * m);
        for (Eigen::Index i = 0; i < state.size(); ++i) {
            for (int j = 0; j < m; ++j) next(i * m + j) = state(i) * c(j);
        }
        state.swap(next);
    }
    return state;
}

namespace detail {

/// out += coeff * (A acting on tensor factor `site`) v
inline void accumulate_site_op(const Eigen::MatrixXcd& a, std::int64_t stride, int m,
                               const StateVector& v, StateVector& out, double coeff = 1.0) {
    const std::int64_t dim = v.size();
    for (std::int64_t idx = 0; idx < dim; ++idx) {
        const int mi = static_cast<int>((idx / stride) % m);
        complexd acc = 0.0;
        const std::int64_t base = idx - mi * stride;
        for (int j = 0; j < m; ++j) {
            const complexd aij = a(mi, j);
            if (aij != complexd(0.0, 0.0)) acc += aij * v(base + j * stride);
        }
        out(idx) += coeff * acc;
    }
}

/// out += coeff * (A at site k, B at site l) v, k != l
inline void accumulate_bond_op(const Eigen::MatrixXcd& a, std::int64_t stride_k,
                               const Eigen::MatrixXcd& b, std::int64_t stride_l, int m,
                               const StateVector& v, StateVector& out, double coeff) {
    const std::int64_t dim = v.size();
    for (std::int64_t idx = 0; idx < dim; ++idx) {
        const int mk = static_cast<int>((idx / stride_k) % m);
        const int ml = static_cast<int>((idx / stride_l) % m);
        const std::int64_t base = idx - mk * stride_k - ml * stride_l;
        complexd acc = 0.0;
        for (int j1 = 0; j1 < m; ++j1) {
            const complexd akj = a(mk, j1);
            if (akj == complexd(0.0, 0.0)) continue;
            const std::int64_t off = base + j1 * stride_k;
            for (int j2 = 0; j2 < m; ++j2) {
                const complexd blj = b(ml, j2);
                if (blj != complexd(0.0, 0.0)) acc += akj * blj * v(off + j2 * stride_l);
            }
        }
        out(idx) += coeff * acc;
    }
}

}  // namespace detail

/// H v, applied matrix-free: the exchange term runs over the N*d directed
/// bonds, the field term once per site with coefficient 1 (algebraically the
/// same as the 1/(2d)-weighted per-bond split, since each site sits in 2d
/// bonds). Bond order is flat-index major, direction minor, so sequential
/// results are bit-reproducible.
inline StateVector apply_hamiltonian(const Params& p, const Lattice& lat, SpinQuantum s,
                                     const StateVector& v) {
    const std::int64_t n = lat.num_sites();
    const int m = s.multiplicity();
    std::int64_t dim = 1;
    for (std::int64_t i = 0; i < n; ++i) dim *= m;
    if (v.size() != dim) {
        throw DimensionMismatch("apply_hamiltonian: state length " + std::to_string(v.size()) +
                                " != (2s+1)^N = " + std::to_string(dim));
    }
    // stride of site k: m^(N-1-k), site 0 slowest
    std::vector<std::int64_t> stride(n);
    std::int64_t acc = 1;
    for (std::int64_t k = n - 1; k >= 0; --k) {
        stride[k] = acc;
        acc *= m;
    }

    const SpinMatrices sm = spin_matrices(s);
    const std::array<const Eigen::MatrixXcd*, 3> ops{&sm.sx, &sm.sy, &sm.sz};
    const std::array<double, 3> j{p.jx, p.jy, p.jz};

    StateVector out = StateVector::Zero(dim);
    for (const auto& [from, to] : directed_bonds(lat)) {
        for (int axis = 0; axis < 3; ++axis) {
            if (j[axis] == 0.0) continue;
            detail::accumulate_bond_op(*ops[axis], stride[from.flat], *ops[axis], stride[to.flat],
                                       m, v, out, j[axis]);
        }
    }
    const Eigen::MatrixXcd field = p.hx * sm.sx + p.hy * sm.sy + p.hz * sm.sz;
    if (!field.isZero(0.0)) {
        for (std::int64_t k = 0; k < n; ++k) {
            detail::accumulate_site_op(field, stride[k], m, v, out, -1.0);
        }
    }
    return out;
}

/// || H |N> - N epsilon |N> ||: zero exactly when the Neel state is an
/// eigenstate with the predicted eigenvalue.
inline double eigen_residual(const Params& p, const Lattice& lat, SpinQuantum s,
                             const NeelAngles& a, std::int64_t budget = std::int64_t(1) << 20) {
    const StateVector neel = build_neel_state(lat, a, s, budget);
    const StateVector hv = apply_hamiltonian(p, lat, s, neel);
    const double energy = lat.num_sites() * energy_per_site(p, ModelContext{lat.dim, s});
    return (hv - energy * neel).norm();
}

/// Residual of the single-bond eigenvalue relation on the two-site Hilbert
/// space, with the 1/(2d) field split. This is the cheap ground-truth oracle:
/// it never needs a lattice.
inline double bond_residual(const Params& p, const ModelContext& ctx, const NeelAngles& a) {
    const SpinMatrices sm = spin_matrices(ctx.spin);
    const int m = ctx.spin.multiplicity();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(m, m);
    const auto kron = [m](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
        Eigen::MatrixXcd out(m * m, m * m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) out.block(i * m, j * m, m, m) = x(i, j) * y;
        return out;
    };
    Eigen::MatrixXcd h = p.jx * kron(sm.sx, sm.sx) + p.jy * kron(sm.sy, sm.sy) +
                         p.jz * kron(sm.sz, sm.sz);
    const Eigen::MatrixXcd field = p.hx * sm.sx + p.hy * sm.sy + p.hz * sm.sz;
    h -= (kron(field, id) + kron(id, field)) / (2.0 * ctx.dim);

    const Eigen::VectorXcd psi1 = coherent_state(ctx.spin, a.dir1);
    const Eigen::VectorXcd psi2 = coherent_state(ctx.spin, a.dir2);
    Eigen::VectorXcd psi(m * m);
    for (int i = 0; i < m; ++i) psi.segment(i * m, m) = psi1(i) * psi2;

    const double bond_energy = energy_per_site(p, ctx) / ctx.dim;
    return (h * psi - bond_energy * psi).norm();
}

/// Full dense spectrum, ascending. Diagnostic only; capped at small
/// dimensions.
inline Eigen::VectorXd spectrum_probe(const Params& p, const Lattice& lat, SpinQuantum s,
                                      std::int64_t max_dim = 4096) {
    const std::int64_t dim = hilbert_dim(lat, s, max_dim);
    Eigen::MatrixXcd h(dim, dim);
    StateVector e = StateVector::Zero(dim);
    for (std::int64_t col = 0; col < dim; ++col) {
        e(col) = 1.0;
        h.col(col) = apply_hamiltonian(p, lat, s, e);
        e(col) = 0.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (h + h.adjoint()),
                                                           Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

}  // namespace neelxyz
