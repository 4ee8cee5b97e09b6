#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

#include "neelxyz/errors.hpp"

namespace neelxyz {

using complexd = std::complex<double>;

/// Spin quantum number stored as 2s so half-integers stay exact.
struct SpinQuantum {
    int two_s = 1;

    constexpr bool valid() const { return two_s >= 1; }
    constexpr int multiplicity() const { return two_s + 1; }
    constexpr double value() const { return 0.5 * two_s; }
};

/// A point on the unit sphere. phi lives in (-pi, pi] and is gauged to 0 at
/// the poles, where it is meaningless.
struct Direction {
    double theta = 0.0;
    double phi = 0.0;

    static constexpr double pole_eps = 1e-12;

    static Direction canonical(double theta, double phi) {
        const double pi = std::numbers::pi;
        if (theta < 0.0) theta = 0.0;
        if (theta > pi) theta = pi;
        if (std::abs(std::sin(theta)) < pole_eps) {
            return {theta, 0.0};
        }
        phi = std::remainder(phi, 2.0 * pi);
        if (phi <= -pi) phi = pi;  // remainder returns [-pi, pi]
        return {theta, phi};
    }

    bool at_pole() const { return std::abs(std::sin(theta)) < pole_eps; }
};

struct SpinMatrices {
    Eigen::MatrixXcd sx, sy, sz;
};

/// Spin operators in the |s, m> basis ordered m = s, s-1, ..., -s, built from
/// the ladder operators S± with elements sqrt(s(s+1) - m(m±1)).
inline SpinMatrices spin_matrices(SpinQuantum s) {
    const int n = s.multiplicity();
    const double sv = s.value();
    Eigen::MatrixXcd sp = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double m = sv - i;
        sz(i, i) = m;
        if (i >= 1) {
            // S+ maps |m> (column i) to |m+1> (row i-1).
            sp(i - 1, i) = std::sqrt(sv * (sv + 1.0) - m * (m + 1.0));
        }
    }
    const Eigen::MatrixXcd sm = sp.adjoint();
    SpinMatrices out;
    out.sx = 0.5 * (sp + sm);
    out.sy = complexd(0.0, -0.5) * (sp - sm);
    out.sz = sz;
    return out;
}

/// Coherent state polarized along dir:
///   c_m = sqrt(C(2s, s-m)) cos(theta/2)^(s+m) sin(theta/2)^(s-m) e^{-i m phi}
/// in the descending-m basis. For s = 1/2 this is exactly
/// (cos(theta/2) e^{-i phi/2}, sin(theta/2) e^{+i phi/2}).
inline Eigen::VectorXcd coherent_state(SpinQuantum s, Direction dir) {
    const int n = s.multiplicity();
    const double sv = s.value();
    const double c = std::cos(0.5 * dir.theta);
    const double si = std::sin(0.5 * dir.theta);
    Eigen::VectorXcd out(n);
    double binom = 1.0;  // C(2s, i), updated multiplicatively
    for (int i = 0; i < n; ++i) {
        const double m = sv - i;
        const double amp = std::sqrt(binom) * std::pow(c, s.two_s - i) * std::pow(si, i);
        out(i) = amp * std::exp(complexd(0.0, -m * dir.phi));
        binom *= static_cast<double>(s.two_s - i) / static_cast<double>(i + 1);
    }
    return out;
}

/// <state| op |state>. The state is assumed normalized.
inline complexd expectation(const Eigen::VectorXcd& state, const Eigen::MatrixXcd& op) {
    if (op.rows() != op.cols() || op.rows() != state.size()) {
        throw DimensionMismatch("expectation: operator is " + std::to_string(op.rows()) +
                                "x" + std::to_string(op.cols()) + " but state has length " +
                                std::to_string(state.size()));
    }
    return (state.adjoint() * op * state)(0, 0);
}

}  // namespace neelxyz
