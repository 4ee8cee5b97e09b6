#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "neelxyz/errors.hpp"
#include "neelxyz/spin_algebra.hpp"

namespace neelxyz {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

/// Hamiltonian parameters in a common (arbitrary) energy unit. Only ratios
/// matter: every map in this module is invariant under a positive rescale.
struct Params {
    double jx = 0.0, jy = 0.0, jz = 0.0;
    double hx = 0.0, hy = 0.0, hz = 0.0;

    Vector6d vec() const {
        Vector6d v;
        v << jx, jy, jz, hx, hy, hz;
        return v;
    }
    static Params from_vec(const Vector6d& v) {
        return Params{v(0), v(1), v(2), v(3), v(4), v(5)};
    }
};

struct ModelContext {
    int dim = 1;
    SpinQuantum spin;

    /// 2ds: the saturation scale of the factorization condition.
    double field_scale() const { return dim * spin.two_s; }
    double ds() const { return 0.5 * dim * spin.two_s; }
};

struct NeelAngles {
    Direction dir1, dir2;

    NeelAngles swapped() const { return {dir2, dir1}; }
};

/// The four scalars built from tan(theta_k/2) and the azimuths that enter the
/// inverse problem. Finite only away from theta = pi.
struct AngleInvariants {
    double gamma = 0.0, delta = 0.0, chi = 0.0, zeta = 0.0;
};

struct Tolerances {
    double denominator = 1e-12;   // relative degeneracy threshold for J_a + J_b
    double condition = 1e-9;      // relative to (2ds)^2
    double nullspace = 1e-10;     // relative singular value cutoff
};

// ---------------------------------------------------------------------------
// Factorization condition and energy

/// Left side of the factorization condition minus (2ds)^2. Zero (within
/// tolerance) exactly when the Hamiltonian has the two Neel eigenstates.
inline double condition_residual(const Params& p, const ModelContext& ctx,
                                 double eps_den = Tolerances{}.denominator) {
    const double max_j = std::max({std::abs(p.jx), std::abs(p.jy), std::abs(p.jz)});
    const double thresh = eps_den * max_j;
    const double sum_xy = p.jx + p.jy;
    const double sum_xz = p.jx + p.jz;
    const double sum_yz = p.jy + p.jz;

    struct Term {
        double field;
        double s1, s2;
        const char* label;
    };
    const std::array<Term, 3> terms{{{p.hx, sum_xy, sum_xz, "hx"},
                                     {p.hy, sum_xy, sum_yz, "hy"},
                                     {p.hz, sum_xz, sum_yz, "hz"}}};
    double lhs = 0.0;
    for (const auto& t : terms) {
        const bool degenerate = std::abs(t.s1) <= thresh || std::abs(t.s2) <= thresh;
        if (degenerate) {
            if (t.field != 0.0) {
                throw DegenerateDenominator(std::string("condition: pairwise exchange sum vanishes under ") +
                                            t.label + " != 0");
            }
            throw IndeterminateTerm(std::string("condition: 0/0 term at ") + t.label +
                                    "; verify via the eigen residual instead");
        }
        lhs += t.field * t.field / (t.s1 * t.s2);
    }
    const double f = ctx.field_scale();
    return lhs - f * f;
}

/// epsilon = -d s^2 (Jx + Jy + Jz)
inline double energy_per_site(const Params& p, const ModelContext& ctx) {
    const double s = ctx.spin.value();
    return -ctx.dim * s * s * (p.jx + p.jy + p.jz);
}

// ---------------------------------------------------------------------------
// Forward map: parameters -> angles

/// Coefficients of the monic-equivalent quadratic a z^2 + b z + c = 0 whose
/// roots are the stereographic coordinates z_k = tan(theta_k/2) e^{i phi_k}.
/// Kept unscaled so a -> 0 degrades to a linear equation (one root at the
/// south pole) instead of dividing by zero.
struct StereoQuadratic {
    complexd a, b, c;
};

inline StereoQuadratic stereo_quadratic(const Params& p, const ModelContext& ctx) {
    const double f = ctx.field_scale();       // 2ds
    const complexd hm(p.hx, -p.hy);
    const complexd hp(p.hx, p.hy);
    const double axial = p.jx + p.jy + 2.0 * p.jz - p.hz / ctx.ds();
    StereoQuadratic q;
    q.a = f * f * (p.jx * p.jx - p.jy * p.jy) - hm * hm;
    q.b = -f * (hp * (p.jx - p.jy) - hm * axial);
    q.c = p.hx * p.hx + p.hy * p.hy - f * f * (p.jx + p.jy) * axial;
    return q;
}

/// Stereographic coordinate in homogeneous form, z = u / v, normalized so
/// max(|u|, |v|) = 1. v = 0 represents the south pole (theta = pi).
struct HomogeneousRoot {
    complexd u{0.0, 0.0};
    complexd v{1.0, 0.0};

    bool at_infinity() const { return v == complexd(0.0, 0.0); }

    complexd z() const { return u / v; }

    Direction direction() const {
        const double theta = 2.0 * std::atan2(std::abs(u), std::abs(v));
        if (at_infinity() || u == complexd(0.0, 0.0)) {
            return Direction::canonical(theta, 0.0);
        }
        return Direction::canonical(theta, std::arg(u * std::conj(v)));
    }

    static HomogeneousRoot normalized(complexd u, complexd v) {
        const double m = std::max(std::abs(u), std::abs(v));
        HomogeneousRoot r;
        r.u = u / m;
        r.v = v / m;
        if (std::abs(r.v) == 0.0) r.v = complexd(0.0, 0.0);
        return r;
    }
};

struct StereoPair {
    HomogeneousRoot z1, z2;
};

namespace detail {

/// Roots of a u^2 + b u v + c v^2 = 0 on the Riemann sphere, with the
/// cancellation-free pairing q = -(b + sgn sqrt(b^2-4ac))/2, z1 = q/a,
/// z2 = c/q expressed homogeneously.
inline StereoPair solve_homogeneous_quadratic(complexd a, complexd b, complexd c) {
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
    if (scale == 0.0) {
        throw AllCoefficientsZero("angle quadratic degenerates: the polarization directions are unconstrained");
    }
    a /= scale;
    b /= scale;
    c /= scale;
    // Coefficients at rounding level are analytic zeros: snapping them keeps
    // the a -> 0 limit landing exactly at the south pole.
    if (std::abs(a) < 1e-14) a = 0.0;
    if (std::abs(b) < 1e-14) b = 0.0;
    if (std::abs(c) < 1e-14) c = 0.0;

    complexd sq = std::sqrt(b * b - 4.0 * a * c);
    if (std::real(std::conj(b) * sq) < 0.0) sq = -sq;
    const complexd q = -0.5 * (b + sq);

    StereoPair out;
    if (std::abs(q) == 0.0) {
        // b = 0 and ac = 0: either a pole pair +-sqrt(-c/a) or a double root.
        if (std::abs(a) >= std::abs(c)) {
            const complexd r = std::sqrt(-c / a);
            out.z1 = HomogeneousRoot::normalized(r, 1.0);
            out.z2 = HomogeneousRoot::normalized(-r, 1.0);
        } else {
            out.z1 = HomogeneousRoot::normalized(1.0, 0.0);
            out.z2 = HomogeneousRoot::normalized(1.0, 0.0);
        }
        return out;
    }
    out.z1 = HomogeneousRoot::normalized(q, a);
    out.z2 = HomogeneousRoot::normalized(c, q);
    return out;
}

inline bool direction_less(const Direction& a, const Direction& b) {
    if (a.theta != b.theta) return a.theta < b.theta;
    return a.phi < b.phi;
}

}  // namespace detail

struct AngleSolution {
    NeelAngles angles;
    StereoPair stereo;
    StereoQuadratic quadratic;

    /// Vieta diagnostics z1 z2 and z1 + z2; infinite when a root sits at the
    /// south pole.
    complexd root_product() const { return quadratic.c / quadratic.a; }
    complexd root_sum() const { return -quadratic.b / quadratic.a; }
};

/// Polarization directions of the two Neel sublattices for parameters on the
/// factorization surface. dir1 is canonically the root with smaller theta
/// (ties broken by smaller phi).
inline AngleSolution solve_angles_full(const Params& p, const ModelContext& ctx,
                                       const Tolerances& tol = {}) {
    try {
        const double res = condition_residual(p, ctx, tol.denominator);
        const double f = ctx.field_scale();
        if (std::abs(res) > tol.condition * f * f) {
            throw ConditionViolated("parameters are off the factorization surface: residual " +
                                    std::to_string(res));
        }
    } catch (const IndeterminateTerm&) {
        // 0/0 in the condition: the quadratic itself is still well defined,
        // and the caller is expected to confirm via the eigen residual.
    }

    AngleSolution sol;
    sol.quadratic = stereo_quadratic(p, ctx);
    sol.stereo = detail::solve_homogeneous_quadratic(sol.quadratic.a, sol.quadratic.b, sol.quadratic.c);

    Direction d1 = sol.stereo.z1.direction();
    Direction d2 = sol.stereo.z2.direction();
    if (detail::direction_less(d2, d1)) {
        std::swap(d1, d2);
        std::swap(sol.stereo.z1, sol.stereo.z2);
    }
    sol.angles = NeelAngles{d1, d2};
    return sol;
}

inline NeelAngles solve_angles(const Params& p, const ModelContext& ctx,
                               const Tolerances& tol = {}) {
    return solve_angles_full(p, ctx, tol).angles;
}

// ---------------------------------------------------------------------------
// Inverse map: angles -> parameters

inline AngleInvariants angle_invariants(const NeelAngles& a) {
    const double pi = std::numbers::pi;
    for (const Direction* d : {&a.dir1, &a.dir2}) {
        if (d->theta >= pi - 1e-12 || !std::isfinite(std::tan(0.5 * d->theta))) {
            throw PoleDegeneracy("angle invariants undefined: tan(theta/2) overflows at theta = pi");
        }
    }
    const double t1 = std::tan(0.5 * a.dir1.theta);
    const double t2 = std::tan(0.5 * a.dir2.theta);
    AngleInvariants inv;
    inv.gamma = t1 * t2 * std::cos(a.dir1.phi + a.dir2.phi);
    inv.delta = t1 * std::cos(a.dir1.phi) + t2 * std::cos(a.dir2.phi);
    inv.chi = t1 * t2 * std::sin(a.dir1.phi + a.dir2.phi);
    inv.zeta = t1 * std::sin(a.dir1.phi) + t2 * std::sin(a.dir2.phi);
    return inv;
}

/// The six real homogeneous equations M (Jx, Jy, Jz, hx, hy, hz)^T = 0 that a
/// parameter set must satisfy for the given sublattice directions. Every
/// field coefficient carries 1/(2ds).
inline Matrix6d system_matrix(const AngleInvariants& inv, const ModelContext& ctx) {
    const double f = 1.0 / ctx.field_scale();
    const double g = inv.gamma, de = inv.delta, ch = inv.chi, ze = inv.zeta;
    Matrix6d m;
    m << 1.0 + g, 1.0 - g, 2.0, -de * f, -ze * f, -2.0 * f,
         ch, -ch, 0.0, -ze * f, de * f, 0.0,
         1.0 + g, g - 1.0, 2.0 * g, -de * f, ze * f, 2.0 * g * f,
         ch, ch, 2.0 * ch, -ze * f, -de * f, 2.0 * ch * f,
         de, de, 0.0, -(1.0 + g) * f, -ch * f, 0.0,
         ze, ze, 0.0, -ch * f, -(1.0 - g) * f, 0.0;
    return m;
}

/// Solution set of the inverse problem: an orthonormal basis of the nullspace
/// of the system matrix. Generically one-dimensional; degenerate angle
/// configurations legitimately return more.
struct ParamRay {
    Eigen::Matrix<double, 6, Eigen::Dynamic> basis;
    int dim = 0;
    /// Present when the ray is unique and has a usable Jx component:
    /// the representative rescaled to Jx = 1.
    std::optional<Vector6d> jx_one;
};

inline ParamRay solve_params(const NeelAngles& a, const ModelContext& ctx,
                             const Tolerances& tol = {}) {
    const AngleInvariants inv = angle_invariants(a);
    const Matrix6d m = system_matrix(inv, ctx);
    Eigen::JacobiSVD<Matrix6d> svd(m, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    const double cutoff = tol.nullspace * sigma(0);
    int k = 0;
    for (int i = 0; i < 6; ++i) {
        if (sigma(i) <= cutoff) ++k;
    }
    if (k == 0) {
        throw EmptyNullspace("no singular value below threshold; the inverse system looks full rank, "
                             "which flags numerical trouble");
    }
    ParamRay ray;
    ray.dim = k;
    ray.basis = svd.matrixV().rightCols(k);
    if (k == 1 && std::abs(ray.basis(0, 0)) > 1e-8) {
        // Pinning Jx = 1 and solving for the rest in the least-squares sense
        // is much more accurate than dividing the null vector by its Jx
        // component when that component is small.
        Vector6d rep;
        rep(0) = 1.0;
        rep.tail<5>() = m.rightCols<5>().colPivHouseholderQr().solve(-m.col(0));
        ray.jx_one = rep;
    }
    return ray;
}

/// Closed-form inverse map with Jx fixed to 1, used as an independent
/// cross-check of the nullspace route. Its shared denominator vanishes on
/// some physical configurations (e.g. coplanar antiparallel states), which
/// is why it is not the implementation.
inline Vector6d closed_form_params(const AngleInvariants& inv, const ModelContext& ctx) {
    // Extended precision: the numerators cancel badly near the denominator's
    // zero set, and the cross-check must stay sharper than the quantity it
    // checks.
    const long double g = inv.gamma, de = inv.delta, ch = inv.chi, ze = inv.zeta;
    const long double ds2 = ctx.field_scale();  // 2ds
    const long double den = ch * (ch * ch + g * g - de * de + ze * ze - 1.0L) + 2.0L * g * de * ze;
    Vector6d v;
    v(0) = 1.0;
    v(1) = static_cast<double>(
        (ch * (ch * ch + g * g + de * de - ze * ze - 1.0L) - 2.0L * g * de * ze) / den);
    v(2) = static_cast<double>(
        -(ch * (ch * ch + g * g + g * (ze * ze - de * de) - de * ch * ze - 1.0L) +
          (1.0L + g * g) * de * ze) / den);
    v(3) = static_cast<double>(2.0L * ch * (de * (g - 1.0L) + ch * ze) * ds2 / den);
    v(4) = static_cast<double>(-2.0L * ch * (ze * (1.0L + g) - de * ch) * ds2 / den);
    v(5) = static_cast<double>((de * de * ch * (1.0L - g) + de * ze * (g * g - ch * ch - 1.0L) +
                                ch * ze * ze * (1.0L + g)) * ds2 / den);
    return v;
}

/// Rescales the field part by the positive lambda that puts the parameters
/// exactly on the factorization surface, leaving the exchange part fixed.
inline Params rescale_field_to_condition(const Params& p, const ModelContext& ctx,
                                         double eps_den = Tolerances{}.denominator) {
    const double f = ctx.field_scale();
    const double lhs = condition_residual(p, ctx, eps_den) + f * f;
    if (lhs <= 0.0) {
        throw ConditionViolated("field normalization impossible: condition left side is nonpositive");
    }
    const double lambda = f / std::sqrt(lhs);
    Params out = p;
    out.hx *= lambda;
    out.hy *= lambda;
    out.hz *= lambda;
    return out;
}

// ---------------------------------------------------------------------------
// Scan for factorizing fields along a parameter ray

/// All roots of t -> condition_residual(p0 + t * direction) in [t_lo, t_hi],
/// located by sign-change bracketing and refined by bisection.
inline std::vector<double> factorizing_field_scan(const Params& p0, const Vector6d& direction,
                                                  const ModelContext& ctx, double t_lo, double t_hi,
                                                  int samples = 2001,
                                                  double eps_den = Tolerances{}.denominator) {
    if (!(t_hi > t_lo) || samples < 2) {
        throw DimensionMismatch("scan: need t_hi > t_lo and at least two samples");
    }
    const auto at = [&](double t) {
        return Params::from_vec(p0.vec() + t * direction);
    };
    const auto residual = [&](double t) {
        return condition_residual(at(t), ctx, eps_den);
    };

    std::vector<double> roots;
    double prev_t = t_lo;
    double prev_r = residual(prev_t);
    if (prev_r == 0.0) roots.push_back(prev_t);
    for (int i = 1; i < samples; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / (samples - 1);
        const double r = residual(t);
        if (r == 0.0) {
            roots.push_back(t);
        } else if (prev_r != 0.0 && (prev_r < 0.0) != (r < 0.0)) {
            double lo = prev_t, hi = t, rlo = prev_r;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double rm = residual(mid);
                if (std::abs(rm) < 1e-12 || hi - lo < 1e-15 * std::max(1.0, std::abs(mid))) {
                    lo = hi = mid;
                    break;
                }
                if ((rm < 0.0) == (rlo < 0.0)) {
                    lo = mid;
                    rlo = rm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_t = t;
        prev_r = r;
    }
    if (prev_r == 0.0) roots.push_back(prev_t);
    if (roots.empty()) {
        throw NoRoot("scan: condition residual has no sign change in the requested range");
    }
    return roots;
}

}  // namespace neelxyz
