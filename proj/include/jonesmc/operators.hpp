#pragma once

// Averaged transfer operators in the Hermitian (Pauli) basis:
//  * the 4x4 coherence transfer <M^>(beta) acting on H by X -> M X M^dag,
//  * the 16x16 pair operator L(beta1, beta2) = <M^(beta1) x M^(beta2)> on
//    H (x) H, whose decay eigenvalue drives two-frequency decorrelation,
//  * its detuning derivative at beta1 = beta2, used by the curvature f(beta).
//
// Basis bookkeeping: s_k = sigma_k / sqrt(2) (ordering documented in
// su2.hpp); tensor index (k, m) flattens to 4 k + m.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "model.hpp"
#include "su2.hpp"

namespace jonesmc {

using Mat4d = Eigen::Matrix4d;
using Mat16d = Eigen::Matrix<double, 16, 16>;
using Vec16d = Eigen::Matrix<double, 16, 1>;
using Mat2cd = Eigen::Matrix2cd;

namespace detail {
// generator-axis coordinates of an SU(2) element under this Pauli ordering:
// M = m0 sigma0 + i (x1 sigma1 + x2 sigma2 + x3 sigma3), x = (m1, m2, -m3)
struct QuatCoords {
    double m0, x1, x2, x3;
};
inline QuatCoords quat_coords(const JonesMatrix& m) {
    return {m.m0(), m.m1(), m.m2(), -m.m3()};
}
// the same coordinates for a tangent element (dM/dbeta of a section)
inline QuatCoords quat_coords_d(const MParams& d) { return {d.m0, d.m1, 0.0, -d.m3}; }
} // namespace detail

/// 4x4 real matrix of X -> M X M^dag in the s-basis.  The H3 block is the
/// quaternion rotation R = (m0^2 - |x|^2) E + 2 x x^T - 2 m0 [x]_cross with
/// the structure signs of this sigma ordering (sigma_i sigma_j = delta -
/// i eps_ijk sigma_k).
inline Mat4d conj_action_4(const JonesMatrix& m) {
    const auto [m0, x1, x2, x3] = detail::quat_coords(m);
    const double c = m0 * m0 - (x1 * x1 + x2 * x2 + x3 * x3);
    Mat4d u;
    u(0, 0) = 1.0;
    u(0, 1) = u(0, 2) = u(0, 3) = u(1, 0) = u(2, 0) = u(3, 0) = 0.0;
    u(1, 1) = c + 2 * x1 * x1;
    u(1, 2) = 2 * x1 * x2 - 2 * m0 * x3;
    u(1, 3) = 2 * x1 * x3 + 2 * m0 * x2;
    u(2, 1) = 2 * x2 * x1 + 2 * m0 * x3;
    u(2, 2) = c + 2 * x2 * x2;
    u(2, 3) = 2 * x2 * x3 - 2 * m0 * x1;
    u(3, 1) = 2 * x3 * x1 - 2 * m0 * x2;
    u(3, 2) = 2 * x3 * x2 + 2 * m0 * x1;
    u(3, 3) = c + 2 * x3 * x3;
    return u;
}

/// d/dbeta of conj_action_4 along the section family (bilinear in the
/// quaternion coordinates and their beta derivative).
inline Mat4d conj_action_4_dbeta(const SegmentParams& p) {
    const auto [m0, x1, x2, x3] = detail::quat_coords(segment_matrix(p));
    const auto [d0, y1, y2, y3] = detail::quat_coords_d(segment_mparams_dbeta(p));
    const double c = 2.0 * (m0 * d0 - (x1 * y1 + x2 * y2 + x3 * y3));
    const double x[3] = {x1, x2, x3}, y[3] = {y1, y2, y3};
    Mat4d u = Mat4d::Zero();
    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j) {
            double v = 2.0 * (y[k] * x[j] + x[k] * y[j]);
            if (k == j) v += c;
            const int l = 3 - k - j;
            if (k != j) {
                const double sign = ((j - k + 3) % 3 == 1) ? 1.0 : -1.0;
                v -= 2.0 * sign * (d0 * x[l] + m0 * y[l]);
            }
            u(k + 1, j + 1) = v;
        }
    return u;
}

/// <M^>(beta): averaged 4x4 coherence transfer operator.
inline Mat4d coherence_transfer_4(const FiberModel& model, double beta) {
    return expect(model, [&](double l, double th) -> Mat4d {
        return conj_action_4(segment_matrix({beta, l, th}));
    });
}

inline Mat16d kron16(const Mat4d& a, const Mat4d& b) {
    Mat16d k;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            k.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
    return k;
}

/// The averaged pair operator L(beta1, beta2) on H (x) H.
inline Mat16d pair_transfer_16(const FiberModel& model, double beta1, double beta2) {
    return expect(model, [&](double l, double th) -> Mat16d {
        const Mat4d u1 = conj_action_4(segment_matrix({beta1, l, th}));
        const Mat4d u2 = conj_action_4(segment_matrix({beta2, l, th}));
        return kron16(u1, u2);
    });
}

/// d/d(delta) of L(beta + delta/2, beta - delta/2) at delta = 0.
inline Mat16d pair_transfer_16_ddelta(const FiberModel& model, double beta) {
    return expect(model, [&](double l, double th) -> Mat16d {
        const SegmentParams p{beta, l, th};
        const Mat4d u = conj_action_4(segment_matrix(p));
        const Mat4d du = conj_action_4_dbeta(p);
        return 0.5 * (kron16(du, u) - kron16(u, du));
    });
}

/// eps0 = s0 (x) s0, the exact fixed vector of every pair operator.
inline Vec16d eps0_vec() {
    Vec16d v = Vec16d::Zero();
    v(0) = 1.0;
    return v;
}

/// eps1 = sum_i s_i (x) s_i (unnormalized; norm sqrt(3)).
inline Vec16d eps1_vec() {
    Vec16d v = Vec16d::Zero();
    v(5) = v(10) = v(15) = 1.0;
    return v;
}

/// T = eps0 + eps1 satisfies (A (x) B, T) = tr(A B).
inline Vec16d trace_pairing_vec() { return eps0_vec() + eps1_vec(); }

/// Delta = (eps0 - eps1)/2 satisfies (A (x) A, Delta) = det A.
inline Vec16d det_pairing_vec() { return 0.5 * (eps0_vec() - eps1_vec()); }

/// Components of a Hermitian matrix in the s-basis.
inline Eigen::Vector4d hermitian_components(const Mat2c& a) {
    Eigen::Vector4d v;
    for (int k = 0; k < 4; ++k) v(k) = mat_inner(a, pauli_s(k)).real();
    return v;
}

/// Operator 2-norm (largest singular value).
inline double op_norm_2(const Mat16d& m) {
    Eigen::SelfAdjointEigenSolver<Mat16d> es(m.transpose() * m);
    return std::sqrt(es.eigenvalues().maxCoeff());
}

/// Decay eigenvalue of a pair operator: the eigenvalue whose eigenvector has
/// maximal overlap with eps1/sqrt(3).  Eigenvector continuation (rather than
/// magnitude ordering) keeps the branch stable through near-degeneracies at
/// small detuning.
inline double eta1_of_pair(const Mat16d& L) {
    Eigen::EigenSolver<Mat16d> es(L);
    const Vec16d ref = eps1_vec() / std::sqrt(3.0);
    int best = -1;
    double best_ov = -1.0;
    for (int i = 0; i < 16; ++i) {
        const auto v = es.eigenvectors().col(i);
        double ov = 0.0;
        for (int k = 0; k < 16; ++k) ov += (v(k) * ref(k)).real();
        ov = std::abs(ov) / v.norm();
        if (ov > best_ov) {
            best_ov = ov;
            best = i;
        }
    }
    return es.eigenvalues()(best).real();
}

/// Full eigenvalue list (for spectral-gap diagnostics).
inline std::vector<std::complex<double>> pair_spectrum(const Mat16d& L) {
    Eigen::EigenSolver<Mat16d> es(L);
    std::vector<std::complex<double>> out(16);
    for (int i = 0; i < 16; ++i) out[i] = es.eigenvalues()(i);
    return out;
}

/// Mean section matrix S = <M_beta(l, Theta)> and its spectral radius.
/// <U_N> = S^N; with no common unit eigenvector the radius is < 1 and the
/// mean product decays to zero.
struct MeanSegmentOperator {
    Mat2cd s;
    double spectral_radius = 0.0;
};

inline MeanSegmentOperator mean_segment_operator(const FiberModel& model, double beta) {
    const Mat2cd s = expect(model, [&](double l, double th) -> Mat2cd {
        const Mat2c m = segment_matrix({beta, l, th}).as_mat2();
        Mat2cd e;
        e << m.m00, m.m01, m.m10, m.m11;
        return e;
    });
    const cd tr = s(0, 0) + s(1, 1);
    const cd det = s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
    const cd disc = std::sqrt(tr * tr - 4.0 * det);
    const double r = std::max(std::abs((tr + disc) / 2.0), std::abs((tr - disc) / 2.0));
    return {s, r};
}

} // namespace jonesmc
