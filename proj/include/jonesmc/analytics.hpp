#pragma once

// Closed-form and semi-analytic predictions: mode-coupling h-parameters, the
// per-section decay factor eta1, diagonal coherence decay, the detuning
// curvature f(beta) of the pair-operator exponent, and the leading
// large-N term of the mean square polarization degree.

#include <cmath>
#include <string>

#include "model.hpp"
#include "operators.hpp"
#include "propagation.hpp"

namespace jonesmc {

class hypothesis_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// eta1 = 1 - 2 <m3^2>: the eigenvalue of <M^>(beta) on sigma_1, i.e. the
/// per-section decay factor of the diagonal coherence imbalance (meaningful
/// under twist symmetric about zero, where sigma_1 is an exact eigenvector).
inline double eta1(const FiberModel& model, double beta) {
    const double m33 = expect(model, [&](double l, double th) {
        const double m3 = segment_mparams({beta, l, th}).m3;
        return m3 * m3;
    });
    return 1.0 - 2.0 * m33;
}

/// Mode-coupling h-parameter of the section model:
/// h = -ln(1 - <8 Theta^2/(beta^2+4 Theta^2) sin^2(l beta_theta/2)>) / (2<l>).
/// Requires symmetric twist and 2<m3^2> < 1 (else eta1 <= 0 and no h exists).
inline double h_new(const FiberModel& model, double beta) {
    if (model.twist.has_regular_twist())
        throw hypothesis_error("h_new: twist distribution must be symmetric about zero");
    const double e1 = eta1(model, beta);
    if (e1 <= 0.0)
        throw hypothesis_error("h_new: 2<m3^2> >= 1 (eta1 <= 0), decay is oscillatory");
    return -std::log(e1) / (2.0 * model.length.mean_length());
}

/// Classical (perturbative) h-parameter: 4<Theta^2> <sin^2(l beta/2)> / (beta^2 <l>).
inline double h_classical(const FiberModel& model, double beta) {
    if (beta == 0.0) throw std::domain_error("h_classical: beta must be nonzero");
    const double s2 = expect(model, [&](double l, double) {
        const double s = std::sin(0.5 * l * beta);
        return s * s;
    });
    return 4.0 * theta_moment(model, 2) * s2 / (beta * beta * model.length.mean_length());
}

/// Predicted mean diagonal of J_N given the initial coherence and eta1:
/// <J11> = (tr/2)(1 + d eta1^N), <J22> = (tr/2)(1 - d eta1^N) with
/// d = (J11 - J22)/tr at N = 0.
struct DiagPrediction {
    double j11, j22;
};
inline DiagPrediction diag_prediction(const CoherenceMatrix& j0, double eta1_value, size_t n) {
    const double tr = j0.trace();
    if (!(tr > 0.0)) throw std::domain_error("diag_prediction: tr J0 must be positive");
    const double d = (j0.j11 - j0.j22) / tr;
    const double decay = d * std::pow(eta1_value, static_cast<double>(n));
    return {0.5 * tr * (1.0 + decay), 0.5 * tr * (1.0 - decay)};
}

/// The averaged 16-dim pair operator together with its arguments.
struct MeanOperator16 {
    Mat16d op;
    double beta1 = 0.0, beta2 = 0.0;
};

inline MeanOperator16 mean_operator_16(const FiberModel& model, double beta1, double beta2) {
    return {pair_transfer_16(model, beta1, beta2), beta1, beta2};
}

enum class FBetaPath { closed_form, general };

namespace detail {

/// Orthonormal basis of the antisymmetric sector H2_33a:
/// (s1^s2, s2^s3, s3^s1)/sqrt(2) as flattened 16-vectors.
inline std::array<Vec16d, 3> h33a_basis() {
    auto wedge = [](int i, int j) {
        Vec16d v = Vec16d::Zero();
        v(4 * i + j) = 1.0 / std::sqrt(2.0);
        v(4 * j + i) = -1.0 / std::sqrt(2.0);
        return v;
    };
    return {wedge(1, 2), wedge(2, 3), wedge(3, 1)};
}

inline double f_beta_first_term(const FiberModel& model, double beta) {
    return 8.0 / 3.0 * expect(model, [&](double l, double th) {
        const MParams d = segment_mparams_dbeta({beta, l, th});
        return d.m0 * d.m0 + d.m1 * d.m1 + d.m3 * d.m3;
    });
}

} // namespace detail

/// Detuning curvature of the pair-operator decay exponent,
///   f(beta) = d^2/d delta^2 [ -ln eta1(beta + delta/2, beta - delta/2) ]
/// at delta = 0.  This is the quantity whose inverse square root weights the
/// spectral integral in the large-N depolarization law.
///
/// closed_form (default; symmetric twist only):
///   f = (8/3) [ sum_k <(dm_k/dbeta)^2> + d10^2 / <m3^2> ],
///   d10 = <m1' m0 - m1 m0'>.
/// general: first-order perturbation of the eps1 eigenvector, solving
///   (E - L^T) w = L'^T eps1/sqrt(3) in the antisymmetric 3-dim sector;
///   works for twist distributions with nonzero mean as well.
inline double f_beta(const FiberModel& model, double beta, FBetaPath path = FBetaPath::closed_form) {
    if (path == FBetaPath::closed_form) {
        if (model.twist.has_regular_twist())
            throw hypothesis_error("f_beta: closed form requires symmetric twist; use the general path");
        const double m33 = expect(model, [&](double l, double th) {
            const double m3 = segment_mparams({beta, l, th}).m3;
            return m3 * m3;
        });
        if (m33 < 1e-14)
            throw std::domain_error("f_beta: <m3^2> = 0 (no twist coupling), curvature degenerate");
        const double d10 = expect(model, [&](double l, double th) {
            const SegmentParams p{beta, l, th};
            const MParams m = segment_mparams(p);
            const MParams d = segment_mparams_dbeta(p);
            return d.m1 * m.m0 - m.m1 * d.m0;
        });
        return detail::f_beta_first_term(model, beta) + 8.0 / 3.0 * d10 * d10 / m33;
    }

    // general path: T = L^T fixes eps1/sqrt(3) at delta = 0; the curvature is
    //   f = -(T'' e1, e1) - 2 (T' w, e1),  (E - T) w = T' e1,
    // with the second-derivative term reduced analytically to the first term
    // above and the solve restricted to the invariant antisymmetric sector.
    const Mat16d Lt = pair_transfer_16(model, beta, beta).transpose();
    const Mat16d dLt = pair_transfer_16_ddelta(model, beta).transpose();
    const Vec16d e1 = eps1_vec() / std::sqrt(3.0);
    const Vec16d r = dLt * e1;

    const auto phi = detail::h33a_basis();
    // the right-hand side must live in the antisymmetric sector
    Vec16d r_proj = Vec16d::Zero();
    Eigen::Vector3d rhs;
    for (int i = 0; i < 3; ++i) {
        rhs(i) = r.dot(phi[static_cast<size_t>(i)]);
        r_proj += rhs(i) * phi[static_cast<size_t>(i)];
    }
    if ((r - r_proj).norm() > 1e-8 * (1.0 + r.norm()))
        throw std::domain_error("f_beta: derivative term leaves the antisymmetric sector");

    Eigen::Matrix3d S;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            S(i, j) = phi[static_cast<size_t>(i)].dot(phi[static_cast<size_t>(j)] -
                                                      Lt * phi[static_cast<size_t>(j)]);
    Eigen::FullPivLU<Eigen::Matrix3d> lu(S);
    if (!lu.isInvertible())
        throw std::domain_error("f_beta: (E - L) singular on the antisymmetric sector");
    const Eigen::Vector3d v = lu.solve(rhs);
    Vec16d w = Vec16d::Zero();
    for (int i = 0; i < 3; ++i) w += v(i) * phi[static_cast<size_t>(i)];

    return detail::f_beta_first_term(model, beta) - 2.0 * e1.dot(dLt * w);
}

/// Leading large-N term of <p^2_N> and its ingredients.
struct AsymptoticReport {
    std::vector<double> f_values;   // f(beta) on the spectral grid
    double integral = 0.0;          // int Btilde^2 / sqrt(f) dbeta (trapezoid)
    double leading_term = 0.0;      // sqrt(2 pi / N) * integral
    size_t n_segments = 0;
    std::string validity_note;
};

/// <p^2_N> ~ sqrt(2 pi / N) * int Btilde^2(beta)/sqrt(f(beta)) dbeta.
/// Valid once the exponential transients of the pair operator have decayed
/// and the correlation width 1/sqrt(N f) is well inside the spectral support;
/// the relative error then decays like N^{-1/2}.
inline AsymptoticReport p2_asymptotic(const FiberModel& model, const SpectralDensity& spec,
                                      size_t n) {
    if (n < 1) throw std::domain_error("p2_asymptotic: N >= 1");
    const FBetaPath path =
        model.twist.has_regular_twist() ? FBetaPath::general : FBetaPath::closed_form;
    AsymptoticReport rep;
    rep.n_segments = n;
    rep.f_values.resize(spec.lines());
    for (size_t i = 0; i < spec.lines(); ++i) {
        const double f = f_beta(model, spec.grid[i], path);
        if (!(f > 0.0))
            throw std::domain_error("p2_asymptotic: f(beta) <= 0 at beta = " +
                                    std::to_string(spec.grid[i]));
        rep.f_values[i] = f;
        rep.integral += spec.weights[i] * spec.values[i] * spec.values[i] / std::sqrt(f);
    }
    rep.leading_term = std::sqrt(2.0 * M_PI / static_cast<double>(n)) * rep.integral;
    rep.validity_note =
        "leading term only; requires N large enough that 1/sqrt(N f) resolves "
        "within the spectral support and exponential transients have decayed";
    return rep;
}

} // namespace jonesmc
