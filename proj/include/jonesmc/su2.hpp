#pragma once

// Exact SU(2) / 2x2-complex algebra for fiber sections with constant twist.
//
// Conventions used throughout the library:
//  * A fiber section of length l, twist rate theta and propagation parameter
//    beta has the Jones matrix
//        M = [ m0 + i m1    m3 ]        m0 = cos(l b_t / 2)
//            [ -m3    m0 - i m1 ],      m1 = (beta / b_t) sin(l b_t / 2)
//                                       m3 = (2 theta / b_t) sin(l b_t / 2)
//    with b_t = sqrt(beta^2 + 4 theta^2).  A general SU(2) element is stored
//    as (a, b) with rows [a, b; -conj(b), conj(a)], so m0 = Re a, m1 = Im a,
//    m3 = Re b (and the Im b component vanishes for section matrices).
//  * Pauli basis ordering (NOT the usual physics x/y/z order):
//        sigma0 = I, sigma1 = diag(1, -1),
//        sigma2 = [[0, 1], [1, 0]], sigma3 = [[0, i], [-i, 0]].
//    s_k = sigma_k / sqrt(2) is orthonormal under (A, B) = tr(A B) on the
//    real space of Hermitian 2x2 matrices.  All tensor-operator code in
//    operators.hpp / analytics.hpp indexes this ordering.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace jonesmc {

using cd = std::complex<double>;

struct Complex2Vector {
    cd x{0.0, 0.0};
    cd y{0.0, 0.0};

    double norm2() const { return std::norm(x) + std::norm(y); }
    double norm() const { return std::sqrt(norm2()); }
};

/// General 2x2 complex matrix (not necessarily unitary); used for
/// derivatives, oracles and coherence algebra.
struct Mat2c {
    cd m00{}, m01{}, m10{}, m11{};

    static Mat2c identity() { return {1.0, 0.0, 0.0, 1.0}; }

    Mat2c operator*(const Mat2c& o) const {
        return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
                m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
    }
    Mat2c operator+(const Mat2c& o) const {
        return {m00 + o.m00, m01 + o.m01, m10 + o.m10, m11 + o.m11};
    }
    Mat2c operator-(const Mat2c& o) const {
        return {m00 - o.m00, m01 - o.m01, m10 - o.m10, m11 - o.m11};
    }
    Mat2c operator*(cd s) const { return {m00 * s, m01 * s, m10 * s, m11 * s}; }
    Mat2c adjoint() const {
        return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)};
    }
    cd trace() const { return m00 + m11; }
    cd det() const { return m00 * m11 - m01 * m10; }
    Complex2Vector operator*(const Complex2Vector& v) const {
        return {m00 * v.x + m01 * v.y, m10 * v.x + m11 * v.y};
    }
    double max_abs() const {
        return std::max(std::max(std::abs(m00), std::abs(m01)),
                        std::max(std::abs(m10), std::abs(m11)));
    }
};

/// SU(2) element in (a, b) form: [[a, b], [-conj(b), conj(a)]].
struct JonesMatrix {
    cd a{1.0, 0.0};
    cd b{0.0, 0.0};

    static JonesMatrix identity() { return {}; }

    double unitarity_defect() const { return std::norm(a) + std::norm(b) - 1.0; }

    JonesMatrix adjoint() const { return {std::conj(a), -b}; }

    Mat2c as_mat2() const {
        return {a, b, -std::conj(b), std::conj(a)};
    }

    /// m-parameter view: (m0, m1, m2, m3) with a = m0 + i m1, b = m3 + i m2.
    double m0() const { return a.real(); }
    double m1() const { return a.imag(); }
    double m2() const { return b.imag(); }
    double m3() const { return b.real(); }
};

inline Complex2Vector apply(const JonesMatrix& m, const Complex2Vector& v) {
    return {m.a * v.x + m.b * v.y, -std::conj(m.b) * v.x + std::conj(m.a) * v.y};
}

/// Matrix product m2 * m1 (m1 acts first).  Renormalizes the (a, b) pair when
/// accumulated rounding pushes |a|^2 + |b|^2 off 1 by more than 1e-14, which
/// keeps arbitrarily long ordered products on the group.
inline JonesMatrix compose(const JonesMatrix& m2, const JonesMatrix& m1) {
    JonesMatrix r{m2.a * m1.a - m2.b * std::conj(m1.b),
                  m2.a * m1.b + m2.b * std::conj(m1.a)};
    const double n2 = std::norm(r.a) + std::norm(r.b);
    if (std::abs(n2 - 1.0) > 1e-14) {
        const double s = 1.0 / std::sqrt(n2);
        r.a *= s;
        r.b *= s;
    }
    return r;
}

/// Parameters of one fiber section.
struct SegmentParams {
    double beta = 0.0;   // rad / length
    double l = 1.0;      // length, > 0
    double theta = 0.0;  // rad / length

    double beta_theta() const { return std::sqrt(beta * beta + 4.0 * theta * theta); }

    void validate() const {
        if (!(l > 0.0) || !std::isfinite(l) || !std::isfinite(beta) || !std::isfinite(theta))
            throw std::domain_error("SegmentParams: need finite beta/theta and l > 0");
    }
};

namespace detail {

// sin(x)/x, series-expanded below 1e-6 to avoid cancellation
inline double sinc(double x) {
    if (std::abs(x) < 1e-6) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

// (x cos x - sin x) / x^3, series below 1e-4; bounded, -> -1/3 at 0
inline double sinc_d(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return -1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0;
    }
    return (x * std::cos(x) - std::sin(x)) / (x * x * x);
}

} // namespace detail

struct MParams {
    double m0, m1, m3;
};

inline MParams segment_mparams(const SegmentParams& p) {
    const double bt = p.beta_theta();
    const double x = 0.5 * p.l * bt;
    const double s = detail::sinc(x);
    return {std::cos(x), 0.5 * p.l * p.beta * s, p.l * p.theta * s};
}

/// Jones matrix of one section, M = exp(l X_beta(theta)).
inline JonesMatrix segment_matrix(const SegmentParams& p) {
    p.validate();
    const MParams m = segment_mparams(p);
    return {cd(m.m0, m.m1), cd(m.m3, 0.0)};
}

/// Analytic d(m-params)/d(beta), finite for every (beta, theta) including
/// beta_theta = 0 (series forms take over).
inline MParams segment_mparams_dbeta(const SegmentParams& p) {
    const double bt = p.beta_theta();
    const double x = 0.5 * p.l * bt;
    const double s = detail::sinc(x);
    const double g = detail::sinc_d(x);
    const double l = p.l, beta = p.beta;
    const double dm0 = -0.25 * l * l * beta * s;
    const double dm1 = 0.5 * l * s + 0.125 * l * l * l * beta * beta * g;
    const double dm3 = 0.25 * p.theta * beta * l * l * l * g;
    return {dm0, dm1, dm3};
}

/// Analytic dM/dbeta as a general 2x2 complex matrix.
inline Mat2c segment_matrix_dbeta(const SegmentParams& p) {
    p.validate();
    const MParams d = segment_mparams_dbeta(p);
    return {cd(d.m0, d.m1), cd(d.m3, 0.0), cd(-d.m3, 0.0), cd(d.m0, -d.m1)};
}

/// The four Pauli matrices in the ordering documented at the top of this file.
inline const std::array<Mat2c, 4>& pauli() {
    static const std::array<Mat2c, 4> sig = {
        Mat2c{1.0, 0.0, 0.0, 1.0},
        Mat2c{1.0, 0.0, 0.0, -1.0},
        Mat2c{0.0, 1.0, 1.0, 0.0},
        Mat2c{0.0, cd(0.0, 1.0), cd(0.0, -1.0), 0.0},
    };
    return sig;
}

/// (A, B) = tr(A B^dag), the inner product on complex 2x2 matrices; on the
/// Hermitian subspace it reduces to tr(A B) and is real.
inline cd mat_inner(const Mat2c& a, const Mat2c& b) {
    const Mat2c bd = b.adjoint();
    return (a * bd).trace();
}

/// Orthonormal Hermitian basis element s_k = sigma_k / sqrt(2).
inline Mat2c pauli_s(int k) {
    const double inv = 1.0 / std::sqrt(2.0);
    return pauli()[static_cast<size_t>(k)] * cd(inv, 0.0);
}

} // namespace jonesmc
