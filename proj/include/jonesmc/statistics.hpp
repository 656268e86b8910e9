#pragma once

// Parallel Monte-Carlo ensembles over fiber realizations and the statistical
// diagnostics for the limit theorems: mean coherence decay, Haar moments of
// the section product, two-frequency independence, and the classical
// h-parameter estimator.
//
// Every estimator keys its RNG stream by sample index, so results do not
// depend on the worker count or schedule.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "accumulator.hpp"
#include "model.hpp"
#include "parallel.hpp"
#include "propagation.hpp"
#include "su2.hpp"

namespace jonesmc {

struct ScalarEstimate {
    double value = 0.0;
    double se = 0.0;
    size_t samples = 0;
};

/// Ordered product U_n = M(l_n, theta_n) ... M(l_1, theta_1).
inline JonesMatrix jones_product(const SegmentRealization& r, double beta,
                                 size_t n = static_cast<size_t>(-1)) {
    n = std::min(n, r.count());
    JonesMatrix u;
    for (size_t k = 0; k < n; ++k)
        u = compose(segment_matrix({beta, r.segments[k].l, r.segments[k].theta}), u);
    return u;
}

struct MeanCoherence {
    size_t n_segments = 0;
    CoherenceMatrix mean;
    double se_j11 = 0.0, se_j22 = 0.0, se_rej12 = 0.0, se_imj12 = 0.0;
    size_t samples = 0;
};

/// Ensemble mean of J_N(beta) from E0 = (1, 0) at each checkpoint in
/// `n_list` (ascending).  One pass per sample.
inline std::vector<MeanCoherence> mc_mean_coherence_curve(const FiberModel& model, double beta,
                                                          const std::vector<size_t>& n_list,
                                                          size_t samples, unsigned threads = 0) {
    if (samples < 2) throw std::domain_error("mc_mean_coherence: samples >= 2");
    for (size_t i = 0; i + 1 < n_list.size(); ++i)
        if (n_list[i + 1] <= n_list[i])
            throw std::domain_error("mc_mean_coherence: n_list must be strictly ascending");
    const size_t nc = n_list.size();
    const size_t n_max = n_list.empty() ? 0 : n_list.back();

    auto bank = run_sample_blocks<AccumulatorBank>(
        samples,
        [&](AccumulatorBank& acc, size_t s) {
            if (acc.width() == 0) acc = AccumulatorBank(4 * nc);
            CounterRng rng(model.seed, s);
            Complex2Vector e{1.0, 0.0};
            size_t ci = 0;
            for (size_t n = 0; n <= n_max && ci < nc; ++n) {
                if (n > 0) {
                    const double l = model.length.sample(rng);
                    const double th = model.twist.sample(rng);
                    e = apply(segment_matrix({beta, l, th}), e);
                }
                if (n == n_list[ci]) {
                    const CoherenceMatrix j = CoherenceMatrix::outer(e);
                    acc.add(4 * ci + 0, j.j11);
                    acc.add(4 * ci + 1, j.j22);
                    acc.add(4 * ci + 2, j.j12.real());
                    acc.add(4 * ci + 3, j.j12.imag());
                    ++ci;
                }
            }
        },
        [](AccumulatorBank& total, const AccumulatorBank& p) { total.merge(p); }, threads);

    std::vector<MeanCoherence> out(nc);
    for (size_t c = 0; c < nc; ++c) {
        out[c].n_segments = n_list[c];
        out[c].mean = {bank[4 * c + 0].mean(), bank[4 * c + 1].mean(),
                       cd(bank[4 * c + 2].mean(), bank[4 * c + 3].mean())};
        out[c].se_j11 = bank[4 * c + 0].stderr_mean();
        out[c].se_j22 = bank[4 * c + 1].stderr_mean();
        out[c].se_rej12 = bank[4 * c + 2].stderr_mean();
        out[c].se_imj12 = bank[4 * c + 3].stderr_mean();
        out[c].samples = samples;
    }
    return out;
}

inline MeanCoherence mc_mean_coherence(const FiberModel& model, double beta, size_t n,
                                       size_t samples, unsigned threads = 0) {
    return mc_mean_coherence_curve(model, beta, {n}, samples, threads).front();
}

/// Continuous-z counterpart: mean J(z) sampled at the given z checkpoints.
inline std::vector<MeanCoherence> mc_mean_coherence_continuous(const FiberModel& model, double beta,
                                                               const std::vector<double>& z_list,
                                                               size_t samples,
                                                               unsigned threads = 0) {
    for (size_t i = 0; i + 1 < z_list.size(); ++i)
        if (z_list[i + 1] <= z_list[i])
            throw std::domain_error("mc_mean_coherence_continuous: z_list ascending");
    const size_t nc = z_list.size();

    auto bank = run_sample_blocks<AccumulatorBank>(
        samples,
        [&](AccumulatorBank& acc, size_t s) {
            if (acc.width() == 0) acc = AccumulatorBank(4 * nc);
            CounterRng rng(model.seed, s);
            Complex2Vector e{1.0, 0.0}; // field at z_prev (left edge of current section)
            double z_prev = 0.0;
            size_t ci = 0;
            while (ci < nc) {
                const double l = model.length.sample(rng);
                const double th = model.twist.sample(rng);
                const double z_next = z_prev + l;
                while (ci < nc && z_list[ci] < z_next) {
                    Complex2Vector ez = e;
                    if (z_list[ci] > z_prev)
                        ez = apply(segment_matrix({beta, z_list[ci] - z_prev, th}), e);
                    const CoherenceMatrix j = CoherenceMatrix::outer(ez);
                    acc.add(4 * ci + 0, j.j11);
                    acc.add(4 * ci + 1, j.j22);
                    acc.add(4 * ci + 2, j.j12.real());
                    acc.add(4 * ci + 3, j.j12.imag());
                    ++ci;
                }
                e = apply(segment_matrix({beta, l, th}), e);
                z_prev = z_next;
            }
        },
        [](AccumulatorBank& total, const AccumulatorBank& p) { total.merge(p); }, threads);

    std::vector<MeanCoherence> out(nc);
    for (size_t c = 0; c < nc; ++c) {
        out[c].n_segments = 0;
        out[c].mean = {bank[4 * c + 0].mean(), bank[4 * c + 1].mean(),
                       cd(bank[4 * c + 2].mean(), bank[4 * c + 3].mean())};
        out[c].se_j11 = bank[4 * c + 0].stderr_mean();
        out[c].se_j22 = bank[4 * c + 1].stderr_mean();
        out[c].se_rej12 = bank[4 * c + 2].stderr_mean();
        out[c].se_imj12 = bank[4 * c + 3].stderr_mean();
        out[c].samples = samples;
    }
    return out;
}

/// MC mean of p^2_N over realizations for a (>= 2 line) spectrum, at each
/// checkpoint of `n_list`.
inline std::vector<ScalarEstimate> mc_mean_p2_curve(const FiberModel& model,
                                                    const SpectralDensity& spec,
                                                    const std::vector<size_t>& n_list,
                                                    size_t samples, unsigned threads = 0) {
    for (size_t i = 0; i + 1 < n_list.size(); ++i)
        if (n_list[i + 1] <= n_list[i])
            throw std::domain_error("mc_mean_p2: n_list must be strictly ascending");
    const size_t nc = n_list.size();
    const size_t n_max = n_list.empty() ? 0 : n_list.back();
    const size_t nl = spec.lines();

    auto bank = run_sample_blocks<AccumulatorBank>(
        samples,
        [&](AccumulatorBank& acc, size_t s) {
            if (acc.width() == 0) acc = AccumulatorBank(nc);
            CounterRng rng(model.seed, s);
            std::vector<Complex2Vector> e(nl);
            for (size_t i = 0; i < nl; ++i) e[i] = spec.e0[i];
            size_t ci = 0;
            for (size_t n = 0; n <= n_max && ci < nc; ++n) {
                if (n > 0) {
                    const double l = model.length.sample(rng);
                    const double th = model.twist.sample(rng);
                    for (size_t i = 0; i < nl; ++i)
                        e[i] = apply(segment_matrix({spec.grid[i], l, th}), e[i]);
                }
                if (n == n_list[ci]) {
                    CoherenceMatrix j;
                    for (size_t i = 0; i < nl; ++i)
                        j.axpy(spec.line_mass(i), CoherenceMatrix::outer(e[i]));
                    const double p = polarization_degree(j);
                    acc.add(ci, p * p);
                    ++ci;
                }
            }
        },
        [](AccumulatorBank& total, const AccumulatorBank& p) { total.merge(p); }, threads);

    std::vector<ScalarEstimate> out(nc);
    for (size_t c = 0; c < nc; ++c)
        out[c] = {bank[c].mean(), bank[c].stderr_mean(), samples};
    return out;
}

inline ScalarEstimate mc_mean_p2(const FiberModel& model, const SpectralDensity& spec, size_t n,
                                 size_t samples, unsigned threads = 0) {
    if (spec.lines() < 2) throw std::domain_error("mc_mean_p2: spectrum needs >= 2 lines");
    return mc_mean_p2_curve(model, spec, {n}, samples, threads).front();
}

// ---------------------------------------------------------------------------
// Haar moments of the section product

/// Invariant-measure prediction for <a^k1 conj(a)^k2 b^k3 conj(b)^k4>:
/// zero unless k1 == k2 and k3 == k4, else k1! k3! / (k1 + k3 + 1)!.
inline double haar_moment_predicted(int k1, int k2, int k3, int k4) {
    if (k1 != k2 || k3 != k4) return 0.0;
    double num = 1.0;
    for (int i = 2; i <= k1; ++i) num *= i;
    for (int i = 2; i <= k3; ++i) num *= i;
    double den = 1.0;
    for (int i = 2; i <= k1 + k3 + 1; ++i) den *= i;
    return num / den;
}

struct HaarMomentRow {
    int k1, k2, k3, k4;
    cd empirical;
    double predicted;
    double se_re, se_im;
};

struct HaarMomentReport {
    std::vector<HaarMomentRow> rows;
    size_t n_segments = 0;
    size_t samples = 0;
};

/// Empirical vs predicted moments of U_N for the listed exponent tuples.
/// Meaningful when N is large enough that eta1^N is below the noise floor
/// (caller's responsibility; eta1^N < 1e-3 is the usual working rule).
inline HaarMomentReport haar_moment_test(const FiberModel& model, double beta, size_t n,
                                         size_t samples,
                                         const std::vector<std::array<int, 4>>& moments,
                                         unsigned threads = 0) {
    const size_t nm = moments.size();
    auto bank = run_sample_blocks<AccumulatorBank>(
        samples,
        [&](AccumulatorBank& acc, size_t s) {
            if (acc.width() == 0) acc = AccumulatorBank(2 * nm);
            CounterRng rng(model.seed, s);
            JonesMatrix u;
            for (size_t k = 0; k < n; ++k) {
                const double l = model.length.sample(rng);
                const double th = model.twist.sample(rng);
                u = compose(segment_matrix({beta, l, th}), u);
            }
            const cd a = u.a, ac = std::conj(u.a), b = u.b, bc = std::conj(u.b);
            for (size_t m = 0; m < nm; ++m) {
                cd v = 1.0;
                for (int i = 0; i < moments[m][0]; ++i) v *= a;
                for (int i = 0; i < moments[m][1]; ++i) v *= ac;
                for (int i = 0; i < moments[m][2]; ++i) v *= b;
                for (int i = 0; i < moments[m][3]; ++i) v *= bc;
                acc.add(2 * m + 0, v.real());
                acc.add(2 * m + 1, v.imag());
            }
        },
        [](AccumulatorBank& total, const AccumulatorBank& p) { total.merge(p); }, threads);

    HaarMomentReport rep;
    rep.n_segments = n;
    rep.samples = samples;
    rep.rows.reserve(nm);
    for (size_t m = 0; m < nm; ++m) {
        const auto& k = moments[m];
        rep.rows.push_back({k[0], k[1], k[2], k[3],
                            cd(bank[2 * m].mean(), bank[2 * m + 1].mean()),
                            haar_moment_predicted(k[0], k[1], k[2], k[3]),
                            bank[2 * m].stderr_mean(), bank[2 * m + 1].stderr_mean()});
    }
    return rep;
}

/// All exponent tuples with k1 + k2 + k3 + k4 <= deg.
inline std::vector<std::array<int, 4>> haar_moment_tuples(int deg) {
    std::vector<std::array<int, 4>> out;
    for (int k1 = 0; k1 <= deg; ++k1)
        for (int k2 = 0; k1 + k2 <= deg; ++k2)
            for (int k3 = 0; k1 + k2 + k3 <= deg; ++k3)
                for (int k4 = 0; k1 + k2 + k3 + k4 <= deg; ++k4)
                    out.push_back({k1, k2, k3, k4});
    return out;
}

// ---------------------------------------------------------------------------
// Two-frequency independence statistic

struct IndependenceReport {
    double beta1 = 0.0, beta2 = 0.0;
    size_t n_segments = 0, samples = 0;
    // mean[r] = <U_N(beta1) sigma_r U_N(beta2)^dag>, entries row-major
    std::array<std::array<cd, 4>, 4> mean{};
    std::array<std::array<double, 4>, 4> se_re{}, se_im{};
    double max_abs = 0.0; // max entry magnitude over all four sigma_r
};

/// <U_N(beta1) R U_N(beta2)^dag> for R over the Pauli basis; both products
/// are driven by the same realization.
inline IndependenceReport independence_test(const FiberModel& model, double beta1, double beta2,
                                            size_t n, size_t samples, unsigned threads = 0) {
    auto bank = run_sample_blocks<AccumulatorBank>(
        samples,
        [&](AccumulatorBank& acc, size_t s) {
            if (acc.width() == 0) acc = AccumulatorBank(32);
            CounterRng rng(model.seed, s);
            JonesMatrix u1, u2;
            for (size_t k = 0; k < n; ++k) {
                const double l = model.length.sample(rng);
                const double th = model.twist.sample(rng);
                u1 = compose(segment_matrix({beta1, l, th}), u1);
                u2 = compose(segment_matrix({beta2, l, th}), u2);
            }
            const Mat2c m1 = u1.as_mat2();
            const Mat2c m2d = u2.as_mat2().adjoint();
            for (int r = 0; r < 4; ++r) {
                const Mat2c w = m1 * pauli()[static_cast<size_t>(r)] * m2d;
                const cd e[4] = {w.m00, w.m01, w.m10, w.m11};
                for (int j = 0; j < 4; ++j) {
                    acc.add(static_cast<size_t>(8 * r + 2 * j), e[j].real());
                    acc.add(static_cast<size_t>(8 * r + 2 * j + 1), e[j].imag());
                }
            }
        },
        [](AccumulatorBank& total, const AccumulatorBank& p) { total.merge(p); }, threads);

    IndependenceReport rep;
    rep.beta1 = beta1;
    rep.beta2 = beta2;
    rep.n_segments = n;
    rep.samples = samples;
    for (int r = 0; r < 4; ++r)
        for (int j = 0; j < 4; ++j) {
            const auto& re = bank[static_cast<size_t>(8 * r + 2 * j)];
            const auto& im = bank[static_cast<size_t>(8 * r + 2 * j + 1)];
            rep.mean[r][j] = cd(re.mean(), im.mean());
            rep.se_re[r][j] = re.stderr_mean();
            rep.se_im[r][j] = im.stderr_mean();
            rep.max_abs = std::max(rep.max_abs, std::abs(rep.mean[r][j]));
        }
    return rep;
}

// ---------------------------------------------------------------------------
// Classical h-parameter estimator

/// MC estimate of (1/z) < | integral_0^z Theta(s) e^{i beta s} ds |^2 >.
/// The inner integral is evaluated exactly on each piecewise-constant
/// section, including the partial section at z.
inline ScalarEstimate classical_h_mc(const FiberModel& model, double beta, double z,
                                     size_t samples, unsigned threads = 0) {
    if (beta == 0.0) throw std::domain_error("classical_h_mc: beta must be nonzero");
    if (!(z > 0.0)) throw std::domain_error("classical_h_mc: z must be positive");
    const cd ib(0.0, beta);
    auto bank = run_sample_blocks<AccumulatorBank>(
        samples,
        [&](AccumulatorBank& acc, size_t s) {
            if (acc.width() == 0) acc = AccumulatorBank(1);
            CounterRng rng(model.seed, s);
            cd integral = 0.0;
            double z_prev = 0.0;
            cd phase_prev = 1.0; // e^{i beta z_prev}
            while (z_prev < z) {
                const double l = model.length.sample(rng);
                const double th = model.twist.sample(rng);
                const double z_next = std::min(z_prev + l, z);
                const cd phase_next = std::exp(ib * z_next);
                integral += th * (phase_next - phase_prev) / ib;
                phase_prev = phase_next;
                z_prev = z_prev + l;
            }
            acc.add(0, std::norm(integral) / z);
        },
        [](AccumulatorBank& total, const AccumulatorBank& p) { total.merge(p); }, threads);
    return {bank[0].mean(), bank[0].stderr_mean(), samples};
}

} // namespace jonesmc
