// Acceptance suite: one selectable check per numbered criterion, each
// printing a single PASS/FAIL line (plus indented detail).  Exit status is
// nonzero when any selected check fails.
//
// Reference model throughout: two_point(0.1) twist, exponential(<l> = 1)
// lengths, beta = 1, fixed seed.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include <jonesmc/jonesmc.hpp>

#include "oracles.hpp"

using namespace jonesmc;

namespace {

constexpr uint64_t kSeed = 20260808;
const FiberModel kRef{TwistDistribution::two_point(0.1), LengthDistribution::exponential(1.0),
                      kSeed};

struct Outcome {
    bool pass = true;
    std::vector<std::string> details;

    void require(bool ok, const std::string& detail) {
        pass = pass && ok;
        details.push_back(std::string(ok ? "ok   " : "FAIL ") + detail);
    }
    void info(const std::string& s) { details.push_back("     " + s); }
};

std::string fmt(const char* f, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// 1. Mode-coupling decay: <J11(beta, N)> vs (1/2)(1 + eta1^N) over N = 1..500,
//    10^4 realizations, >= 95% of points within 4 sigma; runtime < 60 s.
//    Also the continuous-z evaluation at z = N <l> against the discrete curve.
Outcome criterion1() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    const size_t samples = 10000;
    std::vector<size_t> ns(500);
    for (size_t i = 0; i < ns.size(); ++i) ns[i] = i + 1;

    const double e1 = eta1(kRef, 1.0);
    const auto curve = mc_mean_coherence_curve(kRef, 1.0, ns, samples);
    size_t good = 0;
    for (const auto& row : curve) {
        const DiagPrediction p = diag_prediction({1.0, 0.0, 0.0}, e1, row.n_segments);
        if (std::abs(row.mean.j11 - p.j11) <= 4.0 * row.se_j11) ++good;
    }
    out.require(good >= 475, fmt("discrete curve: %zu/500 points within 4 sigma of (1+eta1^N)/2",
                                 good));

    std::vector<double> zs(ns.size());
    const double lmean = kRef.length.mean_length();
    for (size_t i = 0; i < ns.size(); ++i) zs[i] = static_cast<double>(ns[i]) * lmean;
    FiberModel cont_model = kRef;
    cont_model.seed = kSeed + 1; // independent ensemble for the continuous curve
    const auto cont = mc_mean_coherence_continuous(cont_model, 1.0, zs, samples);
    size_t good_cont = 0;
    for (size_t i = 0; i < ns.size(); ++i) {
        const double se = std::hypot(curve[i].se_j11, cont[i].se_j11);
        if (std::abs(curve[i].mean.j11 - cont[i].mean.j11) <= 4.0 * se) ++good_cont;
    }
    out.require(good_cont >= 475,
                fmt("continuous z = N<l> curve: %zu/500 points within 4 sigma of discrete",
                    good_cont));

    const double secs = elapsed_s(t0);
    out.require(secs < 60.0, fmt("runtime %.1f s (< 60 s)", secs));
    return out;
}

// ---------------------------------------------------------------------------
// 2. Haar limit: at N = 400, 1e5 samples, every moment with k1+k2+k3+k4 <= 4
//    matches 0 or k1! k3! / (k1+k3+1)! within 4 sigma.
Outcome criterion2() {
    Outcome out;
    const auto rep = haar_moment_test(kRef, 1.0, 400, 100000, haar_moment_tuples(4));
    size_t bad = 0;
    double worst = 0.0;
    for (const auto& row : rep.rows) {
        const double zre =
            row.se_re > 0.0 ? std::abs(row.empirical.real() - row.predicted) / row.se_re : 0.0;
        const double zim = row.se_im > 0.0 ? std::abs(row.empirical.imag()) / row.se_im : 0.0;
        worst = std::max(worst, std::max(zre, zim));
        if (zre > 4.0 || zim > 4.0) {
            ++bad;
            out.info(fmt("  moment (%d,%d,%d,%d): empirical %+.5f%+.5fi predicted %.5f "
                         "(z = %.1f / %.1f)",
                         row.k1, row.k2, row.k3, row.k4, row.empirical.real(),
                         row.empirical.imag(), row.predicted, zre, zim));
        }
    }
    out.require(bad == 0, fmt("%zu moment tuples, all within 4 sigma (worst z = %.2f)",
                              rep.rows.size(), worst));
    return out;
}

// ---------------------------------------------------------------------------
// 3. Limit coherence: at N = 500 the MC mean coherence is 1/2 E within 4 sigma.
Outcome criterion3() {
    Outcome out;
    const auto m = mc_mean_coherence(kRef, 1.0, 500, 10000);
    out.require(std::abs(m.mean.j11 - 0.5) <= 4.0 * m.se_j11,
                fmt("J11 = %.5f +- %.5f vs 0.5", m.mean.j11, m.se_j11));
    out.require(std::abs(m.mean.j22 - 0.5) <= 4.0 * m.se_j22,
                fmt("J22 = %.5f +- %.5f vs 0.5", m.mean.j22, m.se_j22));
    out.require(std::abs(m.mean.j12.real()) <= 4.0 * m.se_rej12,
                fmt("Re J12 = %.5f +- %.5f vs 0", m.mean.j12.real(), m.se_rej12));
    out.require(std::abs(m.mean.j12.imag()) <= 4.0 * m.se_imj12,
                fmt("Im J12 = %.5f +- %.5f vs 0", m.mean.j12.imag(), m.se_imj12));
    return out;
}

// ---------------------------------------------------------------------------
// 4. Depolarization on the coarse five-line flat spectrum over [0.8, 1.2]:
//    log-log slope of MC <p^2_N> over N in {64..1024} against -0.5 +- 0.05,
//    and the N = 512 value against (1/3) sqrt(2 pi / N) int Btilde^2/sqrt(f)
//    within 15%.
//
//    Both targets assume a continuum spectrum.  A 5-line quadrature grid has
//    the exact depolarization floor sum_i (w_i Btilde_i)^2 = 0.21875
//    (diagonal pair terms are rank one) which the curve reaches
//    exponentially fast, so the N^{-1/2} law cannot appear on it; and the
//    1/3 prefactor sits a factor ~3 below the asymptotic constant measured
//    by exact pair-operator powers.  The configuration is kept unchanged as
//    a regression record of both effects; the supplement carries the
//    resolved-grid version of the same law, which passes.
Outcome criterion4() {
    Outcome out;
    const SpectralDensity spec = SpectralDensity::flat(0.8, 1.2, 5);
    const std::vector<size_t> ns = {64, 128, 256, 512, 1024};
    const auto curve = mc_mean_p2_curve(kRef, spec, ns, 10000);

    std::vector<double> lx, ly;
    for (size_t i = 0; i < ns.size(); ++i) {
        lx.push_back(std::log(static_cast<double>(ns[i])));
        ly.push_back(std::log(curve[i].value));
        out.info(fmt("N = %4zu: <p^2> = %.5f +- %.5f", ns[i], curve[i].value, curve[i].se));
    }
    const double slope = oracles::fit_line(lx, ly).slope;
    out.require(std::abs(slope + 0.5) <= 0.05, fmt("log-log slope %.3f vs -0.5 +- 0.05", slope));

    const AsymptoticReport rep = p2_asymptotic(kRef, spec, 512);
    const double third_form = (1.0 / 3.0) * std::sqrt(2.0 * M_PI / 512.0) * rep.integral;
    const double mc512 = curve[3].value;
    out.require(std::abs(mc512 / third_form - 1.0) <= 0.15,
                fmt("N = 512: MC %.5f vs (1/3)-prefactor prediction %.5f (ratio %.2f, require 15%%)",
                    mc512, third_form, mc512 / third_form));
    return out;
}

// ---------------------------------------------------------------------------
// 4s. Supplement: the same depolarization law on a grid fine enough to
//     resolve the N-dependent spectral correlation width, with the
//     lattice-sum artifacts (floor, missing diagonal) accounted for.
//     Strong-twist model so transients are gone at moderate N.
Outcome supplement4() {
    Outcome out;
    const FiberModel strong{TwistDistribution::two_point(1.0), LengthDistribution::exponential(1.0),
                            kSeed};
    const SpectralDensity spec = SpectralDensity::flat(0.9, 1.1, 81);
    double floor = 0.0, b2int = 0.0;
    for (size_t i = 0; i < spec.lines(); ++i) {
        floor += spec.line_mass(i) * spec.line_mass(i);
        b2int += spec.weights[i] * spec.values[i] * spec.values[i];
    }
    const double dbeta = spec.grid[1] - spec.grid[0];

    // exact pair-operator sequence: slope of the floor-subtracted curve
    std::vector<double> lx, ly;
    for (size_t n : {size_t(2048), size_t(4096), size_t(8192), size_t(16384), size_t(32768)}) {
        const double exact = oracles::p2_exact_grid(strong, spec, n);
        lx.push_back(std::log(static_cast<double>(n)));
        ly.push_back(std::log(exact - floor));
        out.info(fmt("N = %5zu: exact <p^2> - floor = %.5f", n, exact - floor));
    }
    const double slope = oracles::fit_line(lx, ly).slope;
    out.require(std::abs(slope + 0.5) <= 0.05,
                fmt("resolved-grid log-log slope %.3f vs -0.5 +- 0.05", slope));

    // asymptotic prefactor at N = 32768 against the exact value
    const size_t nbig = 32768;
    const double exact_big = std::exp(ly.back());
    const double lead = p2_asymptotic(strong, spec, nbig).leading_term;
    const double ratio = exact_big / (lead - dbeta * b2int);
    out.require(std::abs(ratio - 1.0) <= 0.15,
                fmt("N = %zu: exact/leading-term ratio %.3f (require 15%%)", nbig, ratio));

    // the MC estimator reproduces the exact curve
    const size_t nmc = 1024;
    const auto mc = mc_mean_p2(strong, spec, nmc, 1500);
    const double exact_mc = oracles::p2_exact_grid(strong, spec, nmc);
    out.require(std::abs(mc.value - exact_mc) <= 4.0 * mc.se,
                fmt("N = %zu: MC %.5f +- %.5f vs exact %.5f", nmc, mc.value, mc.se, exact_mc));

    // and the leading term predicts the MC value within 15% once the floor
    // and lattice terms are included (deep enough in N that the next-order
    // N^{-1/2} correction has dropped below the gate)
    const size_t ndeep = 8192;
    const auto mc_deep = mc_mean_p2(strong, spec, ndeep, 800);
    const double pred = floor + p2_asymptotic(strong, spec, ndeep).leading_term - dbeta * b2int;
    out.require(std::abs(mc_deep.value / pred - 1.0) <= 0.15,
                fmt("N = %zu: MC %.5f +- %.5f vs asymptotic-with-floor %.5f (ratio %.2f)", ndeep,
                    mc_deep.value, mc_deep.se, pred, mc_deep.value / pred));
    return out;
}

// ---------------------------------------------------------------------------
// 5. Classical h: MC estimate at z = 1e4 <l>, 1e3 realizations, within
//    4 sigma of 4<T^2><sin^2(l beta/2)>/(beta^2 <l>); exact fixed-length
//    specialization within 1e-10.
Outcome criterion5() {
    Outcome out;
    const double closed = h_classical(kRef, 1.0);
    const auto mc = classical_h_mc(kRef, 1.0, 1e4, 1000);
    out.require(std::abs(mc.value - closed) <= 4.0 * mc.se,
                fmt("MC %.6f +- %.6f vs closed form %.6f", mc.value, mc.se, closed));

    const double t0 = 0.2, l0 = 1.3, beta = 0.9;
    const FiberModel fx{TwistDistribution::two_point(t0), LengthDistribution::fixed(l0), kSeed};
    const double s = std::sin(0.5 * l0 * beta);
    const double hand = 4.0 * t0 * t0 * s * s / (beta * beta * l0);
    const double lib = h_classical(fx, beta);
    out.require(std::abs(lib - hand) < 1e-10,
                fmt("fixed-length specialization |%.12f - %.12f| < 1e-10", lib, hand));
    return out;
}

// ---------------------------------------------------------------------------
// 6. h-ratio regime: for Tmax in {0.3, 0.1, 0.03, 0.01} at beta = 1,
//    |h_new/h_classical - 1| decreases monotonically and sits below
//    C * 4 Tmax^2 / (<l>^-2 + beta^2) with C <= 3.
Outcome criterion6() {
    Outcome out;
    const double beta = 1.0;
    double prev = 1e9;
    bool monotone = true, bounded = true;
    for (double tmax : {0.3, 0.1, 0.03, 0.01}) {
        const FiberModel m{TwistDistribution::two_point(tmax),
                           LengthDistribution::exponential(1.0), kSeed};
        const double dev = std::abs(h_new(m, beta) / h_classical(m, beta) - 1.0);
        const double bound = 3.0 * 4.0 * tmax * tmax / (1.0 + beta * beta);
        out.info(fmt("Tmax = %.2f: |ratio - 1| = %.6f, bound %.6f", tmax, dev, bound));
        monotone = monotone && dev < prev;
        bounded = bounded && dev < bound;
        prev = dev;
    }
    out.require(monotone, "deviation decreases monotonically with Tmax");
    out.require(bounded, "deviation below 3 * 4 Tmax^2 / (<l>^-2 + beta^2)");
    return out;
}

// ---------------------------------------------------------------------------
// 7. Independence: at N = 400, beta1 = 1, beta2 = 2, 1e5 samples, all entries
//    of <U_N(b1) sigma_k U_N(b2)^dag> within 4 sigma of zero; the sigma_0
//    entry at beta2 = beta1 is nonzero beyond 10 sigma.
Outcome criterion7() {
    Outcome out;
    const auto rep = independence_test(kRef, 1.0, 2.0, 400, 100000);
    size_t bad = 0;
    double worst = 0.0;
    for (int r = 0; r < 4; ++r)
        for (int j = 0; j < 4; ++j) {
            const double zre =
                rep.se_re[r][j] > 0 ? std::abs(rep.mean[r][j].real()) / rep.se_re[r][j] : 0.0;
            const double zim =
                rep.se_im[r][j] > 0 ? std::abs(rep.mean[r][j].imag()) / rep.se_im[r][j] : 0.0;
            worst = std::max(worst, std::max(zre, zim));
            if (zre > 4.0 || zim > 4.0) ++bad;
        }
    out.require(bad == 0, fmt("32 entry components within 4 sigma of 0 (worst z = %.2f)", worst));

    const auto ctrl = independence_test(kRef, 1.0, 1.0, 400, 2000);
    const double se = std::max(ctrl.se_re[0][0], 1e-300);
    out.require(std::abs(ctrl.mean[0][0].real()) > 10.0 * se,
                fmt("positive control sigma_0 at beta2 = beta1: |%.6f| > 10 sigma",
                    ctrl.mean[0][0].real()));
    return out;
}

// ---------------------------------------------------------------------------
// 8. Always-on property suites at their pinned tolerances.
Outcome criterion8() {
    Outcome out;
    CounterRng rng(kSeed, 0);

    // SU(2) unitarity / determinant (1e-12) and m identity (1e-12)
    {
        double worst_u = 0.0, worst_d = 0.0, worst_m = 0.0;
        for (int i = 0; i < 500; ++i) {
            const SegmentParams p{rng.uniform(0.0, 10.0), rng.uniform(1e-3, 10.0),
                                  rng.uniform(-5.0, 5.0)};
            const JonesMatrix m = segment_matrix(p);
            worst_u = std::max(worst_u, std::abs(m.unitarity_defect()));
            worst_d = std::max(worst_d, std::abs(m.as_mat2().det() - cd(1.0, 0.0)));
            const MParams mp = segment_mparams(p);
            worst_m = std::max(worst_m,
                               std::abs(mp.m0 * mp.m0 + mp.m1 * mp.m1 + mp.m3 * mp.m3 - 1.0));
        }
        out.require(worst_u < 1e-12, fmt("unitarity defect max %.2e < 1e-12", worst_u));
        out.require(worst_d < 1e-12, fmt("determinant defect max %.2e < 1e-12", worst_d));
        out.require(worst_m < 1e-12, fmt("m0^2+m1^2+m3^2 - 1 max %.2e < 1e-12", worst_m));
    }

    // semigroup law (1e-10) and trace conservation (1e-10)
    {
        const auto r = sample_realization(kRef, SegmentStop::count(100), 12);
        const Complex2Vector e0{cd(0.8, 0.1), cd(-0.3, 0.5)};
        double worst_tr = 0.0;
        const double tr0 = CoherenceMatrix::outer(e0).trace();
        for (double frac : {0.2, 0.5, 0.8, 1.0}) {
            const Complex2Vector e =
                propagate_continuous(e0, r, frac * r.total_length(), 1.0);
            worst_tr = std::max(worst_tr, std::abs(CoherenceMatrix::outer(e).trace() - tr0));
        }
        out.require(worst_tr < 1e-10, fmt("trace conservation max drift %.2e < 1e-10", worst_tr));

        // U(z2, z1) U(z1, 0) = U(z2, 0)
        const double z1 = 0.4 * r.total_length(), z2 = 0.9 * r.total_length();
        const Complex2Vector mid = propagate_continuous(e0, r, z1, 1.0);
        SegmentRealization tail;
        size_t k = 0;
        while (r.z[k] <= z1) ++k;
        tail.segments.push_back({r.z[k] - z1, r.segments[k].theta});
        tail.z.push_back(r.z[k] - z1);
        for (size_t j = k + 1; j < r.count(); ++j) {
            tail.segments.push_back(r.segments[j]);
            tail.z.push_back(tail.z.back() + r.segments[j].l);
        }
        const Complex2Vector via = propagate_continuous(mid, tail, z2 - z1, 1.0);
        const Complex2Vector direct = propagate_continuous(e0, r, z2, 1.0);
        const double diff = std::max(std::abs(via.x - direct.x), std::abs(via.y - direct.y));
        out.require(diff < 1e-10, fmt("semigroup law defect %.2e < 1e-10", diff));
    }

    // dM/dbeta vs central finite differences (relative 1e-6) on the grid
    {
        double worst = 0.0;
        for (double beta : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0})
            for (double theta : {0.0, 0.5, 2.0, 5.0})
                for (double l : {0.01, 0.5, 2.0, 10.0}) {
                    const SegmentParams p{beta, l, theta};
                    const Mat2c a = segment_matrix_dbeta(p);
                    const Mat2c f = oracles::segment_dbeta_fd(p);
                    worst = std::max(worst,
                                     (a - f).max_abs() / std::max(1.0, f.max_abs()));
                }
        out.require(worst < 1e-6, fmt("derivative vs finite differences, worst rel %.2e < 1e-6",
                                      worst));
    }

    // f(beta) closed form vs the detuning second-difference oracle
    // (relative 1e-4 on a 10-point beta grid)
    {
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            const double beta = 0.6 + 0.2 * i;
            const double closed = f_beta(kRef, beta);
            const double fd = oracles::f_beta_fd(kRef, beta);
            worst = std::max(worst, std::abs(closed / fd - 1.0));
        }
        out.require(worst < 1e-4, fmt("f(beta) closed vs oracle, worst rel %.2e < 1e-4", worst));
    }

    // (A (x) A, Delta) = det A within 1e-12
    {
        double worst = 0.0;
        const Vec16d dvec = det_pairing_vec();
        for (int i = 0; i < 200; ++i) {
            const cd off(rng.uniform(-1, 1), rng.uniform(-1, 1));
            const Mat2c a{cd(rng.uniform(-1, 1), 0.0), off, std::conj(off),
                          cd(rng.uniform(-1, 1), 0.0)};
            const Eigen::Vector4d c = hermitian_components(a);
            Vec16d aa;
            for (int k = 0; k < 4; ++k)
                for (int m = 0; m < 4; ++m) aa(4 * k + m) = c(k) * c(m);
            worst = std::max(worst, std::abs(aa.dot(dvec) - a.det().real()));
        }
        out.require(worst < 1e-12, fmt("(A x A, Delta) = det A, worst %.2e < 1e-12", worst));
    }

    // deterministic replay: byte-identical CSV for any worker count
    {
        ExperimentConfig cfg;
        cfg.experiment = ExperimentKind::simulate;
        cfg.seed = kSeed;
        cfg.samples = 2000;
        cfg.twist = kRef.twist;
        cfg.length = kRef.length;
        cfg.beta = 1.0;
        cfg.n_list = {0, 10, 50};
        cfg.threads = 1;
        const std::string a = run_simulate(cfg).csv.str();
        cfg.threads = 2;
        const std::string b = run_simulate(cfg).csv.str();
        cfg.threads = 5;
        const std::string c = run_simulate(cfg).csv.str();
        out.require(a == b && a == c, "replay byte-identical across 1/2/5 worker threads");
    }
    return out;
}

struct Entry {
    const char* name;
    const char* title;
    Outcome (*fn)();
};

const Entry kEntries[] = {
    {"1", "mode-coupling decay (eta1^N law, discrete + continuous)", criterion1},
    {"2", "Haar-limit moments at N = 400", criterion2},
    {"3", "limit mean coherence = E/2", criterion3},
    {"4", "depolarization slope/prefactor on the coarse 5-line spectrum", criterion4},
    {"5", "classical h-parameter: MC vs closed form", criterion5},
    {"6", "h-ratio small-twist regime", criterion6},
    {"7", "two-frequency independence at N = 400", criterion7},
    {"8", "property suites (SU(2), semigroup, derivatives, f oracle, replay)", criterion8},
    {"supplement", "depolarization law on a resolved grid (floor-corrected)", supplement4},
};

} // namespace

int main(int argc, char** argv) {
    bool all_pass = true;
    bool verbose = false;
    std::vector<std::string> selected;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "-v") == 0)
            verbose = true;
        else
            selected.emplace_back(argv[i]);
    }

    for (const Entry& e : kEntries) {
        if (!selected.empty()) {
            bool want = false;
            for (const auto& s : selected) want = want || s == e.name;
            if (!want) continue;
        }
        const Outcome out = e.fn();
        std::printf("[%s] criterion %s: %s\n", out.pass ? "PASS" : "FAIL", e.name, e.title);
        for (const auto& d : out.details)
            if (verbose || !out.pass || d.substr(0, 5) != "     ")
                std::printf("    %s\n", d.c_str());
        all_pass = all_pass && out.pass;
        std::fflush(stdout);
    }
    return all_pass ? 0 : 1;
}
