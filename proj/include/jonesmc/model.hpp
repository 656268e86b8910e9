#pragma once

// The stochastic fiber model: an i.i.d. sequence of (length, twist) pairs,
// seedable realization sampling, and quadrature expectations over the product
// measure rho_l x mu_theta.

#include <cstdint>
#include <utility>
#include <vector>

#include "distributions.hpp"

namespace jonesmc {

struct FiberModel {
    TwistDistribution twist;
    LengthDistribution length;
    uint64_t seed = 0;
};

struct Segment {
    double l;
    double theta;
};

/// One realization of the piecewise-constant twist process.
struct SegmentRealization {
    std::vector<Segment> segments;
    std::vector<double> z; // cumulative endpoints, z[k] = l_1 + ... + l_{k+1}

    size_t count() const { return segments.size(); }
    double total_length() const { return z.empty() ? 0.0 : z.back(); }
};

struct SegmentStop {
    enum class Kind { count, length } kind;
    size_t n = 0;
    double z = 0.0;

    static SegmentStop count(size_t n) { return {Kind::count, n, 0.0}; }
    static SegmentStop length(double z) { return {Kind::length, 0, z}; }
};

/// Draw a realization.  `stream` selects an independent substream of the
/// model seed, so ensemble workers can sample concurrently and reproducibly.
/// Draw order is fixed (length, then twist, per segment).
///
/// For a length stop the realization has exactly N(z) segments, N(z) being
/// the minimal N with l_1 + ... + l_N > z (strict), so z exactly on a segment
/// boundary still belongs to the earlier count.
inline SegmentRealization sample_realization(const FiberModel& model, SegmentStop stop,
                                             uint64_t stream = 0) {
    if (stop.kind == SegmentStop::Kind::count && stop.n < 1)
        throw std::domain_error("sample_realization: need at least one segment");
    if (stop.kind == SegmentStop::Kind::length && !(stop.z > 0))
        throw std::domain_error("sample_realization: need z > 0");

    CounterRng rng(model.seed, stream);
    SegmentRealization r;
    double acc = 0.0;
    while (true) {
        const double l = model.length.sample(rng);
        const double theta = model.twist.sample(rng);
        acc += l;
        r.segments.push_back({l, theta});
        r.z.push_back(acc);
        if (stop.kind == SegmentStop::Kind::count) {
            if (r.segments.size() == stop.n) break;
        } else {
            if (acc > stop.z) break;
        }
    }
    return r;
}

/// E[f(l, theta)] under rho_l x mu_theta by adaptive composite quadrature.
/// Works for any value type with +=, scalar *, and a max-abs norm (double,
/// complex, Eigen matrices).  Refines both factors together until the
/// estimate moves by less than `tol` (absolute), throwing accuracy_error
/// after `max_level` refinements.
template <class F>
auto expect(const FiberModel& model, F&& f, double tol = 1e-10, int max_level = 20)
    -> decltype(f(1.0, 0.0)) {
    using T = decltype(f(1.0, 0.0));
    // accumulators are seeded from the first term so the value type never
    // needs a zero constructor (Eigen matrices default-construct unset)
    auto level_estimate = [&](int level) -> T {
        const QuadRule ql = model.length.quad(level);
        const QuadRule qt = model.twist.quad(level);
        T acc = 0.0 * f(ql.nodes[0], qt.nodes[0]);
        for (size_t i = 0; i < ql.nodes.size(); ++i) {
            T inner = qt.weights[0] * f(ql.nodes[i], qt.nodes[0]);
            for (size_t j = 1; j < qt.nodes.size(); ++j)
                inner += qt.weights[j] * f(ql.nodes[i], qt.nodes[j]);
            acc += ql.weights[i] * inner;
        }
        return acc;
    };
    T prev = level_estimate(0);
    for (int level = 1;; ++level) {
        T acc = level_estimate(level);
        if (detail::quad_norm(acc - prev) < tol) return acc;
        if (level >= max_level)
            throw accuracy_error("expect: no convergence after max refinement",
                                 static_cast<double>(detail::quad_norm(acc)));
        prev = acc;
    }
}

/// <Theta^k>
inline double theta_moment(const FiberModel& model, int k) {
    if (k < 0) throw std::domain_error("theta_moment: k >= 0");
    if (k == 0) return 1.0;
    // twist-only quadrature; refine like expect()
    double prev = 0.0;
    bool have_prev = false;
    for (int level = 0;; ++level) {
        const QuadRule qt = model.twist.quad(level);
        double acc = 0.0;
        for (size_t j = 0; j < qt.nodes.size(); ++j)
            acc += qt.weights[j] * std::pow(qt.nodes[j], k);
        if (have_prev && std::abs(acc - prev) < 1e-12) return acc;
        if (level >= 20) throw accuracy_error("theta_moment: no convergence", acc);
        prev = acc;
        have_prev = true;
    }
}

inline std::complex<double> length_char_fn(const FiberModel& model, std::complex<double> lambda) {
    return model.length.char_fn(lambda);
}

} // namespace jonesmc
