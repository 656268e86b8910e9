#pragma once

// Gauss-Legendre panels and the adaptive refinement loop used by all
// distribution expectations.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace jonesmc {

/// Thrown when adaptive refinement fails to reach the requested tolerance.
/// Carries the best estimate obtained so far.
class accuracy_error : public std::runtime_error {
public:
    accuracy_error(const std::string& what, double best)
        : std::runtime_error(what), best_estimate(best) {}
    double best_estimate;
};

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights; // measure weights folded in; sum == total mass
};

/// Nodes/weights of the n-point Gauss-Legendre rule on [-1, 1].
inline const QuadRule& gauss_legendre_unit(int n) {
    static thread_local std::vector<std::pair<int, QuadRule>> cache;
    for (auto& [m, r] : cache)
        if (m == n) return r;
    QuadRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton iteration from the Chebyshev estimate of the i-th root
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p0 = 0, dp = 0;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            double p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
            }
            dp = n * (t * p0 - p1) / (t * t - 1.0);
            double dt = p0 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        r.nodes[i] = t;
        r.weights[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    cache.emplace_back(n, std::move(r));
    return cache.back().second;
}

/// Composite Gauss-Legendre rule: `panels` equal panels of `order` points on
/// [a, b], with an optional positive weight density folded into the weights.
template <class Density>
QuadRule composite_gl(double a, double b, int panels, int order, Density&& density) {
    const QuadRule& gl = gauss_legendre_unit(order);
    QuadRule r;
    r.nodes.reserve(static_cast<size_t>(panels) * order);
    r.weights.reserve(static_cast<size_t>(panels) * order);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        for (int k = 0; k < order; ++k) {
            const double x = lo + 0.5 * h * (gl.nodes[k] + 1.0);
            r.nodes.push_back(x);
            r.weights.push_back(0.5 * h * gl.weights[k] * density(x));
        }
    }
    return r;
}

inline QuadRule composite_gl(double a, double b, int panels, int order) {
    return composite_gl(a, b, panels, order, [](double) { return 1.0; });
}

namespace detail {
inline double quad_norm(double x) { return std::abs(x); }
template <class T>
double quad_norm(const std::complex<T>& x) { return std::abs(x); }
// matrix-like types (Eigen) expose cwiseAbs()
template <class T>
auto quad_norm(const T& x) -> decltype(x.cwiseAbs().maxCoeff()) {
    return x.cwiseAbs().maxCoeff();
}
} // namespace detail

} // namespace jonesmc
