#pragma once

// Twist and segment-length distributions: sampling, moments, quadrature
// nodes for expectations, and the length characteristic function
// <exp(-lambda l)>.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "quadrature.hpp"
#include "rng.hpp"

namespace jonesmc {

struct TwistDistribution {
    enum class Kind { two_point, uniform, gaussian };

    Kind kind = Kind::two_point;
    // two_point: theta in {mean - theta0, mean + theta0}, equal probability
    // uniform:   theta ~ U[lo, hi]
    // gaussian:  theta ~ N(mean, sigma)
    double theta0 = 0.1;
    double mean = 0.0;
    double lo = 0.0, hi = 0.0;
    double sigma = 0.0;

    static TwistDistribution two_point(double theta0, double mean = 0.0) {
        TwistDistribution d;
        d.kind = Kind::two_point;
        d.theta0 = theta0;
        d.mean = mean;
        return d;
    }
    static TwistDistribution uniform(double lo, double hi) {
        if (!(hi > lo)) throw std::domain_error("uniform twist: need hi > lo");
        TwistDistribution d;
        d.kind = Kind::uniform;
        d.lo = lo;
        d.hi = hi;
        d.mean = 0.5 * (lo + hi);
        return d;
    }
    static TwistDistribution gaussian(double mean, double sigma) {
        if (!(sigma > 0)) throw std::domain_error("gaussian twist: need sigma > 0");
        TwistDistribution d;
        d.kind = Kind::gaussian;
        d.mean = mean;
        d.sigma = sigma;
        return d;
    }

    /// Regular twist is present iff the distribution is not symmetric about 0.
    bool has_regular_twist() const {
        switch (kind) {
            case Kind::two_point: return mean != 0.0;
            case Kind::uniform: return lo + hi != 0.0;
            case Kind::gaussian: return mean != 0.0;
        }
        return false;
    }

    double sample(CounterRng& rng) const {
        switch (kind) {
            case Kind::two_point:
                return mean + (rng.uniform01() < 0.5 ? -theta0 : theta0);
            case Kind::uniform:
                return rng.uniform(lo, hi);
            case Kind::gaussian:
                return rng.gaussian(mean, sigma);
        }
        return 0.0;
    }

    /// Probability-measure quadrature rule; exact for two_point, composite
    /// Gauss-Legendre otherwise.  `level` doubles the panel count.
    /// Gaussian support truncated at 8 sigma (tail mass < 1e-15).
    QuadRule quad(int level) const {
        switch (kind) {
            case Kind::two_point: {
                QuadRule r;
                r.nodes = {mean - theta0, mean + theta0};
                r.weights = {0.5, 0.5};
                return r;
            }
            case Kind::uniform: {
                const double w = 1.0 / (hi - lo);
                return composite_gl(lo, hi, 2 << level, 16, [&](double) { return w; });
            }
            case Kind::gaussian: {
                const double a = mean - 8.0 * sigma, b = mean + 8.0 * sigma;
                const double c = 1.0 / (sigma * std::sqrt(2.0 * M_PI));
                return composite_gl(a, b, 2 << level, 16, [&](double t) {
                    const double u = (t - mean) / sigma;
                    return c * std::exp(-0.5 * u * u);
                });
            }
        }
        return {};
    }

    std::string name() const {
        switch (kind) {
            case Kind::two_point: return "two_point";
            case Kind::uniform: return "uniform";
            case Kind::gaussian: return "gaussian";
        }
        return "?";
    }
};

struct LengthDistribution {
    enum class Kind { exponential, fixed, uniform };

    Kind kind = Kind::exponential;
    double mean = 1.0;          // exponential
    double value = 1.0;         // fixed
    double lo = 0.0, hi = 0.0;  // uniform

    static LengthDistribution exponential(double mean) {
        if (!(mean > 0)) throw std::domain_error("exponential length: need mean > 0");
        LengthDistribution d;
        d.kind = Kind::exponential;
        d.mean = mean;
        return d;
    }
    static LengthDistribution fixed(double l0) {
        if (!(l0 > 0)) throw std::domain_error("fixed length: need l0 > 0");
        LengthDistribution d;
        d.kind = Kind::fixed;
        d.value = l0;
        return d;
    }
    static LengthDistribution uniform(double lo, double hi) {
        if (!(lo > 0) || !(hi > lo))
            throw std::domain_error("uniform length: need 0 < lo < hi");
        LengthDistribution d;
        d.kind = Kind::uniform;
        d.lo = lo;
        d.hi = hi;
        return d;
    }

    double mean_length() const {
        switch (kind) {
            case Kind::exponential: return mean;
            case Kind::fixed: return value;
            case Kind::uniform: return 0.5 * (lo + hi);
        }
        return 0.0;
    }

    double sample(CounterRng& rng) const {
        switch (kind) {
            case Kind::exponential: return rng.exponential(mean);
            case Kind::fixed: return value;
            case Kind::uniform: return rng.uniform(lo, hi);
        }
        return 0.0;
    }

    /// Exponential support truncated at 40 <l> (tail mass e^-40 < 5e-18).
    QuadRule quad(int level) const {
        switch (kind) {
            case Kind::exponential:
                return composite_gl(0.0, 40.0 * mean, 4 << level, 16, [&](double l) {
                    return std::exp(-l / mean) / mean;
                });
            case Kind::fixed: {
                QuadRule r;
                r.nodes = {value};
                r.weights = {1.0};
                return r;
            }
            case Kind::uniform: {
                const double w = 1.0 / (hi - lo);
                return composite_gl(lo, hi, 2 << level, 16, [&](double) { return w; });
            }
        }
        return {};
    }

    /// Characteristic function <e^{-lambda l}> of Eq.-style Laplace type.
    /// Closed form for exponential (pole at lambda = -1/<l>) and fixed;
    /// numerical Laplace integral for uniform.
    std::complex<double> char_fn(std::complex<double> lambda) const {
        switch (kind) {
            case Kind::exponential: {
                if (lambda.real() <= -1.0 / mean)
                    throw std::domain_error("char_fn: lambda outside analyticity domain Re > -1/<l>");
                return 1.0 / (1.0 + lambda * mean);
            }
            case Kind::fixed:
                return std::exp(-lambda * value);
            case Kind::uniform: {
                QuadRule q = composite_gl(lo, hi, 64, 16);
                std::complex<double> acc = 0.0;
                for (size_t i = 0; i < q.nodes.size(); ++i)
                    acc += q.weights[i] * std::exp(-lambda * q.nodes[i]);
                return acc / (hi - lo);
            }
        }
        return 0.0;
    }

    /// Theorem-2-style limit results assume an absolutely continuous length
    /// density; deterministic lengths fall outside that hypothesis.
    bool theorem2_applicable() const { return kind != Kind::fixed; }

    std::string name() const {
        switch (kind) {
            case Kind::exponential: return "exponential";
            case Kind::fixed: return "fixed";
            case Kind::uniform: return "uniform";
        }
        return "?";
    }
};

} // namespace jonesmc
