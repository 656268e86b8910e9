#pragma once

// Mergeable streaming moments (Welford / Chan).  Workers own private
// accumulators; merging partials in any order reproduces the same
// (count, mean, M2) up to roundoff.

#include <cmath>
#include <cstddef>
#include <vector>

namespace jonesmc {

class EnsembleAccumulator {
public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }

    void merge(const EnsembleAccumulator& o) {
        if (o.n_ == 0) return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
        const double d = o.mean_ - mean_;
        mean_ += d * nb / (na + nb);
        m2_ += o.m2_ + d * d * na * nb / (na + nb);
        n_ += o.n_;
    }

    size_t count() const { return n_; }
    double mean() const { return mean_; }
    double m2() const { return m2_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    /// standard error of the mean
    double stderr_mean() const {
        return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
    }

private:
    size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Fixed-width bank of scalar accumulators (matrix entries, moment lists...).
class AccumulatorBank {
public:
    AccumulatorBank() = default;
    explicit AccumulatorBank(size_t width) : acc_(width) {}

    void add(size_t i, double x) { acc_[i].add(x); }

    void merge(const AccumulatorBank& o) {
        if (acc_.empty()) acc_.resize(o.acc_.size());
        for (size_t i = 0; i < acc_.size(); ++i) acc_[i].merge(o.acc_[i]);
    }

    size_t width() const { return acc_.size(); }
    const EnsembleAccumulator& operator[](size_t i) const { return acc_[i]; }

private:
    std::vector<EnsembleAccumulator> acc_;
};

} // namespace jonesmc
