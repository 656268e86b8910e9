#pragma once

// Field and coherence evolution along a realization: the discrete section
// product U_N, the continuous-z product with a partial last section, and the
// coherence/polarization observables built from them.

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "model.hpp"
#include "su2.hpp"

namespace jonesmc {

/// Hermitian 2x2 coherence matrix; j21 = conj(j12) implicit.
struct CoherenceMatrix {
    double j11 = 0.0;
    double j22 = 0.0;
    cd j12{0.0, 0.0};

    double trace() const { return j11 + j22; }
    double det() const { return j11 * j22 - std::norm(j12); }

    static CoherenceMatrix outer(const Complex2Vector& e) {
        return {std::norm(e.x), std::norm(e.y), e.x * std::conj(e.y)};
    }

    CoherenceMatrix& axpy(double w, const CoherenceMatrix& o) {
        j11 += w * o.j11;
        j22 += w * o.j22;
        j12 += w * o.j12;
        return *this;
    }
};

/// J = E E^dag of a monochromatic field (rank one, det = 0).
inline CoherenceMatrix coherence_mono(const Complex2Vector& e) {
    return CoherenceMatrix::outer(e);
}

/// p = sqrt(1 - 4 det J / tr^2 J).  Rounding can push the radicand slightly
/// outside [0, 1]; excursions within 1e-12 are clamped, larger ones are a
/// violated invariant.
inline double polarization_degree(const CoherenceMatrix& j) {
    const double tr = j.trace();
    if (!(tr > 0.0)) throw std::domain_error("polarization_degree: tr J must be positive");
    double rad = 1.0 - 4.0 * j.det() / (tr * tr);
    if (rad < -1e-12 || rad > 1.0 + 1e-12)
        throw std::domain_error("polarization_degree: coherence matrix not PSD within tolerance");
    return std::sqrt(std::clamp(rad, 0.0, 1.0));
}

/// E_N = M(l_N, theta_N) ... M(l_1, theta_1) E_0 over the first `n` sections
/// (all of them by default).
inline Complex2Vector propagate_discrete(const Complex2Vector& e0, const SegmentRealization& r,
                                         double beta, size_t n = static_cast<size_t>(-1)) {
    if (r.count() == 0) throw std::domain_error("propagate_discrete: empty realization");
    n = std::min(n, r.count());
    Complex2Vector e = e0;
    for (size_t k = 0; k < n; ++k)
        e = apply(segment_matrix({beta, r.segments[k].l, r.segments[k].theta}), e);
    return e;
}

/// Field at interior coordinate z: full sections below z, then a partial
/// section of length z - z_{N(z)-1} with the twist of section N(z).
inline Complex2Vector propagate_continuous(const Complex2Vector& e0, const SegmentRealization& r,
                                           double z, double beta) {
    if (z < 0.0 || z > r.total_length())
        throw std::domain_error("propagate_continuous: z outside [0, total length]");
    Complex2Vector e = e0;
    size_t k = 0;
    double z_prev = 0.0;
    while (k < r.count() && r.z[k] <= z) {
        e = apply(segment_matrix({beta, r.segments[k].l, r.segments[k].theta}), e);
        z_prev = r.z[k];
        ++k;
    }
    if (k < r.count() && z > z_prev)
        e = apply(segment_matrix({beta, z - z_prev, r.segments[k].theta}), e);
    return e;
}

/// Spectral density on an ascending grid with trapezoid weights, normalized
/// so that sum(w * B) = 1.  A single grid point gets weight 1 (monochromatic
/// line).  `e0` holds the per-line input field; by default (sqrt(B), 0)
/// scaled out so that e0 = (1, 0) on every line.
struct SpectralDensity {
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<double> weights;
    std::vector<Complex2Vector> e0; // unit-norm input polarization per line

    size_t lines() const { return grid.size(); }

    /// line weight c_i = w_i B_i (sums to 1 after normalize())
    double line_mass(size_t i) const { return weights[i] * values[i]; }

    static SpectralDensity from_samples(std::vector<double> betas, std::vector<double> b) {
        if (betas.size() != b.size() || betas.empty())
            throw std::domain_error("SpectralDensity: need equal-size nonempty grids");
        for (size_t i = 0; i + 1 < betas.size(); ++i)
            if (!(betas[i + 1] > betas[i]))
                throw std::domain_error("SpectralDensity: grid must be ascending");
        for (double v : b)
            if (v < 0.0 || !std::isfinite(v))
                throw std::domain_error("SpectralDensity: values must be finite and >= 0");
        SpectralDensity s;
        s.grid = std::move(betas);
        s.values = std::move(b);
        s.weights.assign(s.grid.size(), 0.0);
        if (s.grid.size() == 1) {
            s.weights[0] = 1.0;
        } else {
            for (size_t i = 0; i + 1 < s.grid.size(); ++i) {
                const double h = s.grid[i + 1] - s.grid[i];
                s.weights[i] += 0.5 * h;
                s.weights[i + 1] += 0.5 * h;
            }
        }
        s.e0.assign(s.grid.size(), Complex2Vector{1.0, 0.0});
        s.normalize();
        return s;
    }

    /// flat density over [lo, hi] sampled on `n` lines
    static SpectralDensity flat(double lo, double hi, size_t n) {
        std::vector<double> g(n), v(n, 1.0);
        for (size_t i = 0; i < n; ++i)
            g[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
        return from_samples(std::move(g), std::move(v));
    }

    void normalize() {
        double mass = 0.0;
        for (size_t i = 0; i < lines(); ++i) mass += weights[i] * values[i];
        if (!(mass > 0.0)) throw std::domain_error("SpectralDensity: zero total mass");
        for (double& v : values) v /= mass;
    }

    /// Two-column CSV (beta, B); '#' comments and blank lines ignored.
    static SpectralDensity load_csv(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("SpectralDensity: cannot open " + path);
        std::vector<double> g, v;
        std::string line;
        size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const size_t first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            std::istringstream ls(line);
            double beta, b;
            char comma;
            if (!(ls >> beta)) goto bad;
            ls >> std::ws;
            if (ls.peek() == ',') ls >> comma;
            if (!(ls >> b)) goto bad;
            g.push_back(beta);
            v.push_back(b);
            continue;
        bad:
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected two numeric columns (beta, B)");
        }
        return from_samples(std::move(g), std::move(v));
    }
};

/// J_N of nonmonochromatic light: trapezoid integral of the per-line
/// monochromatic coherences after N sections.  tr J_N = 1 by construction.
inline CoherenceMatrix coherence_poly(const SpectralDensity& spec, const SegmentRealization& r,
                                      size_t n) {
    CoherenceMatrix j;
    for (size_t i = 0; i < spec.lines(); ++i) {
        Complex2Vector e = spec.e0[i];
        if (n > 0) e = propagate_discrete(e, r, spec.grid[i], n);
        j.axpy(spec.line_mass(i), CoherenceMatrix::outer(e));
    }
    return j;
}

/// Grid-resolution diagnostic: recompute J_N on the half grid (every other
/// line) and report the largest entry difference.  Grid resolution is the
/// caller's responsibility; this estimates the error they are making.
inline double coherence_poly_grid_error(const SpectralDensity& spec, const SegmentRealization& r,
                                        size_t n) {
    if (spec.lines() < 3)
        throw std::domain_error("coherence_poly_grid_error: need >= 3 lines to halve");
    std::vector<double> g, v;
    std::vector<Complex2Vector> e0;
    for (size_t i = 0; i < spec.lines(); i += 2) {
        g.push_back(spec.grid[i]);
        v.push_back(spec.values[i]);
        e0.push_back(spec.e0[i]);
    }
    SpectralDensity half = SpectralDensity::from_samples(std::move(g), std::move(v));
    half.e0 = std::move(e0);
    const CoherenceMatrix full = coherence_poly(spec, r, n);
    const CoherenceMatrix coarse = coherence_poly(half, r, n);
    return std::max({std::abs(full.j11 - coarse.j11), std::abs(full.j22 - coarse.j22),
                     std::abs(full.j12 - coarse.j12)});
}

} // namespace jonesmc
