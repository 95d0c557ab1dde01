#pragma once

#include <cstdint>
#include <vector>

#include "ehd/field.hpp"

namespace ehd {

/// Smooth radial cut-off: 1 on [0, 5/4], 0 on [3/2, inf), C-infinity and
/// nonincreasing in between.
double cutoff(double r);
/// Dyadic annulus profile cutoff(r) - cutoff(2r); supported in [5/8, 3/2].
double annulus(double r);
/// annulus(2^-j r).
double band_weight(int j, double r);

inline constexpr double kAnnulusInner = 5.0 / 8.0;
inline constexpr double kAnnulusOuter = 3.0 / 2.0;

struct BandRange {
    int j_min;
    int j_max;
};

/// Bands whose annuli contain grid-representable, nonzero, retained wavenumbers.
BandRange band_range(const Grid& g);

/// True iff band j's annulus holds lattice points and lies inside the retained cube.
bool band_representable(const Grid& g, int j);

struct DyadicBand {
    int j;
    SpectralField field;
};

/// Delta_j f for every band in band_range. The mean mode belongs to no band.
std::vector<DyadicBand> decompose(const SpectralField& f);
/// Single band Delta_j f.
SpectralField band(const SpectralField& f, int j);

struct BesovParams {
    double s = 0.0;
    double p = 2.0;
    double r = 2.0;

    /// Throws Domain unless 1 <= p, r <= inf.
    void validate() const;
};

/// Homogeneous Besov norm over the grid's band range.
double besov_norm(const SpectralField& f, const BesovParams& params);

/// Upper ratio sup_|a|=k ||d^a f||_q / (2^(jk + 3j(1/p - 1/q)) ||f||_p) and two-sided
/// ratio sup_|a|=k ||d^a f||_p / (2^(jk) ||f||_p) for one field.
struct BernsteinRatios {
    double upper;
    double two_sided;
};
BernsteinRatios bernstein_ratios(const SpectralField& f, int j, int k, double p, double q);

struct BernsteinReport {
    int j = 0;
    int k = 0;
    double p = 2.0;
    double q = 2.0;
    int trials = 0;
    double upper_min = 0.0;
    double upper_max = 0.0;
    double two_sided_min = 0.0;
    double two_sided_max = 0.0;
};

/// Measures the Bernstein ratios over random wave packets supported in band j
/// (Delta_j of a randomly placed point mass, each mode perturbed by 25% noise).
/// Throws Domain if the band is not representable or exponents are out of order.
BernsteinReport bernstein_check(const Grid& g, int j, int k, double p, double q, int trials,
                                std::uint64_t seed);

}  // namespace ehd
