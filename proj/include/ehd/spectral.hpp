#pragma once

#include <limits>

#include "ehd/field.hpp"

namespace ehd {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Samples -> coefficients, dealiased (2/3 rule). Rejects non-finite samples.
SpectralField forward_transform(const RealField& f);
/// Coefficients -> samples. Rejects coefficients that break Hermitian symmetry.
RealField backward_transform(const SpectralField& F);

SpectralVectorField forward_transform(const VectorField& u);
VectorField backward_transform(const SpectralVectorField& U);

/// Zeroes every mode outside the 2/3-rule mask.
void dealias(SpectralField& F);
/// Restores exact conjugate symmetry on the self-paired x1 planes.
void hermitian_symmetrize(SpectralField& F);
/// Largest |F(k) - conj(F(-k))| on the self-paired planes.
double hermitian_defect(const SpectralField& F);

SpectralVectorField gradient(const SpectralField& F);
SpectralField divergence(const SpectralVectorField& U);
SpectralField laplacian(const SpectralField& F);
SpectralVectorField curl(const SpectralVectorField& U);
/// Partial derivative along axis (0, 1, 2).
SpectralField derivative(const SpectralField& F, int axis);

/// Orthogonal projection onto divergence-free fields. The mean mode is kept.
SpectralVectorField leray_project(const SpectralVectorField& U);

/// Absolute tolerance on |mean(eta)| for the periodic Poisson solve.
inline constexpr double kNeutralityTolerance = 1e-10;

/// Solves Laplacian(psi) = eta with zero-mean gauge. Throws NeutralityError when
/// |mean(eta)| exceeds kNeutralityTolerance.
SpectralField solve_poisson(const SpectralField& eta);

/// (sum |f|^p dx^3)^(1/p); p = inf gives the sample maximum of |f|.
double lp_norm(const RealField& f, double p);
/// (sum (1+|k|^2)^s |F(k)|^2)^(1/2), scaled so s = 0 equals the L2 norm.
double sobolev_norm(const SpectralField& F, double s);
/// Homogeneous (sum |k|^(2s) |F(k)|^2)^(1/2), same scaling.
double homogeneous_sobolev_norm(const SpectralField& F, double s);
/// Squared L2 norm via Parseval.
double l2_squared(const SpectralField& F);
double l2_squared(const SpectralVectorField& U);

/// Fraction of L2 energy carried by modes with max|k_i| > 2*kmax/3. Reported
/// next to grid maxima, which under-report marginally resolved fields.
double spectral_tail_fraction(const SpectralField& F);

/// Pointwise Euclidean magnitude.
RealField magnitude(const VectorField& u);
RealField magnitude(std::span<const RealField* const> components);

}  // namespace ehd
