#pragma once

#include "hyperlab/geometry.hpp"

#include <memory>
#include <span>

namespace hyperlab {

/// Normalization of the radial transform, sqrt(2/pi), fixed by requiring
/// a Plancherel identity with constant exactly one.
inline constexpr double kTransformConstant = 0.79788456080286535588;  // sqrt(2/pi)

/// Unnormalized type-I discrete sine transform of length n,
///   Y_k = 2 sum_j X_j sin(pi (j+1)(k+1) / (n+1)),
/// applied to real and imaginary parts of complex data in place.
/// Plans are created once per length and shared; execution is thread-safe.
class SineTransform {
public:
    static const SineTransform& of_size(std::size_t n);

    std::size_t size() const { return n_; }
    void apply(std::span<cplx> data) const;
    /// Cosine companion Y_k = 2 sum_j X_j cos(pi (j+1)(k+1) / (n+1)) used
    /// for spectral differentiation.
    void apply_cosine(std::span<cplx> data) const;

    ~SineTransform();
    SineTransform(const SineTransform&) = delete;
    SineTransform& operator=(const SineTransform&) = delete;

private:
    explicit SineTransform(std::size_t n);
    std::size_t n_;
    void* plan_ = nullptr;
    void* cos_plan_ = nullptr;
};

/// coeffs_m = (c0/lambda_m) sum_j h sigma(r_j) f(r_j) sin(lambda_m r_j).
SpectralField forward(const RadialField& f);
/// Exact discrete inverse of forward.
RadialField inverse(const SpectralField& F);

/// sum_m (pi/r_max) 4 pi lambda_m^2 |F_m|^2, equal to the mass of inverse(F).
double spectral_mass(const SpectralField& F);

/// Multiply the sine spectrum of f by multiplier(m) and resynthesize.
/// Skips the lambda factors of forward/inverse, which cancel.
RadialField apply_multiplier(const RadialField& f, std::span<const cplx> multiplier);
RadialField apply_multiplier(const RadialField& f, std::span<const double> multiplier);

/// Value of the synthesized field at the origin, the r -> 0 limit of the
/// sine series (sin(lambda r)/sigma(r) -> lambda in both geometries).
cplx origin_value(const SpectralField& F);
/// Evaluate the sine series of F at an arbitrary radius in (0, r_max].
cplx evaluate(const SpectralField& F, double r);

/// Radial derivative du/dr by spectral differentiation of sigma*u.
RadialField radial_derivative(const RadialField& u);

/// w = e^{it} (sinh r / r) u on the matching Euclidean grid.
RadialField cov_to_euclidean(const RadialField& u, double t);
/// u = e^{-it} (r / sinh r) w on the matching hyperbolic grid.
RadialField cov_from_euclidean(const RadialField& w, double t);

/// Grid with identical r_max and n in the other geometry.
GridPtr companion_grid(const RadialGrid& grid, Geometry target);

}  // namespace hyperlab
