#include "hyperlab/propagators.hpp"

#include "hyperlab/errors.hpp"
#include "hyperlab/transform.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace hyperlab {

std::vector<double> laplacian_symbol(const RadialGrid& grid) {
    const auto lambda = grid.dual().modes;
    const double shift = grid.geometry().spectral_shift();
    std::vector<double> mu(lambda.size());
    for (std::size_t m = 0; m < mu.size(); ++m) mu[m] = lambda[m] * lambda[m] + shift;
    return mu;
}

std::vector<cplx> schrodinger_multiplier(const RadialGrid& grid, double t) {
    const auto mu = laplacian_symbol(grid);
    std::vector<cplx> out(mu.size());
    for (std::size_t m = 0; m < mu.size(); ++m) out[m] = std::polar(1.0, -t * mu[m]);
    return out;
}

std::vector<double> heat_multiplier(const RadialGrid& grid, double s) {
    if (!(s >= 0.0)) throw InvalidArgument("heat time must be nonnegative");
    auto mu = laplacian_symbol(grid);
    for (auto& x : mu) x = std::exp(-s * x);
    return mu;
}

std::vector<double> lp_multiplier(const RadialGrid& grid, LPBand band) {
    if (!(band.N > 0.0)) throw InvalidArgument("Littlewood-Paley scale must be positive");
    auto mu = laplacian_symbol(grid);
    const double inv = 1.0 / (band.N * band.N);
    for (auto& x : mu) {
        const double a = x * inv;
        switch (band.kind) {
            case LPBand::Kind::Low: x = std::exp(-a); break;
            case LPBand::Kind::Band: x = a * std::exp(-a); break;
            case LPBand::Kind::High: x = -std::expm1(-a); break;
        }
    }
    return mu;
}

std::vector<double> fractional_multiplier(const RadialGrid& grid, double s) {
    if (!(s >= -1.0 && s <= 2.0)) throw InvalidArgument("fractional order must lie in [-1, 2]");
    auto mu = laplacian_symbol(grid);
    if (s == 2.0) return mu;
    for (auto& x : mu) x = s == 0.0 ? 1.0 : std::pow(x, 0.5 * s);
    return mu;
}

RadialField schrodinger_propagate(const RadialField& f, double t) {
    if (t == 0.0) return f;
    return apply_multiplier(f, std::span<const cplx>(schrodinger_multiplier(f.mesh(), t)));
}

RadialField heat_propagate(const RadialField& f, double s) {
    const auto mult = heat_multiplier(f.mesh(), s);
    if (s == 0.0) return f;
    return apply_multiplier(f, std::span<const double>(mult));
}

RadialField lp_project(const RadialField& f, LPBand band) {
    return apply_multiplier(f, std::span<const double>(lp_multiplier(f.mesh(), band)));
}

namespace {

template <unsigned Points>
double log_octave_integral(double mu, double lo, double hi, int octaves) {
    using boost::math::quadrature::gauss;
    const double step = (hi - lo) / octaves;
    double acc = 0.0;
    for (int k = 0; k < octaves; ++k) {
        const double a = lo + k * step;
        acc += gauss<double, Points>::integrate(
            [&](double s) {
                const double x = mu * std::exp(-2.0 * s);
                return x * std::exp(-x);
            },
            a, a + step);
    }
    return 2.0 * acc;
}

}  // namespace

RadialField lp_reproduce(const RadialField& f, double N0, double N1, int points_per_octave) {
    if (!(N0 > 0.0 && N1 > N0)) throw InvalidArgument("reproducing identity needs 0 < N0 < N1");
    const double lo = std::log(N0);
    const double hi = std::log(N1);
    const int octaves = std::max(1, static_cast<int>(std::ceil((hi - lo) / std::log(2.0) - 1e-9)));
    auto mult = laplacian_symbol(f.mesh());
    for (auto& mu : mult) {
        switch (points_per_octave) {
            case 16: mu = log_octave_integral<16>(mu, lo, hi, octaves); break;
            case 20: mu = log_octave_integral<20>(mu, lo, hi, octaves); break;
            case 32: mu = log_octave_integral<32>(mu, lo, hi, octaves); break;
            case 48: mu = log_octave_integral<48>(mu, lo, hi, octaves); break;
            case 64: mu = log_octave_integral<64>(mu, lo, hi, octaves); break;
            default: throw InvalidArgument("unsupported quadrature order " + std::to_string(points_per_octave));
        }
    }
    return apply_multiplier(f, std::span<const double>(mult));
}

RadialField fractional_gradient(const RadialField& f, double s) {
    const auto mult = fractional_multiplier(f.mesh(), s);
    if (s == 0.0) return f;
    return apply_multiplier(f, std::span<const double>(mult));
}

FreeEvolution::FreeEvolution(const RadialField& f) : grid_(f.grid), mu_(laplacian_symbol(*f.grid)) {
    const auto sigma = grid_->sigma();
    spectrum_.resize(grid_->size());
    for (std::size_t j = 0; j < spectrum_.size(); ++j) spectrum_[j] = sigma[j] * f.values[j];
    SineTransform::of_size(spectrum_.size()).apply(spectrum_);
    const double norm = 1.0 / (2.0 * static_cast<double>(spectrum_.size() + 1));
    for (auto& c : spectrum_) c *= norm;
}

void FreeEvolution::conjugated_at(double t, std::vector<cplx>& out) const {
    out.resize(spectrum_.size());
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = spectrum_[m] * std::polar(1.0, -t * mu_[m]);
    SineTransform::of_size(out.size()).apply(out);
}

void FreeEvolution::conjugated_at(double t, std::vector<cplx>& out, cplx& origin) const {
    const auto lambda = grid_->dual().modes;
    out.resize(spectrum_.size());
    cplx acc{};
    for (std::size_t m = 0; m < out.size(); ++m) {
        out[m] = spectrum_[m] * std::polar(1.0, -t * mu_[m]);
        acc += lambda[m] * out[m];
    }
    origin = 2.0 * acc;
    SineTransform::of_size(out.size()).apply(out);
}

double FreeEvolution::sup_bound() const {
    const auto lambda = grid_->dual().modes;
    double acc = 0.0;
    for (std::size_t m = 0; m < spectrum_.size(); ++m) acc += lambda[m] * std::abs(spectrum_[m]);
    return 2.0 * acc;
}

RadialField FreeEvolution::at(double t) const {
    std::vector<cplx> g;
    conjugated_at(t, g);
    const auto sigma = grid_->sigma();
    for (std::size_t j = 0; j < g.size(); ++j) g[j] /= sigma[j];
    return RadialField(grid_, std::move(g));
}

cplx FreeEvolution::origin_at(double t) const {
    // g = sum_m a_m sin(lambda_m r) with a_m = 2 spectrum_m, so u(0) = sum_m a_m lambda_m.
    const auto lambda = grid_->dual().modes;
    cplx acc{};
    for (std::size_t m = 0; m < spectrum_.size(); ++m)
        acc += lambda[m] * spectrum_[m] * std::polar(1.0, -t * mu_[m]);
    return 2.0 * acc;
}

}  // namespace hyperlab
