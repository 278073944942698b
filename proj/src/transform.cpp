#include "hyperlab/transform.hpp"

#include "hyperlab/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace hyperlab {

namespace {

// The FFTW planner is not reentrant; execution on fresh arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_plan plan_interleaved(std::size_t n, fftw_r2r_kind kind) {
    std::vector<cplx> scratch(n);
    auto* data = reinterpret_cast<double*>(scratch.data());
    const int len = static_cast<int>(n);
    // howmany = 2 interleaved real sequences (real and imaginary parts).
    return fftw_plan_many_r2r(1, &len, 2, data, nullptr, 2, 1, data, nullptr, 2, 1, &kind,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
}

}  // namespace

SineTransform::SineTransform(std::size_t n) : n_(n) {
    plan_ = plan_interleaved(n, FFTW_RODFT00);
    cos_plan_ = plan_interleaved(n + 2, FFTW_REDFT00);
    if (plan_ == nullptr || cos_plan_ == nullptr) throw Error("FFTW failed to build a sine plan");
}

SineTransform::~SineTransform() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(cos_plan_));
}

const SineTransform& SineTransform::of_size(std::size_t n) {
    static std::map<std::size_t, std::unique_ptr<SineTransform>> cache;
    std::lock_guard lock(planner_mutex());
    auto& slot = cache[n];
    if (!slot) slot.reset(new SineTransform(n));
    return *slot;
}

void SineTransform::apply(std::span<cplx> data) const {
    if (data.size() != n_) throw GridMismatch("sine transform length mismatch");
    auto* p = reinterpret_cast<double*>(data.data());
    fftw_execute_r2r(static_cast<fftw_plan>(plan_), p, p);
}

void SineTransform::apply_cosine(std::span<cplx> data) const {
    if (data.size() != n_) throw GridMismatch("cosine transform length mismatch");
    std::vector<cplx> padded(n_ + 2, cplx{});
    std::copy(data.begin(), data.end(), padded.begin() + 1);
    auto* p = reinterpret_cast<double*>(padded.data());
    fftw_execute_r2r(static_cast<fftw_plan>(cos_plan_), p, p);
    std::copy(padded.begin() + 1, padded.begin() + 1 + static_cast<std::ptrdiff_t>(n_), data.begin());
}

SpectralField forward(const RadialField& f) {
    const auto& grid = f.mesh();
    const auto sigma = grid.sigma();
    const auto lambda = grid.dual().modes;
    std::vector<cplx> buf(grid.size());
    for (std::size_t j = 0; j < buf.size(); ++j) buf[j] = sigma[j] * f.values[j];
    SineTransform::of_size(buf.size()).apply(buf);
    const double scale = 0.5 * kTransformConstant * grid.spacing();
    for (std::size_t m = 0; m < buf.size(); ++m) buf[m] *= scale / lambda[m];
    return SpectralField(f.grid, std::move(buf));
}

RadialField inverse(const SpectralField& F) {
    const auto& grid = *F.grid;
    const auto sigma = grid.sigma();
    const auto lambda = grid.dual().modes;
    const double scale = 0.5 * grid.dual().weight * kTransformConstant;
    std::vector<cplx> buf(grid.size());
    for (std::size_t m = 0; m < buf.size(); ++m) buf[m] = scale * lambda[m] * F.coeffs[m];
    SineTransform::of_size(buf.size()).apply(buf);
    for (std::size_t j = 0; j < buf.size(); ++j) buf[j] /= sigma[j];
    return RadialField(F.grid, std::move(buf));
}

double spectral_mass(const SpectralField& F) {
    const auto lambda = F.modes();
    double acc = 0.0;
    for (std::size_t m = 0; m < lambda.size(); ++m) acc += lambda[m] * lambda[m] * std::norm(F.coeffs[m]);
    return 4.0 * std::numbers::pi * F.grid->dual().weight * acc;
}

namespace {

template <class Mult>
RadialField apply_impl(const RadialField& f, std::span<const Mult> multiplier) {
    const auto& grid = f.mesh();
    if (multiplier.size() != grid.size()) throw GridMismatch("multiplier length does not match grid");
    const auto sigma = grid.sigma();
    const auto& dst = SineTransform::of_size(grid.size());
    std::vector<cplx> buf(grid.size());
    for (std::size_t j = 0; j < buf.size(); ++j) buf[j] = sigma[j] * f.values[j];
    dst.apply(buf);
    const double norm = 1.0 / (2.0 * static_cast<double>(grid.size() + 1));
    for (std::size_t m = 0; m < buf.size(); ++m) buf[m] *= norm * multiplier[m];
    dst.apply(buf);
    for (std::size_t j = 0; j < buf.size(); ++j) buf[j] /= sigma[j];
    return RadialField(f.grid, std::move(buf));
}

}  // namespace

RadialField apply_multiplier(const RadialField& f, std::span<const cplx> multiplier) {
    return apply_impl(f, multiplier);
}

RadialField apply_multiplier(const RadialField& f, std::span<const double> multiplier) {
    return apply_impl(f, multiplier);
}

cplx origin_value(const SpectralField& F) {
    const auto lambda = F.modes();
    cplx acc{};
    for (std::size_t m = 0; m < lambda.size(); ++m) acc += lambda[m] * lambda[m] * F.coeffs[m];
    return F.grid->dual().weight * kTransformConstant * acc;
}

cplx evaluate(const SpectralField& F, double r) {
    const auto& grid = *F.grid;
    if (r <= 0.0) return origin_value(F);
    if (r > grid.r_max()) throw InvalidArgument("evaluation radius outside the grid");
    const auto lambda = F.modes();
    cplx acc{};
    for (std::size_t m = 0; m < lambda.size(); ++m) acc += lambda[m] * std::sin(lambda[m] * r) * F.coeffs[m];
    return grid.dual().weight * kTransformConstant * acc / grid.geometry().sigma(r);
}

RadialField radial_derivative(const RadialField& u) {
    const auto& grid = u.mesh();
    const auto sigma = grid.sigma();
    const auto r = grid.nodes();
    const auto lambda = grid.dual().modes;
    const auto& dst = SineTransform::of_size(grid.size());

    std::vector<cplx> g(grid.size());
    for (std::size_t j = 0; j < g.size(); ++j) g[j] = sigma[j] * u.values[j];
    std::vector<cplx> dg = g;
    dst.apply(dg);
    const double norm = 1.0 / (2.0 * static_cast<double>(grid.size() + 1));
    for (std::size_t m = 0; m < dg.size(); ++m) dg[m] *= norm * lambda[m];
    dst.apply_cosine(dg);

    // u' = g'/sigma - g sigma'/sigma^2
    RadialField out(u.grid);
    const bool hyp = grid.geometry().is_hyperbolic();
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double dsigma = hyp ? std::cosh(r[j]) : 1.0;
        out.values[j] = dg[j] / sigma[j] - g[j] * dsigma / (sigma[j] * sigma[j]);
    }
    return out;
}

GridPtr companion_grid(const RadialGrid& grid, Geometry target) {
    return make_grid(target, grid.r_max(), grid.size());
}

RadialField cov_to_euclidean(const RadialField& u, double t) {
    const auto& grid = u.mesh();
    if (!grid.geometry().is_hyperbolic())
        throw GeometryError("cov_to_euclidean expects a hyperbolic field");
    auto target = companion_grid(grid, Geometry::euclidean());
    const auto r = grid.nodes();
    const auto sigma = grid.sigma();
    const cplx phase = std::polar(1.0, t);
    RadialField w(target);
    for (std::size_t j = 0; j < r.size(); ++j) w.values[j] = phase * (sigma[j] / r[j]) * u.values[j];
    return w;
}

RadialField cov_from_euclidean(const RadialField& w, double t) {
    const auto& grid = w.mesh();
    if (grid.geometry().is_hyperbolic())
        throw GeometryError("cov_from_euclidean expects a Euclidean field");
    auto target = companion_grid(grid, Geometry::hyperbolic());
    const auto r = grid.nodes();
    const auto sigma = target->sigma();
    const cplx phase = std::polar(1.0, -t);
    RadialField u(target);
    for (std::size_t j = 0; j < r.size(); ++j) u.values[j] = phase * (r[j] / sigma[j]) * w.values[j];
    return u;
}

}  // namespace hyperlab
