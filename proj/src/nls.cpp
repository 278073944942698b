#include "hyperlab/nls.hpp"

#include "hyperlab/errors.hpp"
#include "hyperlab/profiles.hpp"
#include "hyperlab/propagators.hpp"
#include "hyperlab/transform.hpp"

#include <cmath>
#include <numbers>

namespace hyperlab {

DatumSpec DatumSpec::gaussian(double a, cplx amplitude) {
    DatumSpec d;
    d.family = Family::Gaussian;
    d.a = a;
    d.amplitude = amplitude;
    return d;
}

DatumSpec DatumSpec::band(double N, double width, cplx amplitude) {
    DatumSpec d;
    d.family = Family::SpectralBand;
    d.N = N;
    d.width = width;
    d.amplitude = amplitude;
    return d;
}

DatumSpec DatumSpec::transplant(double a, double N, cplx amplitude) {
    DatumSpec d;
    d.family = Family::Transplant;
    d.a = a;
    d.N = N;
    d.amplitude = amplitude;
    return d;
}

DatumSpec DatumSpec::with_mass(double m) const {
    DatumSpec d = *this;
    d.mass = m;
    return d;
}

namespace {

RadialField band_datum(const DatumSpec& spec, GridPtr grid) {
    if (!(spec.width > 0.0 && spec.width < 1.0)) throw InvalidArgument("band width must lie in (0, 1)");
    const double lo = spec.N * (1.0 - spec.width);
    const double hi = spec.N * (1.0 + spec.width);
    if (hi >= grid->lambda_max()) throw ResolutionError("spectral band exceeds the grid's largest mode");
    SpectralField F(grid);
    const auto lambda = F.modes();
    for (std::size_t m = 0; m < lambda.size(); ++m) {
        const double x = (lambda[m] - lo) / (hi - lo);
        if (x > 0.0 && x < 1.0) F.coeffs[m] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * x));
    }
    const double m0 = spectral_mass(F);
    if (m0 == 0.0) throw ResolutionError("spectral band contains no grid modes");
    for (auto& c : F.coeffs) c *= spec.amplitude / std::sqrt(m0);
    return inverse(F);
}

}  // namespace

RadialField make_datum(const DatumSpec& spec, GridPtr grid) {
    RadialField out;
    switch (spec.family) {
        case DatumSpec::Family::Gaussian: {
            if (!(spec.a > 0.0)) throw InvalidArgument("Gaussian width must be positive");
            const double inv = 1.0 / (spec.a * spec.a);
            out = sample(grid, [&](double r) { return spec.amplitude * std::exp(-r * r * inv); });
            break;
        }
        case DatumSpec::Family::SpectralBand:
            if (!(spec.N > 0.0)) throw InvalidArgument("band centre must be positive");
            out = band_datum(spec, grid);
            break;
        case DatumSpec::Family::Transplant: {
            if (!grid->geometry().is_hyperbolic())
                throw GeometryError("transplanted data live on the hyperbolic grid");
            if (!(spec.a > 0.0)) throw InvalidArgument("profile width must be positive");
            out = spec.amplitude * transplant(unit_gaussian_profile(spec.a), spec.N, grid);
            break;
        }
    }
    if (spec.mass) out = with_mass(std::move(out), *spec.mass);
    return out;
}

RadialField with_mass(RadialField u, double target) {
    if (!(target >= 0.0)) throw InvalidArgument("target mass must be nonnegative");
    const double m = mass(u);
    if (!(m > 0.0)) throw InvalidArgument("cannot rescale a zero field to a nonzero mass");
    u *= std::sqrt(target / m);
    return u;
}

std::size_t SimConfig::step_count() const {
    if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
    if (!(t_end > 0.0)) throw InvalidArgument("t_end must be positive");
    const double ratio = t_end / dt;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
        throw InvalidArgument("t_end/dt must be a positive integer");
    return static_cast<std::size_t>(rounded);
}

void SimConfig::validate() const {
    if (!(r_max > 0.0)) throw InvalidArgument("r_max must be positive");
    if (n < 8) throw InvalidArgument("n must be at least 8");
    if (record_stride < 1) throw InvalidArgument("record_stride must be at least 1");
    if (!(boundary_tol > 0.0)) throw InvalidArgument("boundary_tol must be positive");
    (void)step_count();
}

double mass(const RadialField& u) { return lp_integral(u, 2.0); }

double z_density(const RadialField& u) { return lp_integral(u, 10.0 / 3.0); }

double energy(const RadialField& u) {
    const auto grad = fractional_gradient(u, 1.0);
    return 0.5 * mass(grad) + 0.3 * z_density(u);
}

namespace {

/// Works on g = sigma u and keeps the sine spectrum of the current state,
/// so one step costs four transforms and yields the kinetic energy for free.
class SplitStepper {
public:
    SplitStepper(const RadialGrid& grid, double dt, Nonlinearity nl)
        : grid_(grid), dst_(SineTransform::of_size(grid.size())), nonlinear_(nl == Nonlinearity::Defocusing),
          dt_(dt), mu_(laplacian_symbol(grid)), half_(grid.size()), spec_(grid.size()), g_(grid.size()) {
        const double norm = 1.0 / (2.0 * static_cast<double>(grid.size() + 1));
        for (std::size_t m = 0; m < mu_.size(); ++m) half_[m] = norm * std::polar(1.0, -0.5 * dt * mu_[m]);
    }

    void load(const RadialField& u) {
        const auto sigma = grid_.sigma();
        for (std::size_t j = 0; j < g_.size(); ++j) g_[j] = sigma[j] * u.values[j];
        spec_ = g_;
        dst_.apply(spec_);
    }

    void step() {
        half_linear();
        if (nonlinear_) {
            const auto sigma = grid_.sigma();
            for (std::size_t j = 0; j < g_.size(); ++j) {
                const double a2 = std::norm(g_[j]) / (sigma[j] * sigma[j]);
                if (a2 > 0.0) g_[j] *= std::polar(1.0, -dt_ * std::cbrt(a2 * a2));
            }
        }
        spec_ = g_;
        dst_.apply(spec_);
        half_linear();
        spec_ = g_;
        dst_.apply(spec_);
    }

    double mass() const {
        double acc = 0.0;
        for (const auto& v : g_) acc += std::norm(v);
        return 4.0 * std::numbers::pi * grid_.spacing() * acc;
    }

    double tail_fraction() const {
        double total = 0.0;
        double tail = 0.0;
        for (std::size_t j = 0; j < g_.size(); ++j) {
            const double m = std::norm(g_[j]);
            total += m;
            if (j >= grid_.tail_begin()) tail += m;
        }
        return total > 0.0 ? tail / total : 0.0;
    }

    double z_density() const {
        const auto sigma = grid_.sigma();
        double acc = 0.0;
        for (std::size_t j = 0; j < g_.size(); ++j) {
            const double a2 = std::norm(g_[j]) / (sigma[j] * sigma[j]);
            if (a2 > 0.0) acc += sigma[j] * sigma[j] * a2 * std::cbrt(a2 * a2);
        }
        return 4.0 * std::numbers::pi * grid_.spacing() * acc;
    }

    double kinetic() const {
        double acc = 0.0;
        for (std::size_t m = 0; m < spec_.size(); ++m) acc += mu_[m] * std::norm(spec_[m]);
        const double h = grid_.spacing();
        return std::numbers::pi * h * h / grid_.r_max() * acc;
    }

    bool finite() const { return all_finite(g_); }

    RadialField field(GridPtr grid) const {
        RadialField u(std::move(grid));
        const auto sigma = grid_.sigma();
        for (std::size_t j = 0; j < g_.size(); ++j) u.values[j] = g_[j] / sigma[j];
        return u;
    }

private:
    void half_linear() {
        for (std::size_t m = 0; m < spec_.size(); ++m) spec_[m] *= half_[m];
        g_ = spec_;
        dst_.apply(g_);
    }

    const RadialGrid& grid_;
    const SineTransform& dst_;
    bool nonlinear_;
    double dt_;
    std::vector<double> mu_;
    std::vector<cplx> half_;
    std::vector<cplx> spec_;
    std::vector<cplx> g_;
};

// Mass may not move by more than this relative amount in one run.
constexpr double kMassJumpTolerance = 1e-6;

}  // namespace

RadialField strang_step(const RadialField& u, double dt, Nonlinearity nonlinearity) {
    if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
    SplitStepper stepper(u.mesh(), dt, nonlinearity);
    stepper.load(u);
    stepper.step();
    if (!stepper.finite()) throw BlowupError(1, "non-finite value after step");
    return stepper.field(u.grid);
}

TrajectoryRecord evolve(const RadialField& u0, const SimConfig& cfg) {
    cfg.validate();
    const std::size_t steps = cfg.step_count();
    const auto& grid = u0.mesh();
    if (!all_finite(u0.values)) throw InvalidArgument("initial datum has non-finite values");

    TrajectoryRecord rec;
    rec.geometry = grid.geometry();
    rec.nonlinearity = cfg.nonlinearity;
    rec.dt = cfg.dt;
    rec.step_times.reserve(steps + 1);
    rec.mass_series.reserve(steps + 1);
    rec.energy_series.reserve(steps + 1);
    rec.z_density.reserve(steps + 1);

    SplitStepper stepper(grid, cfg.dt, cfg.nonlinearity);
    stepper.load(u0);
    const double m0 = stepper.mass();

    auto record = [&](std::size_t k) {
        const double t = static_cast<double>(k) * cfg.dt;
        const double zd = stepper.z_density();
        rec.step_times.push_back(t);
        rec.mass_series.push_back(stepper.mass());
        rec.z_density.push_back(zd);
        rec.energy_series.push_back(stepper.kinetic() +
                                    (cfg.nonlinearity == Nonlinearity::Defocusing ? 0.3 * zd : 0.0));
        if (k % cfg.record_stride == 0 || k == steps) {
            rec.times.push_back(t);
            rec.snapshots.push_back(stepper.field(u0.grid));
        }
    };

    const double tail0 = stepper.tail_fraction();
    if (tail0 > cfg.boundary_tol) throw WallContamination(0.0, tail0);
    record(0);
    for (std::size_t k = 1; k <= steps; ++k) {
        stepper.step();
        if (!stepper.finite()) throw BlowupError(k, "non-finite value after step");
        const double m = stepper.mass();
        if (m0 > 0.0 && std::abs(m - m0) > kMassJumpTolerance * m0)
            throw BlowupError(k, "mass jumped by " + std::to_string(std::abs(m - m0) / m0) + " relative");
        const double tail = stepper.tail_fraction();
        if (tail > cfg.boundary_tol) throw WallContamination(static_cast<double>(k) * cfg.dt, tail);
        record(k);
    }
    return rec;
}

TrajectoryRecord evolve(const SimConfig& cfg) {
    cfg.validate();
    auto grid = make_grid(cfg.geometry, cfg.r_max, cfg.n);
    return evolve(make_datum(cfg.datum, grid), cfg);
}

}  // namespace hyperlab
