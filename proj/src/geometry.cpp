#include "hyperlab/geometry.hpp"

#include "hyperlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hyperlab {

WallContamination::WallContamination(double time, double tail_fraction)
    : NumericalFailure("wall contamination at t = " + std::to_string(time) +
                       " (tail mass fraction " + std::to_string(tail_fraction) + ")"),
      time_(time), tail_(tail_fraction) {}

double Geometry::sigma(double r) const {
    return is_hyperbolic() ? std::sinh(r) : r;
}

std::string to_string(Geometry g) {
    return g.is_hyperbolic() ? "hyperbolic3" : "euclidean3";
}

Geometry parse_geometry(const std::string& name) {
    if (name == "hyperbolic3") return Geometry::hyperbolic();
    if (name == "euclidean3") return Geometry::euclidean();
    throw InvalidArgument("unknown geometry '" + name + "' (expected hyperbolic3 or euclidean3)");
}

namespace {
// sinh^2 overflows past r ~ 355.
constexpr double kMaxHyperbolicRadius = 350.0;
}  // namespace

RadialGrid::RadialGrid(Geometry geometry, double r_max, std::size_t n)
    : geometry_(geometry), r_max_(r_max) {
    if (!(r_max > 0.0) || !std::isfinite(r_max))
        throw InvalidArgument("r_max must be positive and finite");
    if (n < 8) throw InvalidArgument("grid needs at least 8 interior nodes");
    if (geometry.is_hyperbolic() && r_max > kMaxHyperbolicRadius)
        throw InvalidArgument("hyperbolic r_max above 350 overflows the volume weights");

    h_ = r_max / static_cast<double>(n + 1);
    nodes_.resize(n);
    weights_.resize(n);
    sigma_.resize(n);
    const double four_pi = 4.0 * std::numbers::pi;
    for (std::size_t j = 0; j < n; ++j) {
        const double r = static_cast<double>(j + 1) * h_;
        nodes_[j] = r;
        sigma_[j] = geometry.sigma(r);
        weights_[j] = four_pi * sigma_[j] * sigma_[j] * h_;
    }

    dual_.weight = std::numbers::pi / r_max;
    dual_.modes.resize(n);
    for (std::size_t m = 0; m < n; ++m)
        dual_.modes[m] = static_cast<double>(m + 1) * std::numbers::pi / r_max;

    const auto tail_count = std::max<std::size_t>(1, (n + 19) / 20);
    tail_begin_ = n - tail_count;
}

bool RadialGrid::same_as(const RadialGrid& other) const {
    return this == &other ||
           (geometry_ == other.geometry_ && size() == other.size() && r_max_ == other.r_max_);
}

GridPtr make_grid(Geometry geometry, double r_max, std::size_t n) {
    return std::make_shared<const RadialGrid>(geometry, r_max, n);
}

const SpectralGrid& dual_grid(const RadialGrid& grid) { return grid.dual(); }

RadialField::RadialField(GridPtr g) : grid(std::move(g)), values(grid->size(), cplx{}) {}

RadialField::RadialField(GridPtr g, std::vector<cplx> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid->size()) throw GridMismatch("field length does not match grid size");
}

RadialField& RadialField::operator+=(const RadialField& other) {
    require_same_grid(*grid, *other.grid);
    for (std::size_t j = 0; j < values.size(); ++j) values[j] += other.values[j];
    return *this;
}

RadialField& RadialField::operator-=(const RadialField& other) {
    require_same_grid(*grid, *other.grid);
    for (std::size_t j = 0; j < values.size(); ++j) values[j] -= other.values[j];
    return *this;
}

RadialField& RadialField::operator*=(cplx c) {
    for (auto& v : values) v *= c;
    return *this;
}

RadialField operator+(RadialField a, const RadialField& b) { return a += b; }
RadialField operator-(RadialField a, const RadialField& b) { return a -= b; }
RadialField operator*(cplx c, RadialField a) { return a *= c; }

SpectralField::SpectralField(GridPtr g) : grid(std::move(g)), coeffs(grid->size(), cplx{}) {}

SpectralField::SpectralField(GridPtr g, std::vector<cplx> c) : grid(std::move(g)), coeffs(std::move(c)) {
    if (coeffs.size() != grid->size()) throw GridMismatch("spectrum length does not match grid size");
}

void require_same_grid(const RadialGrid& a, const RadialGrid& b) {
    if (!a.same_as(b)) throw GridMismatch("fields live on different grids");
}

bool all_finite(std::span<const cplx> v) {
    return std::all_of(v.begin(), v.end(),
                       [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

cplx inner_product(const RadialField& f, const RadialField& g) {
    require_same_grid(*f.grid, *g.grid);
    const auto w = f.grid->weights();
    cplx acc{};
    for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * f.values[j] * std::conj(g.values[j]);
    return acc;
}

double l2_norm(const RadialField& f) { return std::sqrt(std::real(inner_product(f, f))); }

double lp_integral(const RadialField& f, double p) {
    if (!(p > 0.0) || std::isinf(p)) throw InvalidArgument("lp_integral needs finite p > 0");
    const auto w = f.grid->weights();
    double acc = 0.0;
    if (p == 2.0) {
        for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * std::norm(f.values[j]);
    } else {
        for (std::size_t j = 0; j < w.size(); ++j) {
            const double a = std::abs(f.values[j]);
            if (a > 0.0) acc += w[j] * std::pow(a, p);
        }
    }
    return acc;
}

double lp_norm(const RadialField& f, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    return std::pow(lp_integral(f, p), 1.0 / p);
}

double tail_fraction(const RadialField& f) {
    const auto w = f.grid->weights();
    const std::size_t start = f.grid->tail_begin();
    double total = 0.0;
    double tail = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        const double m = w[j] * std::norm(f.values[j]);
        total += m;
        if (j >= start) tail += m;
    }
    return total > 0.0 ? tail / total : 0.0;
}

}  // namespace hyperlab
