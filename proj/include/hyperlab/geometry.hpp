#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hyperlab {

using cplx = std::complex<double>;

enum class GeometryKind { Hyperbolic3, Euclidean3 };

/// Constant-curvature radial geometry: curvature -1 (hyperbolic) or 0.
struct Geometry {
    GeometryKind kind = GeometryKind::Hyperbolic3;

    static constexpr Geometry hyperbolic() { return {GeometryKind::Hyperbolic3}; }
    static constexpr Geometry euclidean() { return {GeometryKind::Euclidean3}; }

    /// Bottom of the Laplacian spectrum, rho^2 = ((d-1)/2)^2.
    constexpr double spectral_shift() const { return kind == GeometryKind::Hyperbolic3 ? 1.0 : 0.0; }
    constexpr bool is_hyperbolic() const { return kind == GeometryKind::Hyperbolic3; }

    /// Radial area factor: sinh r or r.
    double sigma(double r) const;

    friend constexpr bool operator==(Geometry a, Geometry b) { return a.kind == b.kind; }
};

std::string to_string(Geometry g);
/// Accepts "hyperbolic3" / "euclidean3".
Geometry parse_geometry(const std::string& name);

/// Dirichlet sine modes lambda_m = m pi / r_max, each carrying quadrature
/// weight pi / r_max.
struct SpectralGrid {
    std::vector<double> modes;
    double weight = 0.0;

    std::size_t size() const { return modes.size(); }
};

/// Uniform interior mesh r_j = j h, h = r_max/(n+1), with weights
/// w_j = 4 pi sigma(r_j)^2 h.  Immutable once built; share through GridPtr.
class RadialGrid {
public:
    RadialGrid(Geometry geometry, double r_max, std::size_t n);

    Geometry geometry() const { return geometry_; }
    std::size_t size() const { return nodes_.size(); }
    double r_max() const { return r_max_; }
    double spacing() const { return h_; }

    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }
    /// sigma(r_j), the conjugation factor between u and the sine-series variable.
    std::span<const double> sigma() const { return sigma_; }
    const SpectralGrid& dual() const { return dual_; }

    /// Largest representable frequency, lambda_n.
    double lambda_max() const { return dual_.modes.back(); }
    /// Index of the first node in the outer 5% shell.
    std::size_t tail_begin() const { return tail_begin_; }

    bool same_as(const RadialGrid& other) const;

private:
    Geometry geometry_;
    double r_max_;
    double h_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<double> sigma_;
    SpectralGrid dual_;
    std::size_t tail_begin_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_grid(Geometry geometry, double r_max, std::size_t n);
const SpectralGrid& dual_grid(const RadialGrid& grid);

/// Complex samples u(r_j) of a radial function.
struct RadialField {
    GridPtr grid;
    std::vector<cplx> values;

    RadialField() = default;
    explicit RadialField(GridPtr g);
    RadialField(GridPtr g, std::vector<cplx> v);

    std::size_t size() const { return values.size(); }
    const RadialGrid& mesh() const { return *grid; }

    RadialField& operator+=(const RadialField& other);
    RadialField& operator-=(const RadialField& other);
    RadialField& operator*=(cplx c);
};

RadialField operator+(RadialField a, const RadialField& b);
RadialField operator-(RadialField a, const RadialField& b);
RadialField operator*(cplx c, RadialField a);

/// Sine-mode coefficients of a radial field.  Shares the primal grid so
/// the mode table and geometry travel with it.
struct SpectralField {
    GridPtr grid;
    std::vector<cplx> coeffs;

    SpectralField() = default;
    explicit SpectralField(GridPtr g);
    SpectralField(GridPtr g, std::vector<cplx> c);

    std::size_t size() const { return coeffs.size(); }
    std::span<const double> modes() const { return grid->dual().modes; }
};

/// Build a field by sampling f at the nodes.
template <class F>
RadialField sample(GridPtr grid, F&& f) {
    RadialField out(grid);
    const auto r = grid->nodes();
    for (std::size_t j = 0; j < r.size(); ++j) out.values[j] = f(r[j]);
    return out;
}

void require_same_grid(const RadialGrid& a, const RadialGrid& b);
bool all_finite(std::span<const cplx> v);

/// sum_j w_j f_j conj(g_j).
cplx inner_product(const RadialField& f, const RadialField& g);
double l2_norm(const RadialField& f);
/// (sum_j w_j |f_j|^p)^(1/p); p = infinity gives the nodal maximum.
double lp_norm(const RadialField& f, double p);
/// sum_j w_j |f_j|^p without the outer root.
double lp_integral(const RadialField& f, double p);

/// Fraction of the total mass carried by the outer 5% of the nodes.
double tail_fraction(const RadialField& f);

}  // namespace hyperlab
