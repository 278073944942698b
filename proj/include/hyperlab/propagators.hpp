#pragma once

#include "hyperlab/geometry.hpp"

#include <vector>

namespace hyperlab {

/// Heat-flow Littlewood-Paley band selector.
struct LPBand {
    enum class Kind { Low, Band, High };
    Kind kind = Kind::Low;
    double N = 1.0;

    static LPBand low(double N) { return {Kind::Low, N}; }
    static LPBand band(double N) { return {Kind::Band, N}; }
    static LPBand high(double N) { return {Kind::High, N}; }
};

/// mu_m = lambda_m^2 + rho^2, the spectrum of -Delta on the grid.
std::vector<double> laplacian_symbol(const RadialGrid& grid);

/// Multiplier tables (exposed for the evolution loop and the lab).
std::vector<cplx> schrodinger_multiplier(const RadialGrid& grid, double t);
std::vector<double> heat_multiplier(const RadialGrid& grid, double s);
std::vector<double> lp_multiplier(const RadialGrid& grid, LPBand band);
std::vector<double> fractional_multiplier(const RadialGrid& grid, double s);

/// e^{it Delta}: spectral multiplier e^{-it mu_m}.
RadialField schrodinger_propagate(const RadialField& f, double t);
/// e^{s Delta}, s >= 0.
RadialField heat_propagate(const RadialField& f, double s);
/// Low: e^{-mu/N^2}; Band: (mu/N^2) e^{-mu/N^2}; High: 1 - e^{-mu/N^2}.
RadialField lp_project(const RadialField& f, LPBand band);
/// 2 int_{N0}^{N1} P_M f dM/M by Gauss-Legendre in log M with the given
/// number of nodes per octave (16, 20, 32, 48 or 64).  Equals
/// P_{<=N1} f - P_{<=N0} f up to quadrature error.
RadialField lp_reproduce(const RadialField& f, double N0, double N1, int points_per_octave = 32);
/// |nabla|^s = (-Delta)^{s/2}, s in [-1, 2].
RadialField fractional_gradient(const RadialField& f, double s);

/// Evaluates e^{it Delta} f at many times from a single analysis of f:
/// each call to at() costs one sine transform.
class FreeEvolution {
public:
    explicit FreeEvolution(const RadialField& f);

    RadialField at(double t) const;
    /// sigma * e^{it Delta} f, the sine-series variable, without dividing by sigma.
    void conjugated_at(double t, std::vector<cplx>& out) const;
    /// Same, also returning the origin value from the same phase table.
    void conjugated_at(double t, std::vector<cplx>& out, cplx& origin) const;
    /// Origin value of e^{it Delta} f.
    cplx origin_at(double t) const;
    /// Time-independent bound on sup_{t,r} |e^{it Delta} f|, since
    /// |sin(lambda r) / sigma(r)| <= lambda.
    double sup_bound() const;

    const RadialGrid& mesh() const { return *grid_; }

private:
    GridPtr grid_;
    std::vector<double> mu_;
    std::vector<cplx> spectrum_;  // normalized so that one transform resynthesizes
};

}  // namespace hyperlab
