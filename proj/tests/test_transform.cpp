#include "hyperlab/errors.hpp"
#include "hyperlab/transform.hpp"

#include "support.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <chrono>
#include <thread>

using namespace hyperlab;

namespace {

double plancherel_gap(const RadialField& f) {
    const double m = inner_product(f, f).real();
    return std::abs(spectral_mass(forward(f)) - m) / m;
}

}  // namespace

TEST_CASE("round trip and Plancherel on n = 4096") {
    for (auto geometry : {Geometry::hyperbolic(), Geometry::euclidean()}) {
        const auto g = make_grid(geometry, 40.0, 4096);
        const auto f = testing::noise_field(g, 7);
        const auto t0 = std::chrono::steady_clock::now();
        const auto back = inverse(forward(f));
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        CHECK(testing::rel_diff(back, f) < 1e-12);
        CHECK(plancherel_gap(f) < 1e-10);
        CHECK(plancherel_gap(testing::random_field(g, 8)) < 1e-10);
        CHECK(secs < 1.0);
    }
}

TEST_CASE("forward of inverse on random spectra") {
    const auto g = make_grid(Geometry::hyperbolic(), 30.0, 1000);
    const auto noise = testing::noise_field(g, 9);
    const SpectralField F(g, noise.values);
    const auto back = forward(inverse(F));
    double num = 0.0, den = 0.0;
    for (std::size_t m = 0; m < F.size(); ++m) {
        num += std::norm(back.coeffs[m] - F.coeffs[m]);
        den += std::norm(F.coeffs[m]);
    }
    CHECK(std::sqrt(num / den) < 1e-12);
}

TEST_CASE("a single sine mode transforms to a single coefficient") {
    const auto g = make_grid(Geometry::hyperbolic(), 20.0, 512);
    const double lambda2 = g->dual().modes[1];
    const auto f = sample(g, [&](double r) { return cplx(std::sin(lambda2 * r) / std::sinh(r)); });
    const auto F = forward(f);
    const double peak = std::abs(F.coeffs[1]);
    CHECK(peak > 0.0);
    for (std::size_t m = 0; m < F.size(); ++m)
        if (m != 1) CHECK(std::abs(F.coeffs[m]) <= 1e-12 * peak);
}

TEST_CASE("delta spectrum synthesizes a single sine mode") {
    const auto g = make_grid(Geometry::euclidean(), 20.0, 512);
    SpectralField F(g);
    F.coeffs[4] = 1.0;
    const auto f = inverse(F);
    const double lambda = g->dual().modes[4];
    // sigma f = C sin(lambda r); recover C from the first node and check the rest.
    const auto r = g->nodes();
    const cplx C = r[0] * f.values[0] / std::sin(lambda * r[0]);
    for (std::size_t j = 0; j < r.size(); ++j)
        CHECK(std::abs(r[j] * f.values[j] - C * std::sin(lambda * r[j])) <= 1e-12 * std::abs(C));
    CHECK(l2_norm(inverse(SpectralField(g))) == 0.0);
}

TEST_CASE("Euclidean Gaussian against a quadrature oracle of the sine integral") {
    const auto g = make_grid(Geometry::euclidean(), 20.0, 2048);
    const auto f = sample(g, [](double r) { return cplx(std::exp(-r * r)); });
    const auto F = forward(f);
    double peak = 0.0;
    for (const auto& c : F.coeffs) peak = std::max(peak, std::abs(c));
    double worst = 0.0;
    for (std::size_t m = 0; m < F.size(); m += 7) {
        const double lambda = g->dual().modes[m];
        if (lambda > 20.0) break;
        const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double r) { return r * std::exp(-r * r) * std::sin(lambda * r); }, 0.0, 20.0, 20, 1e-15);
        const double oracle = kTransformConstant / lambda * integral;
        worst = std::max(worst, std::abs(F.coeffs[m] - oracle) / peak);
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("forward is linear") {
    const auto g = make_grid(Geometry::hyperbolic(), 25.0, 777);
    const auto f = testing::random_field(g, 11);
    const auto h = testing::random_field(g, 12);
    const cplx a{1.5, -0.25}, b{-0.5, 2.0};
    const auto lhs = forward(a * f + b * h);
    const auto F = forward(f), H = forward(h);
    double worst = 0.0, scale = 0.0;
    for (std::size_t m = 0; m < lhs.size(); ++m) {
        worst = std::max(worst, std::abs(lhs.coeffs[m] - a * F.coeffs[m] - b * H.coeffs[m]));
        scale = std::max(scale, std::abs(lhs.coeffs[m]));
    }
    CHECK(worst <= 1e-13 * scale);
}

TEST_CASE("origin value and off-grid evaluation") {
    for (auto geometry : {Geometry::hyperbolic(), Geometry::euclidean()}) {
        const auto g = make_grid(geometry, 30.0, 4096);
        const auto f = sample(g, [](double r) { return cplx(std::exp(-r * r / 2.0), 0.5 * std::exp(-r * r)); });
        const auto F = forward(f);
        CHECK(std::abs(origin_value(F) - cplx(1.0, 0.5)) < 1e-9);
        for (std::size_t j : {10u, 100u, 321u}) CHECK(std::abs(evaluate(F, g->nodes()[j]) - f.values[j]) < 1e-12);
        CHECK(std::abs(evaluate(F, 1.2345) - cplx(std::exp(-1.2345 * 1.2345 / 2.0), 0.5 * std::exp(-1.2345 * 1.2345))) <
              1e-10);
    }
}

TEST_CASE("spectral radial derivative") {
    for (auto geometry : {Geometry::hyperbolic(), Geometry::euclidean()}) {
        const auto g = make_grid(geometry, 30.0, 4096);
        const auto f = sample(g, [](double r) { return cplx(std::exp(-r * r)); });
        const auto df = radial_derivative(f);
        double worst = 0.0;
        for (std::size_t j = 0; j < g->size(); ++j) {
            const double r = g->nodes()[j];
            worst = std::max(worst, std::abs(df.values[j] - (-2.0 * r * std::exp(-r * r))));
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("change of variables") {
    const auto gh = make_grid(Geometry::hyperbolic(), 30.0, 2048);
    const auto u = testing::random_field(gh, 21);
    SUBCASE("zero maps to zero") {
        CHECK(l2_norm(cov_to_euclidean(RadialField(gh), 0.0)) == 0.0);
    }
    SUBCASE("L2 norm is preserved") {
        const auto w = cov_to_euclidean(u, 0.0);
        CHECK(w.mesh().geometry() == Geometry::euclidean());
        CHECK(w.mesh().r_max() == gh->r_max());
        CHECK(w.size() == gh->size());
        CHECK(std::abs(l2_norm(w) - l2_norm(u)) <= 1e-12 * l2_norm(u));
    }
    SUBCASE("round trip") {
        for (double t : {0.0, 0.7, -3.1}) CHECK(testing::rel_diff(cov_from_euclidean(cov_to_euclidean(u, t), t), u) < 1e-13);
    }
    SUBCASE("kernel algebra: r w = sin(lambda r) becomes sinh(r) u = sin(lambda r)") {
        const auto ge = companion_grid(*gh, Geometry::euclidean());
        const double lambda = ge->dual().modes[6];
        const auto w = sample(ge, [&](double r) { return cplx(std::sin(lambda * r) / r); });
        const auto back = cov_from_euclidean(w, 0.0);
        const auto expect = sample(gh, [&](double r) { return cplx(std::sin(lambda * r) / std::sinh(r)); });
        CHECK(testing::max_abs_diff(back, expect) < 1e-13);
    }
    SUBCASE("geometry errors") {
        CHECK_THROWS_AS(cov_to_euclidean(cov_to_euclidean(u, 0.0), 0.0), GeometryError);
        CHECK_THROWS_AS(cov_from_euclidean(u, 0.0), GeometryError);
    }
}

TEST_CASE("frequency preservation under the change of variables") {
    const auto gh = make_grid(Geometry::hyperbolic(), 40.0, 2048);
    SpectralField F(gh);
    for (std::size_t m = 40; m <= 60; ++m) F.coeffs[m] = std::polar(1.0 / (1.0 + m), 0.3 * m);
    const auto W = forward(cov_to_euclidean(inverse(F), 0.0));
    double on = 0.0, off = 0.0;
    for (std::size_t m = 0; m < W.size(); ++m) {
        const double e = std::norm(W.coeffs[m]) * W.modes()[m] * W.modes()[m];
        (m >= 40 && m <= 60 ? on : off) += e;
    }
    CHECK(off <= 1e-10 * (on + off));
}

TEST_CASE("transform plans are shared and thread safe") {
    const auto g = make_grid(Geometry::hyperbolic(), 40.0, 4096);
    const auto f = testing::random_field(g, 5);
    const auto reference = forward(f);
    std::vector<std::thread> pool;
    std::vector<double> gaps(4);
    for (int i = 0; i < 4; ++i)
        pool.emplace_back([&, i] {
            double worst = 0.0;
            for (int k = 0; k < 20; ++k) {
                const auto F = forward(f);
                for (std::size_t m = 0; m < F.size(); ++m) worst = std::max(worst, std::abs(F.coeffs[m] - reference.coeffs[m]));
            }
            gaps[i] = worst;
        });
    for (auto& t : pool) t.join();
    for (double gap : gaps) CHECK(gap == 0.0);
}
