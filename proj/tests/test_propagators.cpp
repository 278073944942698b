#include "hyperlab/errors.hpp"
#include "hyperlab/propagators.hpp"
#include "hyperlab/transform.hpp"

#include "support.hpp"

#include <doctest.h>

#include <functional>

using namespace hyperlab;

namespace {

RadialField single_mode(GridPtr g, std::size_t m) {
    const double lambda = g->dual().modes[m];
    const Geometry geo = g->geometry();
    return sample(g, [&](double r) { return cplx(std::sin(lambda * r) / geo.sigma(r)); });
}

}  // namespace

TEST_CASE("Schrodinger flow") {
    const auto g = make_grid(Geometry::hyperbolic(), 30.0, 2048);
    const auto f = testing::random_field(g, 3);
    CHECK(testing::rel_diff(schrodinger_propagate(f, 0.0), f) == 0.0);

    SUBCASE("single mode picks up exp(-i (lambda^2 + 1))") {
        const std::size_t m = 12;
        const auto u = single_mode(g, m);
        const double lambda = g->dual().modes[m];
        const auto v = schrodinger_propagate(u, 1.0);
        const cplx phase = std::polar(1.0, -(lambda * lambda + 1.0));
        CHECK(testing::max_abs_diff(v, phase * u) < 1e-12 * testing::max_abs_diff(u, RadialField(g)));
    }
    SUBCASE("unitary and a group") {
        for (double t : {0.3, -1.7, 12.5}) {
            CHECK(std::abs(l2_norm(schrodinger_propagate(f, t)) - l2_norm(f)) <= 1e-12 * l2_norm(f));
            CHECK(testing::rel_diff(schrodinger_propagate(schrodinger_propagate(f, t), 0.4), schrodinger_propagate(f, t + 0.4)) <
                  1e-12);
        }
    }
}

TEST_CASE("heat flow") {
    const auto g = make_grid(Geometry::hyperbolic(), 30.0, 2048);
    const auto f = testing::random_field(g, 4);
    CHECK(testing::rel_diff(heat_propagate(f, 0.0), f) == 0.0);
    CHECK_THROWS_AS(heat_propagate(f, -0.1), InvalidArgument);

    const std::size_t m = 5;
    const auto u = single_mode(g, m);
    const double lambda = g->dual().modes[m];
    CHECK(testing::rel_diff(heat_propagate(u, 1.0), std::exp(-(lambda * lambda + 1.0)) * u) < 1e-12);

    double previous = l2_norm(f);
    for (double s : {0.01, 0.1, 0.5, 1.0, 4.0}) {
        const double now = l2_norm(heat_propagate(f, s));
        CHECK(now <= previous);
        previous = now;
    }
    CHECK(l2_norm(heat_propagate(f, 1e6)) == 0.0);
}

TEST_CASE("Littlewood-Paley projections") {
    const auto g = make_grid(Geometry::hyperbolic(), 40.0, 4096);
    const auto f = testing::noise_field(g, 5);

    SUBCASE("low plus high is the identity") {
        for (double N : {0.5, 4.0, 64.0}) {
            const auto sum = lp_project(f, LPBand::low(N)) + lp_project(f, LPBand::high(N));
            CHECK(testing::rel_diff(sum, f) < 1e-14);
        }
    }
    SUBCASE("low with large N approaches the identity") {
        const auto mu = laplacian_symbol(*g);
        for (double N : {1e3, 1e5}) {
            const double bound = mu.back() / (N * N);
            CHECK(testing::rel_diff(lp_project(f, LPBand::low(N)), f) <= bound);
        }
    }
    SUBCASE("band multiplier sign and shape") {
        const auto mult = lp_multiplier(*g, LPBand::band(2.0));
        for (double x : mult) CHECK(x >= 0.0);
        const auto mu = laplacian_symbol(*g);
        CHECK(mult[100] == doctest::Approx(mu[100] / 4.0 * std::exp(-mu[100] / 4.0)));
    }
    SUBCASE("reproducing identity with 32 nodes per octave") {
        for (const auto& datum : {testing::random_field(g, 6), f}) {
            for (auto [N0, N1] : {std::pair{1.0, 64.0}, std::pair{0.5, 3.0}, std::pair{2.0, 256.0}}) {
                const auto lhs = lp_reproduce(datum, N0, N1, 32);
                const auto rhs = lp_project(datum, LPBand::low(N1)) - lp_project(datum, LPBand::low(N0));
                CAPTURE(N0);
                CAPTURE(N1);
                CHECK(l2_norm(lhs - rhs) <= 1e-8 * l2_norm(datum));
            }
        }
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(lp_project(f, LPBand::low(0.0)), InvalidArgument);
        CHECK_THROWS_AS(lp_reproduce(f, 2.0, 1.0), InvalidArgument);
        CHECK_THROWS_AS(lp_reproduce(f, 1.0, 2.0, 33), InvalidArgument);
    }
}

TEST_CASE("fractional gradient") {
    const auto g = make_grid(Geometry::hyperbolic(), 40.0, 4096);
    const auto f = testing::random_field(g, 8);
    CHECK(testing::rel_diff(fractional_gradient(f, 0.0), f) == 0.0);
    CHECK_THROWS_AS(fractional_gradient(f, 2.5), InvalidArgument);
    CHECK_THROWS_AS(fractional_gradient(f, -1.5), InvalidArgument);

    const std::size_t m = 9;
    const auto u = single_mode(g, m);
    const double lambda = g->dual().modes[m];
        // roundoff in the off-mode coefficients is amplified by up to lambda_max^2
    CHECK(testing::rel_diff(fractional_gradient(u, 2.0), (lambda * lambda + 1.0) * u) < 1e-10);
    CHECK(testing::rel_diff(fractional_gradient(fractional_gradient(f, 0.5), 0.5), fractional_gradient(f, 1.0)) < 1e-12);
    CHECK(testing::rel_diff(fractional_gradient(fractional_gradient(f, -1.0), 2.0), fractional_gradient(f, 1.0)) < 1e-10);
}

TEST_CASE("gradient energy against a finite-difference Laplacian") {
    // With g = sigma u the radial Laplacian is sigma^{-1} (d^2/dr^2 - shift) sigma,
    // so <u, -Delta u> = 4 pi h sum conj(g) (shift g - g'').  g'' by the
    // fourth-order centred stencil, g extended oddly through the origin.
    for (auto geometry : {Geometry::hyperbolic(), Geometry::euclidean()}) {
        const auto grid = make_grid(geometry, 40.0, 4096);
        const auto f = sample(grid, [](double r) { return cplx(std::exp(-r * r / 2.0), 0.3 * std::exp(-(r - 2.0) * (r - 2.0))); });
        const auto sigma = grid->sigma();
        const std::size_t n = grid->size();
        std::vector<cplx> g(n + 4);  // g[k + 2] holds node k+1; indices 0,1 hold nodes -1, 0
        for (std::size_t j = 0; j < n; ++j) g[j + 2] = sigma[j] * f.values[j];
        g[1] = 0.0;
        g[0] = -g[2];
        const double h = grid->spacing();
        const double shift = geometry.spectral_shift();
        cplx acc{};
        for (std::size_t j = 0; j + 2 < n; ++j) {
            const std::size_t k = j + 2;
            const cplx d2 = (-g[k - 2] + 16.0 * g[k - 1] - 30.0 * g[k] + 16.0 * g[k + 1] - g[k + 2]) / (12.0 * h * h);
            acc += std::conj(g[k]) * (shift * g[k] - d2);
        }
        const double oracle = 4.0 * M_PI * h * acc.real();
        const auto grad = fractional_gradient(f, 1.0);
        const double spectral = inner_product(grad, grad).real();
        CHECK(std::abs(spectral - oracle) / oracle < 1e-6);
    }
}

TEST_CASE("the operators commute") {
    const auto g = make_grid(Geometry::hyperbolic(), 30.0, 1024);
    const auto f = testing::noise_field(g, 10);
    using Op = std::function<RadialField(const RadialField&)>;
    const std::vector<Op> ops = {
        [](const RadialField& x) { return schrodinger_propagate(x, 0.37); },
        [](const RadialField& x) { return heat_propagate(x, 0.01); },
        [](const RadialField& x) { return lp_project(x, LPBand::band(3.0)); },
        [](const RadialField& x) { return fractional_gradient(x, 0.5); },
    };
    for (std::size_t a = 0; a < ops.size(); ++a)
        for (std::size_t b = a + 1; b < ops.size(); ++b) CHECK(testing::rel_diff(ops[a](ops[b](f)), ops[b](ops[a](f))) < 1e-12);
}

TEST_CASE("free evolution matches the propagator") {
    const auto g = make_grid(Geometry::hyperbolic(), 30.0, 2048);
    const auto f = testing::random_field(g, 14);
    const FreeEvolution ev(f);
    for (double t : {0.0, 0.25, -2.0}) {
        const auto u = schrodinger_propagate(f, t);
        CHECK(testing::rel_diff(ev.at(t), u) < 1e-12);
        CHECK(std::abs(ev.origin_at(t) - origin_value(forward(u))) < 1e-10 * std::abs(origin_value(forward(u))));
        std::vector<cplx> gvals;
        cplx origin;
        ev.conjugated_at(t, gvals, origin);
        CHECK(std::abs(origin - ev.origin_at(t)) <= 1e-13 * std::abs(origin));
    }
    double peak = 0.0;
    for (double t = -1.0; t <= 1.0; t += 0.05)
        for (const auto& v : ev.at(t).values) peak = std::max(peak, std::abs(v));
    CHECK(peak <= ev.sup_bound());
}
