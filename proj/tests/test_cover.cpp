#include <doctest.h>

#include <cmath>
#include <complex>

#include "mtlab/cover.hpp"
#include "mtlab/errors.hpp"
#include "mtlab/geometry.hpp"
#include "mtlab/rng.hpp"

using namespace mtlab;

TEST_CASE("small covers match hand counts") {
    const CellCover c2 = build_cover(1.0, 2, CellGeometry::cube);
    CHECK(c2.size() == 5);  // origin plus the four axis neighbors
    const CellCover c3 = build_cover(1.0, 3, CellGeometry::cube);
    CHECK(c3.size() == 7);
    CHECK(c2.cell_volume == 1.0);
    CHECK_THROWS_AS(build_cover(0.5, 2, CellGeometry::cube), ConfigError);
    CHECK_THROWS_AS(build_cover(4.0, 4, CellGeometry::cube), ConfigError);
}

TEST_CASE("R=20 count equals the exhaustive lattice-count oracle") {
    const CellCover cover = build_cover(20.0, 2, CellGeometry::cube);
    // Independent double loop.
    std::size_t count = 0;
    for (int x = -20; x <= 20; ++x)
        for (int y = -20; y <= 20; ++y)
            if (x * x + y * y <= 400) ++count;
    CHECK(cover.size() == count);
    const double density = static_cast<double>(count) / (kPi * 400.0);
    CHECK(density >= 0.98);
    CHECK(density <= 1.02);
}

TEST_CASE("center confinement and count window") {
    for (double R : {4.0, 9.0, 16.5}) {
        const CellCover cover = build_cover(R, 2, CellGeometry::cube);
        for (std::size_t k = 0; k < cover.size(); ++k)
            CHECK(norm(cover.center(k)) <= R + 1e-12);
        const double lo = kPi * std::pow(std::max(0.0, R - std::sqrt(2.0)), 2);
        const double hi = kPi * std::pow(R + std::sqrt(2.0), 2);
        CHECK(static_cast<double>(cover.size()) >= lo);
        CHECK(static_cast<double>(cover.size()) <= hi);
    }
}

TEST_CASE("ball cells carry the inscribed-ball volume") {
    const CellCover b2 = build_cover(3.0, 2, CellGeometry::ball);
    CHECK(b2.cell_volume == doctest::Approx(kPi / 4.0));
    const CellCover b3 = build_cover(3.0, 3, CellGeometry::ball);
    CHECK(b3.cell_volume == doctest::Approx(kPi / 6.0));
}

TEST_CASE("cube cell transform: volume at zero, sinc zeros, bounded by volume") {
    CHECK(cell_fourier(CellGeometry::cube, 2, {0, 0, 0}) == doctest::Approx(1.0));
    CHECK(cell_fourier(CellGeometry::cube, 3, {0, 0, 0}) == doctest::Approx(1.0));
    CHECK(cell_fourier(CellGeometry::cube, 2, {1.0, 0.0, 0.0}) ==
          doctest::Approx(0.0).epsilon(1e-15));
    Xoshiro256 rng(5);
    for (int rep = 0; rep < 200; ++rep) {
        const Vec3 xi{rng.uniform(-4, 4), rng.uniform(-4, 4), 0.0};
        const double f = cell_fourier(CellGeometry::cube, 2, xi);
        CHECK(std::abs(f) <= 1.0 + 1e-14);
        // real and even
        CHECK(f == cell_fourier(CellGeometry::cube, 2, {-xi.x, -xi.y, 0.0}));
    }
}

TEST_CASE("disk cell transform matches fine polar quadrature") {
    // Oracle in polar coordinates: midpoint in r (smooth) and a trapezoid in
    // the periodic angle, which converges fast enough for 1e-8 absolute. A
    // cartesian grid would be stuck at O(h) from the boundary cut.
    const auto quad = [](Vec3 xi) {
        const double q = norm(xi);
        const int nr = 20000, nth = 512;
        long double acc = 0.0L;
        for (int i = 0; i < nr; ++i) {
            const double r = (i + 0.5) * (0.5 / nr);
            long double ring = 0.0L;
            for (int j = 0; j < nth; ++j)
                ring += std::cos(kTwoPi * q * r * std::cos(kTwoPi * j / nth));
            acc += r * ring / nth;
        }
        return static_cast<double>(acc) * kTwoPi * (0.5 / nr);
    };
    const Vec3 xi{0.3, 0.4, 0.0};
    CHECK(std::abs(cell_fourier(CellGeometry::ball, 2, xi) - quad(xi)) < 1e-8);
    CHECK(cell_fourier(CellGeometry::ball, 2, {0, 0, 0}) == doctest::Approx(kPi / 4));
    CHECK(cell_fourier(CellGeometry::ball, 3, {0, 0, 0}) == doctest::Approx(kPi / 6));
}

TEST_CASE("3d ball transform: small-argument series joins the closed form") {
    for (double r : {9.9e-5 / kTwoPi, 1.01e-4 / kTwoPi, 0.37}) {
        const double f1 = cell_fourier(CellGeometry::ball, 3, {r, 0, 0});
        // closed form evaluated directly in long double
        const long double z = 2.0L * 3.141592653589793238L * 0.5L * r;
        const long double direct =
            (std::sin(z) - z * std::cos(z)) /
            (2.0L * 3.141592653589793238L * 3.141592653589793238L * r * r * r);
        CHECK(f1 == doctest::Approx(static_cast<double>(direct)).epsilon(1e-9));
    }
}

TEST_CASE("translation covariance against direct quadrature") {
    // Cell at center c: integral equals exp(2 pi i xi.c) * F(xi). Check the
    // real part against midpoint quadrature over the shifted cube.
    const Vec3 xi{0.41, -0.23, 0.0};
    const Vec3 c{3.0, -2.0, 0.0};
    const int n = 3000;
    const double h = 1.0 / n;
    long double re = 0.0L, im = 0.0L;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x = c.x - 0.5 + (i + 0.5) * h;
            const double y = c.y - 0.5 + (j + 0.5) * h;
            const double phase = kTwoPi * (xi.x * x + xi.y * y);
            re += std::cos(phase);
            im += std::sin(phase);
        }
    }
    const std::complex<double> direct{static_cast<double>(re) * h * h,
                                      static_cast<double>(im) * h * h};
    const std::complex<double> predicted =
        std::polar(1.0, kTwoPi * dot(xi, c)) * cell_fourier(CellGeometry::cube, 2, xi);
    CHECK(std::abs(direct - predicted) < 1e-7);
}

TEST_CASE("d=3 count window against the unit-ball volume coefficient") {
    for (double R : {3.0, 5.0, 8.0}) {
        const CellCover cover = build_cover(R, 3, CellGeometry::cube);
        const double v3 = unit_ball_volume(3);
        const double lo = v3 * std::pow(std::max(0.0, R - std::sqrt(3.0)), 3);
        const double hi = v3 * std::pow(R + std::sqrt(3.0), 3);
        CHECK(static_cast<double>(cover.size()) >= lo);
        CHECK(static_cast<double>(cover.size()) <= hi);
    }
}
