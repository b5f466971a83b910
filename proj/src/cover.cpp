#include "mtlab/cover.hpp"

#include <cmath>

#include "mtlab/errors.hpp"

namespace mtlab {

CellGeometry cell_geometry_from_string(const std::string& s) {
    if (s == "cube") return CellGeometry::cube;
    if (s == "ball") return CellGeometry::ball;
    throw ConfigError("unknown cell geometry: " + s);
}

std::string to_string(CellGeometry g) { return g == CellGeometry::cube ? "cube" : "ball"; }

CellCover build_cover(double R, int d, CellGeometry geometry) {
    if (R < 1.0) throw ConfigError("cover radius must be >= 1");
    if (d != 2 && d != 3) throw ConfigError("cover dimension must be 2 or 3");
    CellCover cover;
    cover.R = R;
    cover.dim = d;
    cover.geometry = geometry;
    cover.cell_volume =
        geometry == CellGeometry::cube ? 1.0 : unit_ball_volume(d) * std::pow(0.5, d);
    const long n = static_cast<long>(std::floor(R));
    const double r2 = R * R;
    for (long ix = -n; ix <= n; ++ix) {
        for (long iy = -n; iy <= n; ++iy) {
            if (d == 2) {
                if (static_cast<double>(ix) * ix + static_cast<double>(iy) * iy > r2) continue;
                cover.cx.push_back(static_cast<double>(ix));
                cover.cy.push_back(static_cast<double>(iy));
                cover.cz.push_back(0.0);
            } else {
                for (long iz = -n; iz <= n; ++iz) {
                    const double sq = static_cast<double>(ix) * ix +
                                      static_cast<double>(iy) * iy +
                                      static_cast<double>(iz) * iz;
                    if (sq > r2) continue;
                    cover.cx.push_back(static_cast<double>(ix));
                    cover.cy.push_back(static_cast<double>(iy));
                    cover.cz.push_back(static_cast<double>(iz));
                }
            }
        }
    }
    return cover;
}

namespace {

inline double sinc_pi(double x) {
    if (std::abs(x) < 1e-9) {
        const double px = kPi * x;
        return 1.0 - px * px / 6.0;
    }
    return std::sin(kPi * x) / (kPi * x);
}

// Disk of radius rho in the plane: (rho/|xi|) * J1(2*pi*rho*|xi|).
double disk_fourier(double rho, double r) {
    if (r < 1e-8) return kPi * rho * rho * (1.0 - 0.5 * (kPi * rho * r) * (kPi * rho * r));
    return rho / r * std::cyl_bessel_j(1.0, kTwoPi * rho * r);
}

// Ball of radius rho in R^3: (sin z - z cos z) / (2 pi^2 r^3) with z = 2 pi rho r.
double ball3_fourier(double rho, double r) {
    const double z = kTwoPi * rho * r;
    if (z < 1e-4) {
        // sin z - z cos z = z^3/3 - z^5/30 + O(z^7)
        const double v = unit_ball_volume(3) * rho * rho * rho;
        return v * (1.0 - z * z / 10.0);
    }
    return (std::sin(z) - z * std::cos(z)) / (2.0 * kPi * kPi * r * r * r);
}

}  // namespace

double cell_fourier(CellGeometry geometry, int d, Vec3 xi) {
    if (geometry == CellGeometry::cube) {
        double f = sinc_pi(xi.x) * sinc_pi(xi.y);
        if (d == 3) f *= sinc_pi(xi.z);
        return f;
    }
    const double r = norm(xi);
    return d == 2 ? disk_fourier(0.5, r) : ball3_fourier(0.5, r);
}

}  // namespace mtlab
