#include "mtlab/surface.hpp"

#include <cmath>

#include "mtlab/errors.hpp"

namespace mtlab {

SurfaceKind surface_kind_from_string(const std::string& s) {
    if (s == "circle") return SurfaceKind::circle;
    if (s == "sphere") return SurfaceKind::sphere;
    if (s == "paraboloid-cap") return SurfaceKind::paraboloid_cap;
    if (s == "planar-cap") return SurfaceKind::planar_cap;
    throw ConfigError("unknown surface kind: " + s);
}

std::string to_string(SurfaceKind kind) {
    switch (kind) {
        case SurfaceKind::circle: return "circle";
        case SurfaceKind::sphere: return "sphere";
        case SurfaceKind::paraboloid_cap: return "paraboloid-cap";
        case SurfaceKind::planar_cap: return "planar-cap";
    }
    return "?";
}

double QuadratureRule::total_measure() const {
    double sum = 0.0;
    for (double s : sigma) sum += s;
    return sum;
}

namespace {

void push_node(QuadratureRule& rule, Vec3 p, double weight) {
    rule.nx.push_back(p.x);
    rule.ny.push_back(p.y);
    rule.nz.push_back(p.z);
    rule.sigma.push_back(weight);
}

QuadratureRule build_circle(int M) {
    QuadratureRule rule;
    rule.dim = 2;
    rule.kind = SurfaceKind::circle;
    const double w = kTwoPi / M;
    for (int j = 0; j < M; ++j) {
        const double theta = kTwoPi * j / M;
        push_node(rule, {std::cos(theta), std::sin(theta), 0.0}, w);
    }
    return rule;
}

QuadratureRule build_sphere(int M) {
    QuadratureRule rule;
    rule.dim = 3;
    rule.kind = SurfaceKind::sphere;
    const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
    const double w = 4.0 * kPi / M;
    for (int j = 0; j < M; ++j) {
        const double zc = 1.0 - (2.0 * j + 1.0) / M;  // midpoint rule in z
        const double r = std::sqrt(std::max(0.0, 1.0 - zc * zc));
        const double theta = golden_angle * j;
        push_node(rule, {r * std::cos(theta), r * std::sin(theta), zc}, w);
    }
    return rule;
}

// Graph surfaces over the parameter box [-1/2, 1/2]^(d-1). The half-width box
// keeps the graph of |u|^2/2 inside the unit ball.
QuadratureRule build_cap(SurfaceKind kind, int d, int M) {
    const bool curved = kind == SurfaceKind::paraboloid_cap;
    QuadratureRule rule;
    rule.dim = d;
    rule.kind = kind;
    if (d == 2) {
        const double h = 1.0 / M;
        for (int j = 0; j < M; ++j) {
            const double u = -0.5 + (j + 0.5) * h;
            const double phi = curved ? 0.5 * u * u : 0.0;
            push_node(rule, {u, phi, 0.0}, h * std::sqrt(1.0 + (curved ? u * u : 0.0)));
        }
    } else {
        // Tensor grid: m x m nodes with m = round(sqrt(M)).
        const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(M))));
        const double h = 1.0 / m;
        for (int a = 0; a < m; ++a) {
            for (int b = 0; b < m; ++b) {
                const double u = -0.5 + (a + 0.5) * h;
                const double v = -0.5 + (b + 0.5) * h;
                const double g2 = curved ? u * u + v * v : 0.0;
                const double phi = curved ? 0.5 * (u * u + v * v) : 0.0;
                push_node(rule, {u, v, phi}, h * h * std::sqrt(1.0 + g2));
            }
        }
    }
    return rule;
}

}  // namespace

QuadratureRule build_surface(SurfaceKind kind, int d, int M) {
    if (d != 2 && d != 3) throw ConfigError("surface dimension must be 2 or 3");
    if (M < 4) throw ConfigError("surface node count must be at least 4");
    switch (kind) {
        case SurfaceKind::circle:
            if (d != 2) throw ConfigError("circle requires d = 2");
            return build_circle(M);
        case SurfaceKind::sphere:
            if (d != 3) throw ConfigError("sphere requires d = 3");
            return build_sphere(M);
        case SurfaceKind::paraboloid_cap:
        case SurfaceKind::planar_cap:
            return build_cap(kind, d, M);
    }
    throw ConfigError("invalid surface kind");
}

double surface_l2_norm(const QuadratureRule& rule, std::span<const std::complex<double>> g) {
    if (g.size() != rule.size())
        throw DimensionError("surface_l2_norm: g has " + std::to_string(g.size()) +
                             " entries, rule has " + std::to_string(rule.size()) + " nodes");
    double sum = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) sum += rule.sigma[j] * std::norm(g[j]);
    return std::sqrt(sum);
}

int default_node_count(int d, double R) {
    if (d == 2) return static_cast<int>(std::ceil(16.0 * R));
    return static_cast<int>(std::ceil(8.0 * R * R));
}

}  // namespace mtlab
