#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "mtlab/geometry.hpp"

namespace mtlab {

// The compact hypersurfaces carrying the density g. All of them are
// normalized to live inside the unit ball.
enum class SurfaceKind { circle, sphere, paraboloid_cap, planar_cap };

SurfaceKind surface_kind_from_string(const std::string& s);
std::string to_string(SurfaceKind kind);

// Quadrature discretization of (Sigma, dsigma): nodes omega_j with positive
// weights sigma_j, stored SoA so the phase kernels can stream them.
struct QuadratureRule {
    int dim = 0;
    SurfaceKind kind = SurfaceKind::circle;
    std::vector<double> nx, ny, nz;  // node coordinates
    std::vector<double> sigma;       // positive quadrature weights

    std::size_t size() const { return sigma.size(); }
    Vec3 node(std::size_t j) const { return {nx[j], ny[j], nz[j]}; }
    double total_measure() const;
};

// Builds the discretization. circle: M equispaced angles, sigma = 2*pi/M.
// sphere: Fibonacci lattice, sigma = 4*pi/M. paraboloid-cap: tensor grid on
// [-1/2,1/2]^(d-1) mapped by u -> (u, |u|^2/2) with area-element weights.
// planar-cap: the same grid with a flat graph.
QuadratureRule build_surface(SurfaceKind kind, int d, int M);

// (sum_j sigma_j |g_j|^2)^(1/2), the discrete L^2(Sigma) norm.
double surface_l2_norm(const QuadratureRule& rule, std::span<const std::complex<double>> g);

// Default node count used by the experiment drivers: spacing ~ 1/R resolves
// the phase exp(2*pi*i*omega.x) over |x| <= R.
int default_node_count(int d, double R);

}  // namespace mtlab
