#pragma once

#include <string>
#include <vector>

#include "mtlab/geometry.hpp"

namespace mtlab {

// Unit-scale cell shapes for the cover of B_R. Cubes tile the ball exactly
// and have a product-of-sinc transform; balls of radius 1/2 (inscribed) stay
// finitely overlapping and are kept as a fidelity option.
enum class CellGeometry { cube, ball };

CellGeometry cell_geometry_from_string(const std::string& s);
std::string to_string(CellGeometry g);

// The unit-cell cover of B_R: one cell per integer lattice point c with
// |c| <= R. Centers are ordered lexicographically, so cell indices are
// deterministic.
struct CellCover {
    double R = 0.0;
    int dim = 0;
    CellGeometry geometry = CellGeometry::cube;
    std::vector<double> cx, cy, cz;
    double cell_volume = 0.0;

    std::size_t size() const { return cx.size(); }
    Vec3 center(std::size_t k) const { return {cx[k], cy[k], cz[k]}; }
};

CellCover build_cover(double R, int d, CellGeometry geometry);

// Exact Fourier transform of one cell centered at the origin:
// F(xi) = integral over the cell of exp(2*pi*i*xi.x) dx. Real and even for
// both cell shapes. A cell at center c contributes exp(2*pi*i*xi.c) * F(xi).
double cell_fourier(CellGeometry geometry, int d, Vec3 xi);

}  // namespace mtlab
