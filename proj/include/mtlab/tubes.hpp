#pragma once

#include <string>

#include "mtlab/cover.hpp"
#include "mtlab/weights.hpp"

namespace mtlab {

// A radius-1 tube around the line {anchor + t * direction}. The anchor lives
// in the hyperplane through the origin orthogonal to the direction.
struct Tube {
    Vec3 direction;  // unit vector
    Vec3 anchor;     // anchor . direction = 0
};

// Normalizes the direction and projects the anchor onto the orthogonal
// hyperplane, then validates the invariants.
Tube make_tube(Vec3 direction, Vec3 anchor);

enum class OccupancyMethod { center_indicator, volume_fraction };

OccupancyMethod occupancy_method_from_string(const std::string& s);

// w(T): center-indicator counts cells whose center lies within distance 1 of
// the axis; volume-fraction integrates each cell with 256 fixed
// low-discrepancy sample points.
double tube_occupancy(const CellCover& cover, const Weight& weight, const Tube& tube,
                      OccupancyMethod method = OccupancyMethod::center_indicator);

struct TubeSearchSpec {
    double angular_resolution = 0.0;  // 0 = 1/(2R)
    double offset_spacing = 0.5;
    int refinement_rounds = 2;
    OccupancyMethod method = OccupancyMethod::center_indicator;
};

struct TubeSupResult {
    double value = 0.0;
    Tube argmax;
    double angular_resolution = 0.0;  // finest resolution reached
    double offset_spacing = 0.0;
};

// Exhaustive grid search over directions x offsets meeting B_R, followed by
// local refinement rounds that halve both grids around the incumbent. The
// argmax tie-break is deterministic (smallest direction index, then offset
// index), so the result is schedule independent.
TubeSupResult tube_sup(const CellCover& cover, const Weight& weight,
                       const TubeSearchSpec& spec = {});

}  // namespace mtlab
