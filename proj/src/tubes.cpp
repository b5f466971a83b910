#include "mtlab/tubes.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mtlab/errors.hpp"
#include "mtlab/kernels.hpp"
#include "mtlab/parallel.hpp"

namespace mtlab {

Tube make_tube(Vec3 direction, Vec3 anchor) {
    const double n = norm(direction);
    if (n < 1e-12) throw ConfigError("tube direction must be nonzero");
    Tube t;
    t.direction = {direction.x / n, direction.y / n, direction.z / n};
    const double along = dot(anchor, t.direction);
    t.anchor = anchor - along * t.direction;
    return t;
}

OccupancyMethod occupancy_method_from_string(const std::string& s) {
    if (s == "center-indicator") return OccupancyMethod::center_indicator;
    if (s == "volume-fraction") return OccupancyMethod::volume_fraction;
    throw ConfigError("unknown occupancy method: " + s);
}

namespace {

// Van der Corput radical inverse in the given base.
double radical_inverse(std::uint32_t i, std::uint32_t base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (i > 0) {
        r += f * (i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

// 256 fixed low-discrepancy points of the cell centered at the origin.
// Halton (2,3[,5]) in the bounding cube; for ball cells, points outside the
// inscribed ball are rejected and the sequence continued.
std::vector<Vec3> cell_sample_points(CellGeometry geometry, int d) {
    std::vector<Vec3> pts;
    pts.reserve(256);
    std::uint32_t i = 1;
    while (pts.size() < 256) {
        Vec3 p{radical_inverse(i, 2) - 0.5, radical_inverse(i, 3) - 0.5,
               d == 3 ? radical_inverse(i, 5) - 0.5 : 0.0};
        ++i;
        if (geometry == CellGeometry::ball && norm2(p) > 0.25) continue;
        pts.push_back(p);
    }
    return pts;
}

struct SupportSoA {
    std::vector<double> x, y, z, m;
};

SupportSoA support_soa(const CellCover& cover, const Weight& weight) {
    SupportSoA s;
    const std::size_t n = weight.support_size();
    s.x.resize(n);
    s.y.resize(n);
    s.z.resize(n);
    s.m.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 c = cover.center(weight.indices[i]);
        s.x[i] = c.x;
        s.y[i] = c.y;
        s.z[i] = c.z;
        s.m[i] = static_cast<double>(weight.multiplicities[i]);
    }
    return s;
}

double occupancy_soa(const SupportSoA& s, double cell_volume,
                     const std::vector<Vec3>& samples, const Tube& tube,
                     OccupancyMethod method) {
    const std::size_t n = s.x.size();
    if (method == OccupancyMethod::center_indicator) {
        return cell_volume * kernels::tube_mass(s.x.data(), s.y.data(), s.z.data(),
                                                s.m.data(), n, tube.anchor, tube.direction,
                                                1.0);
    }
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        int inside = 0;
        for (const Vec3& p : samples) {
            const Vec3 q{s.x[k] + p.x - tube.anchor.x, s.y[k] + p.y - tube.anchor.y,
                         s.z[k] + p.z - tube.anchor.z};
            const double along = dot(q, tube.direction);
            if (norm2(q) - along * along <= 1.0) ++inside;
        }
        total += s.m[k] * cell_volume * inside / 256.0;
    }
    return total;
}

struct DirFrame {
    Vec3 dir;
    Vec3 u;  // orthonormal basis of the plane perpendicular to dir
    Vec3 v;
};

DirFrame frame_for(Vec3 dir) {
    DirFrame f;
    f.dir = normalized(dir);
    const Vec3 seed = std::abs(f.dir.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    const Vec3 u0 = seed - dot(seed, f.dir) * f.dir;
    f.u = normalized(u0);
    f.v = {f.dir.y * f.u.z - f.dir.z * f.u.y, f.dir.z * f.u.x - f.dir.x * f.u.z,
           f.dir.x * f.u.y - f.dir.y * f.u.x};
    return f;
}

struct BestTube {
    double value = -1.0;
    std::size_t dir_index = 0;
    std::size_t offset_index = 0;
    Tube tube;
};

void consider(BestTube& best, double value, std::size_t di, std::size_t oi, const Tube& t) {
    if (value > best.value ||
        (value == best.value && (di < best.dir_index ||
                                 (di == best.dir_index && oi < best.offset_index)))) {
        best = {value, di, oi, t};
    }
}

}  // namespace

double tube_occupancy(const CellCover& cover, const Weight& weight, const Tube& tube,
                      OccupancyMethod method) {
    check_weight_cover(weight, cover);
    const SupportSoA s = support_soa(cover, weight);
    const std::vector<Vec3> samples = method == OccupancyMethod::volume_fraction
                                          ? cell_sample_points(cover.geometry, cover.dim)
                                          : std::vector<Vec3>{};
    return occupancy_soa(s, cover.cell_volume, samples, tube, method);
}

TubeSupResult tube_sup(const CellCover& cover, const Weight& weight,
                       const TubeSearchSpec& spec) {
    check_weight_cover(weight, cover);
    const double R = cover.R;
    const int d = cover.dim;
    double dtheta = spec.angular_resolution > 0.0 ? spec.angular_resolution : 0.5 / R;
    double spacing = spec.offset_spacing > 0.0 ? spec.offset_spacing : 0.5;

    const SupportSoA soa = support_soa(cover, weight);
    const std::vector<Vec3> samples = spec.method == OccupancyMethod::volume_fraction
                                          ? cell_sample_points(cover.geometry, cover.dim)
                                          : std::vector<Vec3>{};
    const auto occupancy = [&](const Tube& t) {
        return occupancy_soa(soa, cover.cell_volume, samples, t, spec.method);
    };

    // Offsets range over the orthogonal disk of radius R; tubes partially
    // exiting B_R stay in the search since the weight vanishes outside anyway.
    const double offset_limit = R;

    std::vector<DirFrame> frames;
    if (d == 2) {
        const std::size_t ndirs = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                               std::ceil(kPi / dtheta)));
        frames.reserve(ndirs);
        for (std::size_t i = 0; i < ndirs; ++i) {
            const double theta = kPi * static_cast<double>(i) / static_cast<double>(ndirs);
            frames.push_back(frame_for({std::cos(theta), std::sin(theta), 0.0}));
        }
    } else {
        // Fibonacci hemisphere at density comparable to dtheta.
        const std::size_t ndirs = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(kTwoPi / (dtheta * dtheta))));
        const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
        frames.reserve(ndirs);
        for (std::size_t i = 0; i < ndirs; ++i) {
            const double zc = (2.0 * i + 1.0) / (2.0 * ndirs);  // upper hemisphere
            const double r = std::sqrt(std::max(0.0, 1.0 - zc * zc));
            const double phi = golden_angle * static_cast<double>(i);
            frames.push_back(frame_for({r * std::cos(phi), r * std::sin(phi), zc}));
        }
    }

    const long noff = static_cast<long>(std::floor(offset_limit / spacing));
    std::vector<BestTube> per_dir(frames.size());
    parallel_for(frames.size(), [&](std::size_t di) {
        const DirFrame& f = frames[di];
        BestTube local;
        std::size_t oi = 0;
        for (long a = -noff; a <= noff; ++a) {
            if (d == 2) {
                const Tube t{f.dir, (a * spacing) * f.u};
                consider(local, occupancy(t), di, oi++, t);
            } else {
                for (long b = -noff; b <= noff; ++b) {
                    const Vec3 anchor = (a * spacing) * f.u + (b * spacing) * f.v;
                    if (norm2(anchor) > offset_limit * offset_limit) {
                        ++oi;
                        continue;
                    }
                    const Tube t{f.dir, anchor};
                    consider(local, occupancy(t), di, oi++, t);
                }
            }
        }
        per_dir[di] = local;
    });
    BestTube best;
    for (const BestTube& cand : per_dir)
        consider(best, cand.value, cand.dir_index, cand.offset_index, cand.tube);

    // Local refinement: halve both grids around the incumbent, re-centering
    // each round. Perturbed directions are re-orthonormalized tubes.
    for (int round = 0; round < spec.refinement_rounds; ++round) {
        const double fine_theta = dtheta * 0.5;
        const double fine_spacing = spacing * 0.5;
        // Ties during refinement keep the incumbent.
        best.dir_index = 0;
        best.offset_index = 0;
        const DirFrame base = frame_for(best.tube.direction);
        std::vector<Vec3> dirs;
        if (d == 2) {
            for (int i = -2; i <= 2; ++i) {
                const double theta = std::atan2(base.dir.y, base.dir.x) + i * fine_theta;
                dirs.push_back({std::cos(theta), std::sin(theta), 0.0});
            }
        } else {
            for (int i = -2; i <= 2; ++i)
                for (int j = -2; j <= 2; ++j)
                    dirs.push_back(normalized(base.dir + (i * fine_theta) * base.u +
                                              (j * fine_theta) * base.v));
        }
        BestTube round_best = best;
        std::size_t di = 0;
        for (const Vec3& dir : dirs) {
            const DirFrame f = frame_for(dir);
            const double a0 = dot(best.tube.anchor, f.u);
            const double b0 = d == 3 ? dot(best.tube.anchor, f.v) : 0.0;
            std::size_t oi = 0;
            for (int a = -2; a <= 2; ++a) {
                if (d == 2) {
                    const Tube t = make_tube(dir, (a0 + a * fine_spacing) * f.u);
                    consider(round_best, occupancy(t), di, oi++, t);
                } else {
                    for (int b = -2; b <= 2; ++b) {
                        const Tube t = make_tube(dir, (a0 + a * fine_spacing) * f.u +
                                                          (b0 + b * fine_spacing) * f.v);
                        consider(round_best, occupancy(t), di, oi++, t);
                    }
                }
            }
            ++di;
        }
        best = round_best;
        dtheta = fine_theta;
        spacing = fine_spacing;
    }

    TubeSupResult result;
    result.value = best.value;
    result.argmax = best.tube;
    result.angular_resolution = dtheta;
    result.offset_spacing = spacing;
    return result;
}

}  // namespace mtlab
