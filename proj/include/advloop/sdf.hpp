#pragma once

#include <cstdint>
#include <vector>

#include "advloop/geometry.hpp"

namespace advloop::shape {

/// Regular grid of signed distances over a cube of physical side `extent`
/// centered at the origin. `resolution` samples per axis; sample i maps to
/// coordinate -extent/2 + extent * i / (resolution - 1). Negative inside.
struct SdfVolume {
    int resolution = 0;
    double extent = 1.0;
    std::vector<double> values;  // resolution^3, x fastest, then y, then z

    std::size_t index(int ix, int iy, int iz) const {
        return static_cast<std::size_t>(ix) +
               static_cast<std::size_t>(resolution) *
                   (static_cast<std::size_t>(iy) +
                    static_cast<std::size_t>(resolution) * static_cast<std::size_t>(iz));
    }
    double at(int ix, int iy, int iz) const { return values[index(ix, iy, iz)]; }
    double voxel_size() const { return extent / (resolution - 1); }
    geom::Vec3 sample_position(int ix, int iy, int iz) const {
        const double h = voxel_size();
        const double half = 0.5 * extent;
        return {ix * h - half, iy * h - half, iz * h - half};
    }
};

/// Converts a watertight mesh (pre-scaled into the unit cube) to a signed
/// distance volume with the zero level set on the mesh surface. Throws
/// std::invalid_argument with a "sign ambiguity" message for non-watertight
/// input. Distances are clamped at extent * sqrt(3).
SdfVolume mesh_to_sdf(const geom::TriangleMesh& mesh, int resolution, double extent = 1.0);

/// Extracts the iso-surface `value == iso` as a triangle mesh. Vertices lie
/// on voxel edges at the linear-interpolation crossing. Empty output when
/// the field never crosses iso.
geom::TriangleMesh marching_cubes(const SdfVolume& volume, double iso = 0.0);

/// Exact distance from a point to a triangle (Ericson-style region walk).
double point_triangle_distance(const geom::Vec3& p, const geom::Vec3& a,
                               const geom::Vec3& b, const geom::Vec3& c);

}  // namespace advloop::shape
