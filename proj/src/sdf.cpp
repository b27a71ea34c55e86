#include "advloop/sdf.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "advloop/parallel.hpp"

namespace advloop::shape {

namespace detail {
extern const std::int8_t kTriTable[256][16];
extern const int kCubeVertex[8][3];
extern const int kEdgeVertex[12][2];
}  // namespace detail

using geom::TriangleMesh;
using geom::Vec3;

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b,
                               const Vec3& c) {
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return (p - a).norm();

    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return (p - b).norm();

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        const double v = d1 / (d1 - d3);
        return (p - (a + ab * v)).norm();
    }

    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return (p - c).norm();

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        const double w = d2 / (d2 - d6);
        return (p - (a + ac * w)).norm();
    }

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (p - (b + (c - b) * w)).norm();
    }

    const double denom = 1.0 / (va + vb + vc);
    const double v = vb * denom, w = vc * denom;
    return (p - (a + ab * v + ac * w)).norm();
}

namespace {

// Solid angle subtended by triangle (a,b,c) at the origin-relative point p
// (Van Oosterom & Strackee). Summed over a watertight mesh this gives
// 4*pi for interior points and 0 outside.
double triangle_solid_angle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ra = a - p, rb = b - p, rc = c - p;
    const double la = ra.norm(), lb = rb.norm(), lc = rc.norm();
    const double numer = ra.dot(rb.cross(rc));
    const double denom =
        la * lb * lc + ra.dot(rb) * lc + rb.dot(rc) * la + rc.dot(ra) * lb;
    return 2.0 * std::atan2(numer, denom);
}

bool point_inside_winding(const Vec3& p, const TriangleMesh& mesh) {
    double total = 0.0;
    for (const auto& tri : mesh.triangles)
        total += triangle_solid_angle(p, mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                      mesh.vertices[tri[2]]);
    return total > 2.0 * M_PI;  // winding number > 0.5
}

}  // namespace

SdfVolume mesh_to_sdf(const TriangleMesh& mesh, int resolution, double extent) {
    if (resolution < 2) throw std::invalid_argument("SDF resolution must be >= 2");
    if (!mesh.is_watertight())
        throw std::invalid_argument(
            "mesh_to_sdf: sign ambiguity, input mesh is not watertight");

    SdfVolume vol;
    vol.resolution = resolution;
    vol.extent = extent;
    const std::size_t n = static_cast<std::size_t>(resolution);
    vol.values.assign(n * n * n, 0.0);

    const double clamp_dist = extent * std::sqrt(3.0);
    const std::size_t tri_count = mesh.triangles.size();

    // Per (x,y) column: crossing z values of the vertical line through the
    // column against every triangle. Sign flips at each crossing. Hits too
    // close to a triangle edge are unreliable; those columns fall back to
    // the winding-number test per voxel.
    struct Column {
        std::vector<double> crossings;
        bool ambiguous = false;
    };
    std::vector<Column> columns(n * n);
    util::parallel_for(n * n, [&](std::size_t ci) {
        const int ix = static_cast<int>(ci % n);
        const int iy = static_cast<int>(ci / n);
        Column& col = columns[ci];
        const Vec3 base = vol.sample_position(ix, iy, 0);
        for (std::size_t t = 0; t < tri_count; ++t) {
            const auto& tri = mesh.triangles[t];
            const Vec3& a = mesh.vertices[tri[0]];
            const Vec3& b = mesh.vertices[tri[1]];
            const Vec3& c = mesh.vertices[tri[2]];
            // Ray (base.x, base.y, z) along +z: solve in the xy plane.
            const double abx = b.x - a.x, aby = b.y - a.y;
            const double acx = c.x - a.x, acy = c.y - a.y;
            const double det = abx * acy - acx * aby;
            if (std::abs(det) < 1e-14) continue;  // wall parallel to the ray
            const double px = base.x - a.x, py = base.y - a.y;
            const double u = (px * acy - acx * py) / det;
            const double v = (abx * py - px * aby) / det;
            if (u < 0.0 || v < 0.0 || u + v > 1.0) continue;
            const double eps = 1e-9;
            if (u < eps || v < eps || u + v > 1.0 - eps) {
                col.ambiguous = true;
                break;
            }
            col.crossings.push_back(a.z + u * (b.z - a.z) + v * (c.z - a.z));
        }
        std::sort(col.crossings.begin(), col.crossings.end());
    });

    util::parallel_for(n * n, [&](std::size_t ci) {
        const int ix = static_cast<int>(ci % n);
        const int iy = static_cast<int>(ci / n);
        const Column& col = columns[ci];
        for (int iz = 0; iz < resolution; ++iz) {
            const Vec3 p = vol.sample_position(ix, iy, iz);
            double best = clamp_dist;
            for (std::size_t t = 0; t < tri_count; ++t) {
                const auto& tri = mesh.triangles[t];
                const double d = point_triangle_distance(
                    p, mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
                if (d < best) best = d;
            }
            bool inside;
            if (col.ambiguous) {
                inside = point_inside_winding(p, mesh);
            } else {
                const std::size_t below =
                    std::lower_bound(col.crossings.begin(), col.crossings.end(), p.z) -
                    col.crossings.begin();
                inside = ((col.crossings.size() - below) % 2) == 1;
            }
            vol.values[vol.index(ix, iy, iz)] = inside ? -best : best;
        }
    });

    return vol;
}

TriangleMesh marching_cubes(const SdfVolume& volume, double iso) {
    TriangleMesh mesh;
    const int r = volume.resolution;
    if (r < 2) return mesh;

    // Shared vertices are keyed by (cell, edge) canonicalized to the lower
    // grid edge so neighboring cells reuse the same interpolated vertex.
    std::unordered_map<std::uint64_t, std::uint32_t> edge_vertex_cache;

    const auto edge_key = [&](int ix, int iy, int iz, int edge) -> std::uint64_t {
        // canonical form: owning sample index plus axis of the edge
        const int(&ev)[2] = detail::kEdgeVertex[edge];
        const int* va = detail::kCubeVertex[ev[0]];
        const int* vb = detail::kCubeVertex[ev[1]];
        const int ax = ix + std::min(va[0], vb[0]);
        const int ay = iy + std::min(va[1], vb[1]);
        const int az = iz + std::min(va[2], vb[2]);
        int axis;
        if (va[0] != vb[0])
            axis = 0;
        else if (va[1] != vb[1])
            axis = 1;
        else
            axis = 2;
        return ((static_cast<std::uint64_t>(ax) << 42) |
                (static_cast<std::uint64_t>(ay) << 21) |
                static_cast<std::uint64_t>(az)) *
                   3ULL +
               static_cast<std::uint64_t>(axis);
    };

    const auto interp_vertex = [&](int ix, int iy, int iz, int edge) -> std::uint32_t {
        const std::uint64_t key = edge_key(ix, iy, iz, edge);
        const auto it = edge_vertex_cache.find(key);
        if (it != edge_vertex_cache.end()) return it->second;

        const int(&ev)[2] = detail::kEdgeVertex[edge];
        const int* va = detail::kCubeVertex[ev[0]];
        const int* vb = detail::kCubeVertex[ev[1]];
        const int ax = ix + va[0], ay = iy + va[1], az = iz + va[2];
        const int bx = ix + vb[0], by = iy + vb[1], bz = iz + vb[2];
        const double fa = volume.at(ax, ay, az) - iso;
        const double fb = volume.at(bx, by, bz) - iso;
        double t = 0.5;
        if (std::abs(fa - fb) > 1e-300) t = fa / (fa - fb);
        t = std::clamp(t, 0.0, 1.0);
        const Vec3 pa = volume.sample_position(ax, ay, az);
        const Vec3 pb = volume.sample_position(bx, by, bz);
        const Vec3 p = pa + (pb - pa) * t;

        const auto idx = static_cast<std::uint32_t>(mesh.vertices.size());
        mesh.vertices.push_back(p);
        edge_vertex_cache.emplace(key, idx);
        return idx;
    };

    for (int iz = 0; iz < r - 1; ++iz) {
        for (int iy = 0; iy < r - 1; ++iy) {
            for (int ix = 0; ix < r - 1; ++ix) {
                int cube_case = 0;
                for (int v = 0; v < 8; ++v) {
                    const int* off = detail::kCubeVertex[v];
                    if (volume.at(ix + off[0], iy + off[1], iz + off[2]) < iso)
                        cube_case |= 1 << v;
                }
                const std::int8_t* tris = detail::kTriTable[cube_case];
                for (int k = 0; tris[k] != -1; k += 3) {
                    const std::uint32_t i0 = interp_vertex(ix, iy, iz, tris[k]);
                    const std::uint32_t i1 = interp_vertex(ix, iy, iz, tris[k + 1]);
                    const std::uint32_t i2 = interp_vertex(ix, iy, iz, tris[k + 2]);
                    if (i0 == i1 || i1 == i2 || i0 == i2) continue;
                    mesh.triangles.push_back({i0, i1, i2});
                }
            }
        }
    }
    return mesh;
}

}  // namespace advloop::shape
