#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace advloop::geom {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    double squared_norm() const { return dot(*this); }
    Vec3 normalized() const {
        const double n = norm();
        return n > 0.0 ? *this / n : Vec3{0, 0, 0};
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::sqrt(x * x + y * y); }
};

/// Normalizes an angle into (-pi, pi].
double wrap_angle(double a);

/// 2D pose on the ground plane; heading in (-pi, pi].
struct Pose2 {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;

    Vec2 position() const { return {x, y}; }
    Vec2 forward() const { return {std::cos(heading), std::sin(heading)}; }

    /// Maps a point from the local frame of this pose into the world frame.
    Vec2 to_world(const Vec2& local) const {
        const double c = std::cos(heading), s = std::sin(heading);
        return {x + c * local.x - s * local.y, y + s * local.x + c * local.y};
    }
    /// Maps a world point into the local frame of this pose.
    Vec2 to_local(const Vec2& world) const {
        const double c = std::cos(heading), s = std::sin(heading);
        const double dx = world.x - x, dy = world.y - y;
        return {c * dx + s * dy, -s * dx + c * dy};
    }
};

struct Aabb {
    Vec3 lo{1e300, 1e300, 1e300};
    Vec3 hi{-1e300, -1e300, -1e300};

    void expand(const Vec3& p) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        lo.z = std::min(lo.z, p.z);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
        hi.z = std::max(hi.z, p.z);
    }
    void expand(const Aabb& b) {
        expand(b.lo);
        expand(b.hi);
    }
    Vec3 extent() const { return hi - lo; }
    Vec3 center() const { return (lo + hi) * 0.5; }
    bool valid() const { return lo.x <= hi.x; }
};

/// Indexed triangle mesh in the canonical actor frame (meters, centered,
/// heading along +x) or in world coordinates after placement.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;

    bool empty() const { return triangles.empty(); }
    Aabb bounds() const;
    double triangle_area(std::size_t t) const;
    Vec3 centroid() const;

    /// True when every undirected edge is shared by exactly two triangles
    /// and indices are in range.
    bool is_watertight() const;

    /// Drops triangles with area below the given threshold.
    void remove_degenerate(double min_area = 1e-9);

    /// Rigid placement: rotate by heading about +z, then translate. The
    /// mesh bottom (min z) is lifted onto z = ground_z.
    TriangleMesh placed(const Pose2& pose, double ground_z = 0.0) const;

    /// Per-axis scaling about the origin.
    TriangleMesh scaled(double sx, double sy, double sz) const;
};

/// ASCII OBJ with vertices and triangular faces only.
void write_obj(const TriangleMesh& mesh, const std::string& path);
TriangleMesh read_obj(const std::string& path);
std::string obj_to_string(const TriangleMesh& mesh);
TriangleMesh obj_from_string(const std::string& text);

/// BEV oriented box: center, full extents, yaw. length >= width by
/// convention (normalize_dims swaps and rotates when violated).
struct OrientedBox {
    double cx = 0.0;
    double cy = 0.0;
    double length = 0.0;
    double width = 0.0;
    double yaw = 0.0;

    std::array<Vec2, 4> corners() const;
    double area() const { return length * width; }
    void normalize_dims();
    bool contains(const Vec2& p) const;
};

}  // namespace advloop::geom
