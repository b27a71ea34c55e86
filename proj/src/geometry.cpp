#include "advloop/geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace advloop::geom {

double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * M_PI);
    if (a <= -M_PI) a += 2.0 * M_PI;
    if (a > M_PI) a -= 2.0 * M_PI;
    return a;
}

Aabb TriangleMesh::bounds() const {
    Aabb b;
    for (const auto& v : vertices) b.expand(v);
    return b;
}

double TriangleMesh::triangle_area(std::size_t t) const {
    const auto& tri = triangles[t];
    const Vec3 e1 = vertices[tri[1]] - vertices[tri[0]];
    const Vec3 e2 = vertices[tri[2]] - vertices[tri[0]];
    return 0.5 * e1.cross(e2).norm();
}

Vec3 TriangleMesh::centroid() const {
    Vec3 c{0, 0, 0};
    if (vertices.empty()) return c;
    for (const auto& v : vertices) c += v;
    return c / static_cast<double>(vertices.size());
}

bool TriangleMesh::is_watertight() const {
    if (triangles.empty()) return false;
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> edge_count;
    for (const auto& tri : triangles) {
        for (int k = 0; k < 3; ++k) {
            const std::uint32_t a = tri[k], b = tri[(k + 1) % 3];
            if (a >= vertices.size() || b >= vertices.size()) return false;
            edge_count[{std::min(a, b), std::max(a, b)}]++;
        }
    }
    for (const auto& [edge, n] : edge_count)
        if (n != 2) return false;
    return true;
}

void TriangleMesh::remove_degenerate(double min_area) {
    std::vector<std::array<std::uint32_t, 3>> kept;
    kept.reserve(triangles.size());
    for (std::size_t t = 0; t < triangles.size(); ++t)
        if (triangle_area(t) >= min_area) kept.push_back(triangles[t]);
    triangles = std::move(kept);
}

TriangleMesh TriangleMesh::placed(const Pose2& pose, double ground_z) const {
    TriangleMesh out;
    out.triangles = triangles;
    out.vertices.reserve(vertices.size());
    double min_z = 1e300;
    for (const auto& v : vertices) min_z = std::min(min_z, v.z);
    const double c = std::cos(pose.heading), s = std::sin(pose.heading);
    const double lift = ground_z - min_z;
    for (const auto& v : vertices) {
        out.vertices.push_back(
            {pose.x + c * v.x - s * v.y, pose.y + s * v.x + c * v.y, v.z + lift});
    }
    return out;
}

TriangleMesh TriangleMesh::scaled(double sx, double sy, double sz) const {
    TriangleMesh out;
    out.triangles = triangles;
    out.vertices.reserve(vertices.size());
    for (const auto& v : vertices) out.vertices.push_back({v.x * sx, v.y * sy, v.z * sz});
    return out;
}

void write_obj(const TriangleMesh& mesh, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << obj_to_string(mesh);
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::string obj_to_string(const TriangleMesh& mesh) {
    std::string out;
    out.reserve(mesh.vertices.size() * 40 + mesh.triangles.size() * 24);
    char buf[128];
    for (const auto& v : mesh.vertices) {
        std::snprintf(buf, sizeof(buf), "v %.9g %.9g %.9g\n", v.x, v.y, v.z);
        out += buf;
    }
    for (const auto& t : mesh.triangles) {
        std::snprintf(buf, sizeof(buf), "f %u %u %u\n", t[0] + 1, t[1] + 1, t[2] + 1);
        out += buf;
    }
    return out;
}

TriangleMesh read_obj(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open OBJ: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return obj_from_string(ss.str());
}

TriangleMesh obj_from_string(const std::string& text) {
    TriangleMesh mesh;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.size() < 2) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            Vec3 v;
            ls >> v.x >> v.y >> v.z;
            mesh.vertices.push_back(v);
        } else if (tag == "f") {
            std::array<std::uint32_t, 3> tri{};
            for (int k = 0; k < 3; ++k) {
                std::string tok;
                ls >> tok;
                // accept "i", "i/j", "i/j/k" face tokens
                const auto slash = tok.find('/');
                if (slash != std::string::npos) tok = tok.substr(0, slash);
                const long idx = std::stol(tok);
                if (idx < 1) throw std::runtime_error("OBJ face index out of range");
                tri[k] = static_cast<std::uint32_t>(idx - 1);
            }
            mesh.triangles.push_back(tri);
        }
    }
    for (const auto& t : mesh.triangles)
        for (int k = 0; k < 3; ++k)
            if (t[k] >= mesh.vertices.size())
                throw std::runtime_error("OBJ face references missing vertex");
    return mesh;
}

std::array<Vec2, 4> OrientedBox::corners() const {
    const double c = std::cos(yaw), s = std::sin(yaw);
    const double hl = 0.5 * length, hw = 0.5 * width;
    const auto corner = [&](double dx, double dy) -> Vec2 {
        return {cx + c * dx - s * dy, cy + s * dx + c * dy};
    };
    return {corner(hl, hw), corner(-hl, hw), corner(-hl, -hw), corner(hl, -hw)};
}

void OrientedBox::normalize_dims() {
    if (width > length) {
        std::swap(width, length);
        yaw = wrap_angle(yaw + M_PI / 2.0);
    }
}

bool OrientedBox::contains(const Vec2& p) const {
    const double c = std::cos(yaw), s = std::sin(yaw);
    const double dx = p.x - cx, dy = p.y - cy;
    const double lx = c * dx + s * dy;
    const double ly = -s * dx + c * dy;
    return std::abs(lx) <= 0.5 * length && std::abs(ly) <= 0.5 * width;
}

}  // namespace advloop::geom
