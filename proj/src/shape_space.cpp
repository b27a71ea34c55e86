#include "advloop/shape_space.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "advloop/rng.hpp"

namespace advloop::shape {

using geom::TriangleMesh;
using geom::Vec3;

namespace {

constexpr char kBasisMagic[8] = {'A', 'D', 'V', 'B', 'A', 'S', 'I', 'S'};
constexpr std::uint32_t kBasisVersion = 1;

void write_raw(std::ofstream& f, const void* data, std::size_t bytes) {
    f.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
}

void read_raw(std::ifstream& f, void* data, std::size_t bytes) {
    f.read(static_cast<char*>(data), static_cast<std::streamsize>(bytes));
    if (!f) throw std::runtime_error("basis file truncated");
}

}  // namespace

std::vector<double> ShapeBasis::encode(const SdfVolume& volume) const {
    if (volume.resolution != resolution_)
        throw std::invalid_argument("encode: volume resolution does not match basis");
    const int k = component_count();
    const std::size_t dim = mean_.size();
    std::vector<double> z(k, 0.0);
    for (int j = 0; j < k; ++j) {
        double acc = 0.0;
        const double* w = components_.data() + j;
        for (std::size_t i = 0; i < dim; ++i)
            acc += w[i * k] * (volume.values[i] - mean_[i]);
        z[j] = acc;
    }
    return z;
}

SdfVolume ShapeBasis::reconstruct(const std::vector<double>& z) const {
    if (static_cast<int>(z.size()) != component_count())
        throw std::invalid_argument("reconstruct: latent dimension mismatch");
    SdfVolume vol;
    vol.resolution = resolution_;
    vol.extent = extent_;
    const std::size_t dim = mean_.size();
    const int k = component_count();
    vol.values.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        double acc = mean_[i];
        const double* row = components_.data() + i * k;
        for (int j = 0; j < k; ++j) acc += row[j] * z[j];
        vol.values[i] = acc;
    }
    return vol;
}

std::vector<double> ShapeBasis::latent_from_unit(const std::vector<double>& unit) const {
    const int k = component_count();
    if (static_cast<int>(unit.size()) < k)
        throw std::invalid_argument("latent_from_unit: too few components");
    std::vector<double> z(k);
    for (int j = 0; j < k; ++j)
        z[j] = latent_lo_[j] + unit[j] * (latent_hi_[j] - latent_lo_[j]);
    return z;
}

ShapeBasis ShapeBasis::fit(const std::vector<SdfVolume>& volumes, int k,
                           double canonical_scale) {
    if (k < 1) throw std::invalid_argument("fit: component count must be >= 1");
    if (static_cast<int>(volumes.size()) < k + 1)
        throw std::invalid_argument("fit: need at least K+1 training volumes");
    const int res = volumes.front().resolution;
    const double extent = volumes.front().extent;
    for (const auto& v : volumes)
        if (v.resolution != res || v.extent != extent)
            throw std::invalid_argument("fit: training volumes differ in resolution");

    const std::size_t dim = volumes.front().values.size();
    const int n = static_cast<int>(volumes.size());

    ShapeBasis basis;
    basis.resolution_ = res;
    basis.extent_ = extent;
    basis.canonical_scale_ = canonical_scale;
    basis.mean_.assign(dim, 0.0);
    for (const auto& v : volumes)
        for (std::size_t i = 0; i < dim; ++i) basis.mean_[i] += v.values[i];
    for (auto& m : basis.mean_) m /= n;

    // Snapshot PCA: eigendecompose the N x N Gram matrix of the centered
    // data instead of the |L| x |L| covariance.
    Eigen::MatrixXd centered(n, static_cast<Eigen::Index>(dim));
    for (int r = 0; r < n; ++r)
        for (std::size_t i = 0; i < dim; ++i)
            centered(r, static_cast<Eigen::Index>(i)) =
                volumes[r].values[i] - basis.mean_[i];

    const Eigen::MatrixXd gram = centered * centered.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("fit: eigendecomposition failed");

    // eigenvalues come back ascending; walk from the top
    basis.components_.assign(dim * static_cast<std::size_t>(k), 0.0);
    basis.explained_variance_.assign(k, 0.0);
    std::vector<Eigen::VectorXd> columns;
    const double lambda_floor = std::max(1e-12, eig.eigenvalues().maxCoeff() * 1e-12);
    for (int j = 0; j < k; ++j) {
        const int src = n - 1 - j;
        const double lambda = src >= 0 ? eig.eigenvalues()(src) : 0.0;
        Eigen::VectorXd w;
        if (lambda > lambda_floor) {
            w = centered.transpose() * eig.eigenvectors().col(src);
            w /= std::sqrt(lambda);
            basis.explained_variance_[j] = lambda / std::max(1, n - 1);
        } else {
            // degenerate directions: complete with orthogonalized canonical axes
            w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
            for (std::size_t axis = 0; axis < dim; ++axis) {
                Eigen::VectorXd cand =
                    Eigen::VectorXd::Unit(static_cast<Eigen::Index>(dim),
                                          static_cast<Eigen::Index>(axis));
                for (const auto& c : columns) cand -= c.dot(cand) * c;
                if (cand.norm() > 0.5) {
                    w = cand / cand.norm();
                    break;
                }
            }
            basis.explained_variance_[j] = 0.0;
        }
        columns.push_back(w);
        for (std::size_t i = 0; i < dim; ++i)
            basis.components_[i * static_cast<std::size_t>(k) + j] = w(static_cast<Eigen::Index>(i));
    }

    basis.latent_lo_.assign(k, 0.0);
    basis.latent_hi_.assign(k, 0.0);
    for (int r = 0; r < n; ++r) {
        const auto z = basis.encode(volumes[r]);
        for (int j = 0; j < k; ++j) {
            if (r == 0 || z[j] < basis.latent_lo_[j]) basis.latent_lo_[j] = z[j];
            if (r == 0 || z[j] > basis.latent_hi_[j]) basis.latent_hi_[j] = z[j];
        }
    }
    return basis;
}

void ShapeBasis::save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open basis file for writing: " + path);
    write_raw(f, kBasisMagic, sizeof(kBasisMagic));
    const std::uint32_t version = kBasisVersion;
    const std::uint32_t res = static_cast<std::uint32_t>(resolution_);
    const std::uint32_t k = static_cast<std::uint32_t>(component_count());
    write_raw(f, &version, 4);
    write_raw(f, &res, 4);
    write_raw(f, &k, 4);
    write_raw(f, &extent_, 8);
    write_raw(f, &canonical_scale_, 8);
    write_raw(f, mean_.data(), mean_.size() * 8);
    write_raw(f, components_.data(), components_.size() * 8);
    write_raw(f, latent_lo_.data(), latent_lo_.size() * 8);
    write_raw(f, latent_hi_.data(), latent_hi_.size() * 8);
    write_raw(f, explained_variance_.data(), explained_variance_.size() * 8);
    if (!f) throw std::runtime_error("basis write failed: " + path);
}

ShapeBasis ShapeBasis::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open basis file: " + path);
    char magic[8];
    read_raw(f, magic, 8);
    if (std::memcmp(magic, kBasisMagic, 8) != 0)
        throw std::runtime_error("not a basis file: " + path);
    std::uint32_t version = 0, res = 0, k = 0;
    read_raw(f, &version, 4);
    if (version != kBasisVersion) throw std::runtime_error("unsupported basis version");
    read_raw(f, &res, 4);
    read_raw(f, &k, 4);
    ShapeBasis basis;
    basis.resolution_ = static_cast<int>(res);
    read_raw(f, &basis.extent_, 8);
    read_raw(f, &basis.canonical_scale_, 8);
    const std::size_t dim =
        static_cast<std::size_t>(res) * static_cast<std::size_t>(res) * static_cast<std::size_t>(res);
    basis.mean_.resize(dim);
    basis.components_.resize(dim * k);
    basis.latent_lo_.resize(k);
    basis.latent_hi_.resize(k);
    basis.explained_variance_.resize(k);
    read_raw(f, basis.mean_.data(), dim * 8);
    read_raw(f, basis.components_.data(), dim * k * 8);
    read_raw(f, basis.latent_lo_.data(), k * 8);
    read_raw(f, basis.latent_hi_.data(), k * 8);
    read_raw(f, basis.explained_variance_.data(), k * 8);
    return basis;
}

void LatentCode::validate(int k) const {
    if (static_cast<int>(u.size()) != k + 2)
        throw std::invalid_argument("latent code must have K+2 components");
    for (const double v : u)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("latent code components must lie in [0,1]");
}

TriangleMesh decode(const LatentCode& code, const ShapeBasis& basis) {
    code.validate(basis.component_count());
    const auto z = basis.latent_from_unit(code.u);
    const SdfVolume field = basis.reconstruct(z);
    TriangleMesh mesh = marching_cubes(field, 0.0);
    if (mesh.empty())
        throw std::domain_error("empty shape: reconstructed field has no surface");
    const double s = basis.canonical_scale();
    mesh = mesh.scaled(s * code.length_scale(), s * code.width_scale(), s);
    mesh.remove_degenerate(1e-9);
    return mesh;
}

TriangleMesh vertex_deform(const TriangleMesh& base, const std::vector<Vec3>& deltas,
                           double bound) {
    if (bound < 0.0) throw std::invalid_argument("vertex_deform: bound must be >= 0");
    if (deltas.size() != base.vertices.size())
        throw std::invalid_argument("vertex_deform: delta count != vertex count");
    TriangleMesh out = base;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        out.vertices[i].x += std::clamp(deltas[i].x, -bound, bound);
        out.vertices[i].y += std::clamp(deltas[i].y, -bound, bound);
        out.vertices[i].z += std::clamp(deltas[i].z, -bound, bound);
    }
    return out;
}

namespace {

struct Profile {
    std::vector<geom::Vec2> points;  // (x, z), counter-clockwise
};

void append_wheel_cut(std::vector<geom::Vec2>& bottom, double axle_x, double wheel_r,
                      double clearance) {
    // lower arc of the wheel circle, walked front-to-rear (decreasing x)
    const double q = std::sqrt(std::max(0.0, wheel_r * wheel_r -
                                                 (wheel_r - clearance) * (wheel_r - clearance)));
    const int segments = 8;
    bottom.push_back({axle_x + q, clearance});
    for (int i = 1; i < segments; ++i) {
        const double x = axle_x + q - 2.0 * q * i / segments;
        const double dz = std::sqrt(std::max(0.0, wheel_r * wheel_r - (x - axle_x) * (x - axle_x)));
        bottom.push_back({x, wheel_r - dz});
    }
    bottom.push_back({axle_x - q, clearance});
}

Profile vehicle_profile(VehicleClass cls, std::uint64_t seed) {
    // roughly unit-box silhouette (x in [-0.5, 0.5], z in [0, 1]); the
    // caller rescales to the exact requested dims afterwards
    rng::Pcg rng(rng::hash_combine(seed, 0x70726f66ULL));
    const auto jitter = [&](double v, double amp) { return v + rng.uniform(-amp, amp); };

    double hood_z, roof_z = 1.0, hood_end, roof_start, roof_end, tail_z;
    double bed_z = -1.0;  // pickup only
    switch (cls) {
        case VehicleClass::kSedan:
            hood_z = jitter(0.55, 0.03);
            hood_end = jitter(0.20, 0.03);
            roof_start = jitter(0.02, 0.02);
            roof_end = jitter(-0.22, 0.03);
            tail_z = jitter(0.58, 0.03);
            break;
        case VehicleClass::kSuv:
            hood_z = jitter(0.52, 0.03);
            hood_end = jitter(0.22, 0.03);
            roof_start = jitter(0.05, 0.02);
            roof_end = jitter(-0.40, 0.03);
            tail_z = jitter(0.80, 0.04);
            break;
        case VehicleClass::kVan:
            hood_z = jitter(0.50, 0.04);
            hood_end = jitter(0.34, 0.03);
            roof_start = jitter(0.22, 0.02);
            roof_end = jitter(-0.44, 0.02);
            tail_z = jitter(0.92, 0.03);
            break;
        case VehicleClass::kPickup:
        default:
            hood_z = jitter(0.55, 0.03);
            hood_end = jitter(0.16, 0.03);
            roof_start = jitter(0.00, 0.02);
            roof_end = jitter(-0.14, 0.02);
            bed_z = jitter(0.55, 0.03);
            tail_z = bed_z;
            break;
    }

    const double clearance = jitter(0.14, 0.02);
    const double wheel_r = jitter(0.30, 0.02);
    const double front_axle = jitter(0.32, 0.02);
    const double rear_axle = jitter(-0.32, 0.02);

    Profile p;
    auto& pts = p.points;
    // up the nose, over the top, down the tail (front at +x) ...
    pts.push_back({0.5, clearance});
    pts.push_back({0.5, hood_z});
    pts.push_back({hood_end, hood_z + 0.02});
    pts.push_back({roof_start, roof_z});
    pts.push_back({roof_end, roof_z});
    if (cls == VehicleClass::kPickup) {
        pts.push_back({roof_end - 0.04, bed_z});
        pts.push_back({-0.5, bed_z});
    } else {
        pts.push_back({-0.5, tail_z});
    }
    pts.push_back({-0.5, clearance});
    // ... then along the bottom rear-to-front with wheel bulges
    std::vector<geom::Vec2> bottom;
    append_wheel_cut(bottom, front_axle, wheel_r, clearance);
    std::reverse(bottom.begin(), bottom.end());
    std::vector<geom::Vec2> rear_cut;
    append_wheel_cut(rear_cut, rear_axle, wheel_r, clearance);
    std::reverse(rear_cut.begin(), rear_cut.end());
    for (const auto& q : rear_cut) pts.push_back(q);
    for (const auto& q : bottom) pts.push_back(q);
    // pts ends just before closing back to (0.5, clearance)
    return p;
}

double polygon_signed_area(const std::vector<geom::Vec2>& poly) {
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % poly.size()];
        a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * a;
}

bool point_in_triangle_2d(const geom::Vec2& p, const geom::Vec2& a, const geom::Vec2& b,
                          const geom::Vec2& c) {
    const double d1 = (b - a).cross(p - a);
    const double d2 = (c - b).cross(p - b);
    const double d3 = (a - c).cross(p - c);
    const bool has_neg = (d1 < 0) || (d2 < 0) || (d3 < 0);
    const bool has_pos = (d1 > 0) || (d2 > 0) || (d3 > 0);
    return !(has_neg && has_pos);
}

/// Ear-clipping triangulation of a simple CCW polygon; returns index triples.
std::vector<std::array<std::uint32_t, 3>> triangulate(const std::vector<geom::Vec2>& poly) {
    std::vector<std::uint32_t> idx(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) idx[i] = static_cast<std::uint32_t>(i);
    std::vector<std::array<std::uint32_t, 3>> tris;
    int guard = 0;
    while (idx.size() > 3) {
        bool clipped = false;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            const std::uint32_t ia = idx[(i + idx.size() - 1) % idx.size()];
            const std::uint32_t ib = idx[i];
            const std::uint32_t ic = idx[(i + 1) % idx.size()];
            const auto& a = poly[ia];
            const auto& b = poly[ib];
            const auto& c = poly[ic];
            if ((b - a).cross(c - a) <= 1e-14) continue;  // reflex or collinear
            bool contains_other = false;
            for (const std::uint32_t j : idx) {
                if (j == ia || j == ib || j == ic) continue;
                if (point_in_triangle_2d(poly[j], a, b, c)) {
                    contains_other = true;
                    break;
                }
            }
            if (contains_other) continue;
            tris.push_back({ia, ib, ic});
            idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(i));
            clipped = true;
            break;
        }
        if (!clipped) {
            if (++guard > 4) throw std::runtime_error("triangulate: polygon is not simple");
            // tolerate coarse collinearity by clipping the widest convex ear
            double best = -1.0;
            std::size_t best_i = 0;
            for (std::size_t i = 0; i < idx.size(); ++i) {
                const auto& a = poly[idx[(i + idx.size() - 1) % idx.size()]];
                const auto& b = poly[idx[i]];
                const auto& c = poly[idx[(i + 1) % idx.size()]];
                const double cr = (b - a).cross(c - a);
                if (cr > best) {
                    best = cr;
                    best_i = i;
                }
            }
            tris.push_back({idx[(best_i + idx.size() - 1) % idx.size()], idx[best_i],
                            idx[(best_i + 1) % idx.size()]});
            idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(best_i));
        }
    }
    tris.push_back({idx[0], idx[1], idx[2]});
    return tris;
}

}  // namespace

const char* vehicle_class_name(VehicleClass c) {
    switch (c) {
        case VehicleClass::kSedan: return "sedan";
        case VehicleClass::kSuv: return "suv";
        case VehicleClass::kVan: return "van";
        case VehicleClass::kPickup: return "pickup";
    }
    return "sedan";
}

VehicleClass vehicle_class_from_name(const std::string& name) {
    if (name == "sedan") return VehicleClass::kSedan;
    if (name == "suv") return VehicleClass::kSuv;
    if (name == "van") return VehicleClass::kVan;
    if (name == "pickup") return VehicleClass::kPickup;
    throw std::invalid_argument("unknown vehicle class: " + name);
}

TriangleMesh procedural_vehicle(VehicleClass cls, const VehicleDims& dims,
                                std::uint64_t seed) {
    if (dims.length <= 0.0 || dims.width <= 0.0 || dims.height <= 0.0)
        throw std::invalid_argument("procedural_vehicle: dims must be positive");

    Profile profile = vehicle_profile(cls, seed);
    auto& poly = profile.points;
    if (polygon_signed_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());
    const auto cap = triangulate(poly);

    TriangleMesh mesh;
    const std::uint32_t n = static_cast<std::uint32_t>(poly.size());
    // vertices: profile at y=-1/2 then at y=+1/2 (unit width for now)
    for (const auto& q : poly) mesh.vertices.push_back({q.x, -0.5, q.y});
    for (const auto& q : poly) mesh.vertices.push_back({q.x, 0.5, q.y});

    for (const auto& t : cap) {
        mesh.triangles.push_back({t[0], t[2], t[1]});                    // -y cap
        mesh.triangles.push_back({t[0] + n, t[1] + n, t[2] + n});        // +y cap
    }
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::uint32_t j = (i + 1) % n;
        mesh.triangles.push_back({i, j, i + n});
        mesh.triangles.push_back({j, j + n, i + n});
    }

    // rescale to the exact requested dims, center the bounding box
    const geom::Aabb box = mesh.bounds();
    const Vec3 ext = box.extent();
    const Vec3 center = box.center();
    for (auto& v : mesh.vertices) {
        v.x = (v.x - center.x) / ext.x * dims.length;
        v.y = (v.y - center.y) / ext.y * dims.width;
        v.z = (v.z - center.z) / ext.z * dims.height;
    }

    // orient outward (positive enclosed volume)
    double volume6 = 0.0;
    for (const auto& t : mesh.triangles)
        volume6 += mesh.vertices[t[0]].dot(mesh.vertices[t[1]].cross(mesh.vertices[t[2]]));
    if (volume6 < 0.0)
        for (auto& t : mesh.triangles) std::swap(t[1], t[2]);

    mesh.remove_degenerate(1e-12);
    return mesh;
}

std::vector<AssetSpec> default_asset_specs(int count, std::uint64_t seed) {
    std::vector<AssetSpec> specs;
    specs.reserve(count);
    rng::Pcg rng(rng::hash_combine(seed, 0x617373657473ULL));
    const VehicleClass classes[4] = {VehicleClass::kSedan, VehicleClass::kSuv,
                                     VehicleClass::kVan, VehicleClass::kPickup};
    for (int i = 0; i < count; ++i) {
        const VehicleClass cls = classes[i % 4];
        VehicleDims d;
        switch (cls) {
            case VehicleClass::kSedan:
                d = {rng.uniform(4.2, 4.9), rng.uniform(1.70, 1.90), rng.uniform(1.35, 1.50)};
                break;
            case VehicleClass::kSuv:
                d = {rng.uniform(4.4, 5.0), rng.uniform(1.80, 2.00), rng.uniform(1.60, 1.85)};
                break;
            case VehicleClass::kVan:
                d = {rng.uniform(4.8, 5.4), rng.uniform(1.85, 2.05), rng.uniform(1.90, 2.30)};
                break;
            case VehicleClass::kPickup:
                d = {rng.uniform(5.0, 5.8), rng.uniform(1.85, 2.05), rng.uniform(1.75, 1.95)};
                break;
        }
        AssetSpec spec;
        spec.cls = cls;
        spec.dims = d;
        spec.seed = rng.next_u64();
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%s_%02d", vehicle_class_name(cls), i);
        spec.name = buf;
        specs.push_back(spec);
    }
    return specs;
}

}  // namespace advloop::shape
