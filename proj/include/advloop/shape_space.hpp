#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "advloop/geometry.hpp"
#include "advloop/sdf.hpp"

namespace advloop::shape {

/// PCA basis over flattened SDF volumes: mean, top-K orthonormal
/// components, and the per-dimension latent range observed on the
/// training set. canonical_scale maps unit-cube coordinates back to
/// meters.
class ShapeBasis {
public:
    ShapeBasis() = default;

    int component_count() const { return static_cast<int>(latent_lo_.size()); }
    int resolution() const { return resolution_; }
    double extent() const { return extent_; }
    double canonical_scale() const { return canonical_scale_; }
    const std::vector<double>& mean() const { return mean_; }
    /// Row-major |L| x K.
    const std::vector<double>& components() const { return components_; }
    const std::vector<double>& latent_lo() const { return latent_lo_; }
    const std::vector<double>& latent_hi() const { return latent_hi_; }
    const std::vector<double>& explained_variance() const { return explained_variance_; }

    /// z = W^T (phi - mu).
    std::vector<double> encode(const SdfVolume& volume) const;

    /// phi = W z + mu as a volume (no marching cubes).
    SdfVolume reconstruct(const std::vector<double>& z) const;

    /// Latent range midpoint check helpers.
    std::vector<double> latent_from_unit(const std::vector<double>& unit) const;

    void save(const std::string& path) const;
    static ShapeBasis load(const std::string& path);

    static ShapeBasis fit(const std::vector<SdfVolume>& volumes, int k,
                          double canonical_scale);

private:
    int resolution_ = 0;
    double extent_ = 1.0;
    double canonical_scale_ = 1.0;
    std::vector<double> mean_;
    std::vector<double> components_;  // row-major |L| x K
    std::vector<double> latent_lo_;
    std::vector<double> latent_hi_;
    std::vector<double> explained_variance_;
};

/// Unit-interval code driving decode: first K entries map affinely onto
/// [latent_lo, latent_hi], the last two map onto width/length scale
/// factors in [0.8, 1.3].
struct LatentCode {
    std::vector<double> u;

    static constexpr double kScaleMin = 0.8;
    static constexpr double kScaleMax = 1.3;

    void validate(int k) const;
    double width_scale() const { return kScaleMin + u[u.size() - 2] * (kScaleMax - kScaleMin); }
    double length_scale() const { return kScaleMin + u[u.size() - 1] * (kScaleMax - kScaleMin); }
};

/// MarchingCubes(W z + mu) rescaled to meters and stretched along the
/// width (y) and length (x) axes. Throws std::domain_error("empty shape...")
/// when the reconstructed field has no zero crossing.
geom::TriangleMesh decode(const LatentCode& code, const ShapeBasis& basis);

/// Moves each vertex by clamp(delta, -bound, +bound) componentwise.
geom::TriangleMesh vertex_deform(const geom::TriangleMesh& base,
                                 const std::vector<geom::Vec3>& deltas, double bound);

enum class VehicleClass { kSedan, kSuv, kVan, kPickup };

const char* vehicle_class_name(VehicleClass c);
VehicleClass vehicle_class_from_name(const std::string& name);

struct VehicleDims {
    double length = 4.5;
    double width = 1.8;
    double height = 1.4;
};

/// Deterministic watertight vehicle mesh in the canonical frame: extruded
/// side profile (body + cabin + wheel arches) with the exact requested
/// bounding box.
geom::TriangleMesh procedural_vehicle(VehicleClass cls, const VehicleDims& dims,
                                      std::uint64_t seed);

/// Default asset library: `count` vehicles cycled over the four classes
/// with class-plausible dimension jitter, deterministic per seed.
struct AssetSpec {
    VehicleClass cls;
    VehicleDims dims;
    std::uint64_t seed;
    std::string name;
};
std::vector<AssetSpec> default_asset_specs(int count, std::uint64_t seed);

}  // namespace advloop::shape
