#ifndef LAGSURF_MESH_HPP
#define LAGSURF_MESH_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lagsurf/util.hpp"

namespace lagsurf {

// Ordered pair of independent tangent vectors at a vertex. The frame fixes
// the trivialization in which 2x2 matrix fields and 4x4 form fields are
// expressed, so it is stored explicitly and never recomputed per query.
struct Frame {
    Eigen::Vector3d f1;
    Eigen::Vector3d f2;
};

struct MeshStatistics {
    int vertex_count = 0;
    int edge_count = 0;
    int triangle_count = 0;
    int genus = 0;
    bool orientable = true;
};

// Integer lattice parametrization carried by grid-torus fixtures; needed by
// winding fixtures and by the absolute torus invariant.
struct LatticeInfo {
    int n = 0;                                // grid is n x n
    std::vector<std::array<int, 2>> coords;   // (i, j) per vertex
};

// A validated triangulated closed oriented connected surface. Immutable
// after construction; all queries are const and safe to call concurrently.
class SurfaceMesh {
  public:
    int vertex_count() const { return static_cast<int>(points_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int triangle_count() const { return static_cast<int>(triangles_.size()); }
    int genus() const { return genus_; }

    const Eigen::Vector3d& point(int v) const { return points_[v]; }
    const std::array<Rational, 3>& exact_point(int v) const { return exact_points_[v]; }
    const std::array<int, 3>& triangle(int t) const { return triangles_[t]; }
    const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }

    // Edges are stored once with canonical direction tail < head.
    const std::array<int, 2>& edge(int e) const { return edges_[e]; }
    const std::vector<std::array<int, 2>>& edges() const { return edges_; }
    int edge_index(int u, int v) const;  // -1 when absent
    const std::array<int, 2>& edge_triangles(int e) const { return edge_triangles_[e]; }
    const std::array<int, 3>& triangle_edge_ids(int t) const { return triangle_edges_[t]; }
    const std::vector<int>& vertex_edges(int v) const { return vertex_edges_[v]; }

    // Frame as supplied (or constructed), and its Gram-Schmidt
    // orthonormalization. Form fields are expressed in the orthonormal frame.
    const Frame& frame(int v) const { return frames_[v]; }
    const Frame& orthonormal_frame(int v) const { return onframes_[v]; }

    const std::optional<LatticeInfo>& lattice() const { return lattice_; }

    MeshStatistics statistics() const;

    // Digest of the canonical serialization; used for mesh-identity checks
    // between dependent objects and embedded in reports.
    const std::string& digest() const { return digest_; }
    std::string frame_digest() const;

    std::string to_json() const;

  private:
    friend SurfaceMesh build_mesh_internal(std::vector<std::array<Rational, 3>> exact,
                                           std::vector<Eigen::Vector3d> points,
                                           std::vector<std::array<int, 3>> triangles,
                                           std::optional<std::vector<Frame>> frames,
                                           std::optional<LatticeInfo> lattice);

    std::vector<Eigen::Vector3d> points_;
    std::vector<std::array<Rational, 3>> exact_points_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<std::array<int, 2>> edges_;
    std::vector<std::array<int, 2>> edge_triangles_;
    std::vector<std::array<int, 3>> triangle_edges_;
    std::vector<std::vector<int>> vertex_edges_;
    std::vector<Frame> frames_;
    std::vector<Frame> onframes_;
    std::optional<LatticeInfo> lattice_;
    int genus_ = 0;
    std::string digest_;
};

SurfaceMesh build_mesh(const std::vector<Eigen::Vector3d>& vertices,
                       const std::vector<std::array<int, 3>>& triangles,
                       std::optional<std::vector<Frame>> frames = std::nullopt);

SurfaceMesh build_mesh(const std::vector<std::array<Rational, 3>>& vertices,
                       const std::vector<std::array<int, 3>>& triangles,
                       std::optional<std::vector<Frame>> frames = std::nullopt);

int genus(const SurfaceMesh& mesh);

enum class FixtureKind { Sphere, Torus, Genus2 };

// Deterministic fixture meshes. The torus carries the integer lattice
// parametrization and grid-aligned frames; sphere and genus-2 use the
// default projected frames.
SurfaceMesh standard_fixture(FixtureKind kind, int resolution);

SurfaceMesh mesh_from_json(const std::string& json_text);

}  // namespace lagsurf

#endif
