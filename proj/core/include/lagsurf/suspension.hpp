#ifndef LAGSURF_SUSPENSION_HPP
#define LAGSURF_SUSPENSION_HPP

#include <string>
#include <vector>

#include "lagsurf/complex3.hpp"
#include "lagsurf/homology.hpp"
#include "lagsurf/mesh.hpp"

namespace lagsurf {

// The identified double cone of the base surface: T-1 interior copies of L
// at times 1/T .. (T-1)/T, prisms between consecutive copies split into
// three tets by the sorted-diagonal rule, both collapsed ends coned to the
// single shared apex vertex.
class SuspensionComplex {
  public:
    const SurfaceMesh& base() const { return *mesh_; }
    int time_steps() const { return T_; }
    int apex() const { return apex_; }
    const SimplicialComplex3& complex() const { return complex_; }

    int slice_vertex(int s, int v) const;  // s in 1..T-1
    int slice_of_vertex(int vertex) const;  // 0 for the apex
    int base_vertex_of(int vertex) const;   // -1 for the apex

    int slice_face(int s, int t) const { return slice_faces_[s - 1][t]; }
    int bottom_cone_face(int e) const { return bottom_cone_faces_[e]; }
    int top_cone_face(int e) const { return top_cone_faces_[e]; }
    int wall_face(int slab, int e, int which) const {
        return wall_faces_[slab - 1][2 * e + which];
    }

    std::string to_json() const;

  private:
    friend SuspensionComplex build_suspension(const SurfaceMesh& mesh, int T);

    const SurfaceMesh* mesh_ = nullptr;
    int T_ = 0;
    int apex_ = 0;
    SimplicialComplex3 complex_;
    std::vector<std::vector<int>> slice_faces_;   // [s-1][triangle]
    std::vector<std::vector<int>> wall_faces_;    // [slab-1][2*edge + which]
    std::vector<int> bottom_cone_faces_;          // [edge]
    std::vector<int> top_cone_faces_;             // [edge]
};

SuspensionComplex build_suspension(const SurfaceMesh& mesh, int T);

struct HomologyProfile {
    std::array<int, 3> ranks{};                       // b1, b2, b3
    std::array<std::vector<long long>, 3> torsion{};  // per degree

    std::string to_json() const;
};

HomologyProfile homology_profile(const SuspensionComplex& x);

// One integer 2-cycle per basis 1-cycle: the chain swept across all slices,
// coned to the apex at both ends. Boundaries are verified to vanish and the
// classes are verified to form a Z-basis of H2.
std::vector<std::vector<long long>> basis_2cycles(const SuspensionComplex& x,
                                                  const CycleBasis& basis);

}  // namespace lagsurf

#endif
