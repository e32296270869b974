#ifndef LAGSURF_CLASSIFIER_HPP
#define LAGSURF_CLASSIFIER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lagsurf/forms.hpp"
#include "lagsurf/suspension.hpp"

namespace lagsurf {

// PL map from the double cone to the 2-sphere: one unit vector per complex
// vertex, linear interpolation and radial projection on each simplex.
struct SphereMapData {
    const SuspensionComplex* x = nullptr;
    std::vector<Eigen::Vector3d> vectors;
    bool boundary_conditioned = false;

    std::string to_json() const;
    std::string digest() const;
};

SphereMapData make_sphere_map(const SuspensionComplex& x,
                              std::vector<Eigen::Vector3d> vectors,
                              bool boundary_conditioned);
SphereMapData sphere_map_from_json(const SuspensionComplex& x, const std::string& json_text);

// Classification data of a map X -> S^2: the pullback class against the
// basis 2-cycles, its gcd, and the Hopf degree (reduced mod n when n > 0,
// absolute when the class vanishes).
struct NInvariant {
    std::vector<long long> c;
    long long n = 0;
    long long d = 0;
    long long d_raw = 0;

    std::string to_json() const;
};

// Coordinates of J in the orthonormal frame of self-dual 2-form space built
// from (j_ref, j_plus, j_plus * j_ref) by Gram-Schmidt; j_ref maps to the
// north pole (0,0,1) and an exactly equal j_plus to (1,0,0).
Eigen::Vector3d s2_coordinates(const Eigen::Matrix4d& j, const Eigen::Matrix4d& j_ref,
                               const Eigen::Matrix4d& j_plus);

// Signed count of 2-cells of each cycle whose PL image covers a regular
// value; two independent regular values must agree exactly.
std::vector<long long> chern_class(const SphereMapData& f,
                                   const std::vector<std::vector<long long>>& cycles2);

struct PreimageCycle {
    int loop_count = 0;
    int segment_count = 0;  // one segment per crossed tet
    // (tet, entry face, exit face) per segment, in deterministic order.
    std::vector<std::array<int, 3>> segments;
};

// PL preimage of the ray through p, as closed polygonal loops through the
// crossed tets; crossing points exist exactly (rational arithmetic) and the
// assembled cycle has zero boundary by construction.
PreimageCycle preimage_cycle(const SphereMapData& f, const Eigen::Vector3d& p);

// Linking number of the preimages of two regular values: an exact integer
// 2-chain bounding one preimage in the crossing-refined complex, intersected
// with the other preimage. Reduced into [0, n) when n > 0.
long long hopf_degree(const SphereMapData& f, const std::vector<long long>& c);

NInvariant classify(const SphereMapData& f, const CycleBasis& basis);

// Generic engines used by the wrappers above and by refinement tests: any
// coherently oriented closed complex with per-vertex unit values.
std::vector<long long> chern_on_complex(const SimplicialComplex3& complex,
                                        const std::vector<Eigen::Vector3d>& values,
                                        const std::vector<std::vector<long long>>& chains,
                                        std::uint64_t seed);
std::pair<long long, long long> hopf_on_complex(const SimplicialComplex3& complex,
                                                const std::vector<Eigen::Vector3d>& values,
                                                long long n, std::uint64_t seed);

// Time-sliced isotopy data pulled back to the base mesh: one Lagrangian form
// and one zero-section-symplectic form per slice, plus a reference metric.
struct IsotopyPath {
    const SurfaceMesh* mesh = nullptr;
    std::vector<ZeroSectionFormField> omegas;
    std::vector<ZeroSectionFormField> omega_plus;
    MetricField metric;
};

IsotopyPath isotopy_path_from_json(const SurfaceMesh& mesh, const std::string& json_text,
                                   const FormTolerances& tol = {});

// Boundary slices must reproduce the reference structure of the initial
// slice to 1e-9; the classification of the induced sphere map is the
// invariant of the discretized isotopy.
NInvariant n_invariant(const IsotopyPath& path);

}  // namespace lagsurf

#endif
