#ifndef LAGSURF_FORMS_HPP
#define LAGSURF_FORMS_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lagsurf/mesh.hpp"
#include "lagsurf/winding.hpp"

namespace lagsurf {

struct FormTolerances {
    double antisym = 1e-12;
    double lagrangian = 1e-12;
};

// Symplectic 2-form along the zero section of T*L, one antisymmetric 4x4
// matrix per vertex in the splitting basis (e1, e2, e^1, e^2): rows/columns
// 0,1 are the orthonormalized tangent frame, 2,3 the dual frame. The
// Pfaffian convention is fixed by the orientation in which the canonical
// form squares positively:
//     pf(M) = M(0,2)*M(1,3) - M(0,3)*M(1,2) - M(0,1)*M(2,3),
// so pf = det(tangent-to-cotangent block) for Lagrangian fields.
struct ZeroSectionFormField {
    const SurfaceMesh* mesh = nullptr;
    std::vector<Eigen::Matrix4d> omegas;
    bool lagrangian = true;  // whether the zero-section block was checked

    std::string to_json() const;
    std::string digest() const;
};

// Per-vertex almost complex structure, skew-adjoint for the chosen metric.
struct CompatibleJ {
    const SurfaceMesh* mesh = nullptr;
    std::vector<Eigen::Matrix4d> j;
};

double pfaffian4(const Eigen::Matrix4d& m);

ZeroSectionFormField make_form_field(const SurfaceMesh& mesh,
                                     std::vector<Eigen::Matrix4d> omegas,
                                     const FormTolerances& tol = {},
                                     bool require_lagrangian = true);

ZeroSectionFormField form_field_from_json(const SurfaceMesh& mesh,
                                          const std::string& json_text,
                                          const FormTolerances& tol = {},
                                          bool require_lagrangian = true);

// The discrete canonical form: zero diagonal blocks, identity off-diagonal
// blocks with the sign fixed so the Pfaffian is +1.
ZeroSectionFormField canonical_field(const SurfaceMesh& mesh);

// The tangent-to-cotangent block of the form at a vertex,
// B(i,j) = omega(frame_i, dual_frame_j).
Eigen::Matrix2d omega_block(const ZeroSectionFormField& field, int vertex);

// Per-vertex product B' * B^-1, the fiber automorphism comparing the two
// forms; positive determinant is guaranteed by matching Pfaffian signs.
MatrixField relative_automorphism(const ZeroSectionFormField& primed,
                                  const ZeroSectionFormField& base);

// Evaluation of -d(rho(y) o dpi) at the zero section: the fiber-derivative
// terms vanish at y = 0, leaving the block matrix [[0, R], [-R^T, 0]].
// relative_automorphism(realize_from_automorphism(rho), canonical_field)
// recovers rho exactly, so the winding class round-trips with sign +1.
ZeroSectionFormField realize_from_automorphism(const MatrixField& rho);

using MetricField = std::vector<Eigen::Matrix4d>;

MetricField identity_metric(const SurfaceMesh& mesh);

// Unique metric-skew-adjoint compatible almost complex structure of a
// nondegenerate form: J = A (A^T A)^{-1/2} for the index-raised form matrix
// A in a metric-orthonormal frame. Accepts non-Lagrangian fields.
CompatibleJ compatible_skad_j(const MetricField& metric, const ZeroSectionFormField& field);

// Field whose tangent block is the area form, making the zero section
// symplectic; input for the second trivialization section.
ZeroSectionFormField symplectic_plus_field(const SurfaceMesh& mesh);

}  // namespace lagsurf

#endif
