#ifndef LAGSURF_WINDING_HPP
#define LAGSURF_WINDING_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lagsurf/homology.hpp"
#include "lagsurf/mesh.hpp"

namespace lagsurf {

// Circle-valued vertex data, angles in [0, 2*pi).
struct AngleField {
    const SurfaceMesh* mesh = nullptr;
    std::vector<double> angles;

    std::string to_json() const;
};

// GL+(2,R)-valued vertex data expressed in the vertex frame.
struct MatrixField {
    const SurfaceMesh* mesh = nullptr;
    std::vector<Eigen::Matrix2d> matrices;

    std::string to_json() const;
    std::string digest() const;
};

AngleField make_angle_field(const SurfaceMesh& mesh, std::vector<double> angles);
AngleField angle_field_from_json(const SurfaceMesh& mesh, const std::string& json_text);

MatrixField make_matrix_field(const SurfaceMesh& mesh, std::vector<Eigen::Matrix2d> matrices);
MatrixField matrix_field_from_json(const SurfaceMesh& mesh, const std::string& json_text);

// Per directed edge, the unique lift of the angle difference into (-pi, pi).
// A difference at pi (within 1e-9) is EdgeAliasing; a triangle whose lifted
// increments sum to +-2*pi is TriangleWrap: the mesh cannot resolve the map.
IntegerCocycle lift_edge_increments(const AngleField& field);

CohomologyClass winding_class(const AngleField& field, const CycleBasis& basis);

// Rotation factor of the polar decomposition A = R * P, by Newton iteration
// with the closed 2x2 formula as the fallback for slow convergence.
Eigen::Matrix2d polar_rotation(const Eigen::Matrix2d& m);

AngleField rotation_angle_field(const MatrixField& field);

CohomologyClass matrix_winding_class(const MatrixField& field, const CycleBasis& basis);

// An angle field of the requested winding class, with the increments spread
// by the L2-optimal coboundary so coarse meshes carry as much class as they
// can. Empty when the mesh cannot resolve the class.
std::optional<AngleField> smoothed_angle_field(const SurfaceMesh& mesh,
                                               const CycleBasis& basis,
                                               const std::vector<long long>& w);

// Pure rotation field of the given angle field.
MatrixField rotation_field(const AngleField& angles);

}  // namespace lagsurf

#endif
