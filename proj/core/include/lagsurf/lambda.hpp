#ifndef LAGSURF_LAMBDA_HPP
#define LAGSURF_LAMBDA_HPP

#include <string>
#include <utility>
#include <vector>

#include "lagsurf/forms.hpp"
#include "lagsurf/homology.hpp"
#include "lagsurf/mesh.hpp"

namespace lagsurf {

struct LambdaReport {
    std::vector<long long> class_vector;  // 2g pairings
    long long lambda = 0;
    std::string basis_digest;
    std::string frame_digest;
    std::vector<std::pair<std::string, std::string>> input_digests;  // (label, sha256)

    std::string to_json() const;
};

// Multiplicity of the winding class of the relative automorphism of the two
// forms. Genus 0 short-circuits to 0 without computing windings.
LambdaReport lambda(const SurfaceMesh& mesh, const ZeroSectionFormField& primed,
                    const ZeroSectionFormField& base);

// Alias with the diffeomorphism-pair reading of the inputs: omega1 is the
// pullback form of the pair, omega the ambient one.
LambdaReport lambda_pair(const SurfaceMesh& mesh, const ZeroSectionFormField& omega1,
                         const ZeroSectionFormField& omega);

// Absolute invariant of a genus-1 mesh: the winding class of the form's own
// tangent-to-cotangent block in the fixed global frame.
LambdaReport lambda_absolute_torus(const SurfaceMesh& mesh,
                                   const ZeroSectionFormField& field);

}  // namespace lagsurf

#endif
