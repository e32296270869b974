#include "lagsurf/lambda.hpp"

#include <nlohmann/json.hpp>

#include "lagsurf/errors.hpp"
#include "lagsurf/winding.hpp"

namespace lagsurf {

namespace {

using Json = nlohmann::ordered_json;

LambdaReport report_for_class(const SurfaceMesh& mesh, const CycleBasis* basis,
                              std::vector<long long> class_vector,
                              std::vector<std::pair<std::string, std::string>> digests) {
    LambdaReport report;
    report.lambda = multiplicity(class_vector);
    report.class_vector = std::move(class_vector);
    report.basis_digest = basis ? basis->digest() : std::string();
    report.frame_digest = mesh.frame_digest();
    report.input_digests = std::move(digests);
    return report;
}

}  // namespace

std::string LambdaReport::to_json() const {
    Json doc;
    doc["class"] = class_vector;
    doc["lambda"] = lambda;
    doc["basis"] = basis_digest;
    doc["frame"] = frame_digest;
    Json inputs = Json::object();
    for (const auto& [label, digest] : input_digests) inputs[label] = digest;
    doc["inputs"] = std::move(inputs);
    return doc.dump();
}

LambdaReport lambda(const SurfaceMesh& mesh, const ZeroSectionFormField& primed,
                    const ZeroSectionFormField& base) {
    if (primed.mesh->digest() != mesh.digest() || base.mesh->digest() != mesh.digest())
        fail(ErrorKind::MeshMismatch, "form fields do not belong to the given mesh");
    if (!primed.lagrangian || !base.lagrangian)
        fail(ErrorKind::InvalidFormField,
             "lambda requires the Lagrangian zero-section condition for both forms");

    std::vector<std::pair<std::string, std::string>> digests = {
        {"mesh", mesh.digest()},
        {"omega_prime", primed.digest()},
        {"omega", base.digest()},
    };

    if (mesh.genus() == 0)
        return report_for_class(mesh, nullptr, {}, std::move(digests));

    CycleBasis basis = homology_basis(mesh);
    MatrixField relative = relative_automorphism(primed, base);
    CohomologyClass cls = matrix_winding_class(relative, basis);
    return report_for_class(mesh, &basis, std::move(cls.pairings), std::move(digests));
}

LambdaReport lambda_pair(const SurfaceMesh& mesh, const ZeroSectionFormField& omega1,
                         const ZeroSectionFormField& omega) {
    LambdaReport report = lambda(mesh, omega1, omega);
    report.input_digests[1].first = "omega_pullback";
    report.input_digests[2].first = "omega_ambient";
    return report;
}

LambdaReport lambda_absolute_torus(const SurfaceMesh& mesh,
                                   const ZeroSectionFormField& field) {
    if (mesh.genus() != 1)
        fail(ErrorKind::WrongGenus, "the absolute invariant is defined for genus 1, got genus " +
                                        std::to_string(mesh.genus()));
    if (field.mesh->digest() != mesh.digest())
        fail(ErrorKind::MeshMismatch, "form field does not belong to the given mesh");

    // The stored frames fix the trivializations of both bundles; the class
    // is the winding of the form's own block against that trivialization.
    std::vector<Eigen::Matrix2d> blocks;
    blocks.reserve(mesh.vertex_count());
    for (int v = 0; v < mesh.vertex_count(); ++v) blocks.push_back(omega_block(field, v));
    MatrixField block_field = make_matrix_field(mesh, std::move(blocks));

    CycleBasis basis = homology_basis(mesh);
    CohomologyClass cls = matrix_winding_class(block_field, basis);
    return report_for_class(mesh, &basis, std::move(cls.pairings),
                            {{"mesh", mesh.digest()}, {"omega", field.digest()}});
}

}  // namespace lagsurf
