#include "lagsurf/forms.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "lagsurf/errors.hpp"

namespace lagsurf {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kBlockDegeneracy = 1e-12;
constexpr double kStructureTolerance = 1e-9;

void require_same_mesh(const ZeroSectionFormField& a, const ZeroSectionFormField& b) {
    if (a.mesh->digest() != b.mesh->digest())
        fail(ErrorKind::MeshMismatch, "form fields live on different meshes");
}

}  // namespace

double pfaffian4(const Eigen::Matrix4d& m) {
    return m(0, 2) * m(1, 3) - m(0, 3) * m(1, 2) - m(0, 1) * m(2, 3);
}

std::string ZeroSectionFormField::to_json() const {
    Json doc;
    Json list = Json::array();
    for (const auto& m : omegas) {
        Json entry = Json::array();
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) entry.push_back(m(i, j));
        list.push_back(std::move(entry));
    }
    doc["omega"] = std::move(list);
    return doc.dump();
}

std::string ZeroSectionFormField::digest() const { return sha256_hex(to_json()); }

ZeroSectionFormField make_form_field(const SurfaceMesh& mesh,
                                     std::vector<Eigen::Matrix4d> omegas,
                                     const FormTolerances& tol,
                                     bool require_lagrangian) {
    if (static_cast<int>(omegas.size()) != mesh.vertex_count())
        fail(ErrorKind::SchemaError, "form matrix count does not match vertex count");
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        const Eigen::Matrix4d& m = omegas[v];
        if (!m.allFinite())
            fail(ErrorKind::InvalidFormField,
                 "form at vertex " + std::to_string(v) + " has non-finite entries");
        if ((m + m.transpose()).cwiseAbs().maxCoeff() > tol.antisym)
            fail(ErrorKind::InvalidFormField,
                 "form at vertex " + std::to_string(v) + " is not antisymmetric to " +
                     std::to_string(tol.antisym));
        double pf = pfaffian4(m);
        if (pf == 0.0)
            fail(ErrorKind::NondegeneracyFailure,
                 "form at vertex " + std::to_string(v) + " is degenerate");
        if (pf < 0.0)
            fail(ErrorKind::InvalidFormField,
                 "form at vertex " + std::to_string(v) +
                     " has negative Pfaffian; the square is not a positive volume form");
        if (require_lagrangian &&
            std::abs(m(0, 1)) > tol.lagrangian)
            fail(ErrorKind::InvalidFormField,
                 "zero section is not Lagrangian at vertex " + std::to_string(v) +
                     ": tangent block entry " + std::to_string(m(0, 1)));
    }
    ZeroSectionFormField field;
    field.mesh = &mesh;
    field.omegas = std::move(omegas);
    field.lagrangian = require_lagrangian;
    return field;
}

ZeroSectionFormField form_field_from_json(const SurfaceMesh& mesh,
                                          const std::string& json_text,
                                          const FormTolerances& tol,
                                          bool require_lagrangian) {
    Json doc;
    try {
        doc = Json::parse(json_text);
    } catch (const std::exception& e) {
        fail(ErrorKind::SchemaError, std::string("form field is not valid JSON: ") + e.what());
    }
    if (!doc.contains("omega") || !doc["omega"].is_array())
        fail(ErrorKind::SchemaError, "form field lacks an \"omega\" array");
    std::vector<Eigen::Matrix4d> omegas;
    for (const auto& entry : doc["omega"]) {
        if (!entry.is_array() || entry.size() != 16)
            fail(ErrorKind::SchemaError, "each form entry must hold 16 numbers (row-major 4x4)");
        Eigen::Matrix4d m;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) m(i, j) = entry[4 * i + j].get<double>();
        omegas.push_back(m);
    }
    return make_form_field(mesh, std::move(omegas), tol, require_lagrangian);
}

ZeroSectionFormField canonical_field(const SurfaceMesh& mesh) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 2) = 1.0;
    m(2, 0) = -1.0;
    m(1, 3) = 1.0;
    m(3, 1) = -1.0;
    return make_form_field(mesh, std::vector<Eigen::Matrix4d>(mesh.vertex_count(), m));
}

Eigen::Matrix2d omega_block(const ZeroSectionFormField& field, int vertex) {
    const Eigen::Matrix4d& m = field.omegas[vertex];
    Eigen::Matrix2d block = m.block<2, 2>(0, 2);
    if (std::abs(block.determinant()) < kBlockDegeneracy)
        fail(ErrorKind::DegenerateBlock,
             "zero section fails transversality at vertex " + std::to_string(vertex));
    return block;
}

MatrixField relative_automorphism(const ZeroSectionFormField& primed,
                                  const ZeroSectionFormField& base) {
    require_same_mesh(primed, base);
    const SurfaceMesh& mesh = *base.mesh;
    std::vector<Eigen::Matrix2d> matrices;
    matrices.reserve(mesh.vertex_count());
    for (int v = 0; v < mesh.vertex_count(); ++v)
        matrices.push_back(omega_block(primed, v) * omega_block(base, v).inverse());
    return make_matrix_field(mesh, std::move(matrices));
}

ZeroSectionFormField realize_from_automorphism(const MatrixField& rho) {
    const SurfaceMesh& mesh = *rho.mesh;
    std::vector<Eigen::Matrix4d> omegas;
    omegas.reserve(mesh.vertex_count());
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        const Eigen::Matrix2d& r = rho.matrices[v];
        if (!(r.determinant() > 0.0))
            fail(ErrorKind::SingularMatrix,
                 "automorphism at vertex " + std::to_string(v) + " is not orientation-preserving");
        Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
        m.block<2, 2>(0, 2) = r;
        m.block<2, 2>(2, 0) = -r.transpose();
        omegas.push_back(m);
    }
    return make_form_field(mesh, std::move(omegas));
}

MetricField identity_metric(const SurfaceMesh& mesh) {
    return MetricField(mesh.vertex_count(), Eigen::Matrix4d::Identity());
}

CompatibleJ compatible_skad_j(const MetricField& metric, const ZeroSectionFormField& field) {
    const SurfaceMesh& mesh = *field.mesh;
    if (static_cast<int>(metric.size()) != mesh.vertex_count())
        fail(ErrorKind::SchemaError, "metric count does not match vertex count");

    CompatibleJ out;
    out.mesh = &mesh;
    out.j.reserve(mesh.vertex_count());

    for (int v = 0; v < mesh.vertex_count(); ++v) {
        const Eigen::Matrix4d& g = metric[v];
        if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12)
            fail(ErrorKind::NotSPD, "metric at vertex " + std::to_string(v) + " is not symmetric");
        Eigen::LLT<Eigen::Matrix4d> llt(g);
        if (llt.info() != Eigen::Success)
            fail(ErrorKind::NotSPD,
                 "metric at vertex " + std::to_string(v) + " is not positive definite");
        Eigen::Matrix4d l = llt.matrixL();
        // Basis change P = L^-T turns g into the identity.
        Eigen::Matrix4d p = l.transpose().inverse();
        Eigen::Matrix4d m_on = p.transpose() * field.omegas[v] * p;

        // Index-raised form matrix in the orthonormal frame; the sign makes
        // omega(., J.) positive definite.
        Eigen::Matrix4d a = -m_on;
        Eigen::Matrix4d ata = a.transpose() * a;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eigen(ata);
        if (eigen.info() != Eigen::Success || eigen.eigenvalues().minCoeff() <= 0.0)
            fail(ErrorKind::NondegeneracyFailure,
                 "form at vertex " + std::to_string(v) + " is degenerate for this metric");
        Eigen::Vector4d inv_sqrt = eigen.eigenvalues().cwiseSqrt().cwiseInverse();
        Eigen::Matrix4d root_inv =
            eigen.eigenvectors() * inv_sqrt.asDiagonal() * eigen.eigenvectors().transpose();
        Eigen::Matrix4d j_on = a * root_inv;

        if ((j_on * j_on + Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() >
            kStructureTolerance)
            fail(ErrorKind::InternalError, "polar factor is not a complex structure");
        if ((j_on + j_on.transpose()).cwiseAbs().maxCoeff() > kStructureTolerance)
            fail(ErrorKind::InternalError, "polar factor is not skew-adjoint");
        Eigen::Matrix4d compat = 0.5 * (m_on * j_on + (m_on * j_on).transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> check(compat);
        if (check.eigenvalues().minCoeff() <= 0.0)
            fail(ErrorKind::InternalError, "compatibility form is not positive definite");

        out.j.push_back(p * j_on * p.inverse());
    }
    return out;
}

ZeroSectionFormField symplectic_plus_field(const SurfaceMesh& mesh) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    // Tangent block is the area form; the cotangent block's sign keeps the
    // Pfaffian positive.
    m(0, 1) = 1.0;
    m(1, 0) = -1.0;
    m(2, 3) = -1.0;
    m(3, 2) = 1.0;
    return make_form_field(mesh, std::vector<Eigen::Matrix4d>(mesh.vertex_count(), m), {},
                           /*require_lagrangian=*/false);
}

}  // namespace lagsurf
