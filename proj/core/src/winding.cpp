#include "lagsurf/winding.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "lagsurf/errors.hpp"

namespace lagsurf {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kLiftTieTolerance = 1e-9;
constexpr double kIntegralityTolerance = 1e-6;
constexpr double kTriangleClosureTolerance = 1e-9;
constexpr double kConditionLimit = 1e12;

double condition_number_2x2(const Eigen::Matrix2d& m) {
    double t = m.squaredNorm();
    double d = m.determinant();
    double disc = t * t - 4.0 * d * d;
    if (disc < 0.0) disc = 0.0;
    double smax2 = 0.5 * (t + std::sqrt(disc));
    double smin2 = 0.5 * (t - std::sqrt(disc));
    if (smin2 <= 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(smax2 / smin2);
}

void require_invertible(const Eigen::Matrix2d& m, int vertex) {
    double det = m.determinant();
    if (!(det > 0.0))
        fail(ErrorKind::SingularMatrix,
             "matrix at vertex " + std::to_string(vertex) + " has determinant " +
                 std::to_string(det) + " <= 0");
    if (condition_number_2x2(m) > kConditionLimit)
        fail(ErrorKind::SingularMatrix,
             "matrix at vertex " + std::to_string(vertex) + " is numerically singular");
}

}  // namespace

std::string AngleField::to_json() const {
    Json doc;
    doc["angles"] = angles;
    return doc.dump();
}

std::string MatrixField::to_json() const {
    Json doc;
    Json list = Json::array();
    for (const auto& m : matrices)
        list.push_back(Json::array({Json::array({m(0, 0), m(0, 1)}),
                                    Json::array({m(1, 0), m(1, 1)})}));
    doc["matrices"] = std::move(list);
    return doc.dump();
}

std::string MatrixField::digest() const { return sha256_hex(to_json()); }

AngleField make_angle_field(const SurfaceMesh& mesh, std::vector<double> angles) {
    if (static_cast<int>(angles.size()) != mesh.vertex_count())
        fail(ErrorKind::SchemaError, "angle count does not match vertex count");
    for (double a : angles)
        if (!std::isfinite(a) || a < 0.0 || a >= kTwoPi)
            fail(ErrorKind::SchemaError, "angles must lie in [0, 2*pi)");
    return AngleField{&mesh, std::move(angles)};
}

AngleField angle_field_from_json(const SurfaceMesh& mesh, const std::string& json_text) {
    Json doc;
    try {
        doc = Json::parse(json_text);
    } catch (const std::exception& e) {
        fail(ErrorKind::SchemaError, std::string("angle field is not valid JSON: ") + e.what());
    }
    if (!doc.contains("angles") || !doc["angles"].is_array())
        fail(ErrorKind::SchemaError, "angle field lacks an \"angles\" array");
    return make_angle_field(mesh, doc["angles"].get<std::vector<double>>());
}

MatrixField make_matrix_field(const SurfaceMesh& mesh, std::vector<Eigen::Matrix2d> matrices) {
    if (static_cast<int>(matrices.size()) != mesh.vertex_count())
        fail(ErrorKind::SchemaError, "matrix count does not match vertex count");
    for (int v = 0; v < mesh.vertex_count(); ++v) require_invertible(matrices[v], v);
    return MatrixField{&mesh, std::move(matrices)};
}

MatrixField matrix_field_from_json(const SurfaceMesh& mesh, const std::string& json_text) {
    Json doc;
    try {
        doc = Json::parse(json_text);
    } catch (const std::exception& e) {
        fail(ErrorKind::SchemaError, std::string("matrix field is not valid JSON: ") + e.what());
    }
    if (!doc.contains("matrices") || !doc["matrices"].is_array())
        fail(ErrorKind::SchemaError, "matrix field lacks a \"matrices\" array");
    std::vector<Eigen::Matrix2d> matrices;
    for (const auto& entry : doc["matrices"]) {
        if (!entry.is_array() || entry.size() != 2 || entry[0].size() != 2 ||
            entry[1].size() != 2)
            fail(ErrorKind::SchemaError, "each matrix must be a 2x2 array");
        Eigen::Matrix2d m;
        m << entry[0][0].get<double>(), entry[0][1].get<double>(),
            entry[1][0].get<double>(), entry[1][1].get<double>();
        matrices.push_back(m);
    }
    return make_matrix_field(mesh, std::move(matrices));
}

IntegerCocycle lift_edge_increments(const AngleField& field) {
    const SurfaceMesh& mesh = *field.mesh;
    IntegerCocycle cocycle;
    cocycle.mesh = &mesh;
    cocycle.values.assign(mesh.edge_count(), 0.0);

    for (int e = 0; e < mesh.edge_count(); ++e) {
        int u = mesh.edge(e)[0], v = mesh.edge(e)[1];
        double delta = field.angles[v] - field.angles[u];
        double lift = std::remainder(delta, kTwoPi);  // in [-pi, pi]
        if (std::abs(std::abs(lift) - std::numbers::pi) < kLiftTieTolerance)
            fail(ErrorKind::EdgeAliasing,
                 "angle difference along edge (" + std::to_string(u) + "," +
                     std::to_string(v) + ") has no lift strictly inside (-pi, pi)");
        cocycle.values[e] = lift;
    }

    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangle(t);
        double sum = 0.0;
        for (int k = 0; k < 3; ++k) {
            int a = tri[k], b = tri[(k + 1) % 3];
            int e = mesh.triangle_edge_ids(t)[k];
            sum += (a < b) ? cocycle.values[e] : -cocycle.values[e];
        }
        double wraps = sum / kTwoPi;
        double nearest = std::round(wraps);
        if (std::abs(wraps - nearest) > kTriangleClosureTolerance)
            fail(ErrorKind::InternalError,
                 "triangle lift sum " + std::to_string(sum) + " is not a multiple of 2*pi");
        if (nearest != 0.0)
            fail(ErrorKind::TriangleWrap,
                 "triangle " + std::to_string(t) +
                     " wraps the circle; the mesh cannot resolve this field");
    }
    return cocycle;
}

CohomologyClass winding_class(const AngleField& field, const CycleBasis& basis) {
    IntegerCocycle lifted = lift_edge_increments(field);
    CohomologyClass cls;
    cls.basis = &basis;
    cls.pairings.reserve(basis.rank());
    for (int i = 0; i < basis.rank(); ++i) {
        double winding = pair(lifted, basis.cycle(i)) / kTwoPi;
        double nearest = std::round(winding);
        if (std::abs(winding - nearest) >=
            kIntegralityTolerance * std::max(1.0, std::abs(winding)))
            fail(ErrorKind::NotIntegral,
                 "winding " + std::to_string(winding) + " on basis cycle " +
                     std::to_string(i) + " is not an integer within tolerance");
        cls.pairings.push_back(static_cast<long long>(nearest));
    }
    return cls;
}

Eigen::Matrix2d polar_rotation(const Eigen::Matrix2d& m) {
    // Newton iteration X <- (X + X^-T)/2 converges quadratically to the
    // orthogonal polar factor for det > 0.
    Eigen::Matrix2d x = m;
    for (int iter = 0; iter < 100; ++iter) {
        Eigen::Matrix2d next = 0.5 * (x + x.inverse().transpose());
        double step = (next - x).norm();
        x = next;
        if (step < 1e-14) {
            // One symmetric cleanup multiply keeps the result orthogonal to
            // machine precision.
            return x;
        }
    }
    // Closed form: the rotation angle of the polar factor of [[a,b],[c,d]]
    // is atan2(c - b, a + d).
    double theta = std::atan2(m(1, 0) - m(0, 1), m(0, 0) + m(1, 1));
    Eigen::Matrix2d r;
    r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return r;
}

AngleField rotation_angle_field(const MatrixField& field) {
    const SurfaceMesh& mesh = *field.mesh;
    std::vector<double> angles(mesh.vertex_count(), 0.0);
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        require_invertible(field.matrices[v], v);
        Eigen::Matrix2d r = polar_rotation(field.matrices[v]);
        double theta = std::atan2(r(1, 0), r(0, 0));
        if (theta < 0.0) theta += kTwoPi;
        if (theta >= kTwoPi) theta = 0.0;
        angles[v] = theta;
    }
    return AngleField{&mesh, std::move(angles)};
}

CohomologyClass matrix_winding_class(const MatrixField& field, const CycleBasis& basis) {
    return winding_class(rotation_angle_field(field), basis);
}

std::optional<AngleField> smoothed_angle_field(const SurfaceMesh& mesh,
                                               const CycleBasis& basis,
                                               const std::vector<long long>& w) {
    const int ne = mesh.edge_count();
    const int nv = mesh.vertex_count();
    std::vector<double> increments(ne, 0.0);
    for (int k = 0; k < basis.rank(); ++k) {
        if (w[k] == 0) continue;
        for (int e = 0; e < ne; ++e)
            increments[e] +=
                kTwoPi * static_cast<double>(w[k] * basis.dual_cocycle(k)[e]);
    }

    // Conjugate gradient on the graph Laplacian spreads the increments by
    // the L2-optimal coboundary.
    std::vector<double> rhs(nv, 0.0);
    for (int e = 0; e < ne; ++e) {
        rhs[mesh.edge(e)[0]] += increments[e];
        rhs[mesh.edge(e)[1]] -= increments[e];
    }
    auto laplacian = [&](const std::vector<double>& f) {
        std::vector<double> out(nv, 0.0);
        for (int e = 0; e < ne; ++e) {
            int u = mesh.edge(e)[0], v = mesh.edge(e)[1];
            double diff = f[u] - f[v];
            out[u] += diff;
            out[v] -= diff;
        }
        return out;
    };
    std::vector<double> f(nv, 0.0), residual = rhs, direction = rhs;
    double rr = 0.0;
    for (double r : residual) rr += r * r;
    for (int iter = 0; iter < 4 * nv && rr > 1e-24; ++iter) {
        std::vector<double> ad = laplacian(direction);
        double dad = 0.0;
        for (int v = 0; v < nv; ++v) dad += direction[v] * ad[v];
        if (dad <= 0.0) break;
        double alpha = rr / dad;
        for (int v = 0; v < nv; ++v) {
            f[v] += alpha * direction[v];
            residual[v] -= alpha * ad[v];
        }
        double rr_next = 0.0;
        for (double r : residual) rr_next += r * r;
        double beta = rr_next / rr;
        rr = rr_next;
        for (int v = 0; v < nv; ++v) direction[v] = residual[v] + beta * direction[v];
    }
    for (int e = 0; e < ne; ++e)
        increments[e] += f[mesh.edge(e)[1]] - f[mesh.edge(e)[0]];

    // Integrate over a spanning tree; the field reproduces the smoothed
    // increments modulo 2*pi.
    std::vector<double> theta(nv, 0.0);
    std::vector<char> seen(nv, 0);
    std::vector<int> queue = {0};
    seen[0] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        int v = queue[head];
        for (int e : mesh.vertex_edges(v)) {
            int tail = mesh.edge(e)[0], tip = mesh.edge(e)[1];
            int other = (tail == v) ? tip : tail;
            if (seen[other]) continue;
            seen[other] = 1;
            double step = (tail == v) ? increments[e] : -increments[e];
            theta[other] = std::fmod(theta[v] + step, kTwoPi);
            if (theta[other] < 0.0) theta[other] += kTwoPi;
            if (theta[other] >= kTwoPi) theta[other] = 0.0;
            queue.push_back(other);
        }
    }

    try {
        AngleField field = make_angle_field(mesh, std::move(theta));
        CohomologyClass cls = winding_class(field, basis);
        if (cls.pairings != w) return std::nullopt;
        return field;
    } catch (const Error& e) {
        if (e.category() == ErrorCategory::Resolution) return std::nullopt;
        throw;
    }
}

MatrixField rotation_field(const AngleField& angles) {
    std::vector<Eigen::Matrix2d> matrices;
    matrices.reserve(angles.angles.size());
    for (double a : angles.angles) {
        Eigen::Matrix2d r;
        r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
        matrices.push_back(r);
    }
    return make_matrix_field(*angles.mesh, std::move(matrices));
}

}  // namespace lagsurf
