#include <numbers>
#include <random>

#include "doctest.h"

#include "lagsurf/errors.hpp"
#include "lagsurf/homology.hpp"
#include "lagsurf/mesh.hpp"
#include "lagsurf/winding.hpp"

using namespace lagsurf;
using Eigen::Matrix2d;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Matrix2d rotation(double a) {
    Matrix2d r;
    r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    return r;
}

AngleField lattice_angles(const SurfaceMesh& torus, long long a, long long b) {
    const auto& lattice = *torus.lattice();
    const int n = lattice.n;
    std::vector<double> angles(torus.vertex_count());
    for (int v = 0; v < torus.vertex_count(); ++v) {
        long long phase =
            ((a * lattice.coords[v][0] + b * lattice.coords[v][1]) % n + n) % n;
        angles[v] = kTwoPi * static_cast<double>(phase) / n;
        if (angles[v] >= kTwoPi) angles[v] = 0.0;
    }
    return make_angle_field(torus, std::move(angles));
}

// Independent oracle: integer lattice windings of each basis cycle.
std::vector<long long> lattice_windings(const SurfaceMesh& torus, const CycleBasis& basis,
                                        long long a, long long b) {
    const auto& lattice = *torus.lattice();
    const int n = lattice.n;
    std::vector<long long> out;
    for (int i = 0; i < basis.rank(); ++i) {
        long long total = 0;
        for (int e = 0; e < torus.edge_count(); ++e) {
            long long coeff = basis.cycle(i).coeffs[e];
            if (coeff == 0) continue;
            int u = torus.edge(e)[0], v = torus.edge(e)[1];
            auto lift = [&](int raw) {
                if (raw > n / 2) raw -= n;
                if (raw < -n / 2) raw += n;
                return raw;
            };
            int di = lift(lattice.coords[v][0] - lattice.coords[u][0]);
            int dj = lift(lattice.coords[v][1] - lattice.coords[u][1]);
            total += coeff * (a * di + b * dj);
        }
        REQUIRE(total % n == 0);
        out.push_back(total / n);
    }
    return out;
}

}  // namespace

TEST_CASE("constant field lifts to zero increments and zero class") {
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, 5);
    CycleBasis basis = homology_basis(torus);
    AngleField constant = make_angle_field(
        torus, std::vector<double>(torus.vertex_count(), 1.25));
    IntegerCocycle lifted = lift_edge_increments(constant);
    for (double v : lifted.values) CHECK(v == 0.0);
    CohomologyClass cls = winding_class(constant, basis);
    CHECK(cls.pairings == std::vector<long long>{0, 0});
}

TEST_CASE("lattice field 2*pi*i/n lifts to 2*pi/n meridian increments") {
    const int n = 8;
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, n);
    AngleField field = lattice_angles(torus, 1, 0);
    IntegerCocycle lifted = lift_edge_increments(field);
    const auto& lattice = *torus.lattice();
    for (int e = 0; e < torus.edge_count(); ++e) {
        int di = lattice.coords[torus.edge(e)[1]][0] - lattice.coords[torus.edge(e)[0]][0];
        if (di == 1 || di == 1 - n)
            CHECK(lifted.values[e] == doctest::Approx(kTwoPi / n).epsilon(1e-12));
    }
    CHECK(lifted.max_triangle_defect() < 1e-12);
}

TEST_CASE("winding classes match the lattice oracle") {
    const int n = 9;
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, n);
    CycleBasis basis = homology_basis(torus);
    for (auto [a, b] : std::vector<std::pair<long long, long long>>{
             {1, 0}, {0, 1}, {2, 3}, {-1, 2}}) {
        AngleField field = lattice_angles(torus, a, b);
        CohomologyClass cls = winding_class(field, basis);
        CHECK(cls.pairings == lattice_windings(torus, basis, a, b));
        CHECK(multiplicity(cls) == gcd_ll(a, b));
    }
}

TEST_CASE("angle shift by a constant does not change the class") {
    const int n = 7;
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, n);
    CycleBasis basis = homology_basis(torus);
    AngleField field = lattice_angles(torus, 2, 3);
    std::vector<double> shifted = field.angles;
    for (double& a : shifted) a = std::fmod(a + 0.31, kTwoPi);
    CohomologyClass before = winding_class(field, basis);
    CohomologyClass after = winding_class(make_angle_field(torus, std::move(shifted)), basis);
    CHECK(before.pairings == after.pairings);
}

TEST_CASE("null-winding perturbations do not change the class") {
    const int n = 8;
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, n);
    CycleBasis basis = homology_basis(torus);
    AngleField field = lattice_angles(torus, 1, 1);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uniform(-0.2, 0.2);
    std::vector<double> perturbed = field.angles;
    for (double& a : perturbed) {
        a = std::fmod(a + uniform(rng), kTwoPi);
        if (a < 0.0) a += kTwoPi;
    }
    CohomologyClass before = winding_class(field, basis);
    CohomologyClass after =
        winding_class(make_angle_field(torus, std::move(perturbed)), basis);
    CHECK(before.pairings == after.pairings);
}

TEST_CASE("edge aliasing at an angle difference of pi is rejected") {
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, 3);
    std::vector<double> angles(torus.vertex_count(), 0.0);
    angles[1] = std::numbers::pi;
    CHECK_THROWS_WITH_AS(lift_edge_increments(make_angle_field(torus, std::move(angles))),
                         doctest::Contains("EdgeAliasing"), Error);
}

TEST_CASE("a wrapped triangle is rejected") {
    // Tetrahedron with angles 0, 2pi/3, 4pi/3 around one face.
    std::vector<Eigen::Vector3d> points = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    std::vector<std::array<int, 3>> tris = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}};
    SurfaceMesh tetra = build_mesh(points, tris);
    std::vector<double> angles = {0.0, kTwoPi / 3.0, 2.0 * kTwoPi / 3.0, kTwoPi / 3.0};
    CHECK_THROWS_WITH_AS(lift_edge_increments(make_angle_field(tetra, std::move(angles))),
                         doctest::Contains("TriangleWrap"), Error);
}

TEST_CASE("polar rotation of a rotation is itself, exactly") {
    for (double a : {0.0, 0.4, 2.0, 5.9}) {
        Matrix2d r = rotation(a);
        CHECK((polar_rotation(r) - r).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("positive-definite factors contribute nothing to the angle") {
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, 6);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
    std::vector<Matrix2d> matrices(torus.vertex_count());
    std::vector<double> expected(torus.vertex_count());
    for (int v = 0; v < torus.vertex_count(); ++v) {
        double a = uniform(rng);
        expected[v] = a;
        Matrix2d spd;
        spd << 2.0, 0.3, 0.3, 1.0;
        // A = R * P exactly realizes the polar factors.
        matrices[v] = rotation(a) * spd;
    }
    AngleField angles = rotation_angle_field(make_matrix_field(torus, matrices));
    for (int v = 0; v < torus.vertex_count(); ++v) {
        double diff = std::remainder(angles.angles[v] - expected[v], kTwoPi);
        CHECK(std::abs(diff) < 1e-12);
    }
}

TEST_CASE("polar rotation agrees with an SVD oracle on random matrices") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> uniform(-2.0, 2.0);
    int checked = 0;
    while (checked < 200) {
        Matrix2d m;
        m << uniform(rng), uniform(rng), uniform(rng), uniform(rng);
        if (m.determinant() < 1e-3) continue;
        ++checked;
        Eigen::JacobiSVD<Matrix2d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        Matrix2d oracle = svd.matrixU() * svd.matrixV().transpose();
        CHECK((polar_rotation(m) - oracle).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("identity matrix field has zero class; sphere fields always do") {
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, 5);
    CycleBasis basis = homology_basis(torus);
    MatrixField identity =
        make_matrix_field(torus, std::vector<Matrix2d>(torus.vertex_count(),
                                                       Matrix2d::Identity()));
    CHECK(matrix_winding_class(identity, basis).pairings == std::vector<long long>{0, 0});

    SurfaceMesh sphere = standard_fixture(FixtureKind::Sphere, 3);
    CycleBasis sphere_basis = homology_basis(sphere);
    // A smooth position-dependent angle keeps every edge resolvable.
    std::vector<Matrix2d> matrices(sphere.vertex_count());
    for (int v = 0; v < sphere.vertex_count(); ++v) {
        const Eigen::Vector3d& p = sphere.point(v);
        double a = 0.9 * std::sin(p.x()) + 0.7 * std::cos(p.y() + p.z()) + 2.0;
        matrices[v] = rotation(std::fmod(a, kTwoPi)) * 1.5;
    }
    CHECK(matrix_winding_class(make_matrix_field(sphere, matrices), sphere_basis)
              .pairings.empty());
}

TEST_CASE("rotation matrix fields reproduce the angle-field class") {
    const int n = 8;
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, n);
    CycleBasis basis = homology_basis(torus);
    AngleField field = lattice_angles(torus, 1, 0);
    std::vector<Matrix2d> matrices(torus.vertex_count());
    for (int v = 0; v < torus.vertex_count(); ++v) matrices[v] = rotation(field.angles[v]);
    CohomologyClass from_matrices =
        matrix_winding_class(make_matrix_field(torus, matrices), basis);
    CHECK(from_matrices.pairings == winding_class(field, basis).pairings);
}

TEST_CASE("a constant frame rotation leaves the winding class unchanged") {
    const int n = 8;
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, n);
    CycleBasis basis = homology_basis(torus);
    AngleField field = lattice_angles(torus, 2, 1);
    std::vector<Matrix2d> matrices(torus.vertex_count());
    for (int v = 0; v < torus.vertex_count(); ++v)
        matrices[v] = rotation(field.angles[v]) * Eigen::Vector2d(1.7, 0.6).asDiagonal();
    Matrix2d r0 = rotation(0.77);
    std::vector<Matrix2d> conjugated(torus.vertex_count());
    for (int v = 0; v < torus.vertex_count(); ++v)
        conjugated[v] = r0.transpose() * matrices[v] * r0;
    CohomologyClass base = matrix_winding_class(make_matrix_field(torus, matrices), basis);
    CohomologyClass moved =
        matrix_winding_class(make_matrix_field(torus, conjugated), basis);
    CHECK(base.pairings == moved.pairings);
}

TEST_CASE("singular and negative-determinant matrices are rejected") {
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, 3);
    std::vector<Matrix2d> matrices(torus.vertex_count(), Matrix2d::Identity());
    matrices[0] << 1, 0, 0, -1;
    CHECK_THROWS_WITH_AS(make_matrix_field(torus, matrices),
                         doctest::Contains("SingularMatrix"), Error);
    matrices[0] << 1e13, 0, 0, 1e-13;
    CHECK_THROWS_WITH_AS(make_matrix_field(torus, matrices),
                         doctest::Contains("SingularMatrix"), Error);
}

TEST_CASE("angle and matrix field JSON round-trips") {
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, 4);
    AngleField field = lattice_angles(torus, 1, 1);
    AngleField again = angle_field_from_json(torus, field.to_json());
    CHECK(again.angles == field.angles);

    std::vector<Matrix2d> matrices(torus.vertex_count());
    for (int v = 0; v < torus.vertex_count(); ++v) matrices[v] = rotation(0.1 * v) * 2.0;
    MatrixField mfield = make_matrix_field(torus, matrices);
    MatrixField magain = matrix_field_from_json(torus, mfield.to_json());
    for (int v = 0; v < torus.vertex_count(); ++v)
        CHECK(magain.matrices[v] == mfield.matrices[v]);
}
