#include <numbers>
#include <random>

#include "doctest.h"

#include "lagsurf/errors.hpp"
#include "lagsurf/forms.hpp"
#include "lagsurf/homology.hpp"
#include "lagsurf/lambda.hpp"
#include "lagsurf/mesh.hpp"
#include "lagsurf/winding.hpp"

using namespace lagsurf;
using Eigen::Matrix2d;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

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

ZeroSectionFormField lattice_realization(const SurfaceMesh& torus, long long a,
                                         long long b) {
    return realize_from_automorphism(rotation_field(lattice_angles(torus, a, b)));
}

}  // namespace

TEST_CASE("lambda of a form against itself is zero") {
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, 6);
    ZeroSectionFormField canonical = canonical_field(torus);
    LambdaReport report = lambda(torus, canonical, canonical);
    CHECK(report.lambda == 0);
    CHECK(report.class_vector == std::vector<long long>{0, 0});
    CHECK(!report.basis_digest.empty());
    CHECK(report.input_digests.size() == 3);
}

TEST_CASE("genus 0 short-circuits to zero for any valid pair") {
    SurfaceMesh sphere = standard_fixture(FixtureKind::Sphere, 3);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> uniform(-0.5, 0.5);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Eigen::Matrix4d> a_forms, b_forms;
        for (int v = 0; v < sphere.vertex_count(); ++v) {
            const Eigen::Vector3d& p = sphere.point(v);
            Matrix2d ra = Matrix2d::Identity() * (1.2 + uniform(rng) * 0.1);
            double angle = 0.3 * std::sin(p.x() + trial) + 0.2 * p.y();
            Matrix2d rb;
            rb << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
            Eigen::Matrix4d ma = Eigen::Matrix4d::Zero(), mb = Eigen::Matrix4d::Zero();
            ma.block<2, 2>(0, 2) = ra;
            ma.block<2, 2>(2, 0) = -ra.transpose();
            mb.block<2, 2>(0, 2) = rb;
            mb.block<2, 2>(2, 0) = -rb.transpose();
            a_forms.push_back(ma);
            b_forms.push_back(mb);
        }
        LambdaReport report = lambda(sphere, make_form_field(sphere, a_forms),
                                     make_form_field(sphere, b_forms));
        CHECK(report.lambda == 0);
        CHECK(report.class_vector.empty());
    }
}

TEST_CASE("realization soundness on the torus: lambda is the gcd") {
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, 16);
    ZeroSectionFormField canonical = canonical_field(torus);
    for (auto [a, b] : std::vector<std::pair<long long, long long>>{
             {0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 4}, {-2, 4}, {3, 3}, {2, 3}}) {
        ZeroSectionFormField realized = lattice_realization(torus, a, b);
        LambdaReport report = lambda(torus, realized, canonical);
        CHECK(report.lambda == gcd_ll(a, b));
    }
}

TEST_CASE("realization soundness via the smoothed representative on genus 2") {
    SurfaceMesh mesh = standard_fixture(FixtureKind::Genus2, 8);
    CycleBasis basis = homology_basis(mesh);
    ZeroSectionFormField canonical = canonical_field(mesh);
    std::mt19937_64 rng(2025);
    std::uniform_int_distribution<long long> entry(-2, 2);
    int realized_count = 0;
    for (int trial = 0; trial < 12 && realized_count < 6; ++trial) {
        std::vector<long long> w(4);
        for (auto& value : w) value = entry(rng);
        auto field = smoothed_angle_field(mesh, basis, w);
        if (!field) continue;
        ++realized_count;
        ZeroSectionFormField realized =
            realize_from_automorphism(rotation_field(*field));
        LambdaReport report = lambda(mesh, realized, canonical);
        CHECK(report.lambda == multiplicity(w));
    }
    CHECK(realized_count >= 6);
}

TEST_CASE("lambda is symmetric in its two arguments") {
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, 10);
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<long long> entry(-2, 2);
    std::uniform_real_distribution<double> scale(0.5, 2.0);
    int tested = 0;
    while (tested < 50) {
        long long a1 = entry(rng), b1 = entry(rng);
        long long a2 = entry(rng), b2 = entry(rng);
        // Compose the rotation field with a positive-definite scaling so the
        // polar retraction works nontrivially.
        AngleField f1 = lattice_angles(torus, a1, b1);
        AngleField f2 = lattice_angles(torus, a2, b2);
        std::vector<Matrix2d> m1(torus.vertex_count()), m2(torus.vertex_count());
        Matrix2d spd;
        spd << scale(rng), 0.2, 0.2, scale(rng);
        for (int v = 0; v < torus.vertex_count(); ++v) {
            Matrix2d r1, r2;
            double t1 = f1.angles[v], t2 = f2.angles[v];
            r1 << std::cos(t1), -std::sin(t1), std::sin(t1), std::cos(t1);
            r2 << std::cos(t2), -std::sin(t2), std::sin(t2), std::cos(t2);
            m1[v] = r1 * spd;
            m2[v] = r2;
        }
        ZeroSectionFormField omega_a =
            realize_from_automorphism(make_matrix_field(torus, m1));
        ZeroSectionFormField omega_b =
            realize_from_automorphism(make_matrix_field(torus, m2));
        LambdaReport ab, ba;
        try {
            ab = lambda(torus, omega_a, omega_b);
            ba = lambda(torus, omega_b, omega_a);
        } catch (const Error& e) {
            if (e.category() == ErrorCategory::Resolution) continue;
            throw;
        }
        ++tested;
        CHECK(ab.lambda == ba.lambda);
    }
}

TEST_CASE("lambda is stable under refining the fixture") {
    for (int n : {8, 16}) {
        SurfaceMesh torus = standard_fixture(FixtureKind::Torus, n);
        ZeroSectionFormField realized = lattice_realization(torus, 1, 2);
        LambdaReport report = lambda(torus, realized, canonical_field(torus));
        CHECK(report.lambda == 1);
        CHECK(multiplicity(report.class_vector) == 1);
    }
    for (int n : {8, 16}) {
        SurfaceMesh torus = standard_fixture(FixtureKind::Torus, n);
        ZeroSectionFormField realized = lattice_realization(torus, 2, 2);
        LambdaReport report = lambda(torus, realized, canonical_field(torus));
        CHECK(report.lambda == 2);
    }
}

TEST_CASE("lambda_pair relabels the inputs") {
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, 8);
    ZeroSectionFormField canonical = canonical_field(torus);
    ZeroSectionFormField realized = lattice_realization(torus, 3, 0);
    LambdaReport report = lambda_pair(torus, realized, canonical);
    CHECK(report.lambda == 3);
    CHECK(report.input_digests[1].first == "omega_pullback");
    CHECK(report.input_digests[2].first == "omega_ambient");

    LambdaReport zero = lambda_pair(torus, canonical, canonical);
    CHECK(zero.lambda == 0);

    // Constant rho realizes the canonical form itself.
    ZeroSectionFormField constant = lattice_realization(torus, 0, 0);
    for (int v = 0; v < torus.vertex_count(); ++v)
        CHECK((constant.omegas[v] - canonical.omegas[v]).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(lambda_pair(torus, constant, canonical).lambda == 0);
}

TEST_CASE("absolute torus invariant") {
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, 8);
    CHECK(lambda_absolute_torus(torus, canonical_field(torus)).lambda == 0);
    CHECK(lambda_absolute_torus(torus, lattice_realization(torus, 1, 1)).lambda == 1);
    CHECK(lambda_absolute_torus(torus, lattice_realization(torus, 2, 2)).lambda == 2);

    SurfaceMesh sphere = standard_fixture(FixtureKind::Sphere, 3);
    CHECK_THROWS_WITH_AS(lambda_absolute_torus(sphere, canonical_field(sphere)),
                         doctest::Contains("WrongGenus"), Error);
}

TEST_CASE("lambda demands matching meshes and Lagrangian inputs") {
    SurfaceMesh t1 = standard_fixture(FixtureKind::Torus, 4);
    SurfaceMesh t2 = standard_fixture(FixtureKind::Torus, 5);
    CHECK_THROWS_WITH_AS(lambda(t1, canonical_field(t2), canonical_field(t1)),
                         doctest::Contains("MeshMismatch"), Error);
    ZeroSectionFormField plus = symplectic_plus_field(t1);
    CHECK_THROWS_WITH_AS(lambda(t1, plus, canonical_field(t1)),
                         doctest::Contains("Lagrangian"), Error);
}

TEST_CASE("report serialization carries the class and digests") {
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, 8);
    LambdaReport report =
        lambda(torus, lattice_realization(torus, 2, 0), canonical_field(torus));
    std::string json = report.to_json();
    CHECK(json.find("\"lambda\":2") != std::string::npos);
    CHECK(json.find("\"class\"") != std::string::npos);
    CHECK(json.find("\"inputs\"") != std::string::npos);
}
