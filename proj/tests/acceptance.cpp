// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion.
//
//   acceptance <cli-binary> <fixtures-dir> <scratch-dir>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "classifier_fixtures.hpp"
#include "lagsurf/classifier.hpp"
#include "lagsurf/errors.hpp"
#include "lagsurf/forms.hpp"
#include "lagsurf/homology.hpp"
#include "lagsurf/lambda.hpp"
#include "lagsurf/mesh.hpp"
#include "lagsurf/suspension.hpp"
#include "lagsurf/util.hpp"
#include "lagsurf/winding.hpp"

using namespace lagsurf;
using namespace lagsurf_fixtures;
using Json = nlohmann::json;

namespace {

std::string g_cli;
std::string g_fixtures;
std::string g_scratch;

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    std::string command = g_cli + " " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    RunResult result;
    if (!pipe) return result;
    std::array<char, 4096> buffer;
    while (std::size_t got = std::fread(buffer.data(), 1, buffer.size(), pipe))
        result.stdout_text.append(buffer.data(), got);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

struct Criterion {
    int number;
    std::string label;
    double budget_seconds;
    std::function<bool(std::string&)> body;
};

bool run_criterion(const Criterion& criterion) {
    std::string detail;
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = criterion.body(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_budget = elapsed < criterion.budget_seconds;
    bool pass = ok && in_budget;
    std::printf("[%s] criterion %2d: %s (%.2fs / %.0fs)%s%s\n", pass ? "PASS" : "FAIL",
                criterion.number, criterion.label.c_str(), elapsed,
                criterion.budget_seconds, detail.empty() ? "" : " -- ",
                detail.c_str());
    std::fflush(stdout);
    return pass;
}

std::string fixture(const std::string& name) { return g_fixtures + "/" + name; }
std::string scratch(const std::string& name) { return g_scratch + "/" + name; }

// --------------------------------------------------------------------------

bool criterion1(std::string& detail) {
    const std::vector<std::vector<long long>> vectors = {
        {0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 4}, {3, 6}, {-2, 4}, {5, 0}};
    std::ostringstream failures;
    auto check_roundtrip = [&](const std::string& mesh_file,
                               const std::vector<long long>& w, const std::string& tag) {
        std::ostringstream spec;
        for (std::size_t i = 0; i < w.size(); ++i) spec << (i ? "," : "") << w[i];
        std::string out = scratch("realized_" + tag + ".json");
        RunResult realize = run_cli("realize --mesh " + mesh_file + " --winding " +
                                    spec.str() + " --out " + out);
        long long expected = 0;
        for (long long value : w) expected = gcd_ll(expected, value);
        if (realize.exit_code != 0) {
            failures << " [" << tag << ": realize exit " << realize.exit_code << "]";
            return;
        }
        std::string can = scratch("can_" + tag + ".json");
        Json mesh_doc = Json::parse(read_file(mesh_file));
        SurfaceMesh mesh = mesh_from_json(read_file(mesh_file));
        write_file(can, canonical_field(mesh).to_json());
        RunResult lam = run_cli("lambda --mesh " + mesh_file + " --omega-prime " + out +
                                " --omega " + can);
        if (lam.exit_code != 0) {
            failures << " [" << tag << ": lambda exit " << lam.exit_code << "]";
            return;
        }
        long long got = Json::parse(lam.stdout_text)["payload"]["lambda"].get<long long>();
        if (got != expected)
            failures << " [" << tag << ": lambda " << got << " != " << expected << "]";
    };

    for (const std::string& mesh_name : {std::string("torus_r8"), std::string("torus_r16")})
        for (std::size_t i = 0; i < vectors.size(); ++i)
            check_roundtrip(fixture(mesh_name + ".json"), vectors[i],
                            mesh_name + "_w" + std::to_string(i));

    std::mt19937_64 rng(20260809);
    std::uniform_int_distribution<long long> entry(-2, 2);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<long long> w(4);
        for (auto& value : w) value = entry(rng);
        check_roundtrip(fixture("genus2_r8.json"), w, "genus2_w" + std::to_string(trial));
    }

    detail = failures.str();
    return detail.empty();
}

bool criterion2(std::string& detail) {
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, 10);
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<long long> entry(-2, 2);
    std::uniform_real_distribution<double> scale(0.6, 1.8);
    const auto& lattice = *torus.lattice();
    auto lattice_rotations = [&](long long a, long long b, const Eigen::Matrix2d& spd) {
        std::vector<Eigen::Matrix2d> matrices(torus.vertex_count());
        for (int v = 0; v < torus.vertex_count(); ++v) {
            long long phase = ((a * lattice.coords[v][0] + b * lattice.coords[v][1]) %
                                   lattice.n + lattice.n) % lattice.n;
            double angle = 2.0 * std::numbers::pi * static_cast<double>(phase) / lattice.n;
            Eigen::Matrix2d r;
            r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
            matrices[v] = r * spd;
        }
        return make_matrix_field(torus, std::move(matrices));
    };
    int tested = 0;
    while (tested < 50) {
        Eigen::Matrix2d spd;
        spd << scale(rng), 0.2, 0.2, scale(rng);
        ZeroSectionFormField a = realize_from_automorphism(
            lattice_rotations(entry(rng), entry(rng), spd));
        ZeroSectionFormField b = realize_from_automorphism(
            lattice_rotations(entry(rng), entry(rng), Eigen::Matrix2d::Identity()));
        LambdaReport ab, ba;
        try {
            ab = lambda(torus, a, b);
            ba = lambda(torus, b, a);
        } catch (const Error& e) {
            if (e.category() == ErrorCategory::Resolution) continue;
            throw;
        }
        ++tested;
        if (ab.lambda != ba.lambda) {
            detail = "asymmetric pair: " + std::to_string(ab.lambda) +
                     " != " + std::to_string(ba.lambda);
            return false;
        }
    }
    return true;
}

bool criterion3(std::string& detail) {
    SurfaceMesh sphere = standard_fixture(FixtureKind::Sphere, 3);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> uniform(-0.4, 0.4);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Eigen::Matrix4d> a_forms, b_forms;
        for (int v = 0; v < sphere.vertex_count(); ++v) {
            const Eigen::Vector3d& p = sphere.point(v);
            double angle_a = 0.4 * std::sin(p.x() + trial) + 0.3 * p.y();
            double angle_b = 0.3 * std::cos(p.z() - trial) + 0.2 * p.x();
            auto block_form = [](double angle, double stretch) {
                Eigen::Matrix2d r;
                r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
                Eigen::Matrix2d spd;
                spd << stretch, 0.1, 0.1, 1.0;
                Eigen::Matrix2d block = r * spd;
                Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
                m.block<2, 2>(0, 2) = block;
                m.block<2, 2>(2, 0) = -block.transpose();
                return m;
            };
            a_forms.push_back(block_form(angle_a, 1.2 + uniform(rng) * 0.2));
            b_forms.push_back(block_form(angle_b, 1.1));
        }
        LambdaReport report = lambda(sphere, make_form_field(sphere, a_forms),
                                     make_form_field(sphere, b_forms));
        if (report.lambda != 0) {
            detail = "nonzero lambda on the sphere";
            return false;
        }
    }
    return true;
}

bool criterion4(std::string& detail) {
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, 8);
    LambdaReport report = lambda_absolute_torus(torus, canonical_field(torus));
    if (report.lambda != 0) {
        detail = "lambda(T^2, omega_can) = " + std::to_string(report.lambda);
        return false;
    }
    return true;
}

bool criterion5(std::string& detail) {
    std::mt19937_64 rng(515151);
    std::uniform_int_distribution<long long> entry(-9, 9);
    std::uniform_int_distribution<int> pick(0, 3);
    std::uniform_int_distribution<long long> coeff(-2, 2);
    for (int trial = 0; trial < 20; ++trial) {
        // Random product of elementary integer matrices.
        std::vector<std::vector<long long>> u(4, std::vector<long long>(4, 0));
        for (int i = 0; i < 4; ++i) u[i][i] = 1;
        for (int step = 0; step < 20; ++step) {
            int i = pick(rng), j = pick(rng);
            if (i == j) continue;
            long long c = coeff(rng);
            for (int k = 0; k < 4; ++k) u[i][k] += c * u[j][k];
        }
        for (int vec = 0; vec < 10; ++vec) {
            std::vector<long long> v(4), uv(4, 0);
            for (auto& value : v) value = entry(rng);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) uv[i] += u[i][j] * v[j];
            if (multiplicity(uv) != multiplicity(v)) {
                detail = "multiplicity changed under a unimodular map";
                return false;
            }
        }
    }
    return true;
}

bool criterion6(std::string& detail) {
    struct Case {
        FixtureKind kind;
        std::array<int, 3> ranks;
    };
    for (const Case& c : {Case{FixtureKind::Sphere, {1, 0, 1}},
                          Case{FixtureKind::Torus, {1, 2, 1}},
                          Case{FixtureKind::Genus2, {1, 4, 1}}}) {
        SurfaceMesh mesh = standard_fixture(c.kind, 3);
        for (int T : {2, 3, 5}) {
            HomologyProfile profile = homology_profile(build_suspension(mesh, T));
            if (profile.ranks != c.ranks || !profile.torsion[0].empty() ||
                !profile.torsion[1].empty() || !profile.torsion[2].empty()) {
                detail = "profile mismatch at T=" + std::to_string(T);
                return false;
            }
        }
    }
    return true;
}

bool criterion7(std::string& detail) {
    // Constant map.
    {
        auto mesh = std::make_unique<SurfaceMesh>(standard_fixture(FixtureKind::Torus, 4));
        SliceValues slices(3, std::vector<Eigen::Vector3d>(mesh->vertex_count(),
                                                           Eigen::Vector3d(0, 0, 1)));
        MapFixture fixture = assemble(std::move(mesh), 4, slices, true);
        NInvariant inv = classify(fixture.map, homology_basis(*fixture.mesh));
        if (inv.c != std::vector<long long>{0, 0} || inv.d != 0) {
            detail = "constant map misclassified";
            return false;
        }
    }
    // Hopf fixture and its orientation reverse.
    {
        MapFixture hopf = hopf_fixture(4, 8);
        CycleBasis basis = homology_basis(*hopf.mesh);
        NInvariant inv = classify(hopf.map, basis);
        if (!inv.c.empty() || std::abs(inv.d) != 1) {
            detail = "Hopf fixture degree " + std::to_string(inv.d);
            return false;
        }
        MapFixture reversed = hopf_fixture(4, 8, true);
        NInvariant flipped = classify(reversed.map, basis);
        if (flipped.d != -inv.d) {
            detail = "orientation flip did not negate d";
            return false;
        }
    }
    // Handle generator fixtures: agreement across 3 regular values is
    // enforced inside chern_class; the class must be (k, 0) up to sign/order.
    for (long long k : {1, 2, 3}) {
        MapFixture handle = handle_fixture(8, 10, {k, 0});
        CycleBasis basis = homology_basis(*handle.mesh);
        std::vector<long long> c =
            chern_class(handle.map, basis_2cycles(*handle.x, basis));
        bool match = c == std::vector<long long>{k, 0} ||
                     c == std::vector<long long>{-k, 0} ||
                     c == std::vector<long long>{0, k} ||
                     c == std::vector<long long>{0, -k};
        if (!match) {
            detail = "handle fixture k=" + std::to_string(k) + " returned (" +
                     std::to_string(c[0]) + "," + std::to_string(c[1]) + ")";
            return false;
        }
    }
    return true;
}

bool criterion8(std::string& detail) {
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, 6);
    IsotopyPath path;
    path.mesh = &torus;
    path.metric = identity_metric(torus);
    for (int s = 0; s < 4; ++s) {
        path.omegas.push_back(canonical_field(torus));
        path.omega_plus.push_back(symplectic_plus_field(torus));
    }
    NInvariant inv = n_invariant(path);
    if (inv.c != std::vector<long long>{0, 0} || inv.d != 0) {
        detail = "constant path misclassified";
        return false;
    }

    Eigen::Matrix2d quarter;
    quarter << 0, -1, 1, 0;
    path.omegas.back() = realize_from_automorphism(make_matrix_field(
        torus, std::vector<Eigen::Matrix2d>(torus.vertex_count(), quarter)));
    try {
        n_invariant(path);
        detail = "boundary violation was not detected";
        return false;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::BoundaryConditionViolated) {
            detail = std::string("unexpected error: ") + e.what();
            return false;
        }
    }
    return true;
}

bool criterion9(std::string& detail) {
    SurfaceMesh tetra = standard_fixture(FixtureKind::Sphere, 3);
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> uniform(-1.5, 1.5);
    int done = 0;
    while (done < 1000) {
        Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
        m(0, 1) = uniform(rng);
        m(0, 2) = uniform(rng);
        m(0, 3) = uniform(rng);
        m(1, 2) = uniform(rng);
        m(1, 3) = uniform(rng);
        m(2, 3) = uniform(rng);
        Eigen::Matrix4d form = m - m.transpose();
        if (pfaffian4(form) < 0.05) continue;
        Eigen::Matrix4d a;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) a(i, j) = uniform(rng);
        Eigen::Matrix4d metric = a * a.transpose() + 0.4 * Eigen::Matrix4d::Identity();
        ++done;

        ZeroSectionFormField field = make_form_field(
            tetra, std::vector<Eigen::Matrix4d>(tetra.vertex_count(), form), {}, false);
        CompatibleJ j = compatible_skad_j(MetricField(tetra.vertex_count(), metric), field);
        const Eigen::Matrix4d& jm = j.j[0];
        if ((jm * jm + Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() > 1e-9) {
            detail = "J^2 != -I";
            return false;
        }
        Eigen::Matrix4d gj = metric * jm;
        if ((gj + gj.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
            detail = "J is not metric-skew-adjoint";
            return false;
        }
        Eigen::Matrix4d compat = 0.5 * (form * jm + (form * jm).transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eigen(compat);
        if (eigen.eigenvalues().minCoeff() <= 0.0) {
            detail = "omega(., J.) is not positive definite";
            return false;
        }
    }
    return true;
}

bool criterion10(std::string& detail) {
    struct Command {
        std::string label;
        std::string args;
    };
    std::vector<Command> commands = {
        {"validate_sphere", "validate --mesh " + fixture("sphere_r3.json")},
        {"validate_torus", "validate --mesh " + fixture("torus_r8.json")},
        {"validate_genus2", "validate --mesh " + fixture("genus2_r8.json")},
        {"lambda_can", "lambda --mesh " + fixture("torus_r8.json") + " --omega-prime " +
                           fixture("omega_can_torus_r8.json") + " --omega " +
                           fixture("omega_can_torus_r8.json")},
        {"lambda_w24", "lambda --mesh " + fixture("torus_r16.json") + " --omega-prime " +
                           fixture("omega_w24_torus_r16.json") + " --omega " +
                           fixture("omega_can_torus_r16.json")},
        {"realize", "realize --mesh " + fixture("torus_r8.json") + " --winding 1,1 --out " +
                        scratch("det_realize.json")},
        {"suspension", "suspension-homology --mesh " + fixture("torus_r4.json") +
                           " --time-steps 3"},
        {"classify_constant", "classify --mesh " + fixture("torus_r4.json") + " --map " +
                                  fixture("constant_map_torus_r4_T4.json")},
        {"classify_hopf", "classify --mesh " + fixture("sphere_r4.json") + " --map " +
                              fixture("hopf_map_sphere_r4_T8.json")},
        {"n_invariant", "n-invariant --mesh " + fixture("torus_r6.json") + " --path " +
                            fixture("constant_path_torus_r6.json")},
    };
    for (const Command& command : commands) {
        std::string payload;
        for (int round = 0; round < 3; ++round) {
            RunResult result = run_cli(command.args);
            if (result.exit_code != 0) {
                detail = command.label + " exited with " + std::to_string(result.exit_code);
                return false;
            }
            Json doc = Json::parse(result.stdout_text, nullptr, false);
            if (doc.is_discarded()) {
                detail = command.label + " produced invalid JSON";
                return false;
            }
            doc.erase("elapsed_ms");
            std::string canonical = doc.dump();
            if (round == 0)
                payload = canonical;
            else if (payload != canonical) {
                detail = command.label + " payload changed between runs";
                return false;
            }
        }
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 4) {
        std::cerr << "usage: acceptance <cli-binary> <fixtures-dir> <scratch-dir>\n";
        return 2;
    }
    g_cli = argv[1];
    g_fixtures = argv[2];
    g_scratch = argv[3];
    std::filesystem::create_directories(g_scratch);

    std::vector<Criterion> criteria = {
        {1, "realization round-trip returns gcd(w) on torus r8/r16 and genus-2", 30.0,
         criterion1},
        {2, "lambda is symmetric on 50 randomized torus pairs", 60.0, criterion2},
        {3, "genus-0 pairs all classify to lambda = 0", 5.0, criterion3},
        {4, "absolute invariant of the canonical torus form is 0", 1.0, criterion4},
        {5, "multiplicity survives 20 random unimodular basis changes", 1.0, criterion5},
        {6, "double-cone homology profiles (1,2g,1), torsion-free, T in {2,3,5}", 120.0,
         criterion6},
        {7, "sphere-map classification fixtures (constant, Hopf, handles)", 300.0,
         criterion7},
        {8, "n-invariant boundary contract", 30.0, criterion8},
        {9, "compatible-J identities on 1000 random (metric, form) pairs", 10.0,
         criterion9},
        {10, "byte-identical payloads across 3 runs of every command", 120.0, criterion10},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria)
        if (!run_criterion(criterion)) ++failures;

    if (failures == 0) {
        std::printf("acceptance: all %zu criteria passed\n", criteria.size());
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", failures);
    return 1;
}
