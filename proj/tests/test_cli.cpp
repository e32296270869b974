#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "doctest.h"

#include "lagsurf/classifier.hpp"
#include "lagsurf/forms.hpp"
#include "lagsurf/homology.hpp"
#include "lagsurf/mesh.hpp"
#include "lagsurf/suspension.hpp"
#include "lagsurf/util.hpp"
#include "lagsurf/winding.hpp"

using namespace lagsurf;
using Json = nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

std::string cli_path() {
    const char* env = std::getenv("LAGSURF_CLI");
    REQUIRE_MESSAGE(env != nullptr, "LAGSURF_CLI must point at the CLI binary");
    return env;
}

RunResult run(const std::string& args) {
    std::string command = cli_path() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    std::array<char, 4096> buffer;
    while (std::size_t got = std::fread(buffer.data(), 1, buffer.size(), pipe))
        result.stdout_text.append(buffer.data(), got);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "lagsurf_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string write_scratch(const std::string& name, const std::string& contents) {
    auto path = scratch_dir() / name;
    write_file(path.string(), contents);
    return path.string();
}

AngleField lattice_angles(const SurfaceMesh& torus, long long a, long long b) {
    const auto& lattice = *torus.lattice();
    const int n = lattice.n;
    std::vector<double> angles(torus.vertex_count());
    for (int v = 0; v < torus.vertex_count(); ++v) {
        long long phase =
            ((a * lattice.coords[v][0] + b * lattice.coords[v][1]) % n + n) % n;
        angles[v] = 2.0 * std::numbers::pi * static_cast<double>(phase) / n;
        if (angles[v] >= 2.0 * std::numbers::pi) angles[v] = 0.0;
    }
    return make_angle_field(torus, std::move(angles));
}

}  // namespace

TEST_CASE("validate: genus report and exit codes") {
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, 4);
    std::string mesh_file = write_scratch("torus4.json", torus.to_json());
    RunResult ok = run("validate --mesh " + mesh_file);
    CHECK(ok.exit_code == 0);
    Json doc = Json::parse(ok.stdout_text);
    CHECK(doc["payload"]["genus"] == 1);
    CHECK(doc["payload"]["vertices"] == 16);
    CHECK(doc["payload"]["orientable"] == true);

    // Tetrahedron: genus 0.
    std::string tetra = R"({"schema_version":1,
        "vertices":[[0,0,0],[1,0,0],[0,1,0],[0,0,1]],
        "triangles":[[0,2,1],[0,1,3],[1,2,3],[0,3,2]]})";
    RunResult tet = run("validate --mesh " + write_scratch("tetra.json", tetra));
    CHECK(tet.exit_code == 0);
    CHECK(Json::parse(tet.stdout_text)["payload"]["genus"] == 0);

    // An extra triangle on one edge: non-manifold, exit 1.
    std::string broken = R"({"schema_version":1,
        "vertices":[[0,0,0],[1,0,0],[0,1,0],[0,0,1]],
        "triangles":[[0,2,1],[0,1,3],[1,2,3],[0,3,2],[0,1,2]]})";
    RunResult bad = run("validate --mesh " + write_scratch("broken.json", broken));
    CHECK(bad.exit_code == 1);
    CHECK(Json::parse(bad.stdout_text)["error"]["kind"] == "NonManifold");

    RunResult missing = run("validate --mesh /nonexistent/mesh.json");
    CHECK(missing.exit_code == 4);
}

TEST_CASE("lambda: identity pair, realization pair, sphere") {
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, 16);
    std::string mesh_file = write_scratch("torus16.json", torus.to_json());
    std::string can_file =
        write_scratch("omega_can16.json", canonical_field(torus).to_json());

    RunResult zero = run("lambda --mesh " + mesh_file + " --omega-prime " + can_file +
                         " --omega " + can_file);
    CHECK(zero.exit_code == 0);
    CHECK(Json::parse(zero.stdout_text)["payload"]["lambda"] == 0);

    ZeroSectionFormField realized =
        realize_from_automorphism(rotation_field(lattice_angles(torus, 2, 4)));
    std::string realized_file = write_scratch("omega24.json", realized.to_json());
    RunResult two = run("lambda --mesh " + mesh_file + " --omega-prime " + realized_file +
                        " --omega " + can_file);
    CHECK(two.exit_code == 0);
    CHECK(Json::parse(two.stdout_text)["payload"]["lambda"] == 2);

    SurfaceMesh sphere = standard_fixture(FixtureKind::Sphere, 3);
    std::string sphere_file = write_scratch("sphere3.json", sphere.to_json());
    std::string sphere_can =
        write_scratch("omega_can_sphere.json", canonical_field(sphere).to_json());
    RunResult s = run("lambda --mesh " + sphere_file + " --omega-prime " + sphere_can +
                      " --omega " + sphere_can);
    CHECK(s.exit_code == 0);
    CHECK(Json::parse(s.stdout_text)["payload"]["lambda"] == 0);
}

TEST_CASE("lambda: an unresolvable field exits with the resolution code") {
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, 8);
    std::string mesh_file = write_scratch("torus8.json", torus.to_json());
    std::string can_file =
        write_scratch("omega_can8.json", canonical_field(torus).to_json());
    // Class (0,4) at n=8 puts the j-edge increments exactly at pi.
    ZeroSectionFormField aliased =
        realize_from_automorphism(rotation_field(lattice_angles(torus, 0, 4)));
    std::string aliased_file = write_scratch("omega04.json", aliased.to_json());
    RunResult res = run("lambda --mesh " + mesh_file + " --omega-prime " + aliased_file +
                        " --omega " + can_file);
    CHECK(res.exit_code == 2);
    CHECK(Json::parse(res.stdout_text)["error"]["category"] == "resolution");
}

TEST_CASE("realize: round trip through lambda, canonical for the zero class") {
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, 8);
    std::string mesh_file = write_scratch("torus8b.json", torus.to_json());
    std::string out_file = (scratch_dir() / "realized.json").string();

    RunResult made = run("realize --mesh " + mesh_file + " --winding 1,0 --out " + out_file);
    CHECK(made.exit_code == 0);
    CHECK(Json::parse(made.stdout_text)["payload"]["lambda"] == 1);
    std::string can_file =
        write_scratch("omega_can8b.json", canonical_field(torus).to_json());
    RunResult check = run("lambda --mesh " + mesh_file + " --omega-prime " + out_file +
                          " --omega " + can_file);
    CHECK(check.exit_code == 0);
    CHECK(Json::parse(check.stdout_text)["payload"]["lambda"] == 1);

    RunResult zero = run("realize --mesh " + mesh_file + " --winding 0,0 --out " + out_file);
    CHECK(zero.exit_code == 0);
    ZeroSectionFormField produced =
        form_field_from_json(torus, read_file(out_file));
    ZeroSectionFormField canonical = canonical_field(torus);
    for (int v = 0; v < torus.vertex_count(); ++v)
        CHECK((produced.omegas[v] - canonical.omegas[v]).cwiseAbs().maxCoeff() < 1e-12);

    RunResult mismatch = run("realize --mesh " + mesh_file + " --winding 1 --out " + out_file);
    CHECK(mismatch.exit_code == 1);

    SurfaceMesh sphere = standard_fixture(FixtureKind::Sphere, 3);
    std::string sphere_file = write_scratch("sphere3b.json", sphere.to_json());
    RunResult empty = run("realize --mesh " + sphere_file + " --winding \"\" --out " +
                          out_file);
    CHECK(empty.exit_code == 0);
    ZeroSectionFormField sphere_field =
        form_field_from_json(sphere, read_file(out_file));
    ZeroSectionFormField sphere_can = canonical_field(sphere);
    for (int v = 0; v < sphere.vertex_count(); ++v)
        CHECK(sphere_field.omegas[v] == sphere_can.omegas[v]);
}

TEST_CASE("suspension-homology: double-cone ranks") {
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, 3);
    std::string mesh_file = write_scratch("torus3.json", torus.to_json());
    RunResult res = run("suspension-homology --mesh " + mesh_file + " --time-steps 3");
    CHECK(res.exit_code == 0);
    Json doc = Json::parse(res.stdout_text);
    CHECK(doc["payload"]["ranks"] == Json::array({1, 2, 1}));
    CHECK(doc["payload"]["torsion"] == Json::array({Json::array(), Json::array(),
                                                    Json::array()}));
}

TEST_CASE("classify: constant map file") {
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, 4);
    std::string mesh_file = write_scratch("torus4c.json", torus.to_json());
    SuspensionComplex x = build_suspension(torus, 4);
    std::vector<Eigen::Vector3d> vectors(x.complex().vertex_count,
                                         Eigen::Vector3d(0, 0, 1));
    SphereMapData map = make_sphere_map(x, std::move(vectors), true);
    std::string map_file = write_scratch("constant_map.json", map.to_json());
    RunResult res = run("classify --mesh " + mesh_file + " --map " + map_file);
    CHECK(res.exit_code == 0);
    Json doc = Json::parse(res.stdout_text);
    CHECK(doc["payload"]["c"] == Json::array({0, 0}));
    CHECK(doc["payload"]["d"] == 0);
}

TEST_CASE("reports are deterministic apart from the elapsed time") {
    SurfaceMesh torus = standard_fixture(FixtureKind::Torus, 4);
    std::string mesh_file = write_scratch("torus4d.json", torus.to_json());
    std::string payload;
    for (int round = 0; round < 3; ++round) {
        RunResult res = run("validate --mesh " + mesh_file);
        REQUIRE(res.exit_code == 0);
        Json doc = Json::parse(res.stdout_text);
        doc.erase("elapsed_ms");
        if (round == 0)
            payload = doc.dump();
        else
            CHECK(doc.dump() == payload);
    }
}
