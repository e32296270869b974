// lagsurf: batch CLI over the invariant computations, with deterministic
// JSON reports on stdout.

#include <chrono>
#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lagsurf/classifier.hpp"
#include "lagsurf/errors.hpp"
#include "lagsurf/forms.hpp"
#include "lagsurf/homology.hpp"
#include "lagsurf/lambda.hpp"
#include "lagsurf/mesh.hpp"
#include "lagsurf/suspension.hpp"
#include "lagsurf/util.hpp"
#include "lagsurf/winding.hpp"

namespace {

using Json = nlohmann::ordered_json;
using namespace lagsurf;

constexpr const char* kToolVersion = "0.1.0";

int exit_code_for(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::Validation: return 1;
        case ErrorCategory::Resolution: return 2;
        case ErrorCategory::Undefined: return 3;
        case ErrorCategory::Io: return 4;
        case ErrorCategory::Internal: return 1;
    }
    return 1;
}

const char* category_name(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::Validation: return "validation";
        case ErrorCategory::Resolution: return "resolution";
        case ErrorCategory::Undefined: return "undefined";
        case ErrorCategory::Io: return "io";
        case ErrorCategory::Internal: return "internal";
    }
    return "internal";
}

struct ReportClock {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    long long elapsed_ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

void emit_report(const std::string& command, const Json& inputs, const Json& payload,
                 const ReportClock& clock) {
    Json doc;
    doc["schema_version"] = 1;
    doc["command"] = command;
    doc["tool_version"] = kToolVersion;
    doc["inputs"] = inputs;
    doc["payload"] = payload;
    doc["elapsed_ms"] = clock.elapsed_ms();
    std::cout << doc.dump() << "\n";
}

[[noreturn]] void emit_error(const std::string& command, const Error& error) {
    Json doc;
    doc["schema_version"] = 1;
    doc["command"] = command;
    doc["tool_version"] = kToolVersion;
    doc["error"] = Json{{"kind", error_kind_name(error.kind())},
                        {"category", category_name(error.category())},
                        {"message", error.what()}};
    std::cout << doc.dump() << "\n";
    std::exit(exit_code_for(error.category()));
}

Json lambda_payload(const LambdaReport& report) {
    Json payload;
    payload["class"] = report.class_vector;
    payload["lambda"] = report.lambda;
    payload["basis"] = report.basis_digest;
    payload["frame"] = report.frame_digest;
    return payload;
}

Json ninvariant_payload(const NInvariant& inv) {
    Json payload;
    payload["c"] = inv.c;
    payload["n"] = inv.n;
    payload["d"] = inv.d;
    payload["d_raw"] = inv.d_raw;
    return payload;
}

std::string slurp(const std::string& path) { return read_file(path); }

// ---------------------------------------------------------------------------
// Realization: an angle field of the requested class, smoothed so every edge
// lift stays strictly inside (-pi, pi); falls back to the gcd-reduced
// representative when the mesh cannot carry the full class.

std::optional<AngleField> lattice_angle_field(const SurfaceMesh& mesh,
                                              const CycleBasis& basis, long long g) {
    if (!mesh.lattice()) return std::nullopt;
    const auto& lattice = *mesh.lattice();
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> theta(mesh.vertex_count(), 0.0);
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        long long phase = ((g * lattice.coords[v][0]) % lattice.n + lattice.n) % lattice.n;
        theta[v] = two_pi * static_cast<double>(phase) / lattice.n;
        if (theta[v] >= two_pi) theta[v] = 0.0;
    }
    try {
        AngleField field = make_angle_field(mesh, std::move(theta));
        CohomologyClass cls = winding_class(field, basis);
        if (multiplicity(cls.pairings) != g) return std::nullopt;
        return field;
    } catch (const Error& e) {
        if (error_category(e.kind()) == ErrorCategory::Resolution) return std::nullopt;
        throw;
    }
}

ZeroSectionFormField realize_class(const SurfaceMesh& mesh, const CycleBasis& basis,
                                   const std::vector<long long>& w,
                                   std::vector<long long>* realized_class) {
    long long g = multiplicity(w);
    if (g == 0) {
        // Constant automorphism: the canonical form on the nose.
        *realized_class = std::vector<long long>(basis.rank(), 0);
        return canonical_field(mesh);
    }

    std::optional<AngleField> field = smoothed_angle_field(mesh, basis, w);
    if (!field) field = lattice_angle_field(mesh, basis, g);
    if (!field) {
        std::vector<long long> reduced(basis.rank(), 0);
        reduced[0] = g;
        if (reduced != w) field = smoothed_angle_field(mesh, basis, reduced);
    }
    if (!field)
        fail(ErrorKind::EdgeAliasing,
             "the mesh resolution cannot carry a class of multiplicity " + std::to_string(g));

    *realized_class = winding_class(*field, basis).pairings;
    return realize_from_automorphism(rotation_field(*field));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"invariants of discretized Lagrangian-surface data"};
    app.require_subcommand(1);

    std::string mesh_path, omega_path, omega_prime_path, out_path, map_path, path_path;
    std::string winding_spec, format = "json";
    int time_steps = 3;
    double tol_antisym = 1e-12, tol_lagrangian = 1e-12;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format (json)")
            ->check(CLI::IsMember({"json"}));
    };

    CLI::App* validate = app.add_subcommand("validate", "validate a mesh file");
    validate->add_option("--mesh", mesh_path, "mesh JSON file")->required();
    add_common(validate);

    CLI::App* lambda_cmd =
        app.add_subcommand("lambda", "lambda invariant of a pair of forms");
    lambda_cmd->add_option("--mesh", mesh_path)->required();
    lambda_cmd->add_option("--omega-prime", omega_prime_path)->required();
    lambda_cmd->add_option("--omega", omega_path)->required();
    lambda_cmd->add_option("--tol-antisym", tol_antisym);
    lambda_cmd->add_option("--tol-lagrangian", tol_lagrangian);
    add_common(lambda_cmd);

    CLI::App* realize = app.add_subcommand(
        "realize", "write a form field whose lambda against the canonical form is gcd(w)");
    realize->add_option("--mesh", mesh_path)->required();
    realize->add_option("--winding", winding_spec,
                        "comma-separated winding vector, length 2g (empty for genus 0)");
    realize->add_option("--out", out_path)->required();
    add_common(realize);

    CLI::App* suspension =
        app.add_subcommand("suspension-homology", "homology profile of the double cone");
    suspension->add_option("--mesh", mesh_path)->required();
    suspension->add_option("--time-steps", time_steps)->check(CLI::Range(2, 64));
    add_common(suspension);

    CLI::App* classify_cmd =
        app.add_subcommand("classify", "classify a sphere map of the double cone");
    classify_cmd->add_option("--mesh", mesh_path)->required();
    classify_cmd->add_option("--map", map_path)->required();
    add_common(classify_cmd);

    CLI::App* ninv = app.add_subcommand("n-invariant", "n-invariant of an isotopy path");
    ninv->add_option("--mesh", mesh_path)->required();
    ninv->add_option("--path", path_path)->required();
    add_common(ninv);

    CLI11_PARSE(app, argc, argv);
    std::string command = app.get_subcommands().front()->get_name();
    ReportClock clock;

    try {
        if (validate->parsed()) {
            std::string mesh_text = slurp(mesh_path);
            Json inputs{{"mesh", sha256_hex(mesh_text)}};
            try {
                SurfaceMesh mesh = mesh_from_json(mesh_text);
                MeshStatistics stats = mesh.statistics();
                Json payload;
                payload["vertices"] = stats.vertex_count;
                payload["edges"] = stats.edge_count;
                payload["triangles"] = stats.triangle_count;
                payload["genus"] = stats.genus;
                payload["orientable"] = stats.orientable;
                emit_report(command, inputs, payload, clock);
            } catch (const Error& e) {
                emit_error(command, e);
            }
        } else if (lambda_cmd->parsed()) {
            std::string mesh_text = slurp(mesh_path);
            std::string prime_text = slurp(omega_prime_path);
            std::string base_text = slurp(omega_path);
            Json inputs{{"mesh", sha256_hex(mesh_text)},
                        {"omega_prime", sha256_hex(prime_text)},
                        {"omega", sha256_hex(base_text)}};
            SurfaceMesh mesh = mesh_from_json(mesh_text);
            FormTolerances tol{tol_antisym, tol_lagrangian};
            ZeroSectionFormField primed = form_field_from_json(mesh, prime_text, tol);
            ZeroSectionFormField base = form_field_from_json(mesh, base_text, tol);
            LambdaReport report = lambda(mesh, primed, base);
            emit_report(command, inputs, lambda_payload(report), clock);
        } else if (realize->parsed()) {
            std::string mesh_text = slurp(mesh_path);
            Json inputs{{"mesh", sha256_hex(mesh_text)}};
            SurfaceMesh mesh = mesh_from_json(mesh_text);
            CycleBasis basis = homology_basis(mesh);

            std::vector<long long> w;
            if (!winding_spec.empty()) {
                std::size_t pos = 0;
                while (pos <= winding_spec.size()) {
                    std::size_t comma = winding_spec.find(',', pos);
                    std::string token = winding_spec.substr(
                        pos, comma == std::string::npos ? std::string::npos : comma - pos);
                    if (!token.empty()) w.push_back(std::stoll(token));
                    if (comma == std::string::npos) break;
                    pos = comma + 1;
                }
            }
            if (static_cast<int>(w.size()) != basis.rank())
                fail(ErrorKind::WrongGenus,
                     "winding vector length " + std::to_string(w.size()) +
                         " does not match 2g = " + std::to_string(basis.rank()));

            std::vector<long long> realized;
            ZeroSectionFormField field = realize_class(mesh, basis, w, &realized);
            write_file(out_path, field.to_json());

            Json payload;
            payload["requested"] = w;
            payload["realized_class"] = realized;
            payload["lambda"] = multiplicity(w);
            payload["omega_digest"] = field.digest();
            emit_report(command, inputs, payload, clock);
        } else if (suspension->parsed()) {
            std::string mesh_text = slurp(mesh_path);
            Json inputs{{"mesh", sha256_hex(mesh_text)}};
            SurfaceMesh mesh = mesh_from_json(mesh_text);
            SuspensionComplex x = build_suspension(mesh, time_steps);
            HomologyProfile profile = homology_profile(x);
            Json payload;
            payload["time_steps"] = time_steps;
            payload["ranks"] = Json::array({profile.ranks[0], profile.ranks[1],
                                            profile.ranks[2]});
            payload["torsion"] = Json::array({profile.torsion[0], profile.torsion[1],
                                              profile.torsion[2]});
            emit_report(command, inputs, payload, clock);
        } else if (classify_cmd->parsed()) {
            std::string mesh_text = slurp(mesh_path);
            std::string map_text = slurp(map_path);
            Json inputs{{"mesh", sha256_hex(mesh_text)}, {"map", sha256_hex(map_text)}};
            SurfaceMesh mesh = mesh_from_json(mesh_text);

            // Infer the slice count from the vector count.
            Json map_doc = Json::parse(map_text, nullptr, false);
            if (map_doc.is_discarded() || !map_doc.contains("vectors"))
                fail(ErrorKind::SchemaError, "map file lacks a \"vectors\" array");
            int total = static_cast<int>(map_doc["vectors"].size());
            int nv = mesh.vertex_count();
            if (total < nv + 1 || (total - 1) % nv != 0)
                fail(ErrorKind::SchemaError,
                     "vector count does not match any slicing of this mesh");
            int T = (total - 1) / nv + 1;

            SuspensionComplex x = build_suspension(mesh, T);
            SphereMapData map = sphere_map_from_json(x, map_text);
            CycleBasis basis = homology_basis(mesh);
            NInvariant inv = classify(map, basis);
            emit_report(command, inputs, ninvariant_payload(inv), clock);
        } else if (ninv->parsed()) {
            std::string mesh_text = slurp(mesh_path);
            std::string path_text = slurp(path_path);
            Json inputs{{"mesh", sha256_hex(mesh_text)}, {"path", sha256_hex(path_text)}};
            SurfaceMesh mesh = mesh_from_json(mesh_text);
            IsotopyPath path = isotopy_path_from_json(mesh, path_text);
            NInvariant inv = n_invariant(path);
            emit_report(command, inputs, ninvariant_payload(inv), clock);
        }
    } catch (const Error& e) {
        emit_error(command, e);
    } catch (const std::exception& e) {
        emit_error(command, Error(ErrorKind::InternalError, e.what()));
    }
    return 0;
}
