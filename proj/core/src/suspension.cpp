#include "lagsurf/suspension.hpp"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

#include "lagsurf/errors.hpp"

namespace lagsurf {

namespace {

using Json = nlohmann::ordered_json;

int sorted_sign3(std::array<int, 3> tri) {
    int inversions = 0;
    if (tri[0] > tri[1]) ++inversions;
    if (tri[0] > tri[2]) ++inversions;
    if (tri[1] > tri[2]) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
}

}  // namespace

int SuspensionComplex::slice_vertex(int s, int v) const {
    return (s - 1) * mesh_->vertex_count() + v;
}

int SuspensionComplex::slice_of_vertex(int vertex) const {
    if (vertex == apex_) return 0;
    return vertex / mesh_->vertex_count() + 1;
}

int SuspensionComplex::base_vertex_of(int vertex) const {
    if (vertex == apex_) return -1;
    return vertex % mesh_->vertex_count();
}

std::string SuspensionComplex::to_json() const {
    Json doc;
    Json tets = Json::array();
    for (const auto& cell : complex_.cells)
        tets.push_back(Json::array(
            {cell.vertices[0], cell.vertices[1], cell.vertices[2], cell.vertices[3]}));
    doc["tets"] = std::move(tets);
    doc["apex"] = apex_;
    doc["slices"] = T_;
    return doc.dump();
}

SuspensionComplex build_suspension(const SurfaceMesh& mesh, int T) {
    if (T < 2)
        fail(ErrorKind::ResolutionTooLow, "the suspension needs at least 2 time steps");

    SuspensionComplex x;
    x.mesh_ = &mesh;
    x.T_ = T;
    const int nv = mesh.vertex_count();
    const int ne = mesh.edge_count();
    const int nt = mesh.triangle_count();
    x.apex_ = (T - 1) * nv;

    SimplicialComplex3& c = x.complex_;
    c.vertex_count = (T - 1) * nv + 1;

    auto at = [&](int s, int v) { return (s - 1) * nv + v; };

    // Typed edge registry; the double cone aliases vertex pairs (both cones
    // share the apex), so ids are resolved through these tables.
    std::vector<std::vector<int>> slice_edges(T - 1, std::vector<int>(ne));
    std::vector<std::vector<int>> vertical_edges, diagonal_edges;
    std::vector<int> bottom_edges(nv), top_edges(nv);
    if (T > 2) {
        vertical_edges.assign(T - 2, std::vector<int>(nv));
        diagonal_edges.assign(T - 2, std::vector<int>(ne));
    }

    auto push_edge = [&](int tail, int head) {
        c.edges.push_back({tail, head});
        return c.edge_count() - 1;
    };
    for (int s = 1; s <= T - 1; ++s)
        for (int e = 0; e < ne; ++e)
            slice_edges[s - 1][e] = push_edge(at(s, mesh.edge(e)[0]), at(s, mesh.edge(e)[1]));
    for (int s = 1; s <= T - 2; ++s)
        for (int v = 0; v < nv; ++v)
            vertical_edges[s - 1][v] = push_edge(at(s, v), at(s + 1, v));
    for (int s = 1; s <= T - 2; ++s)
        for (int e = 0; e < ne; ++e)
            diagonal_edges[s - 1][e] =
                push_edge(at(s, mesh.edge(e)[0]), at(s + 1, mesh.edge(e)[1]));
    for (int v = 0; v < nv; ++v) bottom_edges[v] = push_edge(x.apex_, at(1, v));
    for (int v = 0; v < nv; ++v) top_edges[v] = push_edge(x.apex_, at(T - 1, v));

    // Faces, wired to their typed edges.
    auto push_face = [&](std::array<int, 3> vertices, std::array<int, 3> edge_ids) {
        SimplicialComplex3::Face face;
        face.vertices = vertices;
        face.edges = edge_ids;
        for (int k = 0; k < 3; ++k) {
            const auto& edge = c.edges[edge_ids[k]];
            int a = vertices[k], b = vertices[(k + 1) % 3];
            if (edge[0] == a && edge[1] == b)
                face.edge_signs[k] = 1;
            else if (edge[0] == b && edge[1] == a)
                face.edge_signs[k] = -1;
            else
                fail(ErrorKind::InternalError, "suspension face wired to a wrong edge");
        }
        c.faces.push_back(face);
        return c.face_count() - 1;
    };

    x.slice_faces_.assign(T - 1, std::vector<int>(nt));
    for (int s = 1; s <= T - 1; ++s)
        for (int t = 0; t < nt; ++t) {
            const auto& tri = mesh.triangle(t);
            x.slice_faces_[s - 1][t] = push_face(
                {at(s, tri[0]), at(s, tri[1]), at(s, tri[2])},
                {slice_edges[s - 1][mesh.triangle_edge_ids(t)[0]],
                 slice_edges[s - 1][mesh.triangle_edge_ids(t)[1]],
                 slice_edges[s - 1][mesh.triangle_edge_ids(t)[2]]});
        }

    // Wall faces per slab and mesh edge (u < v):
    //   W1 = (u_s, v_s, v_{s+1}),  W2 = (u_s, v_{s+1}, u_{s+1});
    // prism interior faces per slab and triangle with sorted (p < q < r):
    //   I1 = (p_s, q_s, r_{s+1}), I2 = (p_s, q_{s+1}, r_{s+1}).
    std::vector<std::vector<int>> interior_faces;
    if (T > 2) {
        x.wall_faces_.assign(T - 2, std::vector<int>(2 * ne));
        interior_faces.assign(T - 2, std::vector<int>(2 * nt));
        for (int s = 1; s <= T - 2; ++s) {
            for (int e = 0; e < ne; ++e) {
                int u = mesh.edge(e)[0], v = mesh.edge(e)[1];
                x.wall_faces_[s - 1][2 * e + 0] =
                    push_face({at(s, u), at(s, v), at(s + 1, v)},
                              {slice_edges[s - 1][e], vertical_edges[s - 1][v],
                               diagonal_edges[s - 1][e]});
                x.wall_faces_[s - 1][2 * e + 1] =
                    push_face({at(s, u), at(s + 1, v), at(s + 1, u)},
                              {diagonal_edges[s - 1][e], slice_edges[s][e],
                               vertical_edges[s - 1][u]});
            }
            for (int t = 0; t < nt; ++t) {
                std::array<int, 3> sorted = mesh.triangle(t);
                std::sort(sorted.begin(), sorted.end());
                int p = sorted[0], q = sorted[1], r = sorted[2];
                int e_pq = mesh.edge_index(p, q);
                int e_qr = mesh.edge_index(q, r);
                int e_pr = mesh.edge_index(p, r);
                interior_faces[s - 1][2 * t + 0] =
                    push_face({at(s, p), at(s, q), at(s + 1, r)},
                              {slice_edges[s - 1][e_pq], diagonal_edges[s - 1][e_qr],
                               diagonal_edges[s - 1][e_pr]});
                interior_faces[s - 1][2 * t + 1] =
                    push_face({at(s, p), at(s + 1, q), at(s + 1, r)},
                              {diagonal_edges[s - 1][e_pq], slice_edges[s][e_qr],
                               diagonal_edges[s - 1][e_pr]});
            }
        }
    }

    x.bottom_cone_faces_.resize(ne);
    x.top_cone_faces_.resize(ne);
    for (int e = 0; e < ne; ++e) {
        int u = mesh.edge(e)[0], v = mesh.edge(e)[1];
        x.bottom_cone_faces_[e] =
            push_face({x.apex_, at(1, u), at(1, v)},
                      {bottom_edges[u], slice_edges[0][e], bottom_edges[v]});
        x.top_cone_faces_[e] =
            push_face({x.apex_, at(T - 1, u), at(T - 1, v)},
                      {top_edges[u], slice_edges[T - 2][e], top_edges[v]});
    }

    auto push_cell = [&](std::array<int, 4> vertices, std::array<int, 4> face_ids) {
        SimplicialComplex3::Cell cell;
        cell.vertices = vertices;
        cell.faces = face_ids;
        for (int k = 0; k < 4; ++k)
            cell.face_signs[k] =
                face_incidence_sign(vertices, c.faces[face_ids[k]].vertices);
        c.cells.push_back(cell);
    };

    // Bottom cone tets induce +triangle on slice 1, top cone tets the
    // reverse, matching the product orientation of the slabs in between.
    for (int t = 0; t < nt; ++t) {
        const auto& tri = mesh.triangle(t);
        const auto& te = mesh.triangle_edge_ids(t);
        push_cell({x.apex_, at(1, tri[0]), at(1, tri[1]), at(1, tri[2])},
                  {x.slice_faces_[0][t], x.bottom_cone_faces_[te[0]],
                   x.bottom_cone_faces_[te[1]], x.bottom_cone_faces_[te[2]]});
        push_cell({x.apex_, at(T - 1, tri[2]), at(T - 1, tri[1]), at(T - 1, tri[0])},
                  {x.slice_faces_[T - 2][t], x.top_cone_faces_[te[0]],
                   x.top_cone_faces_[te[1]], x.top_cone_faces_[te[2]]});
    }

    for (int s = 1; s <= T - 2; ++s)
        for (int t = 0; t < nt; ++t) {
            std::array<int, 3> sorted = mesh.triangle(t);
            std::sort(sorted.begin(), sorted.end());
            int p = sorted[0], q = sorted[1], r = sorted[2];
            int sign = sorted_sign3(mesh.triangle(t));
            int e_pq = mesh.edge_index(p, q);
            int e_qr = mesh.edge_index(q, r);
            int e_pr = mesh.edge_index(p, r);

            auto oriented = [&](std::array<int, 4> tuple) {
                if (sign < 0) std::swap(tuple[2], tuple[3]);
                return tuple;
            };
            push_cell(oriented({at(s, p), at(s, q), at(s, r), at(s + 1, r)}),
                      {x.slice_faces_[s - 1][t], x.wall_faces_[s - 1][2 * e_qr + 0],
                       x.wall_faces_[s - 1][2 * e_pr + 0], interior_faces[s - 1][2 * t + 0]});
            push_cell(oriented({at(s, p), at(s, q), at(s + 1, r), at(s + 1, q)}),
                      {interior_faces[s - 1][2 * t + 0], x.wall_faces_[s - 1][2 * e_qr + 1],
                       x.wall_faces_[s - 1][2 * e_pq + 0], interior_faces[s - 1][2 * t + 1]});
            push_cell(oriented({at(s, p), at(s + 1, p), at(s + 1, q), at(s + 1, r)}),
                      {interior_faces[s - 1][2 * t + 1], x.slice_faces_[s][t],
                       x.wall_faces_[s - 1][2 * e_pq + 1], x.wall_faces_[s - 1][2 * e_pr + 1]});
        }

    c.validate_closed();
    return x;
}

HomologyProfile homology_profile(const SuspensionComplex& x) {
    const SimplicialComplex3& c = x.complex();
    IntegerDiagonalization d1(c.vertex_count, c.edge_count(), c.boundary1());
    IntegerDiagonalization d2(c.edge_count(), c.face_count(), c.boundary2());
    IntegerDiagonalization d3(c.face_count(), c.cell_count(), c.boundary3());

    HomologyProfile profile;
    profile.ranks[0] = c.edge_count() - d1.rank() - d2.rank();
    profile.ranks[1] = c.face_count() - d2.rank() - d3.rank();
    profile.ranks[2] = c.cell_count() - d3.rank();

    auto torsion_of = [](const IntegerDiagonalization& d) {
        std::vector<long long> torsion;
        for (const BigInt& v : d.invariant_factors())
            if (v != 1) torsion.push_back(static_cast<long long>(v));
        return torsion;
    };
    profile.torsion[0] = torsion_of(d2);
    profile.torsion[1] = torsion_of(d3);
    // H3 of a closed complex has no torsion source (there is no boundary
    // from dimension 4); the list stays empty.
    return profile;
}

std::string HomologyProfile::to_json() const {
    Json doc;
    doc["ranks"] = Json::array({ranks[0], ranks[1], ranks[2]});
    Json torsion_doc = Json::array();
    for (const auto& t : torsion) torsion_doc.push_back(t);
    doc["torsion"] = std::move(torsion_doc);
    return doc.dump();
}

std::vector<std::vector<long long>> basis_2cycles(const SuspensionComplex& x,
                                                  const CycleBasis& basis) {
    const SurfaceMesh& mesh = x.base();
    if (basis.mesh().digest() != mesh.digest())
        fail(ErrorKind::MeshMismatch, "cycle basis belongs to a different mesh");
    const SimplicialComplex3& c = x.complex();
    const int T = x.time_steps();

    std::vector<std::vector<long long>> chains;
    for (int i = 0; i < basis.rank(); ++i) {
        const Cycle& gamma = basis.cycle(i);
        std::vector<long long> chain(c.face_count(), 0);
        for (int e = 0; e < mesh.edge_count(); ++e) {
            long long coeff = gamma.coeffs[e];
            if (coeff == 0) continue;
            for (int s = 1; s <= T - 2; ++s) {
                chain[x.wall_face(s, e, 0)] += coeff;
                chain[x.wall_face(s, e, 1)] += coeff;
            }
            chain[x.bottom_cone_face(e)] -= coeff;
            chain[x.top_cone_face(e)] += coeff;
        }

        // The swept chain must be a cycle on the nose.
        std::vector<long long> boundary(c.edge_count(), 0);
        for (int f = 0; f < c.face_count(); ++f) {
            if (chain[f] == 0) continue;
            for (int k = 0; k < 3; ++k)
                boundary[c.faces[f].edges[k]] += chain[f] * c.faces[f].edge_signs[k];
        }
        for (long long b : boundary)
            if (b != 0) fail(ErrorKind::NotACycle, "swept 2-chain has nonzero boundary");
        chains.push_back(std::move(chain));
    }

    if (!chains.empty()) {
        // The classes must form a Z-basis of H2: in kernel coordinates the
        // image of boundary3 together with the swept cycles must span the
        // whole kernel lattice unimodularly.
        IntegerDiagonalization d2(c.edge_count(), c.face_count(), c.boundary2());
        std::vector<std::vector<BigInt>> kernel = d2.kernel_basis();
        const int kdim = static_cast<int>(kernel.size());
        std::vector<IntTriplet> kernel_triplets;
        for (int j = 0; j < kdim; ++j)
            for (int r = 0; r < c.face_count(); ++r)
                if (kernel[j][r] != 0)
                    kernel_triplets.push_back(
                        {r, j, static_cast<long long>(kernel[j][r])});
        IntegerDiagonalization kernel_diag(c.face_count(), kdim, kernel_triplets);

        auto in_kernel_coords = [&](const std::vector<BigInt>& v) {
            auto w = kernel_diag.solve(v);
            if (!w) fail(ErrorKind::InternalError, "cycle is not in the kernel lattice");
            return *w;
        };

        std::vector<IntTriplet> span_triplets;
        int col = 0;
        std::vector<IntTriplet> b3 = c.boundary3();
        std::vector<std::vector<BigInt>> d3_columns(
            c.cell_count(), std::vector<BigInt>(c.face_count(), 0));
        for (const auto& t : b3) d3_columns[t.col][t.row] += t.value;
        for (int cc = 0; cc < c.cell_count(); ++cc) {
            std::vector<BigInt> w = in_kernel_coords(d3_columns[cc]);
            for (int r = 0; r < kdim; ++r)
                if (w[r] != 0)
                    span_triplets.push_back({r, col, static_cast<long long>(w[r])});
            ++col;
        }
        for (const auto& chain : chains) {
            std::vector<BigInt> v(chain.begin(), chain.end());
            std::vector<BigInt> w = in_kernel_coords(v);
            for (int r = 0; r < kdim; ++r)
                if (w[r] != 0)
                    span_triplets.push_back({r, col, static_cast<long long>(w[r])});
            ++col;
        }
        IntegerDiagonalization span(kdim, col, span_triplets);
        if (span.rank() != kdim)
            fail(ErrorKind::InternalRankError,
                 "swept cycles do not span H2 together with the boundaries");
        for (const BigInt& d : span.invariant_factors())
            if (d != 1)
                fail(ErrorKind::InternalRankError,
                     "swept cycles generate a proper sublattice of H2");
    }
    return chains;
}

}  // namespace lagsurf
