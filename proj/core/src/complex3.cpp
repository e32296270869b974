#include "lagsurf/complex3.hpp"

#include <algorithm>
#include <map>

#include "lagsurf/errors.hpp"

namespace lagsurf {

int triple_parity(const std::array<int, 3>& from, const std::array<int, 3>& to) {
    std::array<int, 3> perm{};
    for (int i = 0; i < 3; ++i) {
        int where = -1;
        for (int j = 0; j < 3; ++j)
            if (to[j] == from[i]) {
                where = j;
                break;
            }
        if (where == -1)
            fail(ErrorKind::InternalError, "face tuples do not share a vertex set");
        perm[i] = where;
    }
    int inversions = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (perm[i] > perm[j]) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
}

int face_incidence_sign(const std::array<int, 4>& tet, const std::array<int, 3>& face) {
    for (int k = 0; k < 4; ++k) {
        std::array<int, 3> boundary{};
        int idx = 0;
        for (int i = 0; i < 4; ++i)
            if (i != k) boundary[idx++] = tet[i];
        std::array<int, 3> sorted_b = boundary, sorted_f = face;
        std::sort(sorted_b.begin(), sorted_b.end());
        std::sort(sorted_f.begin(), sorted_f.end());
        if (sorted_b != sorted_f) continue;
        int sign = (k % 2 == 0) ? 1 : -1;
        return sign * triple_parity(boundary, face);
    }
    fail(ErrorKind::InternalError, "face is not a boundary face of the tet");
}

std::vector<IntTriplet> SimplicialComplex3::boundary1() const {
    std::vector<IntTriplet> triplets;
    triplets.reserve(2 * edges.size());
    for (int e = 0; e < edge_count(); ++e) {
        triplets.push_back({edges[e][1], e, 1});
        triplets.push_back({edges[e][0], e, -1});
    }
    return triplets;
}

std::vector<IntTriplet> SimplicialComplex3::boundary2() const {
    std::vector<IntTriplet> triplets;
    triplets.reserve(3 * faces.size());
    for (int f = 0; f < face_count(); ++f)
        for (int k = 0; k < 3; ++k)
            triplets.push_back({faces[f].edges[k], f, faces[f].edge_signs[k]});
    return triplets;
}

std::vector<IntTriplet> SimplicialComplex3::boundary3() const {
    std::vector<IntTriplet> triplets;
    triplets.reserve(4 * cells.size());
    for (int c = 0; c < cell_count(); ++c)
        for (int k = 0; k < 4; ++k)
            triplets.push_back({cells[c].faces[k], c, cells[c].face_signs[k]});
    return triplets;
}

void SimplicialComplex3::validate_closed() const {
    std::vector<int> uses(faces.size(), 0), signed_sum(faces.size(), 0);
    for (const auto& cell : cells)
        for (int k = 0; k < 4; ++k) {
            uses[cell.faces[k]] += 1;
            signed_sum[cell.faces[k]] += cell.face_signs[k];
        }
    for (std::size_t f = 0; f < faces.size(); ++f) {
        if (uses[f] != 2)
            fail(ErrorKind::InternalError,
                 "face " + std::to_string(f) + " lies in " + std::to_string(uses[f]) +
                     " cells");
        if (signed_sum[f] != 0)
            fail(ErrorKind::InternalError,
                 "face " + std::to_string(f) + " has incoherent induced orientations");
    }
    for (const auto& face : faces) {
        // Side k runs vertices[k] -> vertices[k+1]; the stored edge must agree.
        for (int k = 0; k < 3; ++k) {
            int a = face.vertices[k], b = face.vertices[(k + 1) % 3];
            const auto& edge = edges[face.edges[k]];
            bool forward = edge[0] == a && edge[1] == b;
            bool backward = edge[0] == b && edge[1] == a;
            if (!(forward || backward) || face.edge_signs[k] != (forward ? 1 : -1))
                fail(ErrorKind::InternalError, "face-edge incidence is wired incorrectly");
        }
    }
}

BarycentricSubdivision barycentric_subdivide(const SimplicialComplex3& input) {
    BarycentricSubdivision out;
    SimplicialComplex3& sub = out.complex;

    const int nv = input.vertex_count;
    const int ne = input.edge_count();
    const int nf = input.face_count();
    sub.vertex_count = nv + ne + nf + input.cell_count();
    out.vertex_parents.reserve(sub.vertex_count);
    for (int v = 0; v < nv; ++v) out.vertex_parents.emplace_back(0, v);
    for (int e = 0; e < ne; ++e) out.vertex_parents.emplace_back(1, e);
    for (int f = 0; f < nf; ++f) out.vertex_parents.emplace_back(2, f);
    for (int c = 0; c < input.cell_count(); ++c) out.vertex_parents.emplace_back(3, c);

    auto edge_vertex = [&](int e) { return nv + e; };
    auto face_vertex = [&](int f) { return nv + ne + f; };
    auto cell_vertex = [&](int c) { return nv + ne + nf + c; };

    // In the subdivision every simplex contains a barycenter whose id pins
    // its parent, so vertex tuples identify cells uniquely.
    std::map<std::array<int, 2>, int> edge_ids;
    std::map<std::array<int, 3>, int> face_ids;

    auto get_edge = [&](int a, int b) {
        std::array<int, 2> key{std::min(a, b), std::max(a, b)};
        auto [it, fresh] = edge_ids.try_emplace(key, sub.edge_count());
        if (fresh) sub.edges.push_back(key);
        return it->second;
    };
    auto get_face = [&](std::array<int, 3> tuple) {
        std::array<int, 3> key = tuple;
        std::sort(key.begin(), key.end());
        auto [it, fresh] = face_ids.try_emplace(key, sub.face_count());
        if (fresh) {
            SimplicialComplex3::Face face;
            face.vertices = tuple;
            for (int k = 0; k < 3; ++k) {
                int a = tuple[k], b = tuple[(k + 1) % 3];
                face.edges[k] = get_edge(a, b);
                face.edge_signs[k] = (sub.edges[face.edges[k]][0] == a) ? 1 : -1;
            }
            sub.faces.push_back(face);
        }
        return it->second;
    };
    auto add_cell = [&](std::array<int, 4> tuple) {
        SimplicialComplex3::Cell cell;
        cell.vertices = tuple;
        const std::array<std::array<int, 3>, 4> boundaries = {{
            {tuple[1], tuple[2], tuple[3]},
            {tuple[0], tuple[2], tuple[3]},
            {tuple[0], tuple[1], tuple[3]},
            {tuple[0], tuple[1], tuple[2]},
        }};
        for (int k = 0; k < 4; ++k) {
            cell.faces[k] = get_face(boundaries[k]);
            cell.face_signs[k] =
                face_incidence_sign(tuple, sub.faces[cell.faces[k]].vertices);
        }
        sub.cells.push_back(cell);
    };

    for (int c = 0; c < input.cell_count(); ++c) {
        const auto& cell = input.cells[c];
        auto position_of = [&](int vertex) {
            for (int i = 0; i < 4; ++i)
                if (cell.vertices[i] == vertex) return i;
            fail(ErrorKind::InternalError, "vertex does not belong to the cell");
        };
        for (int fk = 0; fk < 4; ++fk) {
            int f = cell.faces[fk];
            const auto& face = input.faces[f];
            for (int ek = 0; ek < 3; ++ek) {
                int e = face.edges[ek];
                for (int end = 0; end < 2; ++end) {
                    int v = input.edges[e][end];
                    int v_other = input.edges[e][1 - end];
                    // Flag positions inside the cell give the orientation
                    // parity of (v, b_e, b_f, b_c).
                    int p0 = position_of(v);
                    int p1 = position_of(v_other);
                    int p2 = -1;
                    for (int fv : face.vertices)
                        if (fv != v && fv != v_other) p2 = position_of(fv);
                    int p3 = 6 - p0 - p1 - p2;
                    std::array<int, 4> perm{p0, p1, p2, p3};
                    int inversions = 0;
                    for (int i = 0; i < 4; ++i)
                        for (int j = i + 1; j < 4; ++j)
                            if (perm[i] > perm[j]) ++inversions;
                    std::array<int, 4> tuple{v, edge_vertex(e), face_vertex(f),
                                             cell_vertex(c)};
                    if (inversions % 2 == 1) std::swap(tuple[0], tuple[1]);
                    add_cell(tuple);
                }
            }
        }
    }
    return out;
}

}  // namespace lagsurf
