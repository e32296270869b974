#include "lagsurf/homology.hpp"

#include <algorithm>
#include <queue>

#include <nlohmann/json.hpp>

#include "lagsurf/errors.hpp"

namespace lagsurf {

namespace {

using Json = nlohmann::ordered_json;

void check_cycle_boundary(const SurfaceMesh& mesh, const std::vector<long long>& coeffs) {
    std::vector<long long> boundary(mesh.vertex_count(), 0);
    for (int e = 0; e < mesh.edge_count(); ++e) {
        boundary[mesh.edge(e)[1]] += coeffs[e];
        boundary[mesh.edge(e)[0]] -= coeffs[e];
    }
    for (long long b : boundary)
        if (b != 0) fail(ErrorKind::InternalRankError, "basis cycle has nonzero boundary");
}

// Permutation sign of the stored triangle relative to its sorted vertices.
int sorted_sign(const std::array<int, 3>& tri) {
    int inversions = 0;
    if (tri[0] > tri[1]) ++inversions;
    if (tri[0] > tri[2]) ++inversions;
    if (tri[1] > tri[2]) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
}

// Exact inverse of a small integer matrix with |det| = 1.
std::vector<std::vector<long long>> unimodular_inverse(
    std::vector<std::vector<Rational>> m) {
    const int n = static_cast<int>(m.size());
    std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, 0));
    for (int i = 0; i < n; ++i) inv[i][i] = 1;
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int row = col; row < n; ++row)
            if (m[row][col] != 0) {
                pivot = row;
                break;
            }
        if (pivot == -1)
            fail(ErrorKind::InternalRankError, "cup-product matrix is singular");
        std::swap(m[col], m[pivot]);
        std::swap(inv[col], inv[pivot]);
        Rational lead = m[col][col];
        for (int k = 0; k < n; ++k) {
            m[col][k] /= lead;
            inv[col][k] /= lead;
        }
        for (int row = 0; row < n; ++row) {
            if (row == col || m[row][col] == 0) continue;
            Rational factor = m[row][col];
            for (int k = 0; k < n; ++k) {
                m[row][k] -= factor * m[col][k];
                inv[row][k] -= factor * inv[col][k];
            }
        }
    }
    std::vector<std::vector<long long>> out(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (denominator(inv[i][j]) != 1)
                fail(ErrorKind::InternalRankError,
                     "intersection form is not integral; basis is not unimodular");
            out[i][j] = static_cast<long long>(numerator(inv[i][j]));
        }
    return out;
}

}  // namespace

std::string Cycle::to_json() const {
    Json edges = Json::array();
    for (int e = 0; e < static_cast<int>(coeffs.size()); ++e)
        if (coeffs[e] != 0)
            edges.push_back(Json::array({mesh->edge(e)[0], mesh->edge(e)[1], coeffs[e]}));
    Json doc;
    doc["edges"] = std::move(edges);
    return doc.dump();
}

double IntegerCocycle::max_triangle_defect() const {
    double worst = 0.0;
    for (int t = 0; t < mesh->triangle_count(); ++t) {
        const auto& tri = mesh->triangle(t);
        double sum = 0.0;
        for (int k = 0; k < 3; ++k) {
            int a = tri[k], b = tri[(k + 1) % 3];
            int e = mesh->triangle_edge_ids(t)[k];
            sum += (a < b) ? values[e] : -values[e];
        }
        worst = std::max(worst, std::abs(sum));
    }
    return worst;
}

std::string CohomologyClass::to_json() const {
    Json doc;
    doc["pairings"] = pairings;
    return doc.dump();
}

CycleBasis homology_basis(const SurfaceMesh& mesh) {
    const int nv = mesh.vertex_count();
    const int ne = mesh.edge_count();
    const int nt = mesh.triangle_count();

    // Spanning tree of the 1-skeleton.
    std::vector<char> in_tree(ne, 0);
    std::vector<int> parent_edge(nv, -1), parent_vertex(nv, -1), depth(nv, 0);
    {
        std::vector<char> seen(nv, 0);
        std::queue<int> queue;
        queue.push(0);
        seen[0] = 1;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop();
            for (int e : mesh.vertex_edges(v)) {
                int w = mesh.edge(e)[0] == v ? mesh.edge(e)[1] : mesh.edge(e)[0];
                if (seen[w]) continue;
                seen[w] = 1;
                in_tree[e] = 1;
                parent_edge[w] = e;
                parent_vertex[w] = v;
                depth[w] = depth[v] + 1;
                queue.push(w);
            }
        }
    }

    // Spanning tree of the dual graph on the complementary edges.
    std::vector<char> in_cotree(ne, 0);
    std::vector<int> dual_parent_edge(nt, -1), dual_parent_tri(nt, -1);
    {
        std::vector<char> seen(nt, 0);
        std::queue<int> queue;
        queue.push(0);
        seen[0] = 1;
        int reached = 1;
        while (!queue.empty()) {
            int t = queue.front();
            queue.pop();
            for (int k = 0; k < 3; ++k) {
                int e = mesh.triangle_edge_ids(t)[k];
                if (in_tree[e] || in_cotree[e]) continue;
                const auto& pair = mesh.edge_triangles(e);
                int other = pair[0] == t ? pair[1] : pair[0];
                if (seen[other]) continue;
                seen[other] = 1;
                in_cotree[e] = 1;
                dual_parent_edge[other] = e;
                dual_parent_tri[other] = t;
                ++reached;
                queue.push(other);
            }
        }
        if (reached != nt)
            fail(ErrorKind::InternalRankError, "dual graph on non-tree edges is disconnected");
    }

    std::vector<int> leftover;
    for (int e = 0; e < ne; ++e)
        if (!in_tree[e] && !in_cotree[e]) leftover.push_back(e);
    if (static_cast<int>(leftover.size()) != 2 * mesh.genus())
        fail(ErrorKind::InternalRankError,
             "expected " + std::to_string(2 * mesh.genus()) + " generators, found " +
                 std::to_string(leftover.size()));

    CycleBasis basis;
    basis.mesh_ = &mesh;

    // Signed tree path from one vertex to another, via the two root walks;
    // the shared tail cancels.
    auto add_tree_path = [&](std::vector<long long>& coeffs, int from, int to,
                             long long sign) {
        auto ascend = [&](int v, long long s) {
            while (parent_edge[v] != -1) {
                int e = parent_edge[v];
                // Moving from child v to its parent: direction v -> parent.
                long long dir = (mesh.edge(e)[0] == v) ? 1 : -1;
                coeffs[e] += s * dir;
                v = parent_vertex[v];
            }
        };
        ascend(from, sign);
        ascend(to, -sign);
    };

    for (int e : leftover) {
        Cycle cycle;
        cycle.mesh = &mesh;
        cycle.coeffs.assign(ne, 0);
        cycle.coeffs[e] = 1;  // canonical direction u -> v
        add_tree_path(cycle.coeffs, mesh.edge(e)[1], mesh.edge(e)[0], 1);
        check_cycle_boundary(mesh, cycle.coeffs);
        basis.cycles_.push_back(std::move(cycle));
    }

    // Dual cocycles: cross the leftover edge from its positive triangle to
    // its negative one, then close up through the cotree. A crossing of
    // edge f from tri_plus(f) to tri_minus(f) scores +1.
    for (int e : leftover) {
        std::vector<long long> beta(ne, 0);
        beta[e] = 1;
        auto walk_to_root = [&](int t, long long sign) {
            while (dual_parent_edge[t] != -1) {
                int f = dual_parent_edge[t];
                int parent = dual_parent_tri[t];
                long long w = (mesh.edge_triangles(f)[0] == t) ? 1 : -1;
                beta[f] += sign * w;
                t = parent;
            }
        };
        // The crossing e: tri_plus -> tri_minus; the cotree path walks back.
        walk_to_root(mesh.edge_triangles(e)[1], 1);
        walk_to_root(mesh.edge_triangles(e)[0], -1);
        basis.duals_.push_back(std::move(beta));
    }

    // Verify duality of the two families.
    for (int i = 0; i < basis.rank(); ++i)
        for (int j = 0; j < basis.rank(); ++j) {
            long long sum = 0;
            for (int k = 0; k < ne; ++k)
                sum += basis.duals_[i][k] * basis.cycles_[j].coeffs[k];
            if (sum != (i == j ? 1 : 0))
                fail(ErrorKind::InternalRankError, "dual cocycle pairing is not the identity");
        }

    // Cup-product matrix of the dual cocycles against the fundamental class;
    // its inverse is the intersection form on the cycle basis.
    const int rank = basis.rank();
    std::vector<std::vector<long long>> cup(rank, std::vector<long long>(rank, 0));
    for (int t = 0; t < nt; ++t) {
        std::array<int, 3> tri = mesh.triangle(t);
        int eps = sorted_sign(tri);
        std::sort(tri.begin(), tri.end());
        int e_pq = mesh.edge_index(tri[0], tri[1]);
        int e_qr = mesh.edge_index(tri[1], tri[2]);
        for (int i = 0; i < rank; ++i) {
            if (basis.duals_[i][e_pq] == 0) continue;
            for (int j = 0; j < rank; ++j)
                cup[i][j] += eps * basis.duals_[i][e_pq] * basis.duals_[j][e_qr];
        }
    }
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j)
            if (cup[i][j] != -cup[j][i])
                fail(ErrorKind::InternalRankError, "cup pairing is not antisymmetric");

    if (rank > 0) {
        std::vector<std::vector<Rational>> q(rank, std::vector<Rational>(rank));
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j) q[i][j] = cup[i][j];
        basis.form_ = unimodular_inverse(std::move(q));
    }

    {
        Json doc = Json::array();
        for (const auto& c : basis.cycles_) doc.push_back(Json::parse(c.to_json()));
        basis.digest_ = sha256_hex(doc.dump());
    }
    return basis;
}

std::vector<long long> CycleBasis::class_coordinates(const Cycle& cycle) const {
    if (cycle.mesh->digest() != mesh_->digest())
        fail(ErrorKind::MeshMismatch, "cycle belongs to a different mesh");
    std::vector<long long> coords(rank(), 0);
    for (int i = 0; i < rank(); ++i)
        for (int e = 0; e < mesh_->edge_count(); ++e)
            coords[i] += duals_[i][e] * cycle.coeffs[e];
    return coords;
}

long long CycleBasis::intersect(const Cycle& a, const Cycle& b) const {
    std::vector<long long> na = class_coordinates(a);
    std::vector<long long> nb = class_coordinates(b);
    long long total = 0;
    for (int i = 0; i < rank(); ++i)
        for (int j = 0; j < rank(); ++j) total += na[i] * form_[i][j] * nb[j];
    return total;
}

std::vector<std::vector<long long>> intersection_form(const CycleBasis& basis) {
    return basis.intersection_matrix();
}

double pair(const IntegerCocycle& cocycle, const Cycle& cycle) {
    if (cocycle.mesh->digest() != cycle.mesh->digest())
        fail(ErrorKind::MeshMismatch, "cocycle and cycle belong to different meshes");
    double sum = 0.0;
    for (int e = 0; e < cocycle.mesh->edge_count(); ++e)
        sum += cocycle.values[e] * static_cast<double>(cycle.coeffs[e]);
    return sum;
}

long long multiplicity(const std::vector<long long>& pairings) {
    long long g = 0;
    for (long long p : pairings) g = gcd_ll(g, p);
    return g;
}

long long multiplicity(const CohomologyClass& cls) { return multiplicity(cls.pairings); }

}  // namespace lagsurf
