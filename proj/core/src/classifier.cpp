#include "lagsurf/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <numbers>
#include <optional>
#include <set>

#include <nlohmann/json.hpp>

#include "lagsurf/errors.hpp"

namespace lagsurf {

namespace {

using Json = nlohmann::ordered_json;
using RV3 = std::array<Rational, 3>;

constexpr double kUnitTolerance = 1e-9;
constexpr double kPlanePrefilter = 1e-6;
constexpr double kBoundaryTolerance = 1e-9;
constexpr int kMaxValueAttempts = 100;

RV3 to_rational(const Eigen::Vector3d& v) {
    return {rational_of_double(v.x()), rational_of_double(v.y()), rational_of_double(v.z())};
}

Rational det3(const RV3& a, const RV3& b, const RV3& c) {
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
           a[2] * (b[0] * c[1] - b[1] * c[0]);
}

RV3 rsub(const RV3& a, const RV3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

int sign_of(const Rational& q) { return q == 0 ? 0 : (q > 0 ? 1 : -1); }

// Exact rank bookkeeping for the degenerate face configurations.
int rational_rank(std::vector<RV3> columns) {
    int rank = 0;
    for (int col = 0; col < static_cast<int>(columns.size()); ++col) {
        int pivot = -1;
        for (int r = rank; r < 3; ++r)
            if (columns[col][r] != 0) {
                pivot = r;
                break;
            }
        if (pivot == -1) continue;
        std::swap(columns[col][rank], columns[col][pivot]);
        for (int c2 = col + 1; c2 < static_cast<int>(columns.size()); ++c2)
            std::swap(columns[c2][rank], columns[c2][pivot]);
        for (int c2 = col + 1; c2 < static_cast<int>(columns.size()); ++c2) {
            if (columns[c2][rank] == 0) continue;
            Rational factor = columns[c2][rank] / columns[col][rank];
            for (int r = rank; r < 3; ++r) columns[c2][r] -= factor * columns[col][r];
        }
        ++rank;
        if (rank == 3) break;
    }
    return rank;
}

// --------------------------------------------------------------------------
// Regular value candidates: a fixed low-discrepancy spiral on S^2, rotated
// deterministically by the content seed.

Eigen::Matrix3d seed_rotation(std::uint64_t seed) {
    double alpha = 2.0 * std::numbers::pi * static_cast<double>(seed % 1000003ull) / 1000003.0;
    double beta = std::numbers::pi * static_cast<double>((seed / 1000003ull) % 1000003ull) /
                  1000003.0;
    Eigen::Matrix3d rz, ry;
    rz << std::cos(alpha), -std::sin(alpha), 0, std::sin(alpha), std::cos(alpha), 0, 0, 0, 1;
    ry << std::cos(beta), 0, std::sin(beta), 0, 1, 0, -std::sin(beta), 0, std::cos(beta);
    return rz * ry;
}

Eigen::Vector3d spiral_point(int k, const Eigen::Matrix3d& rotation) {
    const int cycle = 4096;
    double z = 1.0 - 2.0 * ((k % cycle) + 0.5) / cycle;
    double radius = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = std::numbers::pi * (3.0 - std::sqrt(5.0)) * k;
    return rotation * Eigen::Vector3d(radius * std::cos(phi), radius * std::sin(phi), z);
}

// Float prefilter: keep candidates visibly away from all edge cones of the
// listed faces; exact predicates still decide every crossing.
bool passes_prefilter(const Eigen::Vector3d& p, const SimplicialComplex3& complex,
                      const std::vector<Eigen::Vector3d>& values,
                      const std::vector<int>& face_ids) {
    for (int f : face_ids) {
        const auto& tuple = complex.faces[f].vertices;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                Eigen::Vector3d cross = values[tuple[i]].cross(values[tuple[j]]);
                double norm = cross.norm();
                if (norm < 1e-12) continue;
                if (std::abs(p.dot(cross)) / norm < kPlanePrefilter) return false;
            }
    }
    return true;
}

// --------------------------------------------------------------------------
// Exact crossing structure of the ray through p.

struct FaceCrossing {
    bool crossed = false;
    int sign = 0;   // orientation of the image triple
    RV3 barycentric{};  // normalized coordinates over the stored face tuple
};

struct CrossingScan {
    std::vector<FaceCrossing> faces;
    // Per crossed tet: entry and exit face ids (curve runs entry -> exit).
    std::map<int, std::array<int, 2>> tets;
};

FaceCrossing solve_face_crossing(const RV3& a, const RV3& b, const RV3& c, const RV3& p,
                                 int face_id) {
    FaceCrossing out;
    Rational d = det3(a, b, c);
    if (d == 0) {
        int base = rational_rank({a, b, c});
        int with_p = rational_rank({a, b, c, p});
        if (with_p == base)
            fail(ErrorKind::NotRegular,
                 "value lies in the degenerate image plane of face " + std::to_string(face_id));
        return out;
    }
    Rational x0 = det3(p, b, c) / d;
    Rational x1 = det3(a, p, c) / d;
    Rational x2 = det3(a, b, p) / d;
    int s0 = sign_of(x0), s1 = sign_of(x1), s2 = sign_of(x2);
    if (s0 == 0 || s1 == 0 || s2 == 0) {
        if ((s0 >= 0 && s1 >= 0 && s2 >= 0))
            fail(ErrorKind::NotRegular,
                 "value meets the image boundary of face " + std::to_string(face_id));
        return out;
    }
    if (s0 < 0 || s1 < 0 || s2 < 0) return out;
    out.crossed = true;
    out.sign = sign_of(d);
    Rational total = x0 + x1 + x2;
    out.barycentric = {x0 / total, x1 / total, x2 / total};
    return out;
}

CrossingScan scan_crossings(const SimplicialComplex3& complex,
                            const std::vector<RV3>& rational_values, const RV3& p) {
    CrossingScan scan;
    scan.faces.resize(complex.face_count());
    for (int f = 0; f < complex.face_count(); ++f) {
        const auto& tuple = complex.faces[f].vertices;
        scan.faces[f] = solve_face_crossing(rational_values[tuple[0]],
                                            rational_values[tuple[1]],
                                            rational_values[tuple[2]], p, f);
    }
    for (int cidx = 0; cidx < complex.cell_count(); ++cidx) {
        const auto& cell = complex.cells[cidx];
        int entry = -1, exit = -1, crossed = 0;
        for (int k = 0; k < 4; ++k) {
            const FaceCrossing& fc = scan.faces[cell.faces[k]];
            if (!fc.crossed) continue;
            ++crossed;
            int product = cell.face_signs[k] * fc.sign;
            if (product > 0)
                exit = cell.faces[k];
            else
                entry = cell.faces[k];
        }
        if (crossed == 0) continue;
        if (crossed != 2 || entry == -1 || exit == -1)
            fail(ErrorKind::DegenerateImage,
                 "tet " + std::to_string(cidx) +
                     " has a degenerate image around the value (crossings: " +
                     std::to_string(crossed) + ")");
        scan.tets[cidx] = {entry, exit};
    }
    return scan;
}

// --------------------------------------------------------------------------
// Crossing refinement: crossed faces gain their crossing point and split
// into three, crossed tets are coned from their barycenter. The preimage
// becomes the simplicial cycle r_in -> barycenter -> r_out per crossed tet.

struct Refinement {
    SimplicialComplex3 complex;
    std::vector<int> kept_face;                // orig face -> refined id or -1
    std::vector<std::array<int, 3>> subfaces;  // orig face -> 3 refined ids
    std::vector<int> crossing_vertex;          // orig face -> refined vertex or -1
    std::vector<int> barycenter;               // orig tet -> refined vertex or -1
    std::map<std::pair<int, int>, int> cone_edge;   // (tet, refined vertex) -> edge
    std::vector<std::vector<int>> cone_faces_of;    // orig tet -> interior faces
    std::vector<long long> preimage;                // 1-cycle over refined edges
};

Refinement build_refinement(const SimplicialComplex3& complex, const CrossingScan& scan) {
    Refinement ref;
    SimplicialComplex3& out = ref.complex;
    const int nf = complex.face_count();
    const int nc = complex.cell_count();

    ref.kept_face.assign(nf, -1);
    ref.subfaces.assign(nf, {-1, -1, -1});
    ref.crossing_vertex.assign(nf, -1);
    ref.barycenter.assign(nc, -1);
    ref.cone_faces_of.assign(nc, {});

    out.vertex_count = complex.vertex_count;
    for (int f = 0; f < nf; ++f)
        if (scan.faces[f].crossed) ref.crossing_vertex[f] = out.vertex_count++;
    for (const auto& [cidx, inout] : scan.tets) ref.barycenter[cidx] = out.vertex_count++;

    out.edges = complex.edges;  // original edges are never split
    std::vector<std::array<int, 3>> fan_edges(nf, {-1, -1, -1});
    for (int f = 0; f < nf; ++f) {
        if (!scan.faces[f].crossed) continue;
        for (int k = 0; k < 3; ++k) {
            out.edges.push_back({complex.faces[f].vertices[k], ref.crossing_vertex[f]});
            fan_edges[f][k] = out.edge_count() - 1;
        }
    }
    for (const auto& [cidx, inout] : scan.tets) {
        const auto& cell = complex.cells[cidx];
        std::vector<int> boundary_vertices(cell.vertices.begin(), cell.vertices.end());
        for (int k = 0; k < 4; ++k)
            if (scan.faces[cell.faces[k]].crossed)
                boundary_vertices.push_back(ref.crossing_vertex[cell.faces[k]]);
        for (int v : boundary_vertices) {
            out.edges.push_back({ref.barycenter[cidx], v});
            ref.cone_edge[{cidx, v}] = out.edge_count() - 1;
        }
    }

    auto push_face = [&](std::array<int, 3> vertices, std::array<int, 3> edge_ids) {
        SimplicialComplex3::Face face;
        face.vertices = vertices;
        face.edges = edge_ids;
        for (int k = 0; k < 3; ++k) {
            const auto& edge = out.edges[edge_ids[k]];
            int a = vertices[k], b = vertices[(k + 1) % 3];
            if (edge[0] == a && edge[1] == b)
                face.edge_signs[k] = 1;
            else if (edge[0] == b && edge[1] == a)
                face.edge_signs[k] = -1;
            else
                fail(ErrorKind::InternalError, "refined face wired to a wrong edge");
        }
        out.faces.push_back(face);
        return out.face_count() - 1;
    };

    for (int f = 0; f < nf; ++f) {
        const auto& face = complex.faces[f];
        if (!scan.faces[f].crossed) {
            ref.kept_face[f] = push_face(face.vertices, face.edges);
            continue;
        }
        int r = ref.crossing_vertex[f];
        for (int k = 0; k < 3; ++k) {
            int a = face.vertices[k], b = face.vertices[(k + 1) % 3];
            // (a, b, r): sides (a,b) original, (b,r) fan, (r,a) fan.
            ref.subfaces[f][k] =
                push_face({a, b, r}, {face.edges[k], fan_edges[f][(k + 1) % 3],
                                      fan_edges[f][k]});
        }
    }

    auto push_cell = [&](std::array<int, 4> vertices, std::array<int, 4> face_ids) {
        SimplicialComplex3::Cell cell;
        cell.vertices = vertices;
        cell.faces = face_ids;
        for (int k = 0; k < 4; ++k)
            cell.face_signs[k] =
                face_incidence_sign(vertices, out.faces[face_ids[k]].vertices);
        out.cells.push_back(cell);
    };

    for (int cidx = 0; cidx < nc; ++cidx) {
        const auto& cell = complex.cells[cidx];
        if (ref.barycenter[cidx] == -1) {
            std::array<int, 4> face_ids{};
            for (int k = 0; k < 4; ++k) face_ids[k] = ref.kept_face[cell.faces[k]];
            push_cell(cell.vertices, face_ids);
            continue;
        }
        int m = ref.barycenter[cidx];
        // Interior cone faces, one per edge of the refined boundary of the
        // tet; then one cone cell per refined boundary piece.
        std::map<int, int> cone_face_by_edge;
        auto cone_face = [&](int edge_id) {
            auto it = cone_face_by_edge.find(edge_id);
            if (it != cone_face_by_edge.end()) return it->second;
            const auto& edge = out.edges[edge_id];
            int id = push_face({m, edge[0], edge[1]},
                               {ref.cone_edge[{cidx, edge[0]}], edge_id,
                                ref.cone_edge[{cidx, edge[1]}]});
            cone_face_by_edge.emplace(edge_id, id);
            ref.cone_faces_of[cidx].push_back(id);
            return id;
        };
        auto cone_over = [&](int piece_face_id, int orientation) {
            const auto& piece = out.faces[piece_face_id];
            std::array<int, 3> tuple = piece.vertices;
            if (orientation < 0) std::swap(tuple[1], tuple[2]);
            push_cell({m, tuple[0], tuple[1], tuple[2]},
                      {piece_face_id, cone_face(piece.edges[0]), cone_face(piece.edges[1]),
                       cone_face(piece.edges[2])});
        };
        for (int k = 0; k < 4; ++k) {
            int f = cell.faces[k];
            if (!scan.faces[f].crossed) {
                cone_over(ref.kept_face[f], cell.face_signs[k]);
            } else {
                // Sub-face tuples follow the parent's cyclic order, so the
                // incidence sign carries over.
                for (int sk = 0; sk < 3; ++sk)
                    cone_over(ref.subfaces[f][sk], cell.face_signs[k]);
            }
        }
    }

    // The preimage cycle: enter at r_in, pass the barycenter, leave at r_out.
    ref.preimage.assign(out.edge_count(), 0);
    for (const auto& [cidx, inout] : scan.tets) {
        int r_in = ref.crossing_vertex[inout[0]];
        int r_out = ref.crossing_vertex[inout[1]];
        ref.preimage[ref.cone_edge.at({cidx, r_in})] -= 1;
        ref.preimage[ref.cone_edge.at({cidx, r_out})] += 1;
    }

    // Integer identity: the assembled preimage is closed.
    std::vector<long long> vertex_balance(out.vertex_count, 0);
    for (int e = 0; e < out.edge_count(); ++e) {
        if (ref.preimage[e] == 0) continue;
        vertex_balance[out.edges[e][1]] += ref.preimage[e];
        vertex_balance[out.edges[e][0]] -= ref.preimage[e];
    }
    for (long long b : vertex_balance)
        if (b != 0)
            fail(ErrorKind::InternalError, "preimage cycle has nonzero boundary");

    return ref;
}

// --------------------------------------------------------------------------
// Chart geometry inside one tet: barycentric coordinates with the first
// vertex at the origin, exact.

struct TetChart {
    const SimplicialComplex3* complex;
    const CrossingScan* scan_a;
    int cell = 0;

    int position_of(int vertex) const {
        const auto& tuple = complex->cells[cell].vertices;
        for (int i = 0; i < 4; ++i)
            if (tuple[i] == vertex) return i;
        fail(ErrorKind::InternalError, "vertex is not a corner of the tet");
    }

    static RV3 corner_chart(int position) {
        RV3 out{Rational(0), Rational(0), Rational(0)};
        if (position > 0) out[position - 1] = 1;
        return out;
    }

    // Chart point of a face crossing (from either crossing scan).
    RV3 face_point_chart(int face_id, const FaceCrossing& crossing) const {
        const auto& face = complex->faces[face_id].vertices;
        RV3 out{Rational(0), Rational(0), Rational(0)};
        for (int k = 0; k < 3; ++k) {
            int pos = position_of(face[k]);
            if (pos > 0) out[pos - 1] += crossing.barycentric[k];
        }
        return out;
    }

    static RV3 barycenter_chart() {
        return {Rational(1, 4), Rational(1, 4), Rational(1, 4)};
    }
};

struct SegTriangleHit {
    bool hit = false;
    int sign = 0;
};

// Strictly transversal crossing of the open segment with the open triangle;
// any boundary contact is a degenerate value pair and asks for a retry.
SegTriangleHit segment_triangle(const RV3& s0, const RV3& s1, const RV3& p0, const RV3& p1,
                                const RV3& p2) {
    RV3 e1 = rsub(p1, p0);
    RV3 e2 = rsub(p2, p0);
    RV3 back = rsub(s0, s1);
    Rational d = det3(e1, e2, back);
    RV3 rhs = rsub(s0, p0);
    if (d == 0) {
        // Parallel segment; touching the plane at all is degenerate.
        if (det3(e1, e2, rhs) == 0)
            fail(ErrorKind::NotRegular, "preimage chord lies in a refinement plane");
        return {};
    }
    Rational u = det3(rhs, e2, back) / d;
    Rational w = det3(e1, rhs, back) / d;
    Rational t = det3(e1, e2, rhs) / d;
    bool strictly_inside = u > 0 && w > 0 && (u + w) < 1 && t > 0 && t < 1;
    bool touching = u == 0 || w == 0 || (u + w) == 1 || t == 0 || t == 1;
    if (touching && u >= 0 && w >= 0 && (u + w) <= 1 && t >= 0 && t <= 1)
        fail(ErrorKind::NotRegular, "preimage chord touches the refinement skeleton");
    if (!strictly_inside) return {};
    return {true, -sign_of(d)};  // sign of det[e1, e2, s1 - s0]
}

// --------------------------------------------------------------------------

std::vector<RV3> rationalize(const std::vector<Eigen::Vector3d>& values) {
    std::vector<RV3> out;
    out.reserve(values.size());
    for (const auto& v : values) out.push_back(to_rational(v));
    return out;
}

std::vector<long long> chern_counts(const SimplicialComplex3& complex,
                                    const std::vector<RV3>& rational_values,
                                    const std::vector<std::vector<long long>>& chains,
                                    const RV3& p, const std::vector<int>& support) {
    std::vector<FaceCrossing> crossings(complex.face_count());
    for (int f : support) {
        const auto& tuple = complex.faces[f].vertices;
        crossings[f] = solve_face_crossing(rational_values[tuple[0]],
                                           rational_values[tuple[1]],
                                           rational_values[tuple[2]], p, f);
    }
    std::vector<long long> counts;
    counts.reserve(chains.size());
    for (const auto& chain : chains) {
        long long total = 0;
        for (int f = 0; f < complex.face_count(); ++f)
            if (chain[f] != 0 && crossings[f].crossed) total += chain[f] * crossings[f].sign;
        counts.push_back(total);
    }
    return counts;
}

long long intersect_with_b(const SimplicialComplex3& complex, const Refinement& ref,
                           const CrossingScan& scan_a, const CrossingScan& scan_b,
                           const std::vector<BigInt>& x) {
    BigInt total = 0;

    // Crossings of the B-curve through the (possibly split) original faces,
    // signed in the chart of the tet the curve exits through.
    for (int f = 0; f < complex.face_count(); ++f) {
        const FaceCrossing& fb = scan_b.faces[f];
        if (!fb.crossed) continue;
        // Exit tet: the incident cell whose step leaves through f.
        int exit_tet = -1;
        for (const auto& [cidx, inout] : scan_b.tets)
            if (inout[1] == f) {
                exit_tet = cidx;
                break;
            }
        if (exit_tet == -1)
            fail(ErrorKind::InternalError, "B-crossing without an exit tet");
        TetChart chart{&complex, &scan_a, exit_tet};
        const auto& inout = scan_b.tets.at(exit_tet);
        RV3 s_in = chart.face_point_chart(inout[0], scan_b.faces[inout[0]]);
        RV3 s_out = chart.face_point_chart(f, fb);
        RV3 dir = rsub(s_out, s_in);

        int refined_cell_id = -1;
        std::array<int, 3> tuple{};
        if (!scan_a.faces[f].crossed) {
            refined_cell_id = ref.kept_face[f];
            tuple = complex.faces[f].vertices;
        } else {
            // Locate the sub-face containing the B-point, exactly, in the
            // face's own barycentric chart.
            const auto& mu = fb.barycentric;
            const auto& nu = scan_a.faces[f].barycentric;
            // 2D chart: a=(0,0), b=(1,0), c=(0,1), r=(nu1, nu2), s=(mu1, mu2).
            auto orient = [](const std::array<Rational, 2>& o, const std::array<Rational, 2>& q,
                             const std::array<Rational, 2>& r2) {
                return sign_of((q[0] - o[0]) * (r2[1] - o[1]) - (q[1] - o[1]) * (r2[0] - o[0]));
            };
            std::array<Rational, 2> pa{Rational(0), Rational(0)}, pb{Rational(1), Rational(0)},
                pc{Rational(0), Rational(1)}, pr{nu[1], nu[2]}, ps{mu[1], mu[2]};
            std::array<std::array<std::array<Rational, 2>, 3>, 3> subs = {{
                {pa, pb, pr},
                {pb, pc, pr},
                {pc, pa, pr},
            }};
            int found = -1;
            for (int sk = 0; sk < 3; ++sk) {
                int o0 = orient(subs[sk][0], subs[sk][1], ps);
                int o1 = orient(subs[sk][1], subs[sk][2], ps);
                int o2 = orient(subs[sk][2], subs[sk][0], ps);
                if (o0 == 0 || o1 == 0 || o2 == 0)
                    fail(ErrorKind::NotRegular,
                         "second preimage passes through the refinement skeleton");
                if (o0 == o1 && o1 == o2) {
                    found = sk;
                    break;
                }
            }
            if (found == -1)
                fail(ErrorKind::InternalError, "B-point escaped its face subdivision");
            refined_cell_id = ref.subfaces[f][found];
            tuple = ref.complex.faces[refined_cell_id].vertices;
        }

        if (x[refined_cell_id] == 0) continue;
        // Chart coordinates of the refined face's corners.
        auto chart_of_vertex = [&](int vertex) -> RV3 {
            if (vertex < complex.vertex_count)
                return TetChart::corner_chart(chart.position_of(vertex));
            // Crossing vertex of an A-crossed face of this tet.
            for (int k = 0; k < 4; ++k) {
                int face_id = complex.cells[exit_tet].faces[k];
                if (ref.crossing_vertex[face_id] == vertex)
                    return chart.face_point_chart(face_id, scan_a.faces[face_id]);
            }
            fail(ErrorKind::InternalError, "refined vertex does not belong to the exit tet");
        };
        RV3 ca = chart_of_vertex(tuple[0]);
        RV3 cb = chart_of_vertex(tuple[1]);
        RV3 cc = chart_of_vertex(tuple[2]);
        int sign = sign_of(det3(rsub(cb, ca), rsub(cc, ca), dir));
        if (sign == 0)
            fail(ErrorKind::NotRegular, "tangential crossing of the two preimages");
        total += x[refined_cell_id] * sign;
    }

    // Interior crossings and kite corrections inside tets crossed by both
    // curves.
    for (const auto& [cidx, b_inout] : scan_b.tets) {
        if (ref.barycenter[cidx] == -1) continue;
        TetChart chart{&complex, &scan_a, cidx};
        RV3 s0 = chart.face_point_chart(b_inout[0], scan_b.faces[b_inout[0]]);
        RV3 s1 = chart.face_point_chart(b_inout[1], scan_b.faces[b_inout[1]]);

        auto chart_of_vertex = [&](int vertex) -> RV3 {
            if (vertex < complex.vertex_count)
                return TetChart::corner_chart(chart.position_of(vertex));
            if (vertex == ref.barycenter[cidx]) return TetChart::barycenter_chart();
            for (int k = 0; k < 4; ++k) {
                int face_id = complex.cells[cidx].faces[k];
                if (ref.crossing_vertex[face_id] == vertex)
                    return chart.face_point_chart(face_id, scan_a.faces[face_id]);
            }
            fail(ErrorKind::InternalError, "refined vertex does not belong to the tet");
        };

        for (int face_id : ref.cone_faces_of[cidx]) {
            if (x[face_id] == 0) continue;
            const auto& tuple = ref.complex.faces[face_id].vertices;
            SegTriangleHit hit =
                segment_triangle(s0, s1, chart_of_vertex(tuple[0]), chart_of_vertex(tuple[1]),
                                 chart_of_vertex(tuple[2]));
            if (hit.hit) total += x[face_id] * hit.sign;
        }

        const auto& a_inout = scan_a.tets.at(cidx);
        RV3 r_in = chart.face_point_chart(a_inout[0], scan_a.faces[a_inout[0]]);
        RV3 r_out = chart.face_point_chart(a_inout[1], scan_a.faces[a_inout[1]]);
        SegTriangleHit kite =
            segment_triangle(s0, s1, r_in, TetChart::barycenter_chart(), r_out);
        if (kite.hit) total += kite.sign;
    }

    if (total > BigInt(std::numeric_limits<long long>::max()) ||
        total < BigInt(std::numeric_limits<long long>::min()))
        fail(ErrorKind::InternalError, "linking number overflow");
    return static_cast<long long>(total);
}

struct HopfOutcome {
    long long raw = 0;
    long long reduced = 0;
};

HopfOutcome hopf_with_values(const SimplicialComplex3& complex,
                             const std::vector<RV3>& rational_values, const RV3& p,
                             const RV3& q, long long n,
                             const std::vector<int>* cut_faces) {
    CrossingScan scan_a = scan_crossings(complex, rational_values, p);
    CrossingScan scan_b = scan_crossings(complex, rational_values, q);
    Refinement ref = build_refinement(complex, scan_a);

    std::vector<BigInt> rhs(ref.complex.edge_count(), 0);
    for (int e = 0; e < ref.complex.edge_count(); ++e) rhs[e] = ref.preimage[e];

    IntegerDiagonalization d2(ref.complex.edge_count(), ref.complex.face_count(),
                              ref.complex.boundary2());
    auto x = d2.solve(rhs);
    if (!x) {
        // Signed count of preimage steps through the cut section is the
        // class against the circle generator.
        long long wraps = 0;
        if (cut_faces) {
            std::set<int> cut(cut_faces->begin(), cut_faces->end());
            for (const auto& [cidx, inout] : scan_a.tets) {
                if (!cut.count(inout[1])) continue;
                const auto& cell = complex.cells[cidx];
                for (int k = 0; k < 4; ++k)
                    if (cell.faces[k] == inout[1]) wraps += cell.face_signs[k];
            }
        }
        fail(ErrorKind::NotNullHomologous,
             "the preimage cycle does not bound an integer 2-chain; circle class " +
                 std::to_string(wraps));
    }

    long long raw = intersect_with_b(complex, ref, scan_a, scan_b, *x);
    HopfOutcome out;
    out.raw = raw;
    out.reduced = raw;
    if (n > 0) out.reduced = ((raw % n) + n) % n;
    return out;
}

std::vector<int> all_faces(const SimplicialComplex3& complex) {
    std::vector<int> ids(complex.face_count());
    for (int f = 0; f < complex.face_count(); ++f) ids[f] = f;
    return ids;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string SphereMapData::to_json() const {
    Json doc;
    Json list = Json::array();
    for (const auto& v : vectors) list.push_back(Json::array({v.x(), v.y(), v.z()}));
    doc["vectors"] = std::move(list);
    doc["boundary_conditioned"] = boundary_conditioned;
    return doc.dump();
}

std::string SphereMapData::digest() const { return sha256_hex(to_json()); }

SphereMapData make_sphere_map(const SuspensionComplex& x,
                              std::vector<Eigen::Vector3d> vectors,
                              bool boundary_conditioned) {
    if (static_cast<int>(vectors.size()) != x.complex().vertex_count)
        fail(ErrorKind::InvalidSphereMap, "vector count does not match the complex");
    for (const auto& v : vectors)
        if (std::abs(v.norm() - 1.0) > kUnitTolerance)
            fail(ErrorKind::InvalidSphereMap, "image vectors must have unit norm to 1e-9");
    if (boundary_conditioned) {
        const Eigen::Vector3d north(0, 0, 1);
        auto is_north = [&](int vertex) { return vectors[vertex] == north; };
        if (!is_north(x.apex()))
            fail(ErrorKind::InvalidSphereMap,
                 "boundary-conditioned maps must send the apex to the north pole exactly");
        for (int v = 0; v < x.base().vertex_count(); ++v)
            if (!is_north(x.slice_vertex(1, v)) ||
                !is_north(x.slice_vertex(x.time_steps() - 1, v)))
                fail(ErrorKind::InvalidSphereMap,
                     "boundary-conditioned maps must send the cone-adjacent slices to the "
                     "north pole exactly");
    }
    SphereMapData map;
    map.x = &x;
    map.vectors = std::move(vectors);
    map.boundary_conditioned = boundary_conditioned;
    return map;
}

SphereMapData sphere_map_from_json(const SuspensionComplex& x, const std::string& json_text) {
    Json doc;
    try {
        doc = Json::parse(json_text);
    } catch (const std::exception& e) {
        fail(ErrorKind::SchemaError, std::string("sphere map is not valid JSON: ") + e.what());
    }
    if (!doc.contains("vectors") || !doc["vectors"].is_array())
        fail(ErrorKind::SchemaError, "sphere map lacks a \"vectors\" array");
    std::vector<Eigen::Vector3d> vectors;
    for (const auto& entry : doc["vectors"]) {
        if (!entry.is_array() || entry.size() != 3)
            fail(ErrorKind::SchemaError, "each vector must have 3 components");
        vectors.emplace_back(entry[0].get<double>(), entry[1].get<double>(),
                             entry[2].get<double>());
    }
    bool flagged = doc.value("boundary_conditioned", false);
    return make_sphere_map(x, std::move(vectors), flagged);
}

std::string NInvariant::to_json() const {
    Json doc;
    doc["c"] = c;
    doc["n"] = n;
    doc["d"] = d;
    doc["d_raw"] = d_raw;
    return doc.dump();
}

Eigen::Vector3d s2_coordinates(const Eigen::Matrix4d& j, const Eigen::Matrix4d& j_ref,
                               const Eigen::Matrix4d& j_plus) {
    if (j == j_ref) return Eigen::Vector3d(0, 0, 1);
    if (j == j_plus) return Eigen::Vector3d(1, 0, 0);

    using Vec6 = Eigen::Matrix<double, 6, 1>;
    auto form6 = [](const Eigen::Matrix4d& m) {
        Eigen::Matrix4d a = 0.5 * (m - m.transpose());
        Vec6 v;
        v << a(0, 1), a(0, 2), a(0, 3), a(1, 2), a(1, 3), a(2, 3);
        return v;
    };

    Vec6 f3 = form6(j_ref);
    Vec6 f1 = form6(j_plus);
    Vec6 f2 = form6(j_plus * j_ref);

    Eigen::Matrix3d gram;
    Vec6 basis[3] = {f1, f2, f3};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            gram(i, k) = basis[i].normalized().dot(basis[k].normalized());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eigen(gram);
    double lo = eigen.eigenvalues().minCoeff();
    double hi = eigen.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > 1e9)
        fail(ErrorKind::DegenerateTrivialization,
             "trivialization frame is numerically degenerate");

    Vec6 b3 = f3.normalized();
    Vec6 b1 = (f1 - f1.dot(b3) * b3).normalized();
    Vec6 b2 = f2 - f2.dot(b3) * b3;
    b2 = (b2 - b2.dot(b1) * b1).normalized();

    Vec6 v = form6(j);
    Eigen::Vector3d out(v.dot(b1), v.dot(b2), v.dot(b3));
    return out / v.norm();
}

std::vector<long long> chern_on_complex(const SimplicialComplex3& complex,
                                        const std::vector<Eigen::Vector3d>& values,
                                        const std::vector<std::vector<long long>>& chains,
                                        std::uint64_t seed) {
    if (chains.empty()) return {};
    std::vector<int> support;
    for (int f = 0; f < complex.face_count(); ++f)
        for (const auto& chain : chains)
            if (chain[f] != 0) {
                support.push_back(f);
                break;
            }

    std::vector<RV3> rational_values = rationalize(values);
    Eigen::Matrix3d rotation = seed_rotation(seed);

    std::vector<std::vector<long long>> results;
    int attempts = 0;
    for (int k = 0; results.size() < 3 && attempts < kMaxValueAttempts; ++k) {
        Eigen::Vector3d p = spiral_point(k, rotation);
        if (!passes_prefilter(p, complex, values, support)) continue;
        ++attempts;
        try {
            results.push_back(
                chern_counts(complex, rational_values, chains, to_rational(p), support));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotRegular) throw;
        }
    }
    if (results.size() < 3)
        fail(ErrorKind::NoRegularValue,
             "no regular value found within " + std::to_string(kMaxValueAttempts) +
                 " attempts");
    for (std::size_t i = 1; i < results.size(); ++i)
        if (results[i] != results[0])
            fail(ErrorKind::RegularValueDisagreement,
                 "independent regular values disagree; the resolution is too coarse");
    return results[0];
}

std::pair<long long, long long> hopf_on_complex_impl(
    const SimplicialComplex3& complex, const std::vector<Eigen::Vector3d>& values,
    long long n, std::uint64_t seed, const std::vector<int>* cut_faces) {
    std::vector<RV3> rational_values = rationalize(values);
    Eigen::Matrix3d rotation = seed_rotation(seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<int> support = all_faces(complex);

    std::vector<Eigen::Vector3d> accepted;
    int pair_attempts = 0;
    for (int k = 0; pair_attempts < kMaxValueAttempts; ++k) {
        Eigen::Vector3d p = spiral_point(k, rotation);
        if (!passes_prefilter(p, complex, values, support)) continue;
        accepted.push_back(p);
        if (accepted.size() < 2) continue;
        Eigen::Vector3d q = accepted[accepted.size() - 2];
        ++pair_attempts;
        try {
            HopfOutcome out = hopf_with_values(complex, rational_values, to_rational(p),
                                               to_rational(q), n, cut_faces);
            return {out.raw, out.reduced};
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotRegular) throw;
        }
    }
    fail(ErrorKind::NoRegularValue,
         "no regular value pair found within " + std::to_string(kMaxValueAttempts) +
             " attempts");
}

// Slice section of the double cone at mid-height, used to name the circle
// class when a preimage fails to bound.
std::vector<int> mid_cut_faces(const SuspensionComplex& x) {
    int mid = std::max(1, x.time_steps() / 2);
    std::vector<int> faces;
    for (int t = 0; t < x.base().triangle_count(); ++t)
        faces.push_back(x.slice_face(mid, t));
    return faces;
}

std::vector<long long> chern_class(const SphereMapData& f,
                                   const std::vector<std::vector<long long>>& cycles2) {
    return chern_on_complex(f.x->complex(), f.vectors, cycles2, fnv1a64(f.digest()));
}

PreimageCycle preimage_cycle(const SphereMapData& f, const Eigen::Vector3d& p) {
    const SimplicialComplex3& complex = f.x->complex();
    std::vector<RV3> rational_values = rationalize(f.vectors);
    CrossingScan scan = scan_crossings(complex, rational_values, to_rational(p));
    // Closure of the refined cycle is an integer identity checked inside.
    build_refinement(complex, scan);

    PreimageCycle out;
    out.segment_count = static_cast<int>(scan.tets.size());
    std::map<int, int> entry_face_to_tet;
    for (const auto& [cidx, inout] : scan.tets) {
        out.segments.push_back({cidx, inout[0], inout[1]});
        if (!entry_face_to_tet.emplace(inout[0], cidx).second)
            fail(ErrorKind::InternalError, "preimage enters a face twice");
    }
    std::set<int> visited;
    for (const auto& [cidx, inout] : scan.tets) {
        if (visited.count(cidx)) continue;
        ++out.loop_count;
        int current = cidx;
        while (!visited.count(current)) {
            visited.insert(current);
            int exit = scan.tets.at(current)[1];
            auto next = entry_face_to_tet.find(exit);
            if (next == entry_face_to_tet.end())
                fail(ErrorKind::InternalError, "preimage walk left the complex");
            current = next->second;
        }
    }
    return out;
}

std::pair<long long, long long> hopf_on_complex(const SimplicialComplex3& complex,
                                                const std::vector<Eigen::Vector3d>& values,
                                                long long n, std::uint64_t seed) {
    return hopf_on_complex_impl(complex, values, n, seed, nullptr);
}

long long hopf_degree(const SphereMapData& f, const std::vector<long long>& c) {
    long long n = multiplicity(c);
    std::vector<int> cut = mid_cut_faces(*f.x);
    auto [raw, reduced] =
        hopf_on_complex_impl(f.x->complex(), f.vectors, n, fnv1a64(f.digest()), &cut);
    return reduced;
}

NInvariant classify(const SphereMapData& f, const CycleBasis& basis) {
    std::vector<std::vector<long long>> cycles2 = basis_2cycles(*f.x, basis);
    NInvariant inv;
    inv.c = chern_class(f, cycles2);
    inv.n = multiplicity(inv.c);
    std::vector<int> cut = mid_cut_faces(*f.x);
    auto [raw, reduced] = hopf_on_complex_impl(f.x->complex(), f.vectors, inv.n,
                                               fnv1a64(f.digest()), &cut);
    inv.d_raw = raw;
    inv.d = reduced;
    return inv;
}

IsotopyPath isotopy_path_from_json(const SurfaceMesh& mesh, const std::string& json_text,
                                   const FormTolerances& tol) {
    Json doc;
    try {
        doc = Json::parse(json_text);
    } catch (const std::exception& e) {
        fail(ErrorKind::SchemaError, std::string("isotopy path is not valid JSON: ") + e.what());
    }
    if (!doc.contains("slices") || !doc["slices"].is_array() || doc["slices"].size() < 2)
        fail(ErrorKind::SchemaError, "isotopy path needs a \"slices\" array with >= 2 entries");

    IsotopyPath path;
    path.mesh = &mesh;
    auto parse_field = [&](const Json& array, bool lagrangian) {
        std::vector<Eigen::Matrix4d> omegas;
        for (const auto& entry : array) {
            if (!entry.is_array() || entry.size() != 16)
                fail(ErrorKind::SchemaError, "each form entry must hold 16 numbers");
            Eigen::Matrix4d m;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) m(i, j) = entry[4 * i + j].get<double>();
            omegas.push_back(m);
        }
        return make_form_field(mesh, std::move(omegas), tol, lagrangian);
    };
    for (const auto& slice : doc["slices"]) {
        if (!slice.contains("omega") || !slice.contains("omega_plus"))
            fail(ErrorKind::SchemaError, "each slice needs \"omega\" and \"omega_plus\"");
        path.omegas.push_back(parse_field(slice["omega"], true));
        path.omega_plus.push_back(parse_field(slice["omega_plus"], false));
    }
    if (doc.contains("metric") && !doc["metric"].is_null()) {
        for (const auto& entry : doc["metric"]) {
            Eigen::Matrix4d m;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) m(i, j) = entry[4 * i + j].get<double>();
            path.metric.push_back(m);
        }
        if (static_cast<int>(path.metric.size()) != mesh.vertex_count())
            fail(ErrorKind::SchemaError, "metric count does not match vertex count");
    } else {
        path.metric = identity_metric(mesh);
    }
    return path;
}

NInvariant n_invariant(const IsotopyPath& path) {
    const SurfaceMesh& mesh = *path.mesh;
    const int steps = static_cast<int>(path.omegas.size());
    if (steps < 2)
        fail(ErrorKind::SchemaError, "isotopy path needs at least the two boundary slices");

    // Reference structure from the initial slice.
    CompatibleJ j_ref = compatible_skad_j(path.metric, path.omegas.front());

    std::vector<CompatibleJ> j_t, j_plus_t;
    j_t.reserve(steps);
    j_plus_t.reserve(steps);
    for (int s = 0; s < steps; ++s) {
        j_t.push_back(compatible_skad_j(path.metric, path.omegas[s]));
        j_plus_t.push_back(compatible_skad_j(path.metric, path.omega_plus[s]));
    }

    for (int v = 0; v < mesh.vertex_count(); ++v) {
        double defect = (j_t.back().j[v] - j_ref.j[v]).cwiseAbs().maxCoeff();
        if (defect > kBoundaryTolerance)
            fail(ErrorKind::BoundaryConditionViolated,
                 "final slice differs from the reference structure by " +
                     std::to_string(defect) + " at vertex " + std::to_string(v));
    }

    const int T = steps + 1;  // interior slices 1..T-1 carry path slices 0..steps-1
    SuspensionComplex x = build_suspension(mesh, T);
    std::vector<Eigen::Vector3d> vectors(x.complex().vertex_count);
    vectors[x.apex()] = Eigen::Vector3d(0, 0, 1);
    for (int s = 1; s <= T - 1; ++s) {
        bool boundary_slice = (s == 1) || (s == T - 1);
        for (int v = 0; v < mesh.vertex_count(); ++v) {
            if (boundary_slice) {
                vectors[x.slice_vertex(s, v)] = Eigen::Vector3d(0, 0, 1);
                continue;
            }
            vectors[x.slice_vertex(s, v)] =
                s2_coordinates(j_ref.j[v], j_t[s - 1].j[v], j_plus_t[s - 1].j[v]);
        }
    }

    // Roundoff from the frame expression can leave the values off the
    // sphere by a few ulps; the exact snapped boundary values are untouched.
    for (auto& v : vectors) v.normalize();

    SphereMapData map = make_sphere_map(x, std::move(vectors), true);
    CycleBasis basis = homology_basis(mesh);
    return classify(map, basis);
}

}  // namespace lagsurf
