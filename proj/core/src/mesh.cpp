#include "lagsurf/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lagsurf/errors.hpp"

namespace lagsurf {

namespace {

using Json = nlohmann::ordered_json;
using RVec3 = std::array<Rational, 3>;

RVec3 rsub(const RVec3& a, const RVec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

RVec3 rcross(const RVec3& a, const RVec3& b) {
    return {a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

Rational rdot(const RVec3& a, const RVec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

bool rzero(const RVec3& a) {
    return a[0] == 0 && a[1] == 0 && a[2] == 0;
}

RVec3 radd(const RVec3& a, const RVec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

// Area-weighted vertex normal from the oriented incident triangles, exact.
RVec3 vertex_normal(const std::vector<std::array<Rational, 3>>& pts,
                    const std::vector<std::array<int, 3>>& tris,
                    const std::vector<int>& incident) {
    RVec3 n{0, 0, 0};
    for (int t : incident) {
        const auto& tri = tris[t];
        RVec3 u = rsub(pts[tri[1]], pts[tri[0]]);
        RVec3 v = rsub(pts[tri[2]], pts[tri[0]]);
        n = radd(n, rcross(u, v));
    }
    return n;
}

Frame default_frame(const RVec3& normal, int vertex) {
    if (rzero(normal))
        fail(ErrorKind::DegenerateFrame,
             "vertex " + std::to_string(vertex) + " has vanishing average normal");

    // The two global axes least aligned with the normal survive projection
    // with full rank away from axis-parallel normals.
    std::array<Rational, 3> align = {normal[0] * normal[0], normal[1] * normal[1],
                                     normal[2] * normal[2]};
    std::array<int, 3> order = {0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (align[a] != align[b]) return align[a] < align[b];
        return a < b;
    });
    int a = order[0], b = order[1];
    if (a > b) std::swap(a, b);

    Rational nn = rdot(normal, normal);
    auto project = [&](int axis) {
        RVec3 e{0, 0, 0};
        e[axis] = 1;
        Rational coeff = normal[axis] / nn;
        return rsub(e, {coeff * normal[0], coeff * normal[1], coeff * normal[2]});
    };
    RVec3 fa = project(a);
    RVec3 fb = project(b);
    RVec3 cr = rcross(fa, fb);
    if (rzero(cr))
        fail(ErrorKind::DegenerateFrame,
             "projected axes are dependent at vertex " + std::to_string(vertex));
    if (rdot(cr, normal) < 0) std::swap(fa, fb);

    Frame frame;
    frame.f1 = Eigen::Vector3d(to_double(fa[0]), to_double(fa[1]), to_double(fa[2]));
    frame.f2 = Eigen::Vector3d(to_double(fb[0]), to_double(fb[1]), to_double(fb[2]));
    return frame;
}

void validate_frame(const Frame& frame, const RVec3& normal, int vertex) {
    RVec3 f1 = {rational_of_double(frame.f1.x()), rational_of_double(frame.f1.y()),
                rational_of_double(frame.f1.z())};
    RVec3 f2 = {rational_of_double(frame.f2.x()), rational_of_double(frame.f2.y()),
                rational_of_double(frame.f2.z())};
    RVec3 cr = rcross(f1, f2);
    if (rzero(cr))
        fail(ErrorKind::DegenerateFrame,
             "frame vectors are dependent at vertex " + std::to_string(vertex));
    if (!(rdot(cr, normal) > 0))
        fail(ErrorKind::DegenerateFrame,
             "frame order disagrees with the surface orientation at vertex " +
                 std::to_string(vertex));
}

Frame orthonormalize(const Frame& frame) {
    Eigen::Vector3d u = frame.f1.normalized();
    Eigen::Vector3d w = frame.f2 - frame.f2.dot(u) * u;
    Frame out;
    out.f1 = u;
    out.f2 = w.normalized();
    return out;
}

Json frame_json(const Frame& f) {
    return Json::array({Json::array({f.f1.x(), f.f1.y(), f.f1.z()}),
                        Json::array({f.f2.x(), f.f2.y(), f.f2.z()})});
}

}  // namespace

SurfaceMesh build_mesh_internal(std::vector<std::array<Rational, 3>> exact,
                                std::vector<Eigen::Vector3d> points,
                                std::vector<std::array<int, 3>> triangles,
                                std::optional<std::vector<Frame>> frames,
                                std::optional<LatticeInfo> lattice) {
    const int nv = static_cast<int>(points.size());
    if (nv < 4) fail(ErrorKind::NonManifold, "a closed surface needs at least 4 vertices");
    if (triangles.size() < 4)
        fail(ErrorKind::NonManifold, "a closed surface needs at least 4 triangles");

    for (const auto& tri : triangles) {
        for (int k = 0; k < 3; ++k)
            if (tri[k] < 0 || tri[k] >= nv)
                fail(ErrorKind::NonManifold, "triangle index out of range");
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            fail(ErrorKind::NonManifold, "degenerate triangle with repeated vertex");
    }

    SurfaceMesh mesh;
    mesh.points_ = std::move(points);
    mesh.exact_points_ = std::move(exact);
    mesh.triangles_ = std::move(triangles);

    // Derive edges; track the two directed uses of every undirected edge.
    std::map<std::pair<int, int>, int> edge_ids;
    struct EdgeUse {
        int tri_plus = -1;   // triangle inducing tail->head (canonical direction)
        int tri_minus = -1;  // triangle inducing head->tail
        int uses = 0;
    };
    std::vector<EdgeUse> uses;
    mesh.triangle_edges_.assign(mesh.triangles_.size(), {-1, -1, -1});

    for (int t = 0; t < static_cast<int>(mesh.triangles_.size()); ++t) {
        const auto& tri = mesh.triangles_[t];
        for (int k = 0; k < 3; ++k) {
            int a = tri[k], b = tri[(k + 1) % 3];
            int u = std::min(a, b), v = std::max(a, b);
            auto [it, inserted] = edge_ids.try_emplace({u, v}, static_cast<int>(uses.size()));
            if (inserted) {
                mesh.edges_.push_back({u, v});
                uses.push_back({});
            }
            int e = it->second;
            mesh.triangle_edges_[t][k] = e;
            EdgeUse& use = uses[e];
            use.uses += 1;
            if (use.uses > 2)
                fail(ErrorKind::NonManifold,
                     "edge (" + std::to_string(u) + "," + std::to_string(v) +
                         ") lies in more than two triangles");
            if (a == u) {
                if (use.tri_plus != -1)
                    fail(ErrorKind::NonOrientable,
                         "triangle orientations are not coherent along edge (" +
                             std::to_string(u) + "," + std::to_string(v) + ")");
                use.tri_plus = t;
            } else {
                if (use.tri_minus != -1)
                    fail(ErrorKind::NonOrientable,
                         "triangle orientations are not coherent along edge (" +
                             std::to_string(u) + "," + std::to_string(v) + ")");
                use.tri_minus = t;
            }
        }
    }

    mesh.edge_triangles_.resize(mesh.edges_.size());
    for (int e = 0; e < static_cast<int>(mesh.edges_.size()); ++e) {
        if (uses[e].uses != 2)
            fail(ErrorKind::NonManifold,
                 "edge (" + std::to_string(mesh.edges_[e][0]) + "," +
                     std::to_string(mesh.edges_[e][1]) + ") lies in " +
                     std::to_string(uses[e].uses) + " triangle(s)");
        mesh.edge_triangles_[e] = {uses[e].tri_plus, uses[e].tri_minus};
    }

    mesh.vertex_edges_.assign(nv, {});
    for (int e = 0; e < static_cast<int>(mesh.edges_.size()); ++e) {
        mesh.vertex_edges_[mesh.edges_[e][0]].push_back(e);
        mesh.vertex_edges_[mesh.edges_[e][1]].push_back(e);
    }

    // Connectivity over the 1-skeleton.
    std::vector<char> seen(nv, 0);
    std::queue<int> queue;
    queue.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop();
        for (int e : mesh.vertex_edges_[v]) {
            int w = mesh.edges_[e][0] == v ? mesh.edges_[e][1] : mesh.edges_[e][0];
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                queue.push(w);
            }
        }
    }
    if (reached != nv) fail(ErrorKind::Disconnected, "the complex is not connected");

    int chi = nv - mesh.edge_count() + mesh.triangle_count();
    if ((2 - chi) % 2 != 0 || chi > 2)
        fail(ErrorKind::InternalError, "Euler characteristic " + std::to_string(chi) +
                                           " is impossible for a closed oriented surface");
    mesh.genus_ = (2 - chi) / 2;

    // Incident triangles per vertex, for normals.
    std::vector<std::vector<int>> incident(nv);
    for (int t = 0; t < static_cast<int>(mesh.triangles_.size()); ++t)
        for (int k = 0; k < 3; ++k) incident[mesh.triangles_[t][k]].push_back(t);

    if (frames) {
        if (static_cast<int>(frames->size()) != nv)
            fail(ErrorKind::DegenerateFrame, "frame count does not match vertex count");
        for (int v = 0; v < nv; ++v) {
            RVec3 n = vertex_normal(mesh.exact_points_, mesh.triangles_, incident[v]);
            validate_frame((*frames)[v], n, v);
        }
        mesh.frames_ = std::move(*frames);
    } else {
        mesh.frames_.reserve(nv);
        for (int v = 0; v < nv; ++v) {
            RVec3 n = vertex_normal(mesh.exact_points_, mesh.triangles_, incident[v]);
            mesh.frames_.push_back(default_frame(n, v));
        }
    }
    mesh.onframes_.reserve(nv);
    for (int v = 0; v < nv; ++v) mesh.onframes_.push_back(orthonormalize(mesh.frames_[v]));

    mesh.lattice_ = std::move(lattice);
    mesh.digest_ = sha256_hex(mesh.to_json());
    return mesh;
}

int SurfaceMesh::edge_index(int u, int v) const {
    if (u > v) std::swap(u, v);
    // Edges incident to u are few; linear scan keeps the structure immutable.
    for (int e : vertex_edges_[u])
        if (edges_[e][0] == u && edges_[e][1] == v) return e;
    return -1;
}

MeshStatistics SurfaceMesh::statistics() const {
    MeshStatistics s;
    s.vertex_count = vertex_count();
    s.edge_count = edge_count();
    s.triangle_count = triangle_count();
    s.genus = genus_;
    s.orientable = true;
    return s;
}

std::string SurfaceMesh::to_json() const {
    Json doc;
    doc["schema_version"] = 1;
    Json verts = Json::array();
    for (const auto& p : points_) verts.push_back(Json::array({p.x(), p.y(), p.z()}));
    doc["vertices"] = std::move(verts);
    Json tris = Json::array();
    for (const auto& t : triangles_) tris.push_back(Json::array({t[0], t[1], t[2]}));
    doc["triangles"] = std::move(tris);
    Json frames = Json::array();
    for (const auto& f : frames_) frames.push_back(frame_json(f));
    doc["frames"] = std::move(frames);
    if (lattice_) {
        Json lat;
        lat["n"] = lattice_->n;
        Json coords = Json::array();
        for (const auto& c : lattice_->coords) coords.push_back(Json::array({c[0], c[1]}));
        lat["coords"] = std::move(coords);
        doc["lattice"] = std::move(lat);
    }
    return doc.dump();
}

std::string SurfaceMesh::frame_digest() const {
    Json frames = Json::array();
    for (const auto& f : frames_) frames.push_back(frame_json(f));
    return sha256_hex(frames.dump());
}

SurfaceMesh build_mesh(const std::vector<Eigen::Vector3d>& vertices,
                       const std::vector<std::array<int, 3>>& triangles,
                       std::optional<std::vector<Frame>> frames) {
    std::vector<std::array<Rational, 3>> exact;
    exact.reserve(vertices.size());
    for (const auto& p : vertices)
        exact.push_back({rational_of_double(p.x()), rational_of_double(p.y()),
                         rational_of_double(p.z())});
    return build_mesh_internal(std::move(exact), vertices, triangles, std::move(frames),
                               std::nullopt);
}

SurfaceMesh build_mesh(const std::vector<std::array<Rational, 3>>& vertices,
                       const std::vector<std::array<int, 3>>& triangles,
                       std::optional<std::vector<Frame>> frames) {
    std::vector<Eigen::Vector3d> points;
    points.reserve(vertices.size());
    for (const auto& p : vertices)
        points.emplace_back(to_double(p[0]), to_double(p[1]), to_double(p[2]));
    return build_mesh_internal(vertices, std::move(points), triangles, std::move(frames),
                               std::nullopt);
}

int genus(const SurfaceMesh& mesh) { return mesh.genus(); }

namespace {

SurfaceMesh make_sphere(int r) {
    // Octahedron subdivision: r^2 triangles per face, vertices pushed to the
    // unit sphere. Shared face-boundary vertices are merged by their exact
    // pre-normalization coordinates.
    std::map<std::array<std::pair<long long, long long>, 3>, int> index;
    std::vector<std::array<Rational, 3>> exact;
    std::vector<Eigen::Vector3d> points;
    std::vector<std::array<int, 3>> tris;

    auto vertex_at = [&](const RVec3& p) {
        std::array<std::pair<long long, long long>, 3> key;
        for (int k = 0; k < 3; ++k) {
            key[k] = {static_cast<long long>(numerator(p[k])),
                      static_cast<long long>(denominator(p[k]))};
        }
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(points.size());
        index.emplace(key, id);
        Eigen::Vector3d q(to_double(p[0]), to_double(p[1]), to_double(p[2]));
        q.normalize();
        points.push_back(q);
        exact.push_back({rational_of_double(q.x()), rational_of_double(q.y()),
                         rational_of_double(q.z())});
        return id;
    };

    for (int sx : {1, -1})
        for (int sy : {1, -1})
            for (int sz : {1, -1}) {
                RVec3 A{Rational(sx), 0, 0};
                RVec3 B{0, Rational(sy), 0};
                RVec3 C{0, 0, Rational(sz)};
                // Outward orientation: det[A,B,C] = sx*sy*sz.
                if (sx * sy * sz < 0) std::swap(B, C);
                auto lattice_point = [&](int i, int j) {
                    Rational wa(r - i - j, r), wb(i, r), wc(j, r);
                    return RVec3{wa * A[0] + wb * B[0] + wc * C[0],
                                 wa * A[1] + wb * B[1] + wc * C[1],
                                 wa * A[2] + wb * B[2] + wc * C[2]};
                };
                for (int i = 0; i < r; ++i)
                    for (int j = 0; j < r - i; ++j) {
                        int p00 = vertex_at(lattice_point(i, j));
                        int p10 = vertex_at(lattice_point(i + 1, j));
                        int p01 = vertex_at(lattice_point(i, j + 1));
                        tris.push_back({p00, p10, p01});
                        if (i + j < r - 1) {
                            int p11 = vertex_at(lattice_point(i + 1, j + 1));
                            tris.push_back({p10, p11, p01});
                        }
                    }
            }

    return build_mesh_internal(std::move(exact), std::move(points), std::move(tris),
                               std::nullopt, std::nullopt);
}

SurfaceMesh make_torus(int n, double shift_x = 0.0, bool with_lattice = true) {
    const double major = 2.0;
    const double minor = 0.75;
    std::vector<Eigen::Vector3d> points(n * n);
    std::vector<Frame> frames(n * n);
    std::vector<std::array<int, 2>> coords(n * n);
    auto id = [&](int i, int j) { return ((i % n + n) % n) * n + ((j % n + n) % n); };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double theta = 2.0 * std::numbers::pi * i / n;
            double phi = 2.0 * std::numbers::pi * j / n;
            double w = major + minor * std::cos(phi);
            points[id(i, j)] =
                Eigen::Vector3d(w * std::cos(theta) + shift_x, w * std::sin(theta),
                                minor * std::sin(phi));
            // Grid frame: (d/dtheta, d/dphi); right-handed for the outward
            // normal of this embedding.
            frames[id(i, j)].f1 =
                Eigen::Vector3d(-w * std::sin(theta), w * std::cos(theta), 0.0);
            frames[id(i, j)].f2 =
                Eigen::Vector3d(-minor * std::sin(phi) * std::cos(theta),
                                -minor * std::sin(phi) * std::sin(theta),
                                minor * std::cos(phi));
            coords[id(i, j)] = {i, j};
        }
    std::vector<std::array<int, 3>> tris;
    tris.reserve(2 * n * n);
    // Anti-diagonal cell split: the third edge direction is (1,-1) in the
    // lattice, which keeps diagonal-loop windings of (a,b)-fields at |a-b|.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            tris.push_back({id(i, j), id(i + 1, j), id(i, j + 1)});
            tris.push_back({id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    std::vector<std::array<Rational, 3>> exact;
    exact.reserve(points.size());
    for (const auto& p : points)
        exact.push_back({rational_of_double(p.x()), rational_of_double(p.y()),
                         rational_of_double(p.z())});
    std::optional<LatticeInfo> lattice;
    if (with_lattice) lattice = LatticeInfo{n, std::move(coords)};
    return build_mesh_internal(std::move(exact), std::move(points), std::move(tris),
                               std::move(frames), std::move(lattice));
}

SurfaceMesh make_genus2(int n) {
    // Two grid tori, one triangle removed from each, glued along the hole
    // boundaries with reversed identification so orientations stay coherent.
    SurfaceMesh t1 = make_torus(n, 0.0, false);
    SurfaceMesh t2 = make_torus(n, 2.0 * (2.0 + 0.75) + 1.5, false);

    auto grid_id = [&](int i, int j) { return (i % n) * n + (j % n); };
    const int a = grid_id(0, 0), b = grid_id(1, 0), c = grid_id(0, 1);

    const int v1 = t1.vertex_count();
    std::vector<Eigen::Vector3d> points;
    points.reserve(2 * v1 - 3);
    for (int v = 0; v < v1; ++v) points.push_back(t1.point(v));

    // Torus-2 vertices, with the glued triple remapped onto torus 1:
    // a2 -> a1, b2 -> c1, c2 -> b1 reverses the hole boundary cycle.
    std::vector<int> remap(v1, -1);
    remap[a] = a;
    remap[b] = c;
    remap[c] = b;
    for (int v = 0; v < v1; ++v) {
        if (remap[v] != -1) continue;
        remap[v] = static_cast<int>(points.size());
        points.push_back(t2.point(v));
    }

    std::vector<std::array<int, 3>> tris;
    auto is_removed = [&](const std::array<int, 3>& tri) {
        return tri[0] == a && tri[1] == b && tri[2] == c;
    };
    for (const auto& tri : t1.triangles())
        if (!is_removed(tri)) tris.push_back(tri);
    for (const auto& tri : t2.triangles())
        if (!is_removed(tri)) tris.push_back({remap[tri[0]], remap[tri[1]], remap[tri[2]]});

    return build_mesh(points, tris);
}

}  // namespace

SurfaceMesh standard_fixture(FixtureKind kind, int resolution) {
    if (resolution < 3)
        fail(ErrorKind::ResolutionTooLow,
             "fixture resolution must be at least 3, got " + std::to_string(resolution));
    switch (kind) {
        case FixtureKind::Sphere: return make_sphere(resolution);
        case FixtureKind::Torus: return make_torus(resolution);
        case FixtureKind::Genus2: return make_genus2(resolution);
    }
    fail(ErrorKind::InternalError, "unknown fixture kind");
}

SurfaceMesh mesh_from_json(const std::string& json_text) {
    Json doc;
    try {
        doc = Json::parse(json_text);
    } catch (const std::exception& e) {
        fail(ErrorKind::SchemaError, std::string("mesh file is not valid JSON: ") + e.what());
    }
    if (!doc.contains("schema_version") || doc["schema_version"] != 1)
        fail(ErrorKind::SchemaError, "mesh file must carry \"schema_version\": 1");
    if (!doc.contains("vertices") || !doc["vertices"].is_array())
        fail(ErrorKind::SchemaError, "mesh file lacks a \"vertices\" array");
    if (!doc.contains("triangles") || !doc["triangles"].is_array())
        fail(ErrorKind::SchemaError, "mesh file lacks a \"triangles\" array");

    std::vector<std::array<Rational, 3>> exact;
    std::vector<Eigen::Vector3d> points;
    for (const auto& entry : doc["vertices"]) {
        if (!entry.is_array() || entry.size() != 3)
            fail(ErrorKind::SchemaError, "each vertex must be a 3-element array");
        std::array<Rational, 3> p;
        for (int k = 0; k < 3; ++k) {
            const auto& coord = entry[k];
            if (coord.is_string())
                p[k] = parse_decimal(coord.get<std::string>());
            else if (coord.is_number())
                p[k] = rational_of_double(coord.get<double>());
            else
                fail(ErrorKind::SchemaError, "vertex coordinates must be numbers or strings");
        }
        points.emplace_back(to_double(p[0]), to_double(p[1]), to_double(p[2]));
        exact.push_back(std::move(p));
    }

    std::vector<std::array<int, 3>> tris;
    for (const auto& entry : doc["triangles"]) {
        if (!entry.is_array() || entry.size() != 3)
            fail(ErrorKind::SchemaError, "each triangle must be a 3-element array");
        tris.push_back({entry[0].get<int>(), entry[1].get<int>(), entry[2].get<int>()});
    }

    std::optional<std::vector<Frame>> frames;
    if (doc.contains("frames") && !doc["frames"].is_null()) {
        if (!doc["frames"].is_array())
            fail(ErrorKind::SchemaError, "\"frames\" must be an array");
        frames.emplace();
        for (const auto& entry : doc["frames"]) {
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_array() ||
                entry[0].size() != 3 || !entry[1].is_array() || entry[1].size() != 3)
                fail(ErrorKind::SchemaError, "each frame must be a pair of 3-vectors");
            Frame f;
            f.f1 = Eigen::Vector3d(entry[0][0].get<double>(), entry[0][1].get<double>(),
                                   entry[0][2].get<double>());
            f.f2 = Eigen::Vector3d(entry[1][0].get<double>(), entry[1][1].get<double>(),
                                   entry[1][2].get<double>());
            frames->push_back(f);
        }
    }

    std::optional<LatticeInfo> lattice;
    if (doc.contains("lattice") && !doc["lattice"].is_null()) {
        LatticeInfo info;
        info.n = doc["lattice"]["n"].get<int>();
        for (const auto& entry : doc["lattice"]["coords"])
            info.coords.push_back({entry[0].get<int>(), entry[1].get<int>()});
        lattice = std::move(info);
    }

    return build_mesh_internal(std::move(exact), std::move(points), std::move(tris),
                               std::move(frames), std::move(lattice));
}

}  // namespace lagsurf
