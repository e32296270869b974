#ifndef LAGSURF_COMPLEX3_HPP
#define LAGSURF_COMPLEX3_HPP

#include <array>
#include <vector>

#include "lagsurf/smith.hpp"

namespace lagsurf {

// Oriented 3-dimensional Delta-complex. Cell identity is by id, never by
// vertex set: the identified double cone carries distinct cells on equal
// vertex sets, so boundary references are stored explicitly.
struct SimplicialComplex3 {
    struct Face {
        std::array<int, 3> vertices;    // orientation-bearing tuple
        std::array<int, 3> edges;       // side k joins vertices[k] -> vertices[k+1]
        std::array<int, 3> edge_signs;  // +1 when the stored edge points that way
    };
    struct Cell {
        std::array<int, 4> vertices;  // coherent orientation
        std::array<int, 4> faces;
        std::array<int, 4> face_signs;
    };

    int vertex_count = 0;
    std::vector<std::array<int, 2>> edges;  // directed (tail, head)
    std::vector<Face> faces;
    std::vector<Cell> cells;

    int edge_count() const { return static_cast<int>(edges.size()); }
    int face_count() const { return static_cast<int>(faces.size()); }
    int cell_count() const { return static_cast<int>(cells.size()); }

    std::vector<IntTriplet> boundary1() const;
    std::vector<IntTriplet> boundary2() const;
    std::vector<IntTriplet> boundary3() const;

    // Closedness and orientation coherence: every face lies in exactly two
    // cells with opposite induced signs.
    void validate_closed() const;
};

// Locate which boundary face slot of the ordered tet the given face tuple
// occupies and the incidence sign (-1)^k * permutation parity. The face
// vertex multiset must match one of the four boundary triples.
int face_incidence_sign(const std::array<int, 4>& tet, const std::array<int, 3>& face);

// Parity of the permutation carrying one 3-tuple to another (same multiset,
// distinct entries): +1 cyclic, -1 anticyclic.
int triple_parity(const std::array<int, 3>& from, const std::array<int, 3>& to);

struct BarycentricSubdivision {
    SimplicialComplex3 complex;
    // Parent of each new vertex: dimension (0..3) and cell id in that
    // dimension of the original complex.
    std::vector<std::pair<int, int>> vertex_parents;
};

BarycentricSubdivision barycentric_subdivide(const SimplicialComplex3& complex);

}  // namespace lagsurf

#endif
