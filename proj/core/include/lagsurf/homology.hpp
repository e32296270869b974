#ifndef LAGSURF_HOMOLOGY_HPP
#define LAGSURF_HOMOLOGY_HPP

#include <string>
#include <vector>

#include "lagsurf/mesh.hpp"

namespace lagsurf {

// Integer 1-cycle, stored as a coefficient per canonical directed edge
// (tail < head). The boundary vanishes at every vertex.
struct Cycle {
    const SurfaceMesh* mesh = nullptr;
    std::vector<long long> coeffs;  // one per mesh edge

    std::string to_json() const;
};

// Real- or integer-valued 1-cochain on the canonical directed edges;
// reversing a direction negates the value by construction.
struct IntegerCocycle {
    const SurfaceMesh* mesh = nullptr;
    std::vector<double> values;  // one per mesh edge

    // Largest |sum| around an oriented triangle; zero for honest cocycles.
    double max_triangle_defect() const;
};

class CycleBasis;

// Pairing vector of a cohomology class against the 2g basis cycles.
struct CohomologyClass {
    const CycleBasis* basis = nullptr;
    std::vector<long long> pairings;

    std::string to_json() const;
};

// 2g independent cycles from a tree-cotree decomposition, together with the
// dual cocycles and the (exact) intersection form on the basis.
class CycleBasis {
  public:
    const SurfaceMesh& mesh() const { return *mesh_; }
    int rank() const { return static_cast<int>(cycles_.size()); }  // = 2g
    const Cycle& cycle(int i) const { return cycles_[i]; }
    const std::vector<Cycle>& cycles() const { return cycles_; }

    // Dual cocycle i pairs to delta_ij against cycle j.
    const std::vector<long long>& dual_cocycle(int i) const { return duals_[i]; }

    // Coordinates of an arbitrary cycle's class in this basis.
    std::vector<long long> class_coordinates(const Cycle& cycle) const;

    // Algebraic intersection number of two cycles via the form.
    long long intersect(const Cycle& a, const Cycle& b) const;

    const std::vector<std::vector<long long>>& intersection_matrix() const { return form_; }

    const std::string& digest() const { return digest_; }

  private:
    friend CycleBasis homology_basis(const SurfaceMesh& mesh);

    const SurfaceMesh* mesh_ = nullptr;
    std::vector<Cycle> cycles_;
    std::vector<std::vector<long long>> duals_;
    std::vector<std::vector<long long>> form_;  // intersection form on the basis
    std::string digest_;
};

CycleBasis homology_basis(const SurfaceMesh& mesh);

std::vector<std::vector<long long>> intersection_form(const CycleBasis& basis);

double pair(const IntegerCocycle& cocycle, const Cycle& cycle);

// gcd of the absolute pairing entries; 0 for the zero class.
long long multiplicity(const CohomologyClass& cls);
long long multiplicity(const std::vector<long long>& pairings);

}  // namespace lagsurf

#endif
