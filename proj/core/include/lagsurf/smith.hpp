#ifndef LAGSURF_SMITH_HPP
#define LAGSURF_SMITH_HPP

#include <optional>
#include <vector>

#include "lagsurf/util.hpp"

namespace lagsurf {

struct IntTriplet {
    int row = 0;
    int col = 0;
    long long value = 0;
};

// Exact integer diagonalization U A V = D by gcd elimination with
// fill-reducing pivoting. The transforms are kept as operation logs, which
// is enough to solve linear systems, extract kernel bases, and read off
// invariant factors without storing dense unimodular matrices.
class IntegerDiagonalization {
  public:
    IntegerDiagonalization(int rows, int cols, const std::vector<IntTriplet>& entries);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int rank() const { return static_cast<int>(diagonal_.size()); }

    const std::vector<BigInt>& diagonal() const { return diagonal_; }

    // |d_1| | |d_2| | ... normalized by the divisibility chain.
    std::vector<BigInt> invariant_factors() const;

    // One integer solution of A x = b, if any.
    std::optional<std::vector<BigInt>> solve(const std::vector<BigInt>& b) const;

    // U b; nonzero entries on non-pivot rows certify unsolvability over Q,
    // non-divisible pivot entries certify unsolvability over Z.
    std::vector<BigInt> transformed_rhs(const std::vector<BigInt>& b) const;

    // Z-basis of the kernel lattice, one vector (length cols) per column.
    std::vector<std::vector<BigInt>> kernel_basis() const;

  private:
    struct Op {
        int source = 0;
        int target = 0;
        BigInt coeff;
    };

    int rows_ = 0;
    int cols_ = 0;
    std::vector<BigInt> diagonal_;
    std::vector<int> pivot_rows_;
    std::vector<int> pivot_cols_;
    std::vector<char> col_is_pivot_;
    std::vector<Op> row_ops_;  // row[target] += coeff * row[source]
    std::vector<Op> col_ops_;  // col[target] += coeff * col[source]

    std::vector<BigInt> apply_col_ops(std::vector<BigInt> z) const;
};

std::vector<BigInt> normalize_invariant_factors(std::vector<BigInt> values);

}  // namespace lagsurf

#endif
