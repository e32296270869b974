#include "lagsurf/smith.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "lagsurf/errors.hpp"

namespace lagsurf {

namespace {

// Round-toward-nearest quotient keeps remainders at most half the divisor,
// which is what makes the gcd elimination terminate quickly.
BigInt nearest_quotient(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    BigInt r = a - q * b;
    if (2 * abs(r) > abs(b)) q += (a < 0) == (b < 0) ? 1 : -1;
    return q;
}

}  // namespace

IntegerDiagonalization::IntegerDiagonalization(int rows, int cols,
                                               const std::vector<IntTriplet>& entries)
    : rows_(rows), cols_(cols) {
    std::vector<std::map<int, BigInt>> row(rows);
    std::vector<std::set<int>> col(cols);
    for (const auto& t : entries) {
        if (t.value == 0) continue;
        BigInt& slot = row[t.row][t.col];
        slot += t.value;
        if (slot == 0) row[t.row].erase(t.col);
    }
    for (int r = 0; r < rows; ++r)
        for (const auto& [c, v] : row[r]) col[c].insert(r);

    col_is_pivot_.assign(cols, 0);
    std::vector<char> row_done(rows, 0);

    // Rows bucketed by fill, kept current through the elimination; the
    // smallest active row provides the pivot.
    std::set<std::pair<int, int>> by_size;
    auto enroll = [&](int r) {
        if (!row_done[r] && !row[r].empty())
            by_size.insert({static_cast<int>(row[r].size()), r});
    };
    auto withdraw = [&](int r) {
        if (!row_done[r] && !row[r].empty())
            by_size.erase({static_cast<int>(row[r].size()), r});
    };
    for (int r = 0; r < rows; ++r) enroll(r);

    auto set_entry = [&](int r, int c, const BigInt& v) {
        auto it = row[r].find(c);
        if (v == 0) {
            if (it != row[r].end()) {
                row[r].erase(it);
                col[c].erase(r);
            }
        } else if (it == row[r].end()) {
            row[r].emplace(c, v);
            col[c].insert(r);
        } else {
            it->second = v;
        }
    };
    auto get_entry = [&](int r, int c) -> BigInt {
        auto it = row[r].find(c);
        return it == row[r].end() ? BigInt(0) : it->second;
    };

    auto apply_row_op = [&](int source, int target, const BigInt& coeff) {
        if (coeff == 0) return;
        row_ops_.push_back({source, target, coeff});
        withdraw(target);
        for (const auto& [c, v] : row[source]) {
            BigInt next = get_entry(target, c) + coeff * v;
            set_entry(target, c, next);
        }
        enroll(target);
    };
    auto apply_col_op = [&](int source, int target, const BigInt& coeff) {
        if (coeff == 0) return;
        col_ops_.push_back({source, target, coeff});
        std::vector<std::pair<int, BigInt>> source_entries;
        source_entries.reserve(col[source].size());
        for (int r : col[source]) source_entries.emplace_back(r, row[r][source]);
        for (const auto& [r, v] : source_entries) {
            withdraw(r);
            BigInt next = get_entry(r, target) + coeff * v;
            set_entry(r, target, next);
            enroll(r);
        }
    };

    while (!by_size.empty()) {
        int pr = by_size.begin()->second;
        // Within the smallest row, prefer unit entries in sparse columns.
        int pc = -1;
        bool unit = false;
        std::size_t col_fill = 0;
        for (const auto& [c, v] : row[pr]) {
            bool is_unit = abs(v) == 1;
            std::size_t fill = col[c].size();
            if (pc == -1 || (is_unit && !unit) || (is_unit == unit && fill < col_fill)) {
                pc = c;
                unit = is_unit;
                col_fill = fill;
            }
        }

        while (true) {
            bool column_clear = true;
            {
                std::vector<int> others;
                others.reserve(col[pc].size());
                for (int r : col[pc])
                    if (r != pr) others.push_back(r);
                for (int r : others) {
                    BigInt v = get_entry(r, pc);
                    if (v == 0) continue;
                    BigInt p = get_entry(pr, pc);
                    apply_row_op(pr, r, -nearest_quotient(v, p));
                    if (get_entry(r, pc) != 0) {
                        pr = r;  // strictly smaller remainder takes over
                        column_clear = false;
                        break;
                    }
                }
            }
            if (!column_clear) continue;

            bool row_clear = true;
            {
                std::vector<int> others;
                others.reserve(row[pr].size());
                for (const auto& [c, v] : row[pr])
                    if (c != pc) others.push_back(c);
                for (int c : others) {
                    BigInt v = get_entry(pr, c);
                    if (v == 0) continue;
                    BigInt p = get_entry(pr, pc);
                    apply_col_op(pc, c, -nearest_quotient(v, p));
                    if (get_entry(pr, c) != 0) {
                        pc = c;
                        row_clear = false;
                        break;
                    }
                }
            }
            if (!row_clear) continue;

            if (col[pc].size() == 1 && row[pr].size() == 1) break;
        }

        diagonal_.push_back(get_entry(pr, pc));
        pivot_rows_.push_back(pr);
        pivot_cols_.push_back(pc);
        col_is_pivot_[pc] = 1;
        withdraw(pr);
        row_done[pr] = 1;
        set_entry(pr, pc, 0);
    }
}

std::vector<BigInt> normalize_invariant_factors(std::vector<BigInt> values) {
    for (auto& v : values) v = abs(v);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < values.size(); ++i)
            for (std::size_t j = i + 1; j < values.size(); ++j) {
                if (values[j] % values[i] == 0) continue;
                BigInt g = gcd(values[i], values[j]);
                BigInt l = values[i] / g * values[j];
                values[i] = g;
                values[j] = l;
                changed = true;
            }
    }
    std::sort(values.begin(), values.end());
    return values;
}

std::vector<BigInt> IntegerDiagonalization::invariant_factors() const {
    return normalize_invariant_factors(diagonal_);
}

std::vector<BigInt> IntegerDiagonalization::transformed_rhs(
    const std::vector<BigInt>& b) const {
    std::vector<BigInt> out = b;
    for (const auto& op : row_ops_) out[op.target] += op.coeff * out[op.source];
    return out;
}

std::vector<BigInt> IntegerDiagonalization::apply_col_ops(std::vector<BigInt> z) const {
    // x = V z with V the product of the logged elementary matrices; the op
    // col[target] += c * col[source] acts on coordinates as
    // z[source] += c * z[target], applied in reverse order.
    for (auto it = col_ops_.rbegin(); it != col_ops_.rend(); ++it)
        z[it->source] += it->coeff * z[it->target];
    return z;
}

std::optional<std::vector<BigInt>> IntegerDiagonalization::solve(
    const std::vector<BigInt>& b) const {
    if (static_cast<int>(b.size()) != rows_)
        fail(ErrorKind::InternalError, "right-hand side has wrong dimension");
    std::vector<BigInt> ub = transformed_rhs(b);
    std::vector<char> is_pivot_row(rows_, 0);
    std::vector<BigInt> z(cols_, 0);
    for (int k = 0; k < rank(); ++k) {
        is_pivot_row[pivot_rows_[k]] = 1;
        const BigInt& value = ub[pivot_rows_[k]];
        if (value % diagonal_[k] != 0) return std::nullopt;
        z[pivot_cols_[k]] = value / diagonal_[k];
    }
    for (int r = 0; r < rows_; ++r)
        if (!is_pivot_row[r] && ub[r] != 0) return std::nullopt;
    return apply_col_ops(std::move(z));
}

std::vector<std::vector<BigInt>> IntegerDiagonalization::kernel_basis() const {
    std::vector<std::vector<BigInt>> basis;
    for (int c = 0; c < cols_; ++c) {
        if (col_is_pivot_[c]) continue;
        std::vector<BigInt> z(cols_, 0);
        z[c] = 1;
        basis.push_back(apply_col_ops(std::move(z)));
    }
    return basis;
}

}  // namespace lagsurf
