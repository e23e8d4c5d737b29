#include "fairtrack/assignment.hpp"

#include <cmath>

#include "fairtrack/errors.hpp"

namespace fairtrack {

namespace {

// Shortest augmenting path over potentials, rows <= cols. Indices are 1-based
// internally with column 0 as the virtual source.
std::vector<int> solve_wide(const CostMatrix& a, bool transposed) {
    const int n = transposed ? a.cols() : a.rows();
    const int m = transposed ? a.rows() : a.cols();
    auto at = [&](int i, int j) { return transposed ? a(j, i) : a(i, j); };

    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(m) + 1, 0.0);
    std::vector<int> p(static_cast<std::size_t>(m) + 1, 0);
    std::vector<int> way(static_cast<std::size_t>(m) + 1, 0);
    std::vector<double> minv(static_cast<std::size_t>(m) + 1);
    std::vector<char> used(static_cast<std::size_t>(m) + 1);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), std::numeric_limits<double>::infinity());
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = std::numeric_limits<double>::infinity();
            int j1 = 0;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = at(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    // Result indexed by original rows.
    std::vector<int> row_to_col(static_cast<std::size_t>(a.rows()), -1);
    for (int j = 1; j <= m; ++j) {
        if (p[j] == 0) continue;
        if (transposed) {
            row_to_col[static_cast<std::size_t>(j - 1)] = p[j] - 1;
        } else {
            row_to_col[static_cast<std::size_t>(p[j] - 1)] = j - 1;
        }
    }
    return row_to_col;
}

}  // namespace

std::vector<int> solve_assignment(const CostMatrix& cost) {
    if (cost.empty()) return std::vector<int>(static_cast<std::size_t>(cost.rows()), -1);
    for (int r = 0; r < cost.rows(); ++r) {
        for (int c = 0; c < cost.cols(); ++c) {
            if (!std::isfinite(cost(r, c))) throw ValidationError("solve_assignment: non-finite cost");
        }
    }
    return solve_wide(cost, cost.rows() > cost.cols());
}

Assignment hungarian(const CostMatrix& cost, double max_cost) {
    Assignment out;
    if (cost.empty()) {
        for (int r = 0; r < cost.rows(); ++r) out.unmatched_rows.push_back(r);
        for (int c = 0; c < cost.cols(); ++c) out.unmatched_cols.push_back(c);
        return out;
    }

    // Forbidden entries get a cost larger than any complete finite matching,
    // so they are used only when a row or column cannot be covered otherwise.
    double finite_span = 0.0;
    bool any_forbidden = false;
    for (int r = 0; r < cost.rows(); ++r) {
        for (int c = 0; c < cost.cols(); ++c) {
            const double v = cost(r, c);
            if (std::isnan(v)) throw ValidationError("hungarian: NaN cost");
            if (std::isinf(v)) {
                if (v < 0) throw ValidationError("hungarian: -infinity cost");
                any_forbidden = true;
            } else {
                finite_span = std::max(finite_span, std::abs(v));
            }
        }
    }
    const double big = (finite_span + 1.0) * (2.0 * std::min(cost.rows(), cost.cols()) + 1.0);

    const CostMatrix* solve_on = &cost;
    CostMatrix replaced;
    if (any_forbidden) {
        replaced = CostMatrix(cost.rows(), cost.cols());
        for (int r = 0; r < cost.rows(); ++r) {
            for (int c = 0; c < cost.cols(); ++c) replaced(r, c) = std::isinf(cost(r, c)) ? big : cost(r, c);
        }
        solve_on = &replaced;
    }

    const std::vector<int> row_to_col = solve_assignment(*solve_on);
    std::vector<char> col_used(static_cast<std::size_t>(cost.cols()), 0);
    for (int r = 0; r < cost.rows(); ++r) {
        const int c = row_to_col[static_cast<std::size_t>(r)];
        if (c >= 0 && std::isfinite(cost(r, c)) && cost(r, c) <= max_cost) {
            out.matches.emplace_back(r, c);
            col_used[static_cast<std::size_t>(c)] = 1;
        } else {
            out.unmatched_rows.push_back(r);
        }
    }
    for (int c = 0; c < cost.cols(); ++c) {
        if (!col_used[static_cast<std::size_t>(c)]) out.unmatched_cols.push_back(c);
    }
    return out;
}

}  // namespace fairtrack
