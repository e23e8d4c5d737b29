#pragma once

#include <limits>
#include <utility>
#include <vector>

namespace fairtrack {

/// Row-major cost matrix; either dimension may be zero.
class CostMatrix {
public:
    CostMatrix() = default;
    CostMatrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {}

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

inline constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

/// Kuhn-Munkres with row/column potentials. Returns, for every row, its
/// column (or -1). Assigns min(rows, cols) pairs at minimum total cost; all
/// entries must be finite.
std::vector<int> solve_assignment(const CostMatrix& cost);

struct Assignment {
    std::vector<std::pair<int, int>> matches;  ///< (row, col), ascending by row
    std::vector<int> unmatched_rows;
    std::vector<int> unmatched_cols;
};

/// Minimum-cost matching that never uses a +infinity entry unless no other
/// completion exists, in which case that pair is dropped. Pairs costing more
/// than max_cost are dissolved into the unmatched lists.
Assignment hungarian(const CostMatrix& cost, double max_cost);

}  // namespace fairtrack
