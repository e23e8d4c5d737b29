#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "fairtrack/assignment.hpp"
#include "gen.hpp"

using namespace fairtrack;

namespace {

double cost_of(const CostMatrix& c, const std::vector<int>& row_to_col);

// Exhaustive optimum over all injective maps of the smaller side, summed in
// row order like cost_of so equal assignments compare exactly.
double brute_force(const CostMatrix& c) {
    const bool flip = c.rows() > c.cols();
    const int small = flip ? c.cols() : c.rows();
    const int large = flip ? c.rows() : c.cols();
    std::vector<int> perm(static_cast<std::size_t>(large));
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1e300;
    do {
        std::vector<int> row_to_col(static_cast<std::size_t>(c.rows()), -1);
        for (int i = 0; i < small; ++i) {
            if (flip) {
                row_to_col[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = i;
            } else {
                row_to_col[static_cast<std::size_t>(i)] = perm[static_cast<std::size_t>(i)];
            }
        }
        best = std::min(best, cost_of(c, row_to_col));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

double cost_of(const CostMatrix& c, const std::vector<int>& row_to_col) {
    double sum = 0;
    for (int r = 0; r < c.rows(); ++r) {
        if (row_to_col[static_cast<std::size_t>(r)] >= 0) sum += c(r, row_to_col[static_cast<std::size_t>(r)]);
    }
    return sum;
}

}  // namespace

TEST(Hungarian, Examples) {
    CostMatrix diag(3, 3, 5.0);
    for (int i = 0; i < 3; ++i) diag(i, i) = 0.0;
    const auto a = hungarian(diag, 10.0);
    EXPECT_EQ(a.matches, (std::vector<std::pair<int, int>>{{0, 0}, {1, 1}, {2, 2}}));

    CostMatrix two(2, 2);
    two(0, 0) = 1;
    two(0, 1) = 2;
    two(1, 0) = 2;
    two(1, 1) = 1;
    EXPECT_EQ(hungarian(two, 10.0).matches, (std::vector<std::pair<int, int>>{{0, 0}, {1, 1}}));
    EXPECT_EQ(cost_of(two, solve_assignment(two)), 2.0);
}

TEST(Hungarian, EmptyAndRectangular) {
    EXPECT_TRUE(hungarian(CostMatrix(0, 3), 1.0).matches.empty());
    EXPECT_EQ(hungarian(CostMatrix(0, 3), 1.0).unmatched_cols.size(), 3u);
    CostMatrix wide(1, 3, 0.5);
    wide(0, 2) = 0.1;
    const auto a = hungarian(wide, 1.0);
    EXPECT_EQ(a.matches, (std::vector<std::pair<int, int>>{{0, 2}}));
    EXPECT_EQ(a.unmatched_cols, (std::vector<int>{0, 1}));
}

TEST(Hungarian, InfiniteAndOverThresholdPairsDissolve) {
    CostMatrix c(2, 2, kInfiniteCost);
    c(0, 0) = 0.2;
    c(1, 0) = 0.1;
    c(1, 1) = 0.9;
    const auto a = hungarian(c, 0.5);
    // Optimum over finite pairs is (0,0)+(1,1); (1,1) then exceeds max_cost.
    EXPECT_EQ(a.matches, (std::vector<std::pair<int, int>>{{0, 0}}));
    EXPECT_EQ(a.unmatched_rows, (std::vector<int>{1}));
    EXPECT_EQ(a.unmatched_cols, (std::vector<int>{1}));

    CostMatrix all_inf(2, 3, kInfiniteCost);
    EXPECT_TRUE(hungarian(all_inf, 1.0).matches.empty());
}

TEST(Hungarian, TiesResolveDeterministically) {
    CostMatrix flat(3, 3, 1.0);
    const auto a = hungarian(flat, 2.0);
    EXPECT_EQ(a.matches, hungarian(flat, 2.0).matches);
    EXPECT_EQ(a.matches.size(), 3u);
}

TEST(Hungarian, MatchesBruteForceProperty) {
    gen::Source s(99);
    for (int trial = 0; trial < 1000; ++trial) {
        const int rows = s.integer(1, 7), cols = s.integer(1, 7);
        CostMatrix c(rows, cols);
        const bool integral = s.coin();
        for (int r = 0; r < rows; ++r) {
            for (int k = 0; k < cols; ++k) c(r, k) = integral ? s.integer(0, 5) : s.real(0, 10);
        }
        const auto assignment = solve_assignment(c);
        ASSERT_EQ(static_cast<int>(std::count_if(assignment.begin(), assignment.end(), [](int v) { return v >= 0; })),
                  std::min(rows, cols));
        std::vector<int> used;
        for (int v : assignment) {
            if (v >= 0) used.push_back(v);
        }
        std::sort(used.begin(), used.end());
        ASSERT_EQ(std::adjacent_find(used.begin(), used.end()), used.end());
        ASSERT_EQ(cost_of(c, assignment), brute_force(c)) << rows << "x" << cols;
    }
}
