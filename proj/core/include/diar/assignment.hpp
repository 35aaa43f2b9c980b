#pragma once

#include <vector>

#include <Eigen/Dense>

namespace diar {

/// Maximum-total linear assignment on a rectangular nonnegative score matrix.
/// Returns, for each row, the assigned column or -1. The assignment is
/// injective and its total score is maximal; ties are resolved
/// deterministically. O(n^3) shortest-augmenting-path solver.
std::vector<int> max_assignment(const Eigen::MatrixXd& score);

} // namespace diar
