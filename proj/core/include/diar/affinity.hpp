#pragma once

#include <Eigen/Dense>

#include "diar/types.hpp"

namespace diar {

/// Pairwise cosine similarity of the embedding rows. Result is exactly
/// symmetric with a unit diagonal, entries clamped to [-1, 1].
/// Throws InvalidInputError if any row has zero norm (names the row).
Eigen::MatrixXd cosine_affinity(const Eigen::MatrixXd& embeddings);

/// Number of entries kept per row when pruning at the given fraction:
/// keep = max(1, N - ceil(N * (1 - alpha))). The row maximum always survives.
int keep_count(int n, double alpha);

/// Row-wise pruning: in each row, zero out all but the `keep_count(N, alpha)`
/// largest entries. Ties broken toward the smaller column index. Does not
/// require or preserve symmetry.
Eigen::MatrixXd prune_rows(const Eigen::MatrixXd& m, double alpha);

/// (A + A^T) / 2, computed once per pair so the result is exactly symmetric.
Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m);

} // namespace diar
