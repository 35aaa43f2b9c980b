#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace diar {

struct KMeansConfig {
    int restarts = 10;
    int max_iters = 300;
    double tol = 1e-6;  // convergence: max centroid movement below this
};

struct KMeansResult {
    std::vector<int> labels;   // canonical: first occurrence order 0,1,2,...
    Eigen::MatrixXd centroids; // k x dim, rows permuted to match labels
    double inertia = 0.0;
    int iterations = 0;        // of the winning restart
};

/// Lloyd's algorithm with k-means++ seeding and multiple restarts.
/// Deterministic for a fixed seed: restart r runs with a seed derived from
/// (seed, r), the lowest-inertia restart wins (ties: lowest restart index),
/// points assign to the lowest-index centroid on distance ties, and empty
/// clusters are repaired by stealing the farthest point. Output labels are
/// renumbered by first occurrence so label ids are stable.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, uint64_t seed,
                    const KMeansConfig& config = {});

} // namespace diar
