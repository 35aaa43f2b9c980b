#pragma once

#include <vector>

#include <Eigen/Dense>

#include "diar/scoring.hpp"
#include "diar/types.hpp"

namespace diar {

// Brute-force reference implementations used to verify the fast paths.
// Deliberately naive: they share no arithmetic with the code they check
// (the frame scorer reuses only optimal_mapping for the speaker matching).

/// Frame-counting DER. Requires every ref/hyp boundary to be an exact
/// multiple of `frame` (annotations on a 10 ms grid, frame = 1 ms).
DerBreakdown oracle_der_frames(const std::vector<Turn>& ref, const std::vector<Turn>& hyp,
                               double collar, double frame = 0.001);

struct OracleAssignment {
    std::vector<int> row_to_col;  // -1 where unassigned
    double total = 0.0;
};

/// Exhaustive maximum-total injective assignment. Refuses matrices larger
/// than 6x6 (factorial search).
OracleAssignment oracle_assignment(const Eigen::MatrixXd& score);

/// Globally minimal k-means inertia by enumerating all k^N labelings.
/// Refuses N > 8 or k > 3.
double oracle_kmeans(const Eigen::MatrixXd& points, int k);

} // namespace diar
