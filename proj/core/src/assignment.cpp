#include "diar/assignment.hpp"

#include <limits>

#include "diar/errors.hpp"

namespace diar {

// Potentials-based Hungarian solver over a square cost matrix (minimization),
// 1-indexed internally. p[j] ends up holding the row matched to column j.
std::vector<int> max_assignment(const Eigen::MatrixXd& score) {
    const int rows = static_cast<int>(score.rows());
    const int cols = static_cast<int>(score.cols());
    if (rows == 0 || cols == 0) return std::vector<int>(rows, -1);
    if ((score.array() < 0.0).any())
        throw InvalidInputError("max_assignment: scores must be nonnegative");

    const int n = std::max(rows, cols);
    const double kInf = std::numeric_limits<double>::infinity();

    // pad to square; padding cells cost 0 (score 0)
    auto cost = [&](int i, int j) -> double {
        return (i < rows && j < cols) ? -score(i, j) : 0.0;
    };

    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
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
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> row_to_col(rows, -1);
    for (int j = 1; j <= n; ++j) {
        int i = p[j];
        if (i >= 1 && i <= rows && j <= cols) row_to_col[i - 1] = j - 1;
    }
    return row_to_col;
}

} // namespace diar
