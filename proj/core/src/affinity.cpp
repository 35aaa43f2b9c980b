#include "diar/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "diar/errors.hpp"

namespace diar {

Eigen::MatrixXd cosine_affinity(const Eigen::MatrixXd& embeddings) {
    const Eigen::Index n = embeddings.rows();
    if (n == 0) throw InvalidInputError("cosine_affinity: no embedding rows");

    Eigen::MatrixXd unit(n, embeddings.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
        double norm = embeddings.row(i).norm();
        if (norm == 0.0 || !std::isfinite(norm))
            throw InvalidInputError("cosine_affinity: segment " + std::to_string(i) +
                                    " has zero or non-finite norm");
        unit.row(i) = embeddings.row(i) / norm;
    }

    Eigen::MatrixXd m = unit * unit.transpose();
    // Mirror the upper triangle so m(i,j) and m(j,i) are the same double,
    // then pin the diagonal and clamp rounding spill.
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double v = std::clamp(m(i, j), -1.0, 1.0);
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return m;
}

int keep_count(int n, double alpha) {
    if (n <= 0) return 0;
    // Small epsilon guards against fp noise in n*(1-alpha) landing just above
    // an integer (e.g. 20*0.3 = 6.000000000000001).
    int zeroed = static_cast<int>(std::ceil(static_cast<double>(n) * (1.0 - alpha) - 1e-9));
    zeroed = std::clamp(zeroed, 0, n);
    return std::max(1, n - zeroed);
}

Eigen::MatrixXd prune_rows(const Eigen::MatrixXd& m, double alpha) {
    if (alpha < 0.0 || alpha > 1.0)
        throw InvalidInputError("prune_rows: alpha must lie in [0, 1], got " +
                                std::to_string(alpha));
    const Eigen::Index n = m.rows();
    if (n != m.cols()) throw InvalidInputError("prune_rows: matrix must be square");

    const int keep = keep_count(static_cast<int>(n), alpha);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    std::vector<int> order(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        std::iota(order.begin(), order.end(), 0);
        // stable sort: equal values keep column order, so ties favor the
        // smaller column index
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return m(i, a) > m(i, b); });
        for (int r = 0; r < keep; ++r) out(i, order[r]) = m(i, order[r]);
    }
    return out;
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
    const Eigen::Index n = m.rows();
    if (n != m.cols()) throw InvalidInputError("symmetrize: matrix must be square");
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out(i, i) = m(i, i);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double v = (m(i, j) + m(j, i)) / 2.0;
            out(i, j) = v;
            out(j, i) = v;
        }
    }
    return out;
}

} // namespace diar
