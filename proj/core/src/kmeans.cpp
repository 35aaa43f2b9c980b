#include "diar/kmeans.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "diar/errors.hpp"
#include "diar/rng.hpp"

namespace diar {

namespace {

struct RunResult {
    std::vector<int> labels;
    Eigen::MatrixXd centroids;
    double inertia = 0.0;
    int iterations = 0;
};

// Squared distances from every point to one center.
Eigen::VectorXd sq_dist_to(const Eigen::MatrixXd& points, const Eigen::RowVectorXd& c) {
    return (points.rowwise() - c).rowwise().squaredNorm();
}

Eigen::MatrixXd plus_plus_init(const Eigen::MatrixXd& points, int k, Rng& rng) {
    const Eigen::Index n = points.rows();
    Eigen::MatrixXd centers(k, points.cols());
    centers.row(0) = points.row(static_cast<Eigen::Index>(rng.uniform_index(n)));

    Eigen::VectorXd d2 = sq_dist_to(points, centers.row(0));
    for (int c = 1; c < k; ++c) {
        double total = d2.sum();
        Eigen::Index pick;
        if (total <= 0.0) {
            // all remaining mass at distance zero: fall back to uniform
            pick = static_cast<Eigen::Index>(rng.uniform_index(n));
        } else {
            double target = rng.uniform() * total;
            double acc = 0.0;
            pick = n - 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc > target) {
                    pick = i;
                    break;
                }
            }
        }
        centers.row(c) = points.row(pick);
        d2 = d2.cwiseMin(sq_dist_to(points, centers.row(c)));
    }
    return centers;
}

RunResult run_once(const Eigen::MatrixXd& points, int k, uint64_t seed,
                   const KMeansConfig& cfg) {
    const Eigen::Index n = points.rows();
    Rng rng(seed);

    RunResult r;
    r.centroids = plus_plus_init(points, k, rng);
    r.labels.assign(n, 0);

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        r.iterations = iter + 1;

        // assignment step; ties go to the lowest centroid index
        for (Eigen::Index i = 0; i < n; ++i) {
            int best = 0;
            double best_d = (points.row(i) - r.centroids.row(0)).squaredNorm();
            for (int c = 1; c < k; ++c) {
                double d = (points.row(i) - r.centroids.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            r.labels[i] = best;
        }

        // update step
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(k, points.cols());
        std::vector<Eigen::Index> counts(k, 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            next.row(r.labels[i]) += points.row(i);
            ++counts[r.labels[i]];
        }

        // empty-cluster repair: steal the point farthest from its centroid
        // (lowest point index on ties), one cluster at a time
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            Eigen::Index far = -1;
            double far_d = -1.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (counts[r.labels[i]] <= 1) continue;  // keep donors nonempty
                double d = (points.row(i) - r.centroids.row(r.labels[i])).squaredNorm();
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            if (far < 0) continue;  // n < k, nothing to steal
            int old = r.labels[far];
            next.row(old) -= points.row(far);
            --counts[old];
            next.row(c) = points.row(far);
            counts[c] = 1;
            r.labels[far] = c;
        }

        double movement = 0.0;
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) next.row(c) /= static_cast<double>(counts[c]);
            else next.row(c) = r.centroids.row(c);
            movement = std::max(movement, (next.row(c) - r.centroids.row(c)).norm());
        }
        r.centroids = next;
        if (movement < cfg.tol) break;
    }

    r.inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        r.inertia += (points.row(i) - r.centroids.row(r.labels[i])).squaredNorm();
    return r;
}

} // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, uint64_t seed,
                    const KMeansConfig& cfg) {
    const Eigen::Index n = points.rows();
    if (n == 0) throw InvalidInputError("kmeans: no points");
    if (k < 1) throw InvalidInputError("kmeans: k must be >= 1, got " + std::to_string(k));
    if (k > n)
        throw InvalidInputError("kmeans: k=" + std::to_string(k) + " exceeds point count " +
                                std::to_string(n));
    if (!points.allFinite()) throw NumericalError("kmeans: points contain non-finite values");

    RunResult best;
    bool have_best = false;
    for (int r = 0; r < cfg.restarts; ++r) {
        RunResult cur = run_once(points, k, derive_seed(seed, static_cast<uint64_t>(r)), cfg);
        if (!have_best || cur.inertia < best.inertia) {  // strict: ties keep earlier restart
            best = std::move(cur);
            have_best = true;
        }
    }

    // canonical labels: renumber by first occurrence over point order
    std::vector<int> remap(k, -1);
    Eigen::MatrixXd centroids(k, points.cols());
    int next_id = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        int& m = remap[best.labels[i]];
        if (m < 0) {
            m = next_id++;
            centroids.row(m) = best.centroids.row(best.labels[i]);
        }
        best.labels[i] = m;
    }
    // clusters that ended up empty (only possible via pathological inputs)
    for (int c = 0; c < k; ++c)
        if (remap[c] < 0) centroids.row(next_id++) = best.centroids.row(c);

    KMeansResult out;
    out.labels = std::move(best.labels);
    out.centroids = std::move(centroids);
    out.inertia = best.inertia;
    out.iterations = best.iterations;
    return out;
}

} // namespace diar
