#include <doctest.h>

#include <vector>

#include "diar/affinity.hpp"
#include "diar/errors.hpp"
#include "diar/rng.hpp"
#include "diar/spectral.hpp"

using namespace diar;

namespace {

// Block-diagonal affinity: `sizes[c]` nodes per block, within-block weights
// uniform in [0.9, 1], nothing across blocks. The Laplacian then has exactly
// one zero eigenvalue per block.
Eigen::MatrixXd block_affinity(const std::vector<int>& sizes, Rng& rng) {
    int n = 0;
    for (int s : sizes) n += s;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    int base = 0;
    for (int s : sizes) {
        for (int i = 0; i < s; ++i) {
            m(base + i, base + i) = 1.0;
            for (int j = i + 1; j < s; ++j) {
                double w = rng.uniform(0.9, 1.0);
                m(base + i, base + j) = w;
                m(base + j, base + i) = w;
            }
        }
        base += s;
    }
    return m;
}

} // namespace

TEST_CASE("laplacian rows sum to zero and self-loops cancel") {
    Rng rng(21);
    Eigen::MatrixXd w(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) w(i, j) = rng.uniform(0.0, 1.0);
    w = symmetrize(w);

    Eigen::MatrixXd l = laplacian(w);
    for (int i = 0; i < 4; ++i) {
        CHECK(l.row(i).sum() == doctest::Approx(0.0).epsilon(1e-12));
        // diagonal excludes the self-loop: d_i - w_ii over off-diagonal mass
        double off = w.row(i).sum() - w(i, i);
        CHECK(l(i, i) == doctest::Approx(off).epsilon(1e-12));
    }
}

TEST_CASE("eig_sym returns an ascending orthonormal decomposition") {
    Rng rng(22);
    Eigen::MatrixXd a(10, 10);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) a(i, j) = rng.gaussian();
    Eigen::MatrixXd sym = symmetrize(a);

    EigenDecomposition eig = eig_sym(sym);
    for (int i = 1; i < 10; ++i) CHECK(eig.values[i] >= eig.values[i - 1]);
    CHECK((eig.vectors.transpose() * eig.vectors - Eigen::MatrixXd::Identity(10, 10))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
    CHECK((sym * eig.vectors - eig.vectors * eig.values.asDiagonal()).cwiseAbs().maxCoeff() <
          1e-9);
    // sign convention: the largest-magnitude entry of each column is positive
    for (int j = 0; j < 10; ++j) {
        int arg = 0;
        eig.vectors.col(j).cwiseAbs().maxCoeff(&arg);
        CHECK(eig.vectors(arg, j) > 0.0);
    }
}

TEST_CASE("eig_sym rejects non-finite and non-square input") {
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(eig_sym(bad), NumericalError);
    CHECK_THROWS_AS(eig_sym(Eigen::MatrixXd::Zero(2, 3)), InvalidInputError);
}

TEST_CASE("estimate_k finds the largest gap, first on ties") {
    Eigen::VectorXd v(6);
    v << 0.0, 0.01, 0.02, 5.0, 5.05, 5.1;
    CHECK(estimate_k(v, 5) == 3);

    Eigen::VectorXd tied(5);
    tied << 0.0, 1.0, 1.0, 2.0, 2.0;  // gaps 1, 0, 1, 0
    CHECK(estimate_k(tied, 4) == 1);

    Eigen::VectorXd single(1);
    single << 3.0;
    CHECK(estimate_k(single, 10) == 1);
}

TEST_CASE("estimate_k is capped by k_max") {
    Eigen::VectorXd v(8);
    v << 0, 0, 0, 0, 0, 0, 0, 100.0;  // gap at index 7
    CHECK(estimate_k(v, 10) == 7);
    CHECK(estimate_k(v, 4) <= 4);
}

TEST_CASE("block Laplacian has one zero eigenvalue per block and the gap at k") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        int k = 2 + static_cast<int>(rng.uniform_index(7));  // 2..8
        std::vector<int> sizes;
        int n = 0;
        for (int c = 0; c < k; ++c) {
            int s = 5 + static_cast<int>(rng.uniform_index(16));  // 5..20
            sizes.push_back(s);
            n += s;
        }
        EigenDecomposition eig = eig_sym(laplacian(block_affinity(sizes, rng)));

        int zeros = 0;
        for (int i = 0; i < n; ++i)
            if (eig.values[i] < 1e-8) ++zeros;
        CAPTURE(k);
        CHECK(zeros == k);
        CHECK(estimate_k(eig.values, 10) == k);
    }
}

TEST_CASE("spectral_embeddings takes the first k columns") {
    Rng rng(24);
    Eigen::MatrixXd a(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) a(i, j) = rng.gaussian();
    EigenDecomposition eig = eig_sym(symmetrize(a));

    Eigen::MatrixXd f = spectral_embeddings(eig, 3);
    CHECK(f.rows() == 6);
    CHECK(f.cols() == 3);
    CHECK(f == eig.vectors.leftCols(3));
    CHECK_THROWS_AS(spectral_embeddings(eig, 0), InvalidInputError);
    CHECK_THROWS_AS(spectral_embeddings(eig, 7), InvalidInputError);
}
