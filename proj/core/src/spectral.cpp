#include "diar/spectral.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "diar/errors.hpp"

namespace diar {

Eigen::MatrixXd laplacian(const Eigen::MatrixXd& w) {
    const Eigen::Index n = w.rows();
    if (n != w.cols()) throw InvalidInputError("laplacian: matrix must be square");
    Eigen::MatrixXd l = -w;
    for (Eigen::Index i = 0; i < n; ++i) {
        // full row sum: the self-loop w(i,i) cancels exactly in d - w(i,i)
        l(i, i) = w.row(i).sum() - w(i, i);
    }
    return l;
}

EigenDecomposition eig_sym(const Eigen::MatrixXd& m) {
    const Eigen::Index n = m.rows();
    if (n != m.cols()) throw InvalidInputError("eig_sym: matrix must be square");
    if (!m.allFinite()) throw NumericalError("eig_sym: input contains non-finite entries");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eig_sym: eigendecomposition did not converge");

    EigenDecomposition out;
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();

    // Deterministic sign: flip each column so its largest-|entry| is positive.
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::Index arg = 0;
        double best = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double a = std::abs(out.vectors(i, j));
            if (a > best) {
                best = a;
                arg = i;
            }
        }
        if (out.vectors(arg, j) < 0.0) out.vectors.col(j) = -out.vectors.col(j);
    }
    return out;
}

int estimate_k(const Eigen::VectorXd& eigenvalues, int k_max) {
    const int n = static_cast<int>(eigenvalues.size());
    if (n == 0) throw InvalidInputError("estimate_k: empty spectrum");
    if (k_max < 1) throw InvalidInputError("estimate_k: k_max must be >= 1");
    if (n == 1) return 1;

    const int hi = std::min(k_max, n - 1);
    int best_k = 1;
    double best_gap = eigenvalues[1] - eigenvalues[0];
    for (int i = 2; i <= hi; ++i) {
        double gap = eigenvalues[i] - eigenvalues[i - 1];
        if (gap > best_gap) {  // strict: first maximum wins ties
            best_gap = gap;
            best_k = i;
        }
    }
    return best_k;
}

Eigen::MatrixXd spectral_embeddings(const EigenDecomposition& eig, int k) {
    const Eigen::Index n = eig.vectors.rows();
    if (k < 1 || k > eig.vectors.cols())
        throw InvalidInputError("spectral_embeddings: k out of range, got " + std::to_string(k));
    return eig.vectors.leftCols(k);
}

} // namespace diar
