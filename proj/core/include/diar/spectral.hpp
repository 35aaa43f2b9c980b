#pragma once

#include <Eigen/Dense>

#include "diar/types.hpp"

namespace diar {

/// Unnormalized graph Laplacian D - W, with degrees taken as full row sums.
Eigen::MatrixXd laplacian(const Eigen::MatrixXd& w);

struct EigenDecomposition {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // column i pairs with values[i]
};

/// Full symmetric eigendecomposition. Eigenvalues ascending; each
/// eigenvector's sign is fixed so its largest-magnitude entry is positive
/// (first such index on ties). Throws NumericalError if the solver fails
/// or the input is not finite.
EigenDecomposition eig_sym(const Eigen::MatrixXd& m);

/// Eigengap speaker-count estimate: the index i in [1, min(k_max, N-1)]
/// maximizing values[i] - values[i-1], first maximum on ties. N == 1 gives 1.
int estimate_k(const Eigen::VectorXd& eigenvalues, int k_max);

/// Rows of the first k eigenvectors, used as clustering features (N x k).
Eigen::MatrixXd spectral_embeddings(const EigenDecomposition& eig, int k);

} // namespace diar
