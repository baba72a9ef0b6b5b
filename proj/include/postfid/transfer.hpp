#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "postfid/errors.hpp"
#include "postfid/numerics.hpp"

namespace postfid {

/// Mode-space linear transform for passive optics. Contractive: all
/// singular values <= 1. `unitary` is set when M^dag M = I within 1e-10.
struct TransferMatrix {
    Matrix m;
    bool unitary = false;

    explicit TransferMatrix(Matrix entries) : m(std::move(entries)) {
        if (m.rows() != m.cols())
            throw numeric_error("TransferMatrix: matrix must be square");
        Eigen::JacobiSVD<Matrix> svd(m);
        if (svd.singularValues().maxCoeff() > 1.0 + 1e-12)
            throw numeric_error("TransferMatrix: singular value above 1, not a contraction");
        Matrix gram = m.adjoint() * m;
        gram.diagonal().array() -= 1.0;
        unitary = max_abs(gram) <= 1e-10;
    }

    int size() const { return static_cast<int>(m.rows()); }
};

} // namespace postfid
