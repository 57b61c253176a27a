// Conversions between ComplexMatrix and Eigen, internal to the library.
#ifndef UPOBLAB_SRC_EIGEN_BRIDGE_H
#define UPOBLAB_SRC_EIGEN_BRIDGE_H

#include <Eigen/Dense>

#include "upoblab/matrix.h"

namespace upoblab::detail {

using EMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

inline EMatrix to_eigen(const ComplexMatrix& m) {
    EMatrix out(m.rows(), m.cols());
    auto e = m.entries();
    std::copy(e.begin(), e.end(), out.data());
    return out;
}

template <typename Derived>
ComplexMatrix from_eigen(const Eigen::MatrixBase<Derived>& m) {
    std::vector<Complex> entries(static_cast<std::size_t>(m.rows() * m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            entries[static_cast<std::size_t>(r * m.cols() + c)] = m(r, c);
        }
    }
    return ComplexMatrix(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()),
                         std::move(entries));
}

/// Row-major vectorization as an Eigen column.
inline EVector vec(const ComplexMatrix& m) {
    auto e = m.entries();
    EVector out(static_cast<Eigen::Index>(e.size()));
    std::copy(e.begin(), e.end(), out.data());
    return out;
}

/// Polar factor without the singularity check; used inside iterative
/// searches where an arbitrary choice at singular points is acceptable.
inline EMatrix polar_unitary(const EMatrix& a) {
    Eigen::JacobiSVD<EMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace upoblab::detail

#endif
