#ifndef UPOBLAB_TESTS_TEST_UTIL_H
#define UPOBLAB_TESTS_TEST_UTIL_H

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "upoblab/matrix.h"
#include "upoblab/product_basis.h"

namespace upoblab::testing {

using EM = Eigen::MatrixXcd;

inline EM to_em(const ComplexMatrix& m) {
    EM out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
    }
    return out;
}

inline ComplexMatrix from_em(const EM& m) {
    std::vector<Complex> e;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) e.push_back(m(r, c));
    }
    return ComplexMatrix(m.rows(), m.cols(), std::move(e));
}

class Rng {
   public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double normal() { return normal_(gen_); }
    double uniform() { return uniform_(gen_); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_); }
    Complex cnormal() { return {normal(), normal()}; }

    ComplexMatrix gaussian(std::size_t rows, std::size_t cols) {
        std::vector<Complex> e(rows * cols);
        for (auto& z : e) z = cnormal();
        return ComplexMatrix(rows, cols, std::move(e));
    }

    std::vector<Complex> gaussian_vector(std::size_t n) {
        std::vector<Complex> v(n);
        for (auto& z : v) z = cnormal();
        return v;
    }

    // Haar-distributed unitary via QR with the phase fix.
    ComplexMatrix haar_unitary(std::size_t n) {
        EM g = to_em(gaussian(n, n));
        Eigen::HouseholderQR<EM> qr(g);
        EM q = qr.householderQ();
        EM r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
            const Complex d = r(i, i);
            q.col(i) *= d / std::abs(d);
        }
        return from_em(q);
    }

    std::mt19937_64& engine() { return gen_; }

   private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_;
    std::uniform_real_distribution<double> uniform_;
};

// Independent rank oracle: singular values of the stacked row-major
// vectorizations above rel * sigma_max.
inline std::size_t oracle_rank(const std::vector<ComplexMatrix>& ms, double rel = 1e-9) {
    if (ms.empty()) return 0;
    EM stacked(ms.size(), ms.front().size());
    for (std::size_t i = 0; i < ms.size(); ++i) {
        for (std::size_t k = 0; k < ms[i].size(); ++k) stacked(i, k) = ms[i].entries()[k];
    }
    Eigen::JacobiSVD<EM> svd(stacked);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > rel * s(0)) ++r;
    }
    return r;
}

// Exhaustive extendibility oracle: tries every assignment of members to parties.
inline bool oracle_extendible(const OperatorSet& set) {
    const std::size_t n = set.size();
    const std::size_t m = set.shape().size();
    std::vector<std::size_t> assign(n, 0);
    while (true) {
        bool ok = true;
        for (std::size_t p = 0; p < m && ok; ++p) {
            std::vector<ComplexMatrix> sub;
            for (std::size_t j = 0; j < n; ++j) {
                if (assign[j] == p) sub.push_back(set[j].factor(p));
            }
            ok = oracle_rank(sub) < set.shape()[p].dim();
        }
        if (ok) return true;
        std::size_t k = 0;
        while (k < n && ++assign[k] == m) assign[k++] = 0;
        if (k == n) return false;
    }
}

// Full product operator matrix via Eigen Kronecker loops (independent of kron).
inline EM oracle_full(const ProductOperator& p) {
    EM out = EM::Ones(1, 1);
    for (const auto& f : p.factors()) {
        const EM b = to_em(f);
        EM next(out.rows() * b.rows(), out.cols() * b.cols());
        for (Eigen::Index i = 0; i < out.rows(); ++i) {
            for (Eigen::Index j = 0; j < out.cols(); ++j) {
                next.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = out(i, j) * b;
            }
        }
        out = next;
    }
    return out;
}

inline EM oracle_gram(const OperatorSet& s) {
    EM g(s.size(), s.size());
    std::vector<EM> fulls;
    for (const auto& m : s.members()) fulls.push_back(oracle_full(m));
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = 0; j < s.size(); ++j) g(i, j) = (fulls[i].adjoint() * fulls[j]).trace();
    }
    return g;
}

// Equality up to a global phase: |<a,b>| = |a||b|.
inline bool equal_up_to_phase(const std::vector<Complex>& a, const std::vector<Complex>& b,
                              double tol) {
    if (a.size() != b.size()) return false;
    Complex ip = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ip += std::conj(a[i]) * b[i];
        na += std::norm(a[i]);
        nb += std::norm(b[i]);
    }
    if (na == 0.0 || nb == 0.0) return na == nb;
    const Complex phase = ip / std::abs(ip);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] * phase - b[i]));
    return worst <= tol;
}

}  // namespace upoblab::testing

#endif
