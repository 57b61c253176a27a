#include "upoblab/matrix.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "eigen_bridge.h"
#include "upoblab/errors.h"

namespace upoblab {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        std::ostringstream msg;
        msg << what << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows()
            << "x" << b.cols();
        throw ShapeError(msg.str());
    }
}

// Orthonormal basis (columns) of span{vec(g)} using the relative threshold.
detail::EMatrix span_basis(std::span<const ComplexMatrix> gens, std::size_t dim, double eps) {
    if (gens.empty()) return detail::EMatrix(static_cast<Eigen::Index>(dim), 0);
    detail::EMatrix stacked(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(gens.size()));
    for (std::size_t j = 0; j < gens.size(); ++j) {
        stacked.col(static_cast<Eigen::Index>(j)) = detail::vec(gens[j]);
    }
    Eigen::JacobiSVD<detail::EMatrix> svd(stacked, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    Eigen::Index r = 0;
    if (s.size() > 0 && s(0) > 0.0) {
        while (r < s.size() && s(r) > eps * s(0)) ++r;
    }
    return svd.matrixU().leftCols(r);
}

}  // namespace

Tolerance::Tolerance(double eps) : eps_(eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw ConfigError("tolerance must satisfy 0 < eps < 1, got " + std::to_string(eps));
    }
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {
    if (rows == 0 || cols == 0) throw ShapeError("matrix dimensions must be positive");
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw ShapeError("matrix dimensions must be positive");
    if (entries_.size() != rows * cols) {
        throw ShapeError("entry count " + std::to_string(entries_.size()) + " != " +
                         std::to_string(rows) + "x" + std::to_string(cols));
    }
    for (const auto& z : entries_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw ValueError("matrix entries must be finite");
        }
    }
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<Complex> entries;
    entries.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw ShapeError("ragged matrix literal");
        entries.insert(entries.end(), row.begin(), row.end());
    }
    return ComplexMatrix(r, c, std::move(entries));
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    std::vector<Complex> entries(n * n);
    for (std::size_t i = 0; i < n; ++i) entries[i * n + i] = 1.0;
    return ComplexMatrix(n, n, std::move(entries));
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
    const std::size_t n = diag.size();
    std::vector<Complex> entries(n * n);
    for (std::size_t i = 0; i < n; ++i) entries[i * n + i] = diag[i];
    return ComplexMatrix(n, n, std::move(entries));
}

ComplexMatrix ComplexMatrix::column(std::span<const Complex> v) {
    return ComplexMatrix(v.size(), 1, std::vector<Complex>(v.begin(), v.end()));
}

ComplexMatrix ComplexMatrix::unit(std::size_t rows, std::size_t cols, std::size_t r,
                                  std::size_t c) {
    if (r >= rows || c >= cols) throw IndexError("matrix unit position out of range");
    std::vector<Complex> entries(rows * cols);
    entries[r * cols + c] = 1.0;
    return ComplexMatrix(rows, cols, std::move(entries));
}

ComplexMatrix ComplexMatrix::adjoint() const {
    std::vector<Complex> out(size());
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) out[c * rows_ + r] = std::conj((*this)(r, c));
    }
    return ComplexMatrix(cols_, rows_, std::move(out));
}

ComplexMatrix ComplexMatrix::transpose() const {
    std::vector<Complex> out(size());
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) out[c * rows_ + r] = (*this)(r, c);
    }
    return ComplexMatrix(cols_, rows_, std::move(out));
}

ComplexMatrix ComplexMatrix::conj() const {
    std::vector<Complex> out(entries_);
    for (auto& z : out) z = std::conj(z);
    return ComplexMatrix(rows_, cols_, std::move(out));
}

Complex ComplexMatrix::trace() const {
    if (!is_square()) throw ShapeError("trace of a non-square matrix");
    Complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : entries_) s += std::norm(z);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : entries_) m = std::max(m, std::abs(z));
    return m;
}

ComplexMatrix ComplexMatrix::normalized() const {
    const double n = frobenius_norm();
    if (n == 0.0) throw ValueError("cannot normalize the zero matrix");
    return Complex(1.0 / n) * *this;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "operator+");
    std::vector<Complex> out(a.entries_);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.entries_[i];
    return ComplexMatrix(a.rows_, a.cols_, std::move(out));
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "operator-");
    std::vector<Complex> out(a.entries_);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b.entries_[i];
    return ComplexMatrix(a.rows_, a.cols_, std::move(out));
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw ShapeError("operator*: inner dimensions differ");
    std::vector<Complex> out(a.rows_ * b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex(0.0)) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) out[i * b.cols_ + j] += aik * b(k, j);
        }
    }
    return ComplexMatrix(a.rows_, b.cols_, std::move(out));
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
    std::vector<Complex> out(a.entries_);
    for (auto& z : out) z *= s;
    return ComplexMatrix(a.rows_, a.cols_, std::move(out));
}

std::string ComplexMatrix::str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t r = 0; r < rows_; ++r) {
        os << (r ? "; " : "");
        for (std::size_t c = 0; c < cols_; ++c) {
            const Complex z = (*this)(r, c);
            os << (c ? ", " : "") << z.real();
            if (z.imag() != 0.0) os << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
        }
    }
    os << "]";
    return os.str();
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    return (a - b).max_abs();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t cap) {
    const std::size_t rows = a.rows() * b.rows();
    const std::size_t cols = a.cols() * b.cols();
    if (rows > cap || cols > cap) {
        throw SizeError("kron result " + std::to_string(rows) + "x" + std::to_string(cols) +
                        " exceeds dimension cap " + std::to_string(cap));
    }
    std::vector<Complex> out(rows * cols);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    out[(i * b.rows() + k) * cols + (j * b.cols() + l)] = aij * b(k, l);
                }
            }
        }
    }
    return ComplexMatrix(rows, cols, std::move(out));
}

ComplexMatrix kron_all(std::span<const ComplexMatrix> factors, std::size_t cap) {
    if (factors.empty()) throw EmptyInputError("kron_all of an empty list");
    ComplexMatrix acc = factors[0];
    for (std::size_t i = 1; i < factors.size(); ++i) acc = kron(acc, factors[i], cap);
    return acc;
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "hs_inner");
    Complex s = 0.0;
    auto ea = a.entries();
    auto eb = b.entries();
    for (std::size_t i = 0; i < ea.size(); ++i) s += std::conj(ea[i]) * eb[i];
    return s;
}

std::size_t numeric_rank(std::span<const ComplexMatrix> vs, Tolerance tol) {
    if (vs.empty()) throw EmptyInputError("numeric_rank of an empty list");
    const std::size_t dim = vs[0].size();
    for (const auto& v : vs) require_same_shape(vs[0], v, "numeric_rank");
    detail::EMatrix stacked(static_cast<Eigen::Index>(vs.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t j = 0; j < vs.size(); ++j) {
        stacked.row(static_cast<Eigen::Index>(j)) = detail::vec(vs[j]).transpose();
    }
    Eigen::JacobiSVD<detail::EMatrix> svd(stacked);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > tol.eps() * s(0)) ++r;
    }
    return r;
}

bool is_unitary(const ComplexMatrix& a, Tolerance tol) {
    if (!a.is_square()) throw ShapeError("is_unitary requires a square matrix");
    return max_abs_diff(a.adjoint() * a, ComplexMatrix::identity(a.rows())) <= tol.eps();
}

std::vector<ComplexMatrix> complement_basis(std::span<const ComplexMatrix> generators,
                                            std::size_t rows, std::size_t cols, Tolerance tol) {
    for (const auto& g : generators) {
        if (g.rows() != rows || g.cols() != cols) {
            throw ShapeError("complement_basis: generator shape differs from ambient shape");
        }
    }
    const std::size_t dim = rows * cols;
    const detail::EMatrix span = span_basis(generators, dim, tol.eps());
    const std::size_t target = dim - static_cast<std::size_t>(span.cols());

    std::vector<detail::EVector> found;
    found.reserve(target);
    // Accept a residual only if it is well clear of round-off; some unit
    // always has residual >= sqrt(remaining / dim), so this never stalls.
    constexpr double kAccept = 1e-6;
    for (std::size_t u = 0; u < dim && found.size() < target; ++u) {
        detail::EVector v = detail::EVector::Zero(static_cast<Eigen::Index>(dim));
        v(static_cast<Eigen::Index>(u)) = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            if (span.cols() > 0) v -= span * (span.adjoint() * v);
            for (const auto& f : found) v -= f * f.dot(v);
        }
        const double n = v.norm();
        if (n > kAccept) found.push_back(v / n);
    }

    std::vector<ComplexMatrix> out;
    out.reserve(found.size());
    for (const auto& f : found) {
        out.emplace_back(rows, cols, std::vector<Complex>(f.data(), f.data() + f.size()));
    }
    return out;
}

ComplexMatrix nearest_unitary(const ComplexMatrix& a, Tolerance tol) {
    if (!a.is_square()) throw ShapeError("nearest_unitary requires a square matrix");
    Eigen::JacobiSVD<detail::EMatrix> svd(detail::to_eigen(a),
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= tol.eps()) {
        throw SingularError("nearest_unitary: matrix is numerically singular");
    }
    return detail::from_eigen(svd.matrixU() * svd.matrixV().adjoint());
}

std::vector<double> singular_values(const ComplexMatrix& a) {
    Eigen::JacobiSVD<detail::EMatrix> svd(detail::to_eigen(a));
    const auto& s = svd.singularValues();
    return std::vector<double>(s.data(), s.data() + s.size());
}

Complex root_of_unity(std::size_t n, long long k) {
    if (n == 0) throw ConfigError("root_of_unity order must be positive");
    const long long m = ((k % static_cast<long long>(n)) + static_cast<long long>(n)) %
                        static_cast<long long>(n);
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
    return {std::cos(angle), std::sin(angle)};
}

namespace pauli {
ComplexMatrix I() { return ComplexMatrix::identity(2); }
ComplexMatrix X() { return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }
ComplexMatrix Y() {
    return ComplexMatrix::from_rows({{0.0, Complex(0, -1)}, {Complex(0, 1), 0.0}});
}
ComplexMatrix Z() { return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}}); }
}  // namespace pauli

}  // namespace upoblab
