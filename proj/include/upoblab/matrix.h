#ifndef UPOBLAB_MATRIX_H
#define UPOBLAB_MATRIX_H

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace upoblab {

using Complex = std::complex<double>;

/// Largest row or column count any constructed product may have.
inline constexpr std::size_t kDefaultDimensionCap = 4096;

/// Absolute tolerance on complex magnitudes and (relative) singular values.
class Tolerance {
   public:
    static constexpr double kDefaultEps = 1e-9;

    constexpr Tolerance() = default;
    /// Throws ConfigError unless 0 < eps < 1.
    explicit Tolerance(double eps);

    double eps() const { return eps_; }

   private:
    double eps_ = kDefaultEps;
};

/// Dense, row-major, immutable complex matrix.
///
/// Every entry is finite. Mutation happens only by building a new matrix,
/// so instances can be shared freely between threads.
class ComplexMatrix {
   public:
    /// rows x cols zero matrix.
    ComplexMatrix(std::size_t rows, std::size_t cols);
    /// Takes ownership of row-major entries; throws ShapeError if the count
    /// is wrong and ValueError on NaN/Inf.
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    /// Row-by-row literal, e.g. from_rows({{0, 1}, {1, 0}}).
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const Complex> diag);
    /// Column vector (n x 1).
    static ComplexMatrix column(std::span<const Complex> v);
    /// Single 1 at (r, c).
    static ComplexMatrix unit(std::size_t rows, std::size_t cols, std::size_t r, std::size_t c);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return entries_.size(); }
    bool is_square() const { return rows_ == cols_; }

    Complex operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
    std::span<const Complex> entries() const { return entries_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conj() const;
    Complex trace() const;
    double frobenius_norm() const;
    /// max |a_ij|
    double max_abs() const;
    /// Same entries scaled to unit Frobenius norm; throws ValueError on zero.
    ComplexMatrix normalized() const;

    friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator*(Complex s, const ComplexMatrix& a);
    friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) = default;

    std::string str() const;

   private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Complex> entries_;
};

/// max |a_ij - b_ij|; throws ShapeError on mismatch.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product. Entry (i*b.rows+k, j*b.cols+l) = a(i,j) * b(k,l).
/// Throws SizeError if either result dimension exceeds `cap`.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   std::size_t cap = kDefaultDimensionCap);
/// Left-to-right Kronecker product of a non-empty list.
ComplexMatrix kron_all(std::span<const ComplexMatrix> factors,
                       std::size_t cap = kDefaultDimensionCap);

/// Hilbert-Schmidt inner product Tr(a^dagger b).
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// Dimension of span(vs): number of singular values of the stacked
/// vectorizations above tol.eps * sigma_max.
std::size_t numeric_rank(std::span<const ComplexMatrix> vs, Tolerance tol = {});

/// max |a^dagger a - I| <= tol.eps.
bool is_unitary(const ComplexMatrix& a, Tolerance tol = {});

/// Hilbert-Schmidt orthonormal basis of the orthogonal complement of
/// span(generators) inside the rows x cols matrix space.
///
/// The basis is canonical: matrix units E_00, E_01, ... are projected onto
/// the complement in row-major order and orthonormalized, so results are
/// reproducible for a given span.
std::vector<ComplexMatrix> complement_basis(std::span<const ComplexMatrix> generators,
                                            std::size_t rows, std::size_t cols,
                                            Tolerance tol = {});

/// Unitary polar factor U V^dagger of a = U S V^dagger. Throws SingularError
/// when the smallest singular value is <= tol.eps.
ComplexMatrix nearest_unitary(const ComplexMatrix& a, Tolerance tol = {});

/// Singular values in descending order.
std::vector<double> singular_values(const ComplexMatrix& a);

/// e^{2 pi i k / n}
Complex root_of_unity(std::size_t n, long long k = 1);

namespace pauli {
ComplexMatrix I();
ComplexMatrix X();
ComplexMatrix Y();
ComplexMatrix Z();
}  // namespace pauli

}  // namespace upoblab

#endif
