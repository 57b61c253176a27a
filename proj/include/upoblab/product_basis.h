#ifndef UPOBLAB_PRODUCT_BASIS_H
#define UPOBLAB_PRODUCT_BASIS_H

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "upoblab/matrix.h"

namespace upoblab {

/// Shape of one party's local operator space M_{rows,cols}.
struct LocalShape {
    std::size_t rows;
    std::size_t cols;

    std::size_t dim() const { return rows * cols; }
    bool is_square() const { return rows == cols; }
    friend bool operator==(const LocalShape&, const LocalShape&) = default;
};

/// Ordered list of local shapes, one per party.
class PartyShape {
   public:
    explicit PartyShape(std::vector<LocalShape> parties);
    /// n parties, each M_{d,d}.
    static PartyShape uniform(std::size_t n, std::size_t d);

    std::size_t size() const { return parties_.size(); }
    const LocalShape& operator[](std::size_t i) const { return parties_.at(i); }
    std::span<const LocalShape> parties() const { return parties_; }
    bool all_square() const;
    /// Product of local row counts (the total dimension d for square shapes).
    std::size_t total_rows() const;
    std::size_t total_cols() const;

    friend bool operator==(const PartyShape&, const PartyShape&) = default;

   private:
    std::vector<LocalShape> parties_;
};

/// U_1 (x) ... (x) U_n with a free-form label. Factors are stored as authored;
/// nothing here normalizes them.
class ProductOperator {
   public:
    /// Throws ValueError if any factor is zero, EmptyInputError if there are
    /// no factors.
    ProductOperator(std::vector<ComplexMatrix> factors, std::string label = {});

    std::span<const ComplexMatrix> factors() const { return factors_; }
    const ComplexMatrix& factor(std::size_t i) const { return factors_.at(i); }
    std::size_t parties() const { return factors_.size(); }
    const std::string& label() const { return label_; }
    PartyShape shape() const;

    /// The full Kronecker product.
    ComplexMatrix full(std::size_t cap = kDefaultDimensionCap) const;
    /// Product of factor Frobenius norms.
    double norm() const;
    /// Whether the full product is unitary: every factor is a multiple of a
    /// unitary and the multiples cancel.
    bool is_unitary(Tolerance tol = {}) const;
    ProductOperator with_label(std::string label) const;

   private:
    std::vector<ComplexMatrix> factors_;
    std::string label_;
};

/// Hilbert-Schmidt inner product of two product operators, factorized.
Complex hs_inner(const ProductOperator& a, const ProductOperator& b);

/// A finite set of product operators over one party shape, with unique labels.
class OperatorSet {
   public:
    /// Throws ShapeError for non-conforming members, ConfigError for
    /// duplicate labels.
    OperatorSet(PartyShape shape, std::vector<ProductOperator> members);

    const PartyShape& shape() const { return shape_; }
    std::span<const ProductOperator> members() const { return members_; }
    const ProductOperator& operator[](std::size_t i) const { return members_.at(i); }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }

    bool all_unitary(Tolerance tol = {}) const;
    /// Copy without member i (labels kept).
    OperatorSet without(std::size_t i) const;
    /// Copy without the member carrying `label`; throws IndexError if absent.
    OperatorSet without(const std::string& label) const;

   private:
    PartyShape shape_;
    std::vector<ProductOperator> members_;
};

/// A product of local vectors, |a_1> (x) ... (x) |a_n>.
struct ProductVector {
    std::vector<std::vector<Complex>> factors;
    std::string label;

    double norm() const;
    /// Full amplitude vector in the Kronecker order of the factors.
    std::vector<Complex> full() const;
};

/// Euclidean inner product <a|b>, factorized.
Complex inner(const ProductVector& a, const ProductVector& b);

/// Positions f_1..f_d (0-based rows/cols) inside an m x n target matrix.
class IndexSet {
   public:
    /// Throws IndexError for out-of-range or repeated positions and for a
    /// length outside max(m,n) <= d <= m*n.
    IndexSet(std::size_t rows, std::size_t cols,
             std::vector<std::pair<std::size_t, std::size_t>> positions);
    /// The first d positions in row-major order.
    static IndexSet row_major(std::size_t rows, std::size_t cols, std::size_t d);
    static IndexSet row_major(std::size_t rows, std::size_t cols) {
        return row_major(rows, cols, rows * cols);
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return positions_.size(); }
    std::span<const std::pair<std::size_t, std::size_t>> positions() const { return positions_; }

   private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::pair<std::size_t, std::size_t>> positions_;
};

/// G(j,k) = Tr(U_j^dagger U_k) via per-party inner products.
ComplexMatrix gram(const OperatorSet& set);
/// Gram matrix after scaling every member to unit Frobenius norm.
ComplexMatrix normalized_gram(const OperatorSet& set);

/// True iff every member, rescaled to Frobenius norm sqrt(d), satisfies
/// |G - d*I| <= tol.eps entrywise. d is the product of the party dimensions.
/// Throws ShapeError when some party is not square.
bool check_orthonormal(const OperatorSet& set, Tolerance tol = {});
/// Shape-agnostic variant: |normalized_gram - I| <= tol.eps.
bool is_orthonormal(const OperatorSet& set, Tolerance tol = {});

/// Whether the k-th factors of u and v are Hilbert-Schmidt orthogonal
/// (after normalization). Throws IndexError for a bad k, ShapeError when the
/// shapes differ or party k is not square.
bool k_orthonormal(const ProductOperator& u, const ProductOperator& v, std::size_t k,
                   Tolerance tol = {});

/// The bijection F: places v_t at position f_t, zeros elsewhere.
ComplexMatrix vector_to_matrix(std::span<const Complex> v, const IndexSet& idx);
/// Inverse read-out of F: the entries at the index positions.
std::vector<Complex> matrix_to_vector(const ComplexMatrix& m, const IndexSet& idx);

/// Applies F party-by-party. Throws ShapeError on a dimension mismatch.
OperatorSet upb_to_upob(std::span<const ProductVector> upb, std::span<const IndexSet> idx_per_party);

/// Row-major flattening of every factor.
std::vector<ProductVector> vectorize_set(const OperatorSet& set);

/// Product vectors as an operator set with column factors (d_i x 1). This is
/// how the vector form of every operator-level routine is reached.
OperatorSet as_column_set(std::span<const ProductVector> vectors);

/// (U_1 (x) ... (x) U_n) S (V_1 (x) ... (x) V_n), member by member.
OperatorSet apply_local_unitaries(const OperatorSet& set, std::span<const ComplexMatrix> left,
                                  std::span<const ComplexMatrix> right);
/// Reorders parties: output party p holds input party perm[p].
OperatorSet permute_parties(const OperatorSet& set, std::span<const std::size_t> perm);

}  // namespace upoblab

#endif
