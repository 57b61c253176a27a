#include "upoblab/product_basis.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "upoblab/errors.h"

namespace upoblab {

PartyShape::PartyShape(std::vector<LocalShape> parties) : parties_(std::move(parties)) {
    if (parties_.empty()) throw ShapeError("a party shape needs at least one party");
    for (const auto& p : parties_) {
        if (p.rows == 0 || p.cols == 0) throw ShapeError("party dimensions must be positive");
    }
}

PartyShape PartyShape::uniform(std::size_t n, std::size_t d) {
    return PartyShape(std::vector<LocalShape>(n, LocalShape{d, d}));
}

bool PartyShape::all_square() const {
    return std::all_of(parties_.begin(), parties_.end(),
                       [](const LocalShape& p) { return p.is_square(); });
}

std::size_t PartyShape::total_rows() const {
    std::size_t n = 1;
    for (const auto& p : parties_) n *= p.rows;
    return n;
}

std::size_t PartyShape::total_cols() const {
    std::size_t n = 1;
    for (const auto& p : parties_) n *= p.cols;
    return n;
}

ProductOperator::ProductOperator(std::vector<ComplexMatrix> factors, std::string label)
    : factors_(std::move(factors)), label_(std::move(label)) {
    if (factors_.empty()) throw EmptyInputError("a product operator needs at least one factor");
    for (const auto& f : factors_) {
        if (f.frobenius_norm() == 0.0) {
            throw ValueError("product operator '" + label_ + "' has a zero factor");
        }
    }
}

PartyShape ProductOperator::shape() const {
    std::vector<LocalShape> s;
    s.reserve(factors_.size());
    for (const auto& f : factors_) s.push_back({f.rows(), f.cols()});
    return PartyShape(std::move(s));
}

ComplexMatrix ProductOperator::full(std::size_t cap) const { return kron_all(factors_, cap); }

double ProductOperator::norm() const {
    double n = 1.0;
    for (const auto& f : factors_) n *= f.frobenius_norm();
    return n;
}

bool ProductOperator::is_unitary(Tolerance tol) const {
    // Each factor must be a multiple of a unitary; the scales must multiply to 1.
    double scale = 1.0;
    for (const auto& f : factors_) {
        if (!f.is_square()) return false;
        const double c = f.frobenius_norm() * f.frobenius_norm() / static_cast<double>(f.cols());
        const ComplexMatrix g = Complex(1.0 / std::sqrt(c)) * f;
        if (!upoblab::is_unitary(g, tol)) return false;
        scale *= c;
    }
    return std::abs(scale - 1.0) <= tol.eps();
}

ProductOperator ProductOperator::with_label(std::string label) const {
    return ProductOperator(factors_, std::move(label));
}

Complex hs_inner(const ProductOperator& a, const ProductOperator& b) {
    if (a.parties() != b.parties()) throw ShapeError("hs_inner: party counts differ");
    Complex s = 1.0;
    for (std::size_t i = 0; i < a.parties(); ++i) s *= hs_inner(a.factor(i), b.factor(i));
    return s;
}

OperatorSet::OperatorSet(PartyShape shape, std::vector<ProductOperator> members)
    : shape_(std::move(shape)), members_(std::move(members)) {
    std::set<std::string> labels;
    for (const auto& m : members_) {
        if (!(m.shape() == shape_)) {
            throw ShapeError("member '" + m.label() + "' does not conform to the set shape");
        }
        if (!labels.insert(m.label()).second) {
            throw ConfigError("duplicate member label '" + m.label() + "'");
        }
    }
}

bool OperatorSet::all_unitary(Tolerance tol) const {
    return std::all_of(members_.begin(), members_.end(),
                       [&](const ProductOperator& m) { return m.is_unitary(tol); });
}

OperatorSet OperatorSet::without(std::size_t i) const {
    if (i >= members_.size()) throw IndexError("member index out of range");
    std::vector<ProductOperator> rest;
    for (std::size_t j = 0; j < members_.size(); ++j) {
        if (j != i) rest.push_back(members_[j]);
    }
    return OperatorSet(shape_, std::move(rest));
}

OperatorSet OperatorSet::without(const std::string& label) const {
    for (std::size_t j = 0; j < members_.size(); ++j) {
        if (members_[j].label() == label) return without(j);
    }
    throw IndexError("no member labelled '" + label + "'");
}

double ProductVector::norm() const {
    double n = 1.0;
    for (const auto& f : factors) {
        double s = 0.0;
        for (const auto& z : f) s += std::norm(z);
        n *= std::sqrt(s);
    }
    return n;
}

std::vector<Complex> ProductVector::full() const {
    std::vector<Complex> acc{1.0};
    for (const auto& f : factors) {
        std::vector<Complex> next;
        next.reserve(acc.size() * f.size());
        for (const auto& a : acc) {
            for (const auto& b : f) next.push_back(a * b);
        }
        acc = std::move(next);
    }
    return acc;
}

Complex inner(const ProductVector& a, const ProductVector& b) {
    if (a.factors.size() != b.factors.size()) throw ShapeError("inner: party counts differ");
    Complex s = 1.0;
    for (std::size_t i = 0; i < a.factors.size(); ++i) {
        if (a.factors[i].size() != b.factors[i].size()) {
            throw ShapeError("inner: local dimensions differ");
        }
        Complex t = 0.0;
        for (std::size_t k = 0; k < a.factors[i].size(); ++k) {
            t += std::conj(a.factors[i][k]) * b.factors[i][k];
        }
        s *= t;
    }
    return s;
}

IndexSet::IndexSet(std::size_t rows, std::size_t cols,
                   std::vector<std::pair<std::size_t, std::size_t>> positions)
    : rows_(rows), cols_(cols), positions_(std::move(positions)) {
    const std::size_t d = positions_.size();
    if (d < std::max(rows, cols) || d > rows * cols) {
        throw IndexError("index set length " + std::to_string(d) +
                         " violates max(m,n) <= d <= m*n for " + std::to_string(rows) + "x" +
                         std::to_string(cols));
    }
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& p : positions_) {
        if (p.first >= rows || p.second >= cols) throw IndexError("index position out of range");
        if (!seen.insert(p).second) throw IndexError("repeated index position");
    }
}

IndexSet IndexSet::row_major(std::size_t rows, std::size_t cols, std::size_t d) {
    std::vector<std::pair<std::size_t, std::size_t>> pos;
    for (std::size_t t = 0; t < d && t < rows * cols; ++t) pos.emplace_back(t / cols, t % cols);
    return IndexSet(rows, cols, std::move(pos));
}

ComplexMatrix gram(const OperatorSet& set) {
    const std::size_t n = set.size();
    if (n == 0) throw EmptyInputError("gram of an empty set");
    std::vector<Complex> g(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j; k < n; ++k) {
            const Complex v = hs_inner(set[j], set[k]);
            g[j * n + k] = v;
            g[k * n + j] = std::conj(v);
        }
        g[j * n + j] = g[j * n + j].real();
    }
    return ComplexMatrix(n, n, std::move(g));
}

ComplexMatrix normalized_gram(const OperatorSet& set) {
    const ComplexMatrix g = gram(set);
    const std::size_t n = set.size();
    std::vector<double> norms(n);
    for (std::size_t j = 0; j < n; ++j) norms[j] = std::sqrt(g(j, j).real());
    std::vector<Complex> out(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) out[j * n + k] = g(j, k) / (norms[j] * norms[k]);
    }
    return ComplexMatrix(n, n, std::move(out));
}

bool check_orthonormal(const OperatorSet& set, Tolerance tol) {
    if (!set.shape().all_square()) throw ShapeError("check_orthonormal requires square parties");
    const double d = static_cast<double>(set.shape().total_rows());
    const ComplexMatrix g = Complex(d) * normalized_gram(set);
    return max_abs_diff(g, Complex(d) * ComplexMatrix::identity(set.size())) <= tol.eps();
}

bool is_orthonormal(const OperatorSet& set, Tolerance tol) {
    return max_abs_diff(normalized_gram(set), ComplexMatrix::identity(set.size())) <= tol.eps();
}

bool k_orthonormal(const ProductOperator& u, const ProductOperator& v, std::size_t k,
                   Tolerance tol) {
    if (k >= u.parties() || k >= v.parties()) throw IndexError("party index out of range");
    if (!(u.shape() == v.shape())) throw ShapeError("k_orthonormal: shapes differ");
    if (!u.factor(k).is_square()) throw ShapeError("k_orthonormal: party is not square");
    return std::abs(hs_inner(u.factor(k).normalized(), v.factor(k).normalized())) <= tol.eps();
}

ComplexMatrix vector_to_matrix(std::span<const Complex> v, const IndexSet& idx) {
    if (v.size() != idx.size()) {
        throw IndexError("vector length " + std::to_string(v.size()) + " != index set length " +
                         std::to_string(idx.size()));
    }
    std::vector<Complex> entries(idx.rows() * idx.cols());
    const auto pos = idx.positions();
    for (std::size_t t = 0; t < v.size(); ++t) {
        entries[pos[t].first * idx.cols() + pos[t].second] = v[t];
    }
    return ComplexMatrix(idx.rows(), idx.cols(), std::move(entries));
}

std::vector<Complex> matrix_to_vector(const ComplexMatrix& m, const IndexSet& idx) {
    if (m.rows() != idx.rows() || m.cols() != idx.cols()) {
        throw IndexError("matrix shape differs from index set target shape");
    }
    std::vector<Complex> v;
    v.reserve(idx.size());
    for (const auto& [r, c] : idx.positions()) v.push_back(m(r, c));
    return v;
}

OperatorSet upb_to_upob(std::span<const ProductVector> upb,
                        std::span<const IndexSet> idx_per_party) {
    std::vector<LocalShape> shape;
    for (const auto& idx : idx_per_party) shape.push_back({idx.rows(), idx.cols()});
    std::vector<ProductOperator> members;
    members.reserve(upb.size());
    for (std::size_t j = 0; j < upb.size(); ++j) {
        const auto& pv = upb[j];
        if (pv.factors.size() != idx_per_party.size()) {
            throw ShapeError("product vector party count differs from index sets");
        }
        std::vector<ComplexMatrix> factors;
        for (std::size_t i = 0; i < pv.factors.size(); ++i) {
            if (pv.factors[i].size() != idx_per_party[i].size()) {
                throw ShapeError("party " + std::to_string(i) + " vector dimension " +
                                 std::to_string(pv.factors[i].size()) +
                                 " does not match its index set");
            }
            factors.push_back(vector_to_matrix(pv.factors[i], idx_per_party[i]));
        }
        std::string label = pv.label.empty() ? "M_" + std::to_string(j + 1) : pv.label;
        members.emplace_back(std::move(factors), std::move(label));
    }
    return OperatorSet(PartyShape(std::move(shape)), std::move(members));
}

std::vector<ProductVector> vectorize_set(const OperatorSet& set) {
    std::vector<ProductVector> out;
    out.reserve(set.size());
    for (const auto& m : set.members()) {
        ProductVector pv;
        pv.label = m.label();
        for (const auto& f : m.factors()) pv.factors.emplace_back(f.entries().begin(), f.entries().end());
        out.push_back(std::move(pv));
    }
    return out;
}

OperatorSet as_column_set(std::span<const ProductVector> vectors) {
    if (vectors.empty()) throw EmptyInputError("as_column_set of an empty list");
    std::vector<LocalShape> shape;
    for (const auto& f : vectors[0].factors) shape.push_back({f.size(), 1});
    std::vector<ProductOperator> members;
    members.reserve(vectors.size());
    for (std::size_t j = 0; j < vectors.size(); ++j) {
        std::vector<ComplexMatrix> factors;
        for (const auto& f : vectors[j].factors) factors.push_back(ComplexMatrix::column(f));
        std::string label =
            vectors[j].label.empty() ? "v_" + std::to_string(j + 1) : vectors[j].label;
        members.emplace_back(std::move(factors), std::move(label));
    }
    return OperatorSet(PartyShape(std::move(shape)), std::move(members));
}

OperatorSet apply_local_unitaries(const OperatorSet& set, std::span<const ComplexMatrix> left,
                                  std::span<const ComplexMatrix> right) {
    const std::size_t n = set.shape().size();
    if (left.size() != n || right.size() != n) {
        throw ShapeError("apply_local_unitaries needs one left and one right factor per party");
    }
    std::vector<ProductOperator> members;
    members.reserve(set.size());
    for (const auto& m : set.members()) {
        std::vector<ComplexMatrix> factors;
        for (std::size_t i = 0; i < n; ++i) factors.push_back(left[i] * m.factor(i) * right[i]);
        members.emplace_back(std::move(factors), m.label());
    }
    std::vector<LocalShape> shape;
    for (std::size_t i = 0; i < n; ++i) shape.push_back({left[i].rows(), right[i].cols()});
    return OperatorSet(PartyShape(std::move(shape)), std::move(members));
}

OperatorSet permute_parties(const OperatorSet& set, std::span<const std::size_t> perm) {
    const std::size_t n = set.shape().size();
    std::vector<std::size_t> sorted(perm.begin(), perm.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted.size() != n || sorted[i] != i) throw ConfigError("not a permutation of the parties");
    }
    std::vector<LocalShape> shape;
    for (std::size_t p = 0; p < n; ++p) shape.push_back(set.shape()[perm[p]]);
    std::vector<ProductOperator> members;
    members.reserve(set.size());
    for (const auto& m : set.members()) {
        std::vector<ComplexMatrix> factors;
        for (std::size_t p = 0; p < n; ++p) factors.push_back(m.factor(perm[p]));
        members.emplace_back(std::move(factors), m.label());
    }
    return OperatorSet(PartyShape(std::move(shape)), std::move(members));
}

}  // namespace upoblab
