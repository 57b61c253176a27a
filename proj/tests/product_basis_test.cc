#include <cmath>

#include <gtest/gtest.h>

#include "test_util.h"
#include "upoblab/catalog.h"
#include "upoblab/errors.h"
#include "upoblab/locc.h"
#include "upoblab/product_basis.h"
#include "upoblab/unextendibility.h"

namespace upoblab {
namespace {

using testing::Rng;

ComplexMatrix m2(Complex a, Complex b, Complex c, Complex d) {
    return ComplexMatrix::from_rows({{a, b}, {c, d}});
}

TEST(PartyShape, Basics) {
    const PartyShape s({{2, 2}, {3, 1}});
    EXPECT_EQ(s.size(), 2u);
    EXPECT_FALSE(s.all_square());
    EXPECT_EQ(s.total_rows(), 6u);
    EXPECT_EQ(s.total_cols(), 2u);
    EXPECT_TRUE(PartyShape::uniform(3, 2).all_square());
    EXPECT_EQ(s[1].dim(), 3u);
}

TEST(ProductOperator, Validation) {
    EXPECT_THROW(ProductOperator({}), EmptyInputError);
    EXPECT_THROW(ProductOperator({pauli::X(), ComplexMatrix(2, 2)}), ValueError);
    const ProductOperator p({pauli::X(), pauli::Z()}, "xz");
    EXPECT_EQ(p.label(), "xz");
    EXPECT_NEAR(p.norm(), 2.0, 1e-15);
    EXPECT_TRUE(p.is_unitary());
    EXPECT_TRUE(ProductOperator({Complex(2.0) * pauli::X(), Complex(0.5) * pauli::Z()}).is_unitary());
    EXPECT_FALSE(ProductOperator({Complex(2.0) * pauli::X(), pauli::Z()}).is_unitary());
}

TEST(OperatorSet, Validation) {
    const ProductOperator a({pauli::X(), pauli::Z()}, "a");
    const ProductOperator b({pauli::X()}, "b");
    EXPECT_THROW(OperatorSet(PartyShape::uniform(2, 2), {a, b}), ShapeError);
    EXPECT_THROW(OperatorSet(PartyShape::uniform(2, 2), {a, a}), ConfigError);
    const OperatorSet s(PartyShape::uniform(2, 2), {a, a.with_label("c")});
    EXPECT_EQ(s.without("a").size(), 1u);
    EXPECT_EQ(s.without(std::size_t{1})[0].label(), "a");
    EXPECT_THROW(s.without("zzz"), IndexError);
    EXPECT_THROW(s.without(std::size_t{5}), IndexError);
}

TEST(HsInner, FactorizedMatchesFull) {
    Rng rng(21);
    for (int t = 0; t < 30; ++t) {
        const ProductOperator a({rng.gaussian(2, 3), rng.gaussian(2, 2)});
        const ProductOperator b({rng.gaussian(2, 3), rng.gaussian(2, 2)});
        const Complex full = (testing::oracle_full(a).adjoint() * testing::oracle_full(b)).trace();
        EXPECT_NEAR(std::abs(hs_inner(a, b) - full), 0.0, 1e-10);
    }
}

TEST(Gram, U2IsFourIdentity) {
    const auto g = gram(u2_strong_upuob());
    const auto expected = Complex(4.0) * ComplexMatrix::identity(12);
    EXPECT_LT(max_abs_diff(g, expected), 1e-12);
    EXPECT_LT(max_abs_diff(g, testing::from_em(testing::oracle_gram(u2_strong_upuob()))), 1e-12);
}

TEST(Orthonormality, CheckRequiresSquareParties) {
    const auto cols = example1_upb();
    const OperatorSet s = as_column_set(cols);
    EXPECT_THROW(check_orthonormal(s), ShapeError);
    EXPECT_TRUE(is_orthonormal(s));
    EXPECT_TRUE(check_orthonormal(u2_strong_upuob()));
    const OperatorSet bad(PartyShape::uniform(1, 2),
                          {ProductOperator({pauli::X()}, "x"), ProductOperator({pauli::X() + pauli::Z()}, "y")});
    EXPECT_FALSE(check_orthonormal(bad));
}

TEST(KOrthonormal, U2Pairs) {
    const auto s = u2_strong_upuob();
    EXPECT_FALSE(k_orthonormal(s[0], s[1], 0));
    EXPECT_TRUE(k_orthonormal(s[0], s[1], 1));
    EXPECT_TRUE(k_orthonormal(s[5], s[6], 1));
    EXPECT_THROW(k_orthonormal(s[0], s[1], 2), IndexError);
    const ProductOperator odd({pauli::X(), pauli::X(), pauli::X()});
    EXPECT_THROW(k_orthonormal(s[0], odd, 0), ShapeError);
}

TEST(IndexSet, Bounds) {
    EXPECT_NO_THROW(IndexSet::row_major(2, 2));
    EXPECT_THROW(IndexSet::row_major(2, 3, 2), IndexError);
    EXPECT_THROW(IndexSet(2, 2, {{0, 0}, {0, 0}}), IndexError);
    EXPECT_THROW(IndexSet(2, 2, {{0, 0}, {2, 0}}), IndexError);
    EXPECT_NO_THROW(IndexSet(3, 3, {{0, 0}, {1, 1}, {2, 2}}));
}

TEST(Bijection, RoundTrip) {
    const IndexSet idx(2, 3, {{0, 2}, {1, 0}, {1, 1}});
    const std::vector<Complex> v{1, Complex(0, 2), -3};
    const auto m = vector_to_matrix(v, idx);
    EXPECT_EQ(m(0, 2), Complex(1));
    EXPECT_EQ(m(1, 0), Complex(0, 2));
    EXPECT_EQ(m(0, 0), Complex(0));
    EXPECT_EQ(matrix_to_vector(m, idx), v);
    const std::vector<Complex> wrong{1, 2};
    EXPECT_THROW(vector_to_matrix(wrong, idx), IndexError);
}

TEST(Example1, OperatorsMatchReferenceMatrices) {
    const Complex w = root_of_unity(3, 1);
    const Complex w2 = root_of_unity(3, 2);
    const double r2 = 1.0 / std::sqrt(2.0);
    const double r3 = 1.0 / std::sqrt(3.0);
    const std::vector<std::pair<double, std::pair<ComplexMatrix, ComplexMatrix>>> reference = {
        {r2, {m2(1, 0, 0, 0), m2(1, -1, 0, 0)}},
        {r2, {m2(1, 0, 0, -1), m2(0, 0, 1, 0)}},
        {r3, {m2(1, w, w2, 0), m2(0, 0, 0, 1)}},
        {r3, {m2(1, w2, w, 0), m2(0, 0, 0, 1)}},  // derived from psi_4
        {r3, {m2(0, 1, w, w2), m2(0, 1, 0, 0)}},
        {r3, {m2(0, 1, w2, w), m2(0, 1, 0, 0)}},
        {r2, {m2(0, 0, 0, 1), m2(1, 0, 0, -1)}},
        {0.5, {m2(0, 1, 1, 0), m2(1, 0, -1, 0)}},
        {0.5, {m2(0, 1, -1, 0), m2(1, 0, 1, 0)}},
        {0.5, {m2(0, 1, -1, 0), m2(1, 0, -1, 0)}},
        {0.25, {m2(1, 1, 1, 1), m2(1, 1, 1, 1)}},
    };
    const OperatorSet s = example1_upob();
    ASSERT_EQ(s.size(), 11u);
    for (std::size_t j = 0; j < reference.size(); ++j) {
        const auto& [scale, f] = reference[j];
        const ComplexMatrix expected = Complex(scale) * kron(f.first, f.second);
        EXPECT_LT(max_abs_diff(s[j].full(), expected), 1e-12) << s[j].label();
    }
    EXPECT_TRUE(is_orthonormal(s));
}

TEST(UpbToUpob, ShapeMismatch) {
    const auto upb = example1_upb();
    const std::vector<IndexSet> mixed_shapes{IndexSet::row_major(2, 2), IndexSet::row_major(3, 3, 4)};
    EXPECT_NO_THROW(upb_to_upob(upb, mixed_shapes));
    const std::vector<IndexSet> short_idx{IndexSet::row_major(2, 2)};
    EXPECT_THROW(upb_to_upob(upb, short_idx), ShapeError);
    const std::vector<IndexSet> bad_dim{IndexSet::row_major(2, 2), IndexSet::row_major(3, 3)};
    EXPECT_THROW(upb_to_upob(upb, bad_dim), ShapeError);
}

std::vector<ProductVector> qutrit_upb() {
    const auto b = regroup_bipartite(build_a_states(u2_strong_upuob(), 2));
    const std::vector<StateVector> first(b.begin(), b.begin() + 5);
    std::vector<ProductVector> out;
    for (const auto& c : qutrit_embed(first)) out.push_back(*as_product(c));
    return out;
}

TEST(UpbToUpob, QutritUpbUnderDifferentShapes) {
    const auto c = qutrit_upb();
    const IndexSet row(1, 3, {{0, 0}, {0, 1}, {0, 2}});
    const IndexSet col(3, 1, {{0, 0}, {1, 0}, {2, 0}});
    const IndexSet diag(3, 3, {{0, 0}, {1, 1}, {2, 2}});

    const std::vector<IndexSet> rows{row, row};
    const std::vector<IndexSet> mixed{row, col};
    const std::vector<IndexSet> square{diag, diag};
    EXPECT_EQ(extendibility_search(upb_to_upob(c, rows)).status, ExtendibilityStatus::Unextendible);
    EXPECT_EQ(extendibility_search(upb_to_upob(c, mixed)).status, ExtendibilityStatus::Unextendible);
    // Three positions inside M_{3,3} leave six free operator directions per party.
    const auto v = extendibility_search(upb_to_upob(c, square));
    EXPECT_EQ(v.status, ExtendibilityStatus::Extendible);
    EXPECT_TRUE(is_orthonormal(upb_to_upob(c, square)));
}

TEST(Vectorize, RoundTripThroughColumns) {
    const OperatorSet s = u2_strong_upuob();
    const auto vs = vectorize_set(s);
    ASSERT_EQ(vs.size(), 12u);
    EXPECT_EQ(vs[0].factors[0].size(), 4u);
    EXPECT_EQ(vs[0].label, "U_1");
    const OperatorSet cols = as_column_set(vs);
    EXPECT_EQ(cols.shape(), PartyShape({{4, 1}, {4, 1}}));
    EXPECT_LT(max_abs_diff(gram(cols), gram(s)), 1e-12);
}

TEST(LocalUnitaries, PreserveGram) {
    Rng rng(31);
    const OperatorSet s = u2_strong_upuob();
    const std::vector<ComplexMatrix> left{rng.haar_unitary(2), rng.haar_unitary(2)};
    const std::vector<ComplexMatrix> right{rng.haar_unitary(2), rng.haar_unitary(2)};
    const OperatorSet t = apply_local_unitaries(s, left, right);
    EXPECT_LT(max_abs_diff(gram(t), gram(s)), 1e-12);
    const std::vector<ComplexMatrix> one{rng.haar_unitary(2)};
    EXPECT_THROW(apply_local_unitaries(s, one, right), ShapeError);
}

TEST(PermuteParties, SwapsFactors) {
    const OperatorSet s = u2_strong_upuob();
    const std::vector<std::size_t> swap{1, 0};
    const OperatorSet t = permute_parties(s, swap);
    EXPECT_EQ(t[0].factor(0), s[0].factor(1));
    const std::vector<std::size_t> bad{0, 0};
    EXPECT_THROW(permute_parties(s, bad), ConfigError);
}

}  // namespace
}  // namespace upoblab
