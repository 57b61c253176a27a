#include <cmath>

#include <gtest/gtest.h>

#include "test_util.h"
#include "upoblab/catalog.h"
#include "upoblab/errors.h"
#include "upoblab/locc.h"

namespace upoblab {
namespace {

using testing::Rng;

TEST(StateVector, Validation) {
    EXPECT_THROW(StateVector({2, 2}, {1, 0, 0}), ShapeError);
    EXPECT_THROW(StateVector({2}, {1, 1}), ValueError);
    EXPECT_NO_THROW(StateVector({2}, {1, 0}));
    EXPECT_THROW(StateVector::normalize({2}, {0, 0}), ValueError);
    const auto s = StateVector::normalize({2}, {3, 4});
    EXPECT_NEAR(std::abs(s[1] - Complex(0.8)), 0.0, 1e-15);
}

TEST(StateVector, ProductAndReduced) {
    const std::vector<std::vector<Complex>> f{{1, 0}, {0, 1, 0}};
    const auto s = StateVector::product(f);
    EXPECT_EQ(s.dim(), 6u);
    EXPECT_EQ(s[1], Complex(1));
    const std::vector<std::size_t> keep{1};
    const auto rho = s.reduced(keep);
    EXPECT_LT(max_abs_diff(rho, ComplexMatrix::unit(3, 3, 1, 1)), 1e-15);
}

TEST(StateVector, ApplyLocal) {
    const auto s = mes(2);
    const auto t = s.apply_local(0, pauli::X());
    EXPECT_NEAR(std::abs(t[1] - Complex(1.0 / std::sqrt(2.0))), 0.0, 1e-15);
    EXPECT_THROW(s.apply_local(0, Complex(2.0) * pauli::X()), ValueError);
    EXPECT_THROW(s.apply_local(0, ComplexMatrix::identity(3)), ShapeError);
}

TEST(Mes, ReducedIsMaximallyMixed) {
    EXPECT_THROW(mes(1), ConfigError);
    const auto m = mes(3);
    const std::vector<std::size_t> keep{0};
    EXPECT_LT(max_abs_diff(m.reduced(keep), Complex(1.0 / 3.0) * ComplexMatrix::identity(3)), 1e-15);
}

TEST(AStates, OrthonormalAndLayout) {
    const auto a = build_a_states(u2_strong_upuob(), 2);
    ASSERT_EQ(a.size(), 12u);
    EXPECT_EQ(std::vector<std::size_t>(a[0].dims().begin(), a[0].dims().end()),
              (std::vector<std::size_t>{2, 2, 2, 2}));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            EXPECT_NEAR(std::abs(inner(a[i], a[j])), i == j ? 1.0 : 0.0, 1e-12);
        }
    }
    EXPECT_THROW(build_a_states(u2_strong_upuob(), 3), ShapeError);
    const OperatorSet fat(PartyShape::uniform(2, 2), {ProductOperator({Complex(2.0) * pauli::X(), pauli::I()}, "f")});
    EXPECT_THROW(build_a_states(fat, 2), ValueError);
}

TEST(AStates, InnerProductsEqualScaledHs) {
    Rng rng(17);
    for (int t = 0; t < 20; ++t) {
        const OperatorSet s(PartyShape::uniform(2, 2),
                            {ProductOperator({rng.haar_unitary(2), rng.haar_unitary(2)}, "a"),
                             ProductOperator({rng.haar_unitary(2), rng.haar_unitary(2)}, "b")});
        const auto a = build_a_states(s, 2);
        EXPECT_NEAR(std::abs(inner(a[0], a[1]) - hs_inner(s[0], s[1]) / 4.0), 0.0, 1e-12);
    }
}

TEST(Regroup, ToBipartite) {
    const auto a = build_a_states(u2_strong_upuob(), 2);
    const auto b = regroup_bipartite(a);
    ASSERT_EQ(b.size(), 12u);
    EXPECT_EQ(b[0].dims().size(), 2u);
    for (std::size_t k = 0; k < 16; ++k) EXPECT_EQ(b[3][k], a[3][k]);
    const std::vector<StateVector> bad{mes(2)};
    EXPECT_THROW(regroup_bipartite(bad), ShapeError);
}

TEST(AsProduct, DetectsSchmidtRank) {
    EXPECT_FALSE(as_product(mes(2)).has_value());
    const std::vector<std::vector<Complex>> f{{0.6, Complex(0, 0.8)}, {1, 0, 0}};
    const auto s = StateVector::product(f);
    const auto p = as_product(s);
    ASSERT_TRUE(p.has_value());
    const std::vector<Complex> amps(s.amplitudes().begin(), s.amplitudes().end());
    EXPECT_TRUE(testing::equal_up_to_phase(p->full(), amps, 1e-12));
}

TEST(Regroup, ProductAcrossTheMiddleCut) {
    const auto b = regroup_bipartite(build_a_states(u2_strong_upuob(), 2));
    for (const auto& s : b) EXPECT_TRUE(as_product(s).has_value());
}

TEST(QutritEmbed, IsometryAndSupport) {
    const auto b = regroup_bipartite(build_a_states(u2_strong_upuob(), 2));
    const std::vector<StateVector> first(b.begin(), b.begin() + 5);
    const auto c = qutrit_embed(first);
    ASSERT_EQ(c.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(c[i].dim(), 9u);
        for (std::size_t j = 0; j < 5; ++j) {
            EXPECT_NEAR(std::abs(inner(c[i], c[j]) - inner(first[i], first[j])), 0.0, 1e-12);
        }
    }
    const std::vector<StateVector> outside{b[5]};
    EXPECT_THROW(qutrit_embed(outside), EmbeddingError);
}

TEST(TripleIndependence, Checks) {
    const std::vector<std::vector<Complex>> good{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}, {1, 2, 3}};
    EXPECT_TRUE(triple_independence_check(good));
    const std::vector<std::vector<Complex>> bad{{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, 1, 1}, {1, 2, 3}};
    EXPECT_FALSE(triple_independence_check(bad));
    const std::vector<std::vector<Complex>> four(good.begin(), good.begin() + 4);
    EXPECT_THROW(triple_independence_check(four), ConfigError);
}

TEST(Measurement, EffectValidation) {
    EXPECT_THROW(MeasurementOperator(Complex(2.0) * pauli::I(), 0, "big"), InvalidEffectError);
    EXPECT_THROW(MeasurementOperator(ComplexMatrix::unit(2, 2, 0, 1), 0, "nh"), InvalidEffectError);
    EXPECT_THROW(MeasurementOperator(pauli::Z(), 0, "neg"), InvalidEffectError);
    const MeasurementOperator e(ComplexMatrix::unit(2, 2, 0, 0), 1, "p0");
    const auto c = e.complement("p1");
    EXPECT_EQ(c.matrix(), ComplexMatrix::unit(2, 2, 1, 1));
    EXPECT_EQ(c.subsystem(), 1u);
}

TEST(Measurement, BranchProbabilities) {
    const auto s = mes(2);
    const MeasurementOperator e(ComplexMatrix::unit(2, 2, 0, 0), 0, "p0");
    const auto out = measurement_branch(s, e);
    EXPECT_NEAR(out.probability, 0.5, 1e-15);
    ASSERT_TRUE(out.post_state.has_value());
    EXPECT_NEAR(std::abs((*out.post_state)[0]), 1.0, 1e-15);
    const std::vector<std::vector<Complex>> f{{0, 1}, {1, 0}};
    const auto zero = measurement_branch(StateVector::product(f), e);
    EXPECT_NEAR(zero.probability, 0.0, 1e-15);
    EXPECT_FALSE(zero.post_state.has_value());
    const MeasurementOperator wide(ComplexMatrix::unit(3, 3, 0, 0), 0, "w");
    EXPECT_THROW(measurement_branch(s, wide), ShapeError);
}

TEST(Protocol, ThreeEbits) {
    const auto t = run_three_ebit_protocol();
    EXPECT_TRUE(t.all_passed());
    EXPECT_EQ(t.ebits_consumed, 3);
    ASSERT_EQ(t.ledger.size(), 3u);
    int total = 0;
    for (const auto& l : t.ledger) total += l.ebits;
    EXPECT_EQ(total, 3);
    EXPECT_EQ(t.branch("M1").survivors, (std::vector<std::size_t>{6, 7, 8, 9}));
    EXPECT_EQ(t.branch("M1bar/M2").survivors, (std::vector<std::size_t>{10, 11, 12}));
    EXPECT_EQ(t.branch("M1bar/M2bar").survivors, (std::vector<std::size_t>{1, 2, 3, 4, 5}));
    EXPECT_EQ(t.branch("M1bar/M2bar").disposition, "reduced-to-qutrit-UPB-blackbox");
    EXPECT_THROW(t.branch("nope"), IndexError);
    for (const auto& step : t.steps) {
        for (const auto& [k, p] : step.probability) {
            EXPECT_TRUE(std::abs(p) < 1e-9 || std::abs(p - 1.0) < 1e-9) << step.effect << " " << k;
        }
    }
}

TEST(CountingBound, Values) {
    EXPECT_TRUE(mes_counting_bound(12, 2, 8));
    EXPECT_FALSE(mes_counting_bound(8, 2, 8));
    EXPECT_THROW(mes_counting_bound(3, 0, 2), ConfigError);
    EXPECT_THROW(mes_counting_bound(3, 4, 2), ConfigError);
}

TEST(Nonlocality, U2Evidence) {
    const auto e = genuine_nonlocality_evidence();
    EXPECT_TRUE(e.all_passed());
    EXPECT_EQ(e.cuts.size(), 7u);
    EXPECT_EQ(e.embedded_members, (std::vector<std::size_t>{1, 2, 3, 4, 5}));
    ASSERT_TRUE(e.upb_verdict.has_value());
    EXPECT_EQ(e.upb_verdict->status, ExtendibilityStatus::Unextendible);
    EXPECT_THROW(genuine_nonlocality_evidence(qutrit_uuo_set()), ShapeError);
}

}  // namespace
}  // namespace upoblab
