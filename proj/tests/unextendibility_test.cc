#include <gtest/gtest.h>

#include "test_util.h"
#include "upoblab/catalog.h"
#include "upoblab/errors.h"
#include "upoblab/unextendibility.h"

namespace upoblab {
namespace {

using testing::Rng;

TEST(ExtendibilitySearch, U2IsUnextendible) {
    const auto v = extendibility_search(u2_strong_upuob());
    EXPECT_EQ(v.status, ExtendibilityStatus::Unextendible);
    EXPECT_FALSE(v.witness.has_value());
    EXPECT_GT(v.nodes_explored, 0u);
    EXPECT_LE(v.nodes_explored, 8192u);
    EXPECT_EQ(v.budget, SearchOptions::kDefaultBudget);
}

TEST(ExtendibilitySearch, RemovingAMemberGivesAVerifiedWitness) {
    const OperatorSet full = u2_strong_upuob();
    for (std::size_t i = 0; i < full.size(); ++i) {
        const OperatorSet s = full.without(i);
        const auto v = extendibility_search(s);
        ASSERT_EQ(v.status, ExtendibilityStatus::Extendible) << i;
        ASSERT_TRUE(v.witness && v.partition);
        EXPECT_TRUE(verify_witness(*v.witness, s));
        EXPECT_FALSE(verify_witness(*v.witness, full));
        EXPECT_EQ(v.witness->label(), "witness");
    }
}

TEST(ExtendibilitySearch, Errors) {
    SearchOptions o;
    o.budget = 0;
    EXPECT_THROW(extendibility_search(u2_strong_upuob(), o), ConfigError);
    const std::vector<ProductVector> none;
    EXPECT_THROW(extendibility_search(none), EmptyInputError);
}

TEST(ExtendibilitySearch, BudgetGivesUnknown) {
    SearchOptions o;
    o.budget = 100;
    const auto v = extendibility_search(nqubit_strong_upuob(3), o);
    EXPECT_EQ(v.status, ExtendibilityStatus::Unknown);
    EXPECT_EQ(v.nodes_explored, 100u);
    EXPECT_EQ(v.budget, 100u);
}

TEST(ExtendibilitySearch, JobsDoNotChangeTheResult) {
    const std::vector<OperatorSet> sets{nqubit_strong_upuob(3), example_upuob_2x3(),
                                        u2_strong_upuob().without(std::size_t{3})};
    for (const auto& s : sets) {
        SearchOptions one;
        const auto base = extendibility_search(s, one);
        for (unsigned jobs : {2u, 4u}) {
            SearchOptions o;
            o.jobs = jobs;
            const auto v = extendibility_search(s, o);
            EXPECT_EQ(v.status, base.status);
            EXPECT_EQ(v.nodes_explored, base.nodes_explored);
            ASSERT_EQ(v.partition.has_value(), base.partition.has_value());
            if (v.partition) EXPECT_EQ(v.partition->party_of_member, base.partition->party_of_member);
        }
    }
}

TEST(ExtendibilitySearch, VectorOverloadAgreesWithColumns) {
    const auto upb = example1_upb();
    const auto v = extendibility_search(upb);
    const auto w = extendibility_search(as_column_set(upb));
    EXPECT_EQ(v.status, ExtendibilityStatus::Unextendible);
    EXPECT_EQ(w.status, v.status);
    std::vector<ProductVector> fewer(upb.begin(), upb.end() - 1);
    EXPECT_EQ(extendibility_search(fewer).status, ExtendibilityStatus::Extendible);
}

TEST(ExtendibilitySearch, ThreeByThreeSetPartition) {
    const OperatorSet s = example_upuob_2x3();
    const auto v = extendibility_search(s);
    ASSERT_EQ(v.status, ExtendibilityStatus::Extendible);
    const auto& parts = v.partition->party_of_member;
    ASSERT_EQ(parts.size(), s.size());
    for (std::size_t p = 0; p < 2; ++p) {
        std::vector<ComplexMatrix> sub;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (parts[j] == p) sub.push_back(s[j].factor(p));
        }
        EXPECT_LT(testing::oracle_rank(sub), s.shape()[p].dim()) << p;
    }
    // The 18 xi members only fit on the qubit side.
    for (std::size_t j = 0; j < 18; ++j) EXPECT_EQ(parts[j], 0u) << j;
}

TEST(ExtractWitness, Errors) {
    const OperatorSet s = u2_strong_upuob();
    PartitionAssignment all_first{std::vector<std::size_t>(s.size(), 0)};
    EXPECT_THROW(extract_witness(all_first, s), NoWitnessError);
    PartitionAssignment short_p{{0, 1}};
    EXPECT_THROW(extract_witness(short_p, s), ConfigError);
    PartitionAssignment bad_party{std::vector<std::size_t>(s.size(), 2)};
    EXPECT_THROW(extract_witness(bad_party, s), ConfigError);
}

TEST(ExtractWitness, TwoMemberSet) {
    const OperatorSet s(PartyShape::uniform(2, 2),
                        {ProductOperator({pauli::X(), pauli::I()}, "a"),
                         ProductOperator({pauli::I(), pauli::Z()}, "b")});
    const PartitionAssignment p{{0, 1}};
    const auto w = extract_witness(p, s);
    EXPECT_TRUE(verify_witness(w, s));
    EXPECT_NEAR(w.norm(), 1.0, 1e-12);
}

TEST(VerifyWitness, ShapeMismatch) {
    const ProductOperator w({pauli::X()});
    EXPECT_THROW(verify_witness(w, u2_strong_upuob()), ShapeError);
}

TEST(UnitarySearch, FindsAWitnessAfterRemoval) {
    const OperatorSet s = u2_strong_upuob().without("U_6");
    const auto w = unitary_witness_search(s);
    ASSERT_TRUE(w.has_value());
    EXPECT_TRUE(w->is_unitary());
    EXPECT_TRUE(verify_witness(*w, s));
    EXPECT_EQ(w->label(), "unitary-witness");
}

TEST(UnitarySearch, NoneForU2AndDeterministic) {
    EXPECT_FALSE(unitary_witness_search(u2_strong_upuob()).has_value());
    const OperatorSet s = u2_strong_upuob().without("U_9");
    const auto a = unitary_witness_search(s);
    const auto b = unitary_witness_search(s);
    ASSERT_TRUE(a && b);
    EXPECT_EQ(a->factor(0), b->factor(0));
    EXPECT_EQ(a->factor(1), b->factor(1));
}

TEST(UnitarySearch, ThreePartyRemoval) {
    const OperatorSet s = nqubit_strong_upuob(3).without(std::size_t{0});
    const auto w = unitary_witness_search(s);
    ASSERT_TRUE(w.has_value());
    EXPECT_TRUE(verify_witness(*w, s));
    EXPECT_TRUE(w->is_unitary());
}

TEST(UnitarySearch, NonSquarePartiesGiveNothing) {
    EXPECT_FALSE(unitary_witness_search(as_column_set(example1_upb())).has_value());
}

TEST(Classify, U2AllLabels) {
    const auto c = classify(u2_strong_upuob());
    EXPECT_TRUE(c.is_orthonormal);
    EXPECT_TRUE(c.is_all_unitary);
    EXPECT_TRUE(c.has(kLabelUpob));
    EXPECT_TRUE(c.has(kLabelStrongUpuob));
    EXPECT_TRUE(c.has(kLabelUpuobEvidence));
    EXPECT_FALSE(c.unitary_search_ran);
}

TEST(Classify, Example2OnlyEvidence) {
    const auto c = classify(example_upuob_2x3());
    EXPECT_EQ(c.upob.status, ExtendibilityStatus::Extendible);
    EXPECT_TRUE(c.unitary_search_ran);
    EXPECT_FALSE(c.unitary_witness.has_value());
    EXPECT_EQ(c.verdict_labels, std::set<std::string>{kLabelUpuobEvidence});
}

TEST(Classify, Example1UpobIsUpobOnly) {
    const auto c = classify(example1_upob());
    EXPECT_EQ(c.verdict_labels, std::set<std::string>{kLabelUpob});
    EXPECT_FALSE(c.is_all_unitary);
}

TEST(Classify, IncompleteSetHasNoLabels) {
    const auto c = classify(u2_strong_upuob().without("U_12"));
    EXPECT_EQ(c.upob.status, ExtendibilityStatus::Extendible);
    EXPECT_TRUE(c.unitary_search_ran);
    EXPECT_TRUE(c.unitary_witness.has_value());
    EXPECT_TRUE(c.verdict_labels.empty());
}

TEST(Classify, NonOrthonormalSkipsUnitarySearch) {
    const OperatorSet s(PartyShape::uniform(1, 2),
                        {ProductOperator({pauli::X()}, "x"), ProductOperator({pauli::X() + pauli::Z()}, "y")});
    const auto c = classify(s);
    EXPECT_FALSE(c.is_orthonormal);
    EXPECT_FALSE(c.unitary_search_ran);
    EXPECT_TRUE(c.verdict_labels.empty());
}

TEST(Classify, QutritProductWithItself) {
    // Every qutrit U_s is symmetric, so antisymmetric (x) anything is a witness.
    const OperatorSet q = qutrit_uuo_set();
    const OperatorSet t = tensor_combine(q, q, identity_regroup(1, 1));
    const auto c = classify(t);
    EXPECT_EQ(c.upob.status, ExtendibilityStatus::Extendible);
    EXPECT_TRUE(c.has(kLabelUpuobEvidence));
    EXPECT_FALSE(c.has(kLabelUpob));
}

TEST(Classify, LargeSetSkipsUnitarySearch) {
    const OperatorSet s(PartyShape({{8, 8}, {9, 9}}),
                        {ProductOperator({ComplexMatrix::identity(8), ComplexMatrix::identity(9)}, "id")});
    const auto c = classify(s);
    EXPECT_EQ(c.upob.status, ExtendibilityStatus::Extendible);
    EXPECT_TRUE(c.is_all_unitary);
    EXPECT_FALSE(c.unitary_search_ran);
    EXPECT_TRUE(c.verdict_labels.empty());
}

}  // namespace
}  // namespace upoblab
