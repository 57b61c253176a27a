#ifndef UPOBLAB_UNEXTENDIBILITY_H
#define UPOBLAB_UNEXTENDIBILITY_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "upoblab/product_basis.h"

namespace upoblab {

/// Which party's subset each member is assigned to (index = member index).
struct PartitionAssignment {
    std::vector<std::size_t> party_of_member;
};

enum class ExtendibilityStatus { Unextendible, Extendible, Unknown };

std::string to_string(ExtendibilityStatus s);

struct ExtendibilityVerdict {
    ExtendibilityStatus status = ExtendibilityStatus::Unknown;
    std::optional<ProductOperator> witness;
    std::optional<PartitionAssignment> partition;
    std::uint64_t nodes_explored = 0;
    std::uint64_t budget = 0;
};

struct SearchOptions {
    static constexpr std::uint64_t kDefaultBudget = 50'000'000;

    Tolerance tol{};
    /// Node cap; must be positive.
    std::uint64_t budget = kDefaultBudget;
    /// Worker threads for the top-level fan-out. The verdict, witness and
    /// node count do not depend on this value.
    unsigned jobs = 1;
};

/// Decides whether some product operator is orthogonal to every member.
///
/// The set is extendible exactly when its members can be split into one
/// subset per party such that no party's subset spans that party's whole
/// local operator space (rows_i * cols_i). Assignments are explored depth
/// first; a branch dies as soon as a party's span would become full. A
/// member whose factor already lies in some party's span is placed there
/// without branching, since that never removes a solution.
///
/// Throws ConfigError for a zero budget, EmptyInputError for an empty set.
ExtendibilityVerdict extendibility_search(const OperatorSet& set, const SearchOptions& opts = {});

/// The same search on product vectors: each local factor is treated as a
/// d_i x 1 column, so the bound becomes the vector dimension.
ExtendibilityVerdict extendibility_search(std::span<const ProductVector> vectors,
                                          const SearchOptions& opts = {});

/// W = (x)_i W_i with W_i the first canonical complement element of party
/// i's assigned span (unit norm). Throws NoWitnessError if some span is
/// full, ConfigError if the partition does not cover the set.
ProductOperator extract_witness(const PartitionAssignment& partition, const OperatorSet& set,
                                Tolerance tol = {});

/// |<w, s>| <= 10 * tol.eps for every member s, both scaled to unit
/// Frobenius norm. Throws ShapeError on a shape mismatch.
bool verify_witness(const ProductOperator& w, const OperatorSet& set, Tolerance tol = {});

struct UnitarySearchOptions {
    static constexpr std::uint64_t kDefaultSeed = 0x5EED;

    Tolerance tol{};
    int restarts = 64;
    int iters = 500;
    std::uint64_t seed = kDefaultSeed;
};

/// Sets whose full matrices exceed this size are not searched.
inline constexpr std::size_t kMaxUnitarySearchDim = 64;

/// Heuristic hunt for a product unitary in the complement of span(set).
///
/// Alternates between the complement, the nearest product operator, and
/// the nearest product unitary. Returns a witness only when it passes
/// verify_witness with unitary factors; std::nullopt means "none found",
/// which is not a proof of absence. Requires square parties (returns
/// std::nullopt otherwise).
std::optional<ProductOperator> unitary_witness_search(const OperatorSet& set,
                                                      const UnitarySearchOptions& opts = {});

inline constexpr const char* kLabelUpob = "UPOB";
inline constexpr const char* kLabelStrongUpuob = "strongly-UPUOB";
inline constexpr const char* kLabelUpuobEvidence = "UPUOB-evidence";

struct Classification {
    bool is_product_set = true;
    bool is_orthonormal = false;
    bool is_all_unitary = false;
    ExtendibilityVerdict upob;
    /// True when the unitary search was run. It is skipped for Unextendible
    /// sets (no product operator at all in the complement), for sets that are
    /// not orthonormal and unitary, and above kMaxUnitarySearchDim.
    bool unitary_search_ran = false;
    std::optional<ProductOperator> unitary_witness;
    std::set<std::string> verdict_labels;

    bool has(const char* label) const { return verdict_labels.count(label) > 0; }
};

struct ClassifyOptions {
    SearchOptions search{};
    UnitarySearchOptions unitary{};
};

/// Labels: UPOB iff orthonormal and Unextendible; strongly-UPUOB when in
/// addition every factor is unitary; UPUOB-evidence iff all-unitary,
/// orthonormal, and either Unextendible or the unitary search came up empty.
Classification classify(const OperatorSet& set, const ClassifyOptions& opts = {});

}  // namespace upoblab

#endif
