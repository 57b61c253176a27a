#ifndef UPOBLAB_LOCC_H
#define UPOBLAB_LOCC_H

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "upoblab/product_basis.h"
#include "upoblab/unextendibility.h"

namespace upoblab {

/// Normalized pure state on C^{d_0} (x) ... (x) C^{d_{k-1}}, amplitudes in
/// Kronecker (row-major) order of the subsystems.
class StateVector {
   public:
    /// Throws ShapeError when the amplitude count differs from the product
    /// of dims, ValueError when the norm differs from 1 by more than tol.
    StateVector(std::vector<std::size_t> dims, std::vector<Complex> amplitudes,
                Tolerance tol = {});
    /// Rescales to unit norm first; throws ValueError on the zero vector.
    static StateVector normalize(std::vector<std::size_t> dims, std::vector<Complex> amplitudes);
    /// |v_0> (x) |v_1> (x) ..., normalized.
    static StateVector product(std::span<const std::vector<Complex>> factors);

    std::span<const std::size_t> dims() const { return dims_; }
    std::size_t dim() const { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    Complex operator[](std::size_t i) const { return amplitudes_[i]; }

    /// (I (x) op (x) I)|this> with op acting on one subsystem. The result is
    /// not renormalized, so op must preserve the norm up to tol.
    StateVector apply_local(std::size_t subsystem, const ComplexMatrix& op,
                            Tolerance tol = {}) const;
    /// Reduced density matrix of the listed subsystems (in the listed order).
    ComplexMatrix reduced(std::span<const std::size_t> keep) const;

   private:
    std::vector<std::size_t> dims_;
    std::vector<Complex> amplitudes_;
};

Complex inner(const StateVector& a, const StateVector& b);

/// (1/sqrt d) sum_j |j, j>. Throws ConfigError for d < 2.
StateVector mes(std::size_t d);

/// |a'_k> = (U_k (x) I_B)(|psi_d>_{A1B1} (x) ... (x) |psi_d>_{AnBn}), one per
/// member, subsystems ordered A1 B1 A2 B2 ... Throws ShapeError unless every
/// party is d x d; ValueError when a member does not give a unit vector.
std::vector<StateVector> build_a_states(const OperatorSet& set, std::size_t d);

/// Four qubits A1 B1 A2 B2 to C^4 (x) C^4 via |p,q> -> |2p+q>, A = A1B1,
/// B = A2B2. Throws ShapeError for any other layout.
std::vector<StateVector> regroup_bipartite(std::span<const StateVector> states);

/// Factors of a two-subsystem state of Schmidt rank one, or nullopt.
std::optional<ProductVector> as_product(const StateVector& state, Tolerance tol = {});

/// Isometry from H3 = span{(|0> - |3>)/sqrt 2, |1>, |2>} in C^4 onto C^3,
/// applied on both sides of C^4 (x) C^4. Throws EmbeddingError when a state
/// has weight outside H3 (x) H3.
std::vector<StateVector> qutrit_embed(std::span<const StateVector> states, Tolerance tol = {});

/// True iff every three of the five vectors are linearly independent.
/// Throws ConfigError unless exactly five vectors are given.
bool triple_independence_check(std::span<const std::vector<Complex>> vectors, Tolerance tol = {});

/// Effect 0 <= E <= I acting on one subsystem.
class MeasurementOperator {
   public:
    /// Throws InvalidEffectError unless matrix is Hermitian with eigenvalues
    /// in [-eps, 1 + eps].
    MeasurementOperator(ComplexMatrix matrix, std::size_t subsystem, std::string label,
                        Tolerance tol = {});

    const ComplexMatrix& matrix() const { return matrix_; }
    std::size_t subsystem() const { return subsystem_; }
    const std::string& label() const { return label_; }
    /// I - E on the same subsystem.
    MeasurementOperator complement(std::string label) const;

   private:
    ComplexMatrix matrix_;
    std::size_t subsystem_;
    std::string label_;
};

struct BranchOutcome {
    double probability;
    /// sqrt(E)|state> renormalized; absent when probability <= eps.
    std::optional<StateVector> post_state;
};

/// Throws ShapeError when the effect does not fit its subsystem.
BranchOutcome measurement_branch(const StateVector& state, const MeasurementOperator& effect,
                                 Tolerance tol = {});

struct Check {
    std::string name;
    bool passed;
    std::string detail;
};

struct ProtocolStep {
    std::string party;
    std::string effect;
    /// 1-based hypothesis index -> probability of this effect.
    std::map<std::size_t, double> probability;
};

struct ProtocolBranch {
    std::string name;
    std::vector<std::size_t> survivors;
    /// "distinguished-locally" or "reduced-to-qutrit-UPB-blackbox"; empty
    /// for intermediate branches.
    std::string disposition;
};

struct LedgerEntry {
    std::string reason;
    int ebits;
};

struct ProtocolTrace {
    std::vector<ProtocolStep> steps;
    std::vector<ProtocolBranch> branches;
    std::vector<LedgerEntry> ledger;
    int ebits_consumed = 0;
    std::vector<Check> checks;

    bool all_passed() const;
    /// Survivors of the named branch; throws IndexError if absent.
    const ProtocolBranch& branch(const std::string& name) const;
};

/// Replays the three-ebit discrimination of the 12 two-qubit unitaries:
/// two teleportations, Alice's {M1, I - M1}, Bob's basis measurement, Bob's
/// {M2, I - M2}, Alice's basis measurement, and the reduction of the last
/// five hypotheses to a two-qutrit UPB (charged one ebit, not simulated).
ProtocolTrace run_three_ebit_protocol(Tolerance tol = {});

/// True iff n_states > d_prime, i.e. the MES counting bound rules out LOCC
/// discrimination. Throws ConfigError unless 1 <= d <= d_prime.
bool mes_counting_bound(std::size_t n_states, std::size_t d, std::size_t d_prime);

struct CutFact {
    /// Subsystem names on the first side, e.g. "A1B1".
    std::string side_a;
    std::string side_b;
    bool all_product = false;
    bool all_maximally_entangled = false;
    bool bound_violated = false;
};

struct NonlocalityEvidence {
    std::vector<CutFact> cuts;
    Check fact_a;
    Check fact_b;
    /// 1-based members whose regrouped states embed into H3 (x) H3.
    std::vector<std::size_t> embedded_members;
    std::optional<ExtendibilityVerdict> upb_verdict;

    bool all_passed() const { return fact_a.passed && fact_b.passed; }
};

/// Checks, for a two-party set of 2x2 factors applied to two-level MES
/// copies: (a) every cut except A1B1|A2B2 is an MES ensemble exceeding the
/// counting bound; (b) across A1B1|A2B2 every state is product and the
/// states supported on H3 (x) H3 embed into a certified two-qutrit UPB.
/// Throws ShapeError for any other party shape.
NonlocalityEvidence genuine_nonlocality_evidence(const OperatorSet& set, Tolerance tol = {});
NonlocalityEvidence genuine_nonlocality_evidence(Tolerance tol = {});

}  // namespace upoblab

#endif
