#ifndef UPOBLAB_CATALOG_H
#define UPOBLAB_CATALOG_H

#include <cstddef>
#include <vector>

#include "upoblab/product_basis.h"

namespace upoblab {

/// The 12 two-qubit product unitaries U_1..U_12 (labels "U_1".."U_12"),
/// scalars split so that every factor is itself unitary.
/// U_6..U_12 are I(x)I, I(x)sx, I(x)sy, I(x)sz, sx(x)I, sy(x)I, sz(x)I.
OperatorSet u2_strong_upuob();

/// sigma_{a_1} (x) ... (x) sigma_{a_{n-2}} (x) U_i over n qubit parties,
/// a_j in {I,X,Y,Z}, 3 * 4^(n-1) members. Prefix indices vary slowest.
/// Throws ConfigError for n < 2.
OperatorSet nqubit_strong_upuob(std::size_t n);

struct GoldenParams {
    double phi;
    double cos_theta;
    double sin_theta;

    /// phi = (1 + sqrt 5) / 2, cos theta = -7/8, sin theta = +sqrt 15 / 8.
    static GoldenParams standard();
    /// Throws ConfigError unless phi^2 = phi + 1, cos theta = -7/8 and
    /// cos^2 + sin^2 = 1 (within tol).
    void validate(Tolerance tol = {}) const;
};

/// The six states (|0> +- phi|1>), (|1> +- phi|2>), (|2> +- phi|0>), normalized.
std::vector<std::vector<Complex>> golden_states(const GoldenParams& g = GoldenParams::standard());

/// U_s = I - (1 - e^{i theta}) |psi_s><psi_s|, s = 1..6, single party 3x3.
OperatorSet qutrit_uuo_set(const GoldenParams& g = GoldenParams::standard());

/// U_{n,m} = sum_k omega_d^{kn} |k+m mod d><k|, n slowest. Throws ConfigError for d < 2.
OperatorSet weyl_heisenberg(std::size_t d);

/// Generalized Pauli shift P_q = sum_k |k><k+1 mod q|.
ComplexMatrix shift_matrix(std::size_t q);
/// Clock W_q = diag(1, omega_q, ..., omega_q^{q-1}).
ComplexMatrix clock_matrix(std::size_t q);

struct LiftParams {
    std::size_t q;
    /// Single-party set of d x d factors; must pass check_orthonormal.
    OperatorSet base;
};

/// Two-party set over M_{q,q} (x) M_{d,d}:
///   (W^s P^j) (x) U_{n,m}  for s in 0..q-1, j in 1..q-1, n, m in 0..d-1,
///   W^s (x) U_t            for s in 0..q-1, t over the base,
/// in that order, q^2 d^2 - q d^2 + q N members. Throws InvalidBaseError for
/// a base that is not single-party, square and orthonormal; ConfigError for
/// q = 0.
OperatorSet lift_uuo(const LiftParams& p);

/// xi_{+-} (x) U_{n,m} then eta_{+-} (x) U_s on M_{2,2} (x) M_{3,3}, with
/// xi = [[0,1],[+-1,0]], eta = diag(1,+-1), n, m in 1..3 (taken mod 3).
OperatorSet example_upuob_2x3(const GoldenParams& g = GoldenParams::standard());

/// diag(w1, w4) (x) x. Throws InvalidWitnessError unless x is a nonzero
/// antisymmetric 3x3 matrix and (w1, w4) != (0, 0).
ProductOperator antisym_witness_2x3(Complex w1, Complex w4, const ComplexMatrix& x,
                                    Tolerance tol = {});

/// The 11-state UPB on C^4 (x) C^4 (labels "psi_1".."psi_11").
std::vector<ProductVector> example1_upb();
/// example1_upb mapped into M_{2,2} (x) M_{2,2} with row-major positions
/// (labels "M_1".."M_11").
OperatorSet example1_upob();

/// Output party p is the Kronecker product of the listed input parties, in
/// order. Input parties are numbered a's first, then b's.
using Regroup = std::vector<std::vector<std::size_t>>;

/// Every input party is its own output party.
Regroup identity_regroup(std::size_t parties_a, std::size_t parties_b);
/// Output party i = a_i (x) b_i. Needs equal party counts.
Regroup interleave_regroup(std::size_t parties);

/// All |a|*|b| products a_i (x) b_j (a slowest), factors merged by regroup.
/// Throws ConfigError when regroup is not a partition of the input parties.
OperatorSet tensor_combine(const OperatorSet& a, const OperatorSet& b, const Regroup& regroup);

}  // namespace upoblab

#endif
