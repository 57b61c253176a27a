#include "upoblab/locc.h"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "eigen_bridge.h"
#include "upoblab/catalog.h"
#include "upoblab/errors.h"

namespace upoblab {

using detail::EMatrix;

namespace {

std::size_t product_of(std::span<const std::size_t> dims) {
    std::size_t n = 1;
    for (const auto d : dims) n *= d;
    return n;
}

double norm_of(std::span<const Complex> v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

std::vector<Complex> apply_raw(std::span<const std::size_t> dims, std::span<const Complex> amps,
                               std::size_t subsystem, const ComplexMatrix& op) {
    if (subsystem >= dims.size()) throw ShapeError("subsystem index out of range");
    const std::size_t d = dims[subsystem];
    if (op.rows() != d || op.cols() != d) {
        throw ShapeError("operator does not match subsystem dimension " + std::to_string(d));
    }
    std::size_t stride = 1;
    for (std::size_t s = subsystem + 1; s < dims.size(); ++s) stride *= dims[s];
    std::vector<Complex> out(amps.size(), Complex(0.0));
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const std::size_t r = (i / stride) % d;
        const std::size_t base = i - r * stride;
        Complex acc = 0.0;
        for (std::size_t c = 0; c < d; ++c) acc += op(r, c) * amps[base + c * stride];
        out[i] = acc;
    }
    return out;
}

// Amplitudes as a (keep x rest) matrix, subsystems in `keep` order first.
EMatrix split(const StateVector& s, std::span<const std::size_t> keep) {
    const auto dims = s.dims();
    std::vector<bool> kept(dims.size(), false);
    for (const auto k : keep) {
        if (k >= dims.size() || kept[k]) throw ShapeError("bad subsystem list");
        kept[k] = true;
    }
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (!kept[i]) rest.push_back(i);
    }
    std::size_t dk = 1;
    for (const auto k : keep) dk *= dims[k];
    const std::size_t dr = s.dim() / dk;
    EMatrix m = EMatrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dr));
    std::vector<std::size_t> digit(dims.size());
    for (std::size_t i = 0; i < s.dim(); ++i) {
        std::size_t x = i;
        for (std::size_t k = dims.size(); k-- > 0;) {
            digit[k] = x % dims[k];
            x /= dims[k];
        }
        std::size_t row = 0;
        for (const auto k : keep) row = row * dims[k] + digit[k];
        std::size_t col = 0;
        for (const auto k : rest) col = col * dims[k] + digit[k];
        m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = s[i];
    }
    return m;
}

std::vector<Complex> to_vector(const Eigen::Ref<const detail::EVector>& v) {
    return std::vector<Complex>(v.data(), v.data() + v.size());
}

ComplexMatrix projector(std::span<const Complex> v) {
    const double n = norm_of(v);
    std::vector<Complex> e(v.size() * v.size());
    for (std::size_t r = 0; r < v.size(); ++r) {
        for (std::size_t c = 0; c < v.size(); ++c) {
            e[r * v.size() + c] = v[r] * std::conj(v[c]) / (n * n);
        }
    }
    return ComplexMatrix(v.size(), v.size(), std::move(e));
}

bool near(double x, double target, Tolerance tol) { return std::abs(x - target) <= tol.eps(); }

std::string join(const std::vector<std::size_t>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "}";
}

}  // namespace

StateVector::StateVector(std::vector<std::size_t> dims, std::vector<Complex> amplitudes,
                         Tolerance tol)
    : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
    if (dims_.empty() || std::find(dims_.begin(), dims_.end(), 0u) != dims_.end()) {
        throw ShapeError("state dimensions must be positive");
    }
    if (product_of(dims_) != amplitudes_.size()) {
        throw ShapeError("amplitude count does not match subsystem dimensions");
    }
    for (const auto& a : amplitudes_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw ValueError("non-finite amplitude");
        }
    }
    if (!near(norm_of(amplitudes_), 1.0, tol)) throw ValueError("state is not normalized");
}

StateVector StateVector::normalize(std::vector<std::size_t> dims, std::vector<Complex> amplitudes) {
    const double n = norm_of(amplitudes);
    if (n == 0.0) throw ValueError("cannot normalize the zero vector");
    for (auto& a : amplitudes) a /= n;
    return StateVector(std::move(dims), std::move(amplitudes));
}

StateVector StateVector::product(std::span<const std::vector<Complex>> factors) {
    if (factors.empty()) throw EmptyInputError("product of no factors");
    std::vector<std::size_t> dims;
    std::vector<Complex> amps{1.0};
    for (const auto& f : factors) {
        dims.push_back(f.size());
        std::vector<Complex> next;
        next.reserve(amps.size() * f.size());
        for (const auto& a : amps) {
            for (const auto& b : f) next.push_back(a * b);
        }
        amps = std::move(next);
    }
    return normalize(std::move(dims), std::move(amps));
}

StateVector StateVector::apply_local(std::size_t subsystem, const ComplexMatrix& op,
                                     Tolerance tol) const {
    return StateVector(dims_, apply_raw(dims_, amplitudes_, subsystem, op), tol);
}

ComplexMatrix StateVector::reduced(std::span<const std::size_t> keep) const {
    const EMatrix m = split(*this, keep);
    return detail::from_eigen(m * m.adjoint());
}

Complex inner(const StateVector& a, const StateVector& b) {
    if (!std::ranges::equal(a.dims(), b.dims())) throw ShapeError("inner: dimension mismatch");
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

StateVector mes(std::size_t d) {
    if (d < 2) throw ConfigError("mes needs d >= 2");
    std::vector<Complex> amps(d * d, Complex(0.0));
    for (std::size_t j = 0; j < d; ++j) amps[j * d + j] = 1.0 / std::sqrt(static_cast<double>(d));
    return StateVector({d, d}, std::move(amps));
}

std::vector<StateVector> build_a_states(const OperatorSet& set, std::size_t d) {
    const PartyShape& shape = set.shape();
    for (const auto& p : shape.parties()) {
        if (p.rows != d || p.cols != d) throw ShapeError("build_a_states needs d x d parties");
    }
    const std::size_t n = shape.size();
    const StateVector psi = mes(d);
    std::vector<std::size_t> dims(2 * n, d);
    std::vector<Complex> amps{1.0};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Complex> next;
        for (const auto& a : amps) {
            for (const auto& b : psi.amplitudes()) next.push_back(a * b);
        }
        amps = std::move(next);
    }
    std::vector<StateVector> out;
    for (const auto& u : set.members()) {
        std::vector<Complex> v = amps;
        for (std::size_t i = 0; i < n; ++i) v = apply_raw(dims, v, 2 * i, u.factor(i));
        if (!near(norm_of(v), 1.0, Tolerance{1e-9})) {
            throw ValueError("member " + u.label() + " does not map the MES to a unit vector");
        }
        out.emplace_back(dims, std::move(v));
    }
    return out;
}

std::vector<StateVector> regroup_bipartite(std::span<const StateVector> states) {
    std::vector<StateVector> out;
    for (const auto& s : states) {
        const std::vector<std::size_t> expected{2, 2, 2, 2};
        if (!std::ranges::equal(s.dims(), expected)) {
            throw ShapeError("regroup_bipartite expects four qubits A1 B1 A2 B2");
        }
        out.emplace_back(std::vector<std::size_t>{4, 4},
                         std::vector<Complex>(s.amplitudes().begin(), s.amplitudes().end()));
    }
    return out;
}

std::optional<ProductVector> as_product(const StateVector& state, Tolerance tol) {
    if (state.dims().size() != 2) throw ShapeError("as_product needs a two-subsystem state");
    const std::vector<std::size_t> first{0};
    const EMatrix m = split(state, first);
    Eigen::JacobiSVD<EMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv.size() > 1 && sv(1) > tol.eps() * sv(0)) return std::nullopt;
    ProductVector pv;
    pv.factors.push_back(to_vector(svd.matrixU().col(0) * sv(0)));
    pv.factors.push_back(to_vector(svd.matrixV().col(0).conjugate()));
    return pv;
}

std::vector<StateVector> qutrit_embed(std::span<const StateVector> states, Tolerance tol) {
    const double r2 = 1.0 / std::sqrt(2.0);
    // Rows are the H3 basis vectors in C^4.
    const Complex h[3][4] = {{r2, 0, 0, -r2}, {0, 1, 0, 0}, {0, 0, 1, 0}};
    std::vector<StateVector> out;
    for (std::size_t k = 0; k < states.size(); ++k) {
        const StateVector& s = states[k];
        const std::vector<std::size_t> expected{4, 4};
        if (!std::ranges::equal(s.dims(), expected)) throw ShapeError("qutrit_embed expects C^4 (x) C^4");
        std::vector<Complex> c(9, Complex(0.0));
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                Complex acc = 0.0;
                for (std::size_t p = 0; p < 4; ++p) {
                    for (std::size_t q = 0; q < 4; ++q) {
                        acc += std::conj(h[i][p]) * std::conj(h[j][q]) * s[p * 4 + q];
                    }
                }
                c[i * 3 + j] = acc;
            }
        }
        const double weight = norm_of(c);
        if (!near(weight * weight, 1.0, tol)) {
            throw EmbeddingError("state " + std::to_string(k + 1) +
                                 " has weight outside H3 (x) H3");
        }
        out.push_back(StateVector::normalize({3, 3}, std::move(c)));
    }
    return out;
}

bool triple_independence_check(std::span<const std::vector<Complex>> vectors, Tolerance tol) {
    if (vectors.size() != 5) throw ConfigError("triple_independence_check needs five vectors");
    for (std::size_t a = 0; a < 5; ++a) {
        for (std::size_t b = a + 1; b < 5; ++b) {
            for (std::size_t c = b + 1; c < 5; ++c) {
                const std::vector<ComplexMatrix> t{ComplexMatrix::column(vectors[a]),
                                                   ComplexMatrix::column(vectors[b]),
                                                   ComplexMatrix::column(vectors[c])};
                if (numeric_rank(t, tol) != 3) return false;
            }
        }
    }
    return true;
}

MeasurementOperator::MeasurementOperator(ComplexMatrix matrix, std::size_t subsystem,
                                         std::string label, Tolerance tol)
    : matrix_(std::move(matrix)), subsystem_(subsystem), label_(std::move(label)) {
    if (!matrix_.is_square()) throw InvalidEffectError("effect must be square");
    if (max_abs_diff(matrix_, matrix_.adjoint()) > tol.eps()) {
        throw InvalidEffectError("effect " + label_ + " is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<EMatrix> eig(detail::to_eigen(matrix_));
    const auto& ev = eig.eigenvalues();
    if (ev.minCoeff() < -tol.eps() || ev.maxCoeff() > 1.0 + tol.eps()) {
        throw InvalidEffectError("effect " + label_ + " has eigenvalues outside [0, 1]");
    }
}

MeasurementOperator MeasurementOperator::complement(std::string label) const {
    return MeasurementOperator(ComplexMatrix::identity(matrix_.rows()) - matrix_, subsystem_,
                               std::move(label));
}

BranchOutcome measurement_branch(const StateVector& state, const MeasurementOperator& effect,
                                 Tolerance tol) {
    const auto amps = state.amplitudes();
    const auto e_psi = apply_raw(state.dims(), amps, effect.subsystem(), effect.matrix());
    Complex p = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) p += std::conj(amps[i]) * e_psi[i];
    BranchOutcome out{std::clamp(p.real(), 0.0, 1.0), std::nullopt};
    if (out.probability > tol.eps()) {
        Eigen::SelfAdjointEigenSolver<EMatrix> eig(detail::to_eigen(effect.matrix()));
        const auto root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().cast<Complex>();
        const EMatrix sqrt_e =
            eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().adjoint();
        auto post = apply_raw(state.dims(), amps, effect.subsystem(), detail::from_eigen(sqrt_e));
        std::vector<std::size_t> dims(state.dims().begin(), state.dims().end());
        out.post_state = StateVector::normalize(std::move(dims), std::move(post));
    }
    return out;
}

bool ProtocolTrace::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const ProtocolBranch& ProtocolTrace::branch(const std::string& name) const {
    for (const auto& b : branches) {
        if (b.name == name) return b;
    }
    throw IndexError("no branch named " + name);
}

namespace {

// <anc|_{ab} on a state A B a b, leaving A B.
StateVector strip_ancilla(const StateVector& s, const StateVector& anc, Tolerance tol) {
    const std::size_t da = s.dims()[0];
    const std::size_t db = s.dims()[1];
    const std::size_t dn = anc.dim();
    std::vector<Complex> out(da * db, Complex(0.0));
    for (std::size_t i = 0; i < da * db; ++i) {
        for (std::size_t k = 0; k < dn; ++k) out[i] += std::conj(anc[k]) * s[i * dn + k];
    }
    return StateVector({da, db}, std::move(out), tol);
}

struct Hypothesis {
    std::size_t index;
    StateVector state;
};

// Runs a binary measurement over the hypotheses, records both effects and
// returns the (click, no-click) survivors with their post-states.
std::pair<std::vector<Hypothesis>, std::vector<Hypothesis>> binary_step(
    ProtocolTrace& trace, const std::string& party, const MeasurementOperator& effect,
    const std::vector<Hypothesis>& hyps, Tolerance tol) {
    const MeasurementOperator other = effect.complement(effect.label() + "bar");
    ProtocolStep click{party, effect.label(), {}};
    ProtocolStep miss{party, other.label(), {}};
    std::vector<Hypothesis> yes;
    std::vector<Hypothesis> no;
    bool deterministic = true;
    bool sums = true;
    for (const auto& h : hyps) {
        const BranchOutcome a = measurement_branch(h.state, effect, tol);
        const BranchOutcome b = measurement_branch(h.state, other, tol);
        click.probability[h.index] = a.probability;
        miss.probability[h.index] = b.probability;
        deterministic = deterministic && (near(a.probability, 0.0, tol) || near(a.probability, 1.0, tol));
        sums = sums && near(a.probability + b.probability, 1.0, tol);
        if (a.probability > 0.5) {
            yes.push_back({h.index, *a.post_state});
        } else {
            no.push_back({h.index, *b.post_state});
        }
    }
    trace.steps.push_back(std::move(click));
    trace.steps.push_back(std::move(miss));
    trace.checks.push_back({effect.label() + " outcomes are deterministic", deterministic, ""});
    trace.checks.push_back({effect.label() + " probabilities sum to one", sums, ""});
    return {yes, no};
}

std::vector<std::size_t> indices(const std::vector<Hypothesis>& hs) {
    std::vector<std::size_t> out;
    for (const auto& h : hs) out.push_back(h.index);
    return out;
}

// Measures `subsystem` in the basis of each survivor's local factor there.
void local_basis_step(ProtocolTrace& trace, const std::string& party, std::size_t subsystem,
                      const std::vector<Hypothesis>& hyps, const StateVector& anc, Tolerance tol) {
    std::vector<std::vector<Complex>> factors;
    bool product = true;
    for (const auto& h : hyps) {
        const auto pv = as_product(strip_ancilla(h.state, anc, tol), tol);
        product = product && pv.has_value();
        factors.push_back(pv ? pv->factors[subsystem] : std::vector<Complex>(4, Complex(0.0)));
    }
    trace.checks.push_back({party + " sees product states", product, join(indices(hyps))});
    if (!product) return;

    bool orthogonal = true;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        for (std::size_t j = i + 1; j < factors.size(); ++j) {
            Complex ip = 0.0;
            for (std::size_t t = 0; t < 4; ++t) ip += std::conj(factors[i][t]) * factors[j][t];
            orthogonal = orthogonal && std::abs(ip) <= tol.eps();
        }
    }
    trace.checks.push_back({party + "'s local factors are orthogonal", orthogonal, join(indices(hyps))});

    bool identified = true;
    for (std::size_t l = 0; l < hyps.size(); ++l) {
        const MeasurementOperator effect(projector(factors[l]), subsystem,
                                         "f" + std::to_string(hyps[l].index), tol);
        ProtocolStep step{party, effect.label(), {}};
        for (std::size_t k = 0; k < hyps.size(); ++k) {
            const double p = measurement_branch(hyps[k].state, effect, tol).probability;
            step.probability[hyps[k].index] = p;
            identified = identified && near(p, k == l ? 1.0 : 0.0, tol);
        }
        trace.steps.push_back(std::move(step));
    }
    trace.checks.push_back({party + "'s basis measurement identifies each hypothesis", identified,
                            join(indices(hyps))});
}

std::vector<std::size_t> range(std::size_t a, std::size_t b) {
    std::vector<std::size_t> v;
    for (std::size_t i = a; i <= b; ++i) v.push_back(i);
    return v;
}

}  // namespace

ProtocolTrace run_three_ebit_protocol(Tolerance tol) {
    ProtocolTrace trace;
    const auto b = regroup_bipartite(build_a_states(u2_strong_upuob(), 2));
    trace.ledger.push_back({"teleport A1 to B1", 1});
    trace.ledger.push_back({"teleport A2 to B2", 1});

    const StateVector anc = mes(2);
    std::vector<Hypothesis> hyps;
    for (std::size_t k = 0; k < b.size(); ++k) {
        std::vector<Complex> amps;
        for (const auto& x : b[k].amplitudes()) {
            for (const auto& y : anc.amplitudes()) amps.push_back(x * y);
        }
        hyps.push_back({k + 1, StateVector({4, 4, 2, 2}, std::move(amps), tol)});
    }

    std::vector<Complex> plus{1, 0, 0, 1};
    const MeasurementOperator m1(projector(plus), 0, "M1", tol);
    const MeasurementOperator m2(projector(plus), 1, "M2", tol);

    auto [click1, miss1] = binary_step(trace, "Alice", m1, hyps, tol);
    trace.branches.push_back({"M1", indices(click1), "distinguished-locally"});
    trace.branches.push_back({"M1bar", indices(miss1), ""});
    trace.checks.push_back({"M1 survivors are {6,7,8,9}", indices(click1) == range(6, 9),
                            join(indices(click1))});
    local_basis_step(trace, "Bob", 1, click1, anc, tol);

    auto [click2, miss2] = binary_step(trace, "Bob", m2, miss1, tol);
    trace.branches.push_back({"M1bar/M2", indices(click2), "distinguished-locally"});
    trace.branches.push_back({"M1bar/M2bar", indices(miss2), "reduced-to-qutrit-UPB-blackbox"});
    trace.checks.push_back({"M2 survivors are {10,11,12}", indices(click2) == range(10, 12),
                            join(indices(click2))});
    trace.checks.push_back({"M2bar survivors are {1,...,5}", indices(miss2) == range(1, 5),
                            join(indices(miss2))});
    local_basis_step(trace, "Alice", 0, click2, anc, tol);

    std::vector<StateVector> rest;
    for (const auto& h : miss2) rest.push_back(strip_ancilla(h.state, anc, tol));
    try {
        const auto c = qutrit_embed(rest, tol);
        std::vector<ProductVector> pvs;
        bool product = true;
        for (const auto& s : c) {
            auto pv = as_product(s, tol);
            product = product && pv.has_value();
            if (pv) pvs.push_back(std::move(*pv));
        }
        trace.checks.push_back({"qutrit embedding succeeds", true, ""});
        trace.checks.push_back({"embedded states are product", product, ""});
        bool orthonormal = true;
        for (std::size_t i = 0; i < c.size(); ++i) {
            for (std::size_t j = 0; j < c.size(); ++j) {
                orthonormal = orthonormal && near(std::abs(inner(c[i], c[j])), i == j ? 1.0 : 0.0, tol);
            }
        }
        trace.checks.push_back({"embedded states are orthonormal", orthonormal, ""});
        if (product && pvs.size() == 5) {
            std::vector<std::vector<Complex>> side_a;
            std::vector<std::vector<Complex>> side_b;
            for (const auto& pv : pvs) {
                side_a.push_back(pv.factors[0]);
                side_b.push_back(pv.factors[1]);
            }
            trace.checks.push_back(
                {"any three A-side factors are independent", triple_independence_check(side_a, tol), ""});
            trace.checks.push_back(
                {"any three B-side factors are independent", triple_independence_check(side_b, tol), ""});
            SearchOptions so;
            so.tol = tol;
            const auto v = extendibility_search(std::span<const ProductVector>(pvs), so);
            trace.checks.push_back({"embedded states form an unextendible product basis",
                                    v.status == ExtendibilityStatus::Unextendible,
                                    to_string(v.status)});
        }
    } catch (const EmbeddingError& e) {
        trace.checks.push_back({"qutrit embedding succeeds", false, e.what()});
    }
    trace.ledger.push_back({"shared MES for the two-qutrit UPB subroutine", 1});

    for (const auto& entry : trace.ledger) trace.ebits_consumed += entry.ebits;
    trace.checks.push_back({"three ebits consumed", trace.ebits_consumed == 3,
                            std::to_string(trace.ebits_consumed)});
    spdlog::debug("three-ebit replay: {} steps, {} checks", trace.steps.size(), trace.checks.size());
    return trace;
}

bool mes_counting_bound(std::size_t n_states, std::size_t d, std::size_t d_prime) {
    if (d == 0 || d > d_prime) throw ConfigError("mes_counting_bound needs 1 <= d <= d'");
    return n_states > d_prime;
}

NonlocalityEvidence genuine_nonlocality_evidence(const OperatorSet& set, Tolerance tol) {
    if (!(set.shape() == PartyShape::uniform(2, 2))) {
        throw ShapeError("nonlocality evidence needs a two-party set of 2x2 factors");
    }
    const auto a = build_a_states(set, 2);
    const char* names[4] = {"A1", "B1", "A2", "B2"};
    NonlocalityEvidence ev;

    bool fact_a = true;
    std::string detail_a;
    for (unsigned mask = 1; mask < 16; ++mask) {
        if (!(mask & 1u) || mask == 15u) continue;
        std::vector<std::size_t> side;
        std::vector<std::size_t> other;
        CutFact cut;
        for (std::size_t k = 0; k < 4; ++k) {
            if (mask & (1u << k)) {
                side.push_back(k);
                cut.side_a += names[k];
            } else {
                other.push_back(k);
                cut.side_b += names[k];
            }
        }
        const auto& smaller = side.size() <= other.size() ? side : other;
        const std::size_t ds = std::size_t{1} << smaller.size();
        const std::size_t dl = 16 / ds;
        cut.all_product = true;
        cut.all_maximally_entangled = true;
        const ComplexMatrix mixed = Complex(1.0 / static_cast<double>(ds)) * ComplexMatrix::identity(ds);
        for (const auto& s : a) {
            const ComplexMatrix rho = s.reduced(smaller);
            cut.all_maximally_entangled = cut.all_maximally_entangled && max_abs_diff(rho, mixed) <= tol.eps();
            cut.all_product = cut.all_product && near((rho * rho).trace().real(), 1.0, tol);
        }
        cut.bound_violated = cut.all_maximally_entangled && mes_counting_bound(a.size(), ds, dl);
        const bool product_cut = cut.side_a == "A1B1";
        if (!product_cut) {
            fact_a = fact_a && cut.bound_violated;
            if (!cut.bound_violated) detail_a += cut.side_a + "|" + cut.side_b + " ";
        }
        ev.cuts.push_back(std::move(cut));
    }
    ev.fact_a = {"MES counting bound on every cut except A1B1|A2B2", fact_a, detail_a};

    const auto b = regroup_bipartite(a);
    bool all_product = true;
    std::vector<StateVector> inside;
    for (std::size_t k = 0; k < b.size(); ++k) {
        all_product = all_product && as_product(b[k], tol).has_value();
        try {
            qutrit_embed(std::span<const StateVector>(&b[k], 1), tol);
            ev.embedded_members.push_back(k + 1);
            inside.push_back(b[k]);
        } catch (const EmbeddingError&) {
        }
    }
    if (!all_product) {
        ev.fact_b = {"A1B1|A2B2 reduction to a two-qutrit UPB", false, "some state is entangled"};
    } else if (inside.empty()) {
        ev.fact_b = {"A1B1|A2B2 reduction to a two-qutrit UPB", false,
                     "no state is supported on H3 (x) H3"};
    } else {
        const auto c = qutrit_embed(inside, tol);
        std::vector<ProductVector> pvs;
        for (const auto& s : c) pvs.push_back(*as_product(s, tol));
        SearchOptions so;
        so.tol = tol;
        ev.upb_verdict = extendibility_search(std::span<const ProductVector>(pvs), so);
        const bool ok = ev.upb_verdict->status == ExtendibilityStatus::Unextendible;
        ev.fact_b = {"A1B1|A2B2 reduction to a two-qutrit UPB", ok,
                     join(ev.embedded_members) + " " + to_string(ev.upb_verdict->status)};
    }
    return ev;
}

NonlocalityEvidence genuine_nonlocality_evidence(Tolerance tol) {
    return genuine_nonlocality_evidence(u2_strong_upuob(), tol);
}

}  // namespace upoblab
