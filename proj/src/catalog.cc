#include "upoblab/catalog.h"

#include <cmath>
#include <numbers>
#include <string>

#include "upoblab/errors.h"

namespace upoblab {

namespace {

using pauli::I;
using pauli::X;
using pauli::Y;
using pauli::Z;

ComplexMatrix scaled(double s, const ComplexMatrix& m) { return Complex(s) * m; }

ComplexMatrix power(const ComplexMatrix& m, std::size_t k) {
    ComplexMatrix out = ComplexMatrix::identity(m.rows());
    for (std::size_t i = 0; i < k; ++i) out = out * m;
    return out;
}

ComplexMatrix pauli_by_index(std::size_t a) {
    switch (a) {
        case 0:
            return I();
        case 1:
            return X();
        case 2:
            return Y();
        default:
            return Z();
    }
}

constexpr const char* kPauliNames = "IXYZ";

ComplexMatrix weyl_operator(std::size_t d, std::size_t n, std::size_t m) {
    std::vector<Complex> e(d * d, Complex(0.0));
    for (std::size_t k = 0; k < d; ++k) {
        e[((k + m) % d) * d + k] = root_of_unity(d, static_cast<long long>(k * n));
    }
    return ComplexMatrix(d, d, std::move(e));
}

ComplexMatrix outer(std::span<const Complex> v) {
    std::vector<Complex> e(v.size() * v.size());
    for (std::size_t r = 0; r < v.size(); ++r) {
        for (std::size_t c = 0; c < v.size(); ++c) e[r * v.size() + c] = v[r] * std::conj(v[c]);
    }
    return ComplexMatrix(v.size(), v.size(), std::move(e));
}

std::vector<Complex> normalize(std::vector<Complex> v) {
    double n = 0.0;
    for (const auto& x : v) n += std::norm(x);
    n = std::sqrt(n);
    for (auto& x : v) x /= n;
    return v;
}

}  // namespace

OperatorSet u2_strong_upuob() {
    const double r2 = 1.0 / std::sqrt(2.0);
    const double r3 = 1.0 / std::sqrt(3.0);
    const ComplexMatrix xyz = X() + Y() + Z();
    std::vector<ProductOperator> m;
    m.emplace_back(std::vector{X(), scaled(r2, X() - Y())}, "U_1");
    m.emplace_back(std::vector{scaled(r2, X() - Y()), Z()}, "U_2");
    m.emplace_back(std::vector{Z(), scaled(r2, Z() - Y())}, "U_3");
    m.emplace_back(std::vector{scaled(r2, Z() - Y()), X()}, "U_4");
    m.emplace_back(std::vector{scaled(r3, xyz), scaled(r3, xyz)}, "U_5");
    m.emplace_back(std::vector{I(), I()}, "U_6");
    m.emplace_back(std::vector{I(), X()}, "U_7");
    m.emplace_back(std::vector{I(), Y()}, "U_8");
    m.emplace_back(std::vector{I(), Z()}, "U_9");
    m.emplace_back(std::vector{X(), I()}, "U_10");
    m.emplace_back(std::vector{Y(), I()}, "U_11");
    m.emplace_back(std::vector{Z(), I()}, "U_12");
    return OperatorSet(PartyShape::uniform(2, 2), std::move(m));
}

OperatorSet nqubit_strong_upuob(std::size_t n) {
    if (n < 2) throw ConfigError("nqubit_strong_upuob needs n >= 2, got " + std::to_string(n));
    const OperatorSet base = u2_strong_upuob();
    const std::size_t prefix_len = n - 2;
    std::size_t prefixes = 1;
    for (std::size_t i = 0; i < prefix_len; ++i) prefixes *= 4;

    std::vector<ProductOperator> members;
    members.reserve(prefixes * base.size());
    for (std::size_t p = 0; p < prefixes; ++p) {
        std::vector<ComplexMatrix> head;
        std::string name;
        std::size_t code = p;
        std::vector<std::size_t> digits(prefix_len);
        for (std::size_t k = prefix_len; k-- > 0;) {
            digits[k] = code % 4;
            code /= 4;
        }
        for (const std::size_t a : digits) {
            head.push_back(pauli_by_index(a));
            name += kPauliNames[a];
        }
        for (const auto& u : base.members()) {
            std::vector<ComplexMatrix> f = head;
            f.push_back(u.factor(0));
            f.push_back(u.factor(1));
            members.emplace_back(std::move(f), name.empty() ? u.label() : name + "." + u.label());
        }
    }
    return OperatorSet(PartyShape::uniform(n, 2), std::move(members));
}

GoldenParams GoldenParams::standard() {
    return {std::numbers::phi, -0.875, std::sqrt(15.0) / 8.0};
}

void GoldenParams::validate(Tolerance tol) const {
    if (std::abs(phi * phi - phi - 1.0) > tol.eps()) throw ConfigError("phi^2 != phi + 1");
    if (cos_theta != -0.875) throw ConfigError("cos theta must be -7/8");
    if (std::abs(cos_theta * cos_theta + sin_theta * sin_theta - 1.0) > tol.eps()) {
        throw ConfigError("cos^2 theta + sin^2 theta != 1");
    }
}

std::vector<std::vector<Complex>> golden_states(const GoldenParams& g) {
    g.validate();
    std::vector<std::vector<Complex>> out;
    for (std::size_t k = 0; k < 3; ++k) {
        for (const double sign : {1.0, -1.0}) {
            std::vector<Complex> v(3, Complex(0.0));
            v[k] = 1.0;
            v[(k + 1) % 3] = sign * g.phi;
            out.push_back(normalize(std::move(v)));
        }
    }
    return out;
}

OperatorSet qutrit_uuo_set(const GoldenParams& g) {
    const Complex phase(g.cos_theta, g.sin_theta);
    std::vector<ProductOperator> members;
    const auto states = golden_states(g);
    for (std::size_t s = 0; s < states.size(); ++s) {
        ComplexMatrix u = ComplexMatrix::identity(3) - (1.0 - phase) * outer(states[s]);
        members.emplace_back(std::vector{u}, "U_" + std::to_string(s + 1));
    }
    return OperatorSet(PartyShape::uniform(1, 3), std::move(members));
}

OperatorSet weyl_heisenberg(std::size_t d) {
    if (d < 2) throw ConfigError("weyl_heisenberg needs d >= 2");
    std::vector<ProductOperator> members;
    for (std::size_t n = 0; n < d; ++n) {
        for (std::size_t m = 0; m < d; ++m) {
            members.emplace_back(std::vector{weyl_operator(d, n, m)},
                                 "U[" + std::to_string(n) + "," + std::to_string(m) + "]");
        }
    }
    return OperatorSet(PartyShape::uniform(1, d), std::move(members));
}

ComplexMatrix shift_matrix(std::size_t q) {
    std::vector<Complex> e(q * q, Complex(0.0));
    for (std::size_t k = 0; k < q; ++k) e[k * q + (k + 1) % q] = 1.0;
    return ComplexMatrix(q, q, std::move(e));
}

ComplexMatrix clock_matrix(std::size_t q) {
    std::vector<Complex> diag(q);
    for (std::size_t k = 0; k < q; ++k) diag[k] = root_of_unity(q, static_cast<long long>(k));
    return ComplexMatrix::diagonal(diag);
}

OperatorSet lift_uuo(const LiftParams& p) {
    if (p.q == 0) throw ConfigError("lift_uuo needs q >= 1");
    const OperatorSet& base = p.base;
    if (base.shape().size() != 1 || !base.shape()[0].is_square() || base.empty()) {
        throw InvalidBaseError("lift base must be a non-empty single-party square set");
    }
    if (!check_orthonormal(base)) throw InvalidBaseError("lift base is not orthonormal");
    const std::size_t d = base.shape()[0].rows;
    const std::size_t q = p.q;
    const ComplexMatrix w = clock_matrix(q);
    const ComplexMatrix pq = shift_matrix(q);

    std::vector<ProductOperator> members;
    for (std::size_t s = 0; s < q; ++s) {
        const ComplexMatrix ws = power(w, s);
        for (std::size_t j = 1; j < q; ++j) {
            const ComplexMatrix left = ws * power(pq, j);
            for (std::size_t n = 0; n < d; ++n) {
                for (std::size_t m = 0; m < d; ++m) {
                    members.emplace_back(
                        std::vector{left, weyl_operator(d, n, m)},
                        "U[" + std::to_string(n) + "," + std::to_string(m) + "](" +
                            std::to_string(s) + "," + std::to_string(j) + ")");
                }
            }
        }
    }
    for (std::size_t s = 0; s < q; ++s) {
        const ComplexMatrix ws = power(w, s);
        for (const auto& u : base.members()) {
            members.emplace_back(std::vector{ws, u.factor(0)},
                                 u.label() + "(" + std::to_string(s) + ")");
        }
    }
    return OperatorSet(PartyShape({{q, q}, {d, d}}), std::move(members));
}

OperatorSet example_upuob_2x3(const GoldenParams& g) {
    const ComplexMatrix xi_p = ComplexMatrix::from_rows({{0, 1}, {1, 0}});
    const ComplexMatrix xi_m = ComplexMatrix::from_rows({{0, 1}, {-1, 0}});
    const ComplexMatrix eta_p = I();
    const ComplexMatrix eta_m = Z();
    const OperatorSet qutrit = qutrit_uuo_set(g);

    std::vector<ProductOperator> members;
    for (const auto& [xi, sign] : {std::pair{xi_p, '+'}, std::pair{xi_m, '-'}}) {
        for (std::size_t n = 1; n <= 3; ++n) {
            for (std::size_t m = 1; m <= 3; ++m) {
                members.emplace_back(std::vector{xi, weyl_operator(3, n % 3, m % 3)},
                                     std::string("U") + sign + "[" + std::to_string(n) + "," +
                                         std::to_string(m) + "]");
            }
        }
    }
    for (const auto& [eta, sign] : {std::pair{eta_p, '+'}, std::pair{eta_m, '-'}}) {
        for (std::size_t s = 0; s < qutrit.size(); ++s) {
            members.emplace_back(std::vector{eta, qutrit[s].factor(0)},
                                 std::string("U") + sign + "_" + std::to_string(s + 1));
        }
    }
    return OperatorSet(PartyShape({{2, 2}, {3, 3}}), std::move(members));
}

ProductOperator antisym_witness_2x3(Complex w1, Complex w4, const ComplexMatrix& x,
                                    Tolerance tol) {
    if (x.rows() != 3 || x.cols() != 3) throw InvalidWitnessError("x must be 3x3");
    if (max_abs_diff(x.transpose(), Complex(-1.0) * x) > tol.eps()) {
        throw InvalidWitnessError("x is not antisymmetric");
    }
    if (x.max_abs() <= tol.eps()) throw InvalidWitnessError("x is zero");
    if (std::abs(w1) <= tol.eps() && std::abs(w4) <= tol.eps()) {
        throw InvalidWitnessError("w1 and w4 are both zero");
    }
    const std::vector<Complex> diag{w1, w4};
    return ProductOperator({ComplexMatrix::diagonal(diag), x}, "antisym-witness");
}

std::vector<ProductVector> example1_upb() {
    const Complex w = root_of_unity(3, 1);
    const Complex w2 = root_of_unity(3, 2);
    const double r2 = 1.0 / std::sqrt(2.0);
    const double r3 = 1.0 / std::sqrt(3.0);
    using V = std::vector<Complex>;
    auto sc = [](double s, V v) {
        for (auto& x : v) x *= s;
        return v;
    };
    const V e0{1, 0, 0, 0};
    const V e1{0, 1, 0, 0};
    const V e3{0, 0, 0, 1};
    std::vector<std::pair<V, V>> f = {
        {sc(r2, e0), {1, -1, 0, 0}},
        {sc(r2, {1, 0, 0, -1}), {0, 0, 1, 0}},
        {sc(r3, {1, w, w2, 0}), e3},
        {sc(r3, {1, w2, w, 0}), e3},
        {sc(r3, {0, 1, w, w2}), e1},
        {sc(r3, {0, 1, w2, w}), e1},
        {sc(r2, e3), {1, 0, 0, -1}},
        {sc(0.5, {0, 1, 1, 0}), {1, 0, -1, 0}},
        {sc(0.5, {0, 1, -1, 0}), {1, 0, 1, 0}},
        {sc(0.5, {0, 1, -1, 0}), {1, 0, -1, 0}},
        {sc(0.25, {1, 1, 1, 1}), {1, 1, 1, 1}},
    };
    std::vector<ProductVector> out;
    for (std::size_t j = 0; j < f.size(); ++j) {
        out.push_back({{f[j].first, f[j].second}, "psi_" + std::to_string(j + 1)});
    }
    return out;
}

OperatorSet example1_upob() {
    const auto upb = example1_upb();
    const std::vector<IndexSet> idx{IndexSet::row_major(2, 2), IndexSet::row_major(2, 2)};
    const OperatorSet raw = upb_to_upob(upb, idx);
    std::vector<ProductOperator> members;
    for (std::size_t j = 0; j < raw.size(); ++j) {
        members.push_back(raw[j].with_label("M_" + std::to_string(j + 1)));
    }
    return OperatorSet(raw.shape(), std::move(members));
}

Regroup identity_regroup(std::size_t parties_a, std::size_t parties_b) {
    Regroup r;
    for (std::size_t i = 0; i < parties_a + parties_b; ++i) r.push_back({i});
    return r;
}

Regroup interleave_regroup(std::size_t parties) {
    Regroup r;
    for (std::size_t i = 0; i < parties; ++i) r.push_back({i, parties + i});
    return r;
}

OperatorSet tensor_combine(const OperatorSet& a, const OperatorSet& b, const Regroup& regroup) {
    const std::size_t na = a.shape().size();
    const std::size_t total = na + b.shape().size();
    std::vector<bool> seen(total, false);
    for (const auto& group : regroup) {
        if (group.empty()) throw ConfigError("regroup has an empty output party");
        for (const std::size_t p : group) {
            if (p >= total || seen[p]) throw ConfigError("regroup is not a partition of the parties");
            seen[p] = true;
        }
    }
    for (const bool s : seen) {
        if (!s) throw ConfigError("regroup leaves an input party out");
    }

    auto input_shape = [&](std::size_t p) {
        return p < na ? a.shape()[p] : b.shape()[p - na];
    };
    std::vector<LocalShape> shapes;
    for (const auto& group : regroup) {
        LocalShape s{1, 1};
        for (const std::size_t p : group) {
            s.rows *= input_shape(p).rows;
            s.cols *= input_shape(p).cols;
        }
        shapes.push_back(s);
    }

    std::vector<ProductOperator> members;
    members.reserve(a.size() * b.size());
    for (const auto& x : a.members()) {
        for (const auto& y : b.members()) {
            std::vector<ComplexMatrix> factors;
            for (const auto& group : regroup) {
                std::vector<ComplexMatrix> parts;
                for (const std::size_t p : group) {
                    parts.push_back(p < na ? x.factor(p) : y.factor(p - na));
                }
                factors.push_back(kron_all(parts));
            }
            members.emplace_back(std::move(factors), x.label() + "*" + y.label());
        }
    }
    return OperatorSet(PartyShape(std::move(shapes)), std::move(members));
}

}  // namespace upoblab
