#include "upoblab/unextendibility.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include <spdlog/spdlog.h>

#include "eigen_bridge.h"
#include "upoblab/errors.h"

namespace upoblab {

using detail::EMatrix;
using detail::EVector;

std::string to_string(ExtendibilityStatus s) {
    switch (s) {
        case ExtendibilityStatus::Unextendible:
            return "Unextendible";
        case ExtendibilityStatus::Extendible:
            return "Extendible";
        case ExtendibilityStatus::Unknown:
            return "Unknown";
    }
    return "Unknown";
}

namespace {

EVector unit_vec(const ComplexMatrix& m) {
    EVector v = detail::vec(m);
    return v / v.norm();
}

// Orthonormal basis of a growing span, with undo.
class IncrementalSpan {
   public:
    explicit IncrementalSpan(std::size_t dim) : dim_(dim) {}

    std::size_t rank() const { return basis_.size(); }
    std::size_t dim() const { return dim_; }

    // Component of v orthogonal to the span (two Gram-Schmidt passes).
    EVector residual(const EVector& v) const {
        EVector r = v;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis_) r -= b * b.dot(r);
        }
        return r;
    }

    void push(const EVector& residual) { basis_.push_back(residual / residual.norm()); }
    void pop() { basis_.pop_back(); }

   private:
    std::size_t dim_;
    std::vector<EVector> basis_;
};

enum class Outcome { Found, Exhausted, Capped };

// Depth-first partition search. Copyable so the top level can fan out.
class PartitionSearch {
   public:
    PartitionSearch(const OperatorSet& set, const SearchOptions& opts)
        : set_(&set), opts_(opts), cap_(opts.budget) {
        const std::size_t m = set.shape().size();
        for (std::size_t i = 0; i < m; ++i) spans_.emplace_back(set.shape()[i].dim());
        factors_.resize(set.size());
        for (std::size_t j = 0; j < set.size(); ++j) {
            for (std::size_t i = 0; i < m; ++i) factors_[j].push_back(unit_vec(set[j].factor(i)));
        }
        assignment_.assign(set.size(), kUnassigned);
        order_ = greedy_order();
        fanout_pending_ = opts.jobs > 1;
    }

    Outcome run() { return dfs(0); }

    std::uint64_t nodes() const { return nodes_; }
    const std::vector<std::size_t>& found_assignment() const { return found_; }
    const std::optional<ProductOperator>& witness() const { return witness_; }

   private:
    static constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

    double threshold() const { return opts_.tol.eps(); }

    // Members by decreasing rank growth of the running union spans.
    std::vector<std::size_t> greedy_order() const {
        const std::size_t n = set_->size();
        const std::size_t m = spans_.size();
        std::vector<IncrementalSpan> running = spans_;
        std::vector<bool> used(n, false);
        std::vector<std::size_t> order;
        order.reserve(n);
        while (order.size() < n) {
            bool any_room = false;
            for (const auto& s : running) any_room = any_room || s.rank() < s.dim();
            if (!any_room) break;
            std::size_t best = n;
            int best_gain = -1;
            for (std::size_t j = 0; j < n; ++j) {
                if (used[j]) continue;
                int gain = 0;
                for (std::size_t i = 0; i < m; ++i) {
                    if (running[i].rank() < running[i].dim() &&
                        running[i].residual(factors_[j][i]).norm() > threshold()) {
                        ++gain;
                    }
                }
                if (gain > best_gain) {
                    best_gain = gain;
                    best = j;
                }
            }
            if (best_gain <= 0) break;
            used[best] = true;
            order.push_back(best);
            for (std::size_t i = 0; i < m; ++i) {
                if (running[i].rank() >= running[i].dim()) continue;
                EVector r = running[i].residual(factors_[best][i]);
                if (r.norm() > threshold()) running[i].push(r);
            }
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (!used[j]) order.push_back(j);
        }
        return order;
    }

    bool has_room(std::size_t party) const {
        return spans_[party].rank() + 1 < spans_[party].dim();
    }

    bool absorbed(std::size_t member, std::size_t party) const {
        return spans_[party].residual(factors_[member][party]).norm() <= threshold();
    }

    // Once no party can grow, every remaining member must already lie in
    // some party's span.
    bool feasible_after_growth(std::size_t from_pos) const {
        for (std::size_t i = 0; i < spans_.size(); ++i) {
            if (has_room(i)) return true;
        }
        for (std::size_t p = from_pos; p < order_.size(); ++p) {
            const std::size_t j = order_[p];
            if (assignment_[j] != kUnassigned) continue;
            bool ok = false;
            for (std::size_t i = 0; i < spans_.size() && !ok; ++i) ok = absorbed(j, i);
            if (!ok) return false;
        }
        return true;
    }

    Outcome leaf() {
        PartitionAssignment pa;
        pa.party_of_member = assignment_;
        try {
            ProductOperator w = extract_witness(pa, *set_, opts_.tol);
            if (!verify_witness(w, *set_, opts_.tol)) {
                spdlog::debug("partition search: witness failed verification, continuing");
                return Outcome::Exhausted;
            }
            found_ = assignment_;
            witness_ = std::move(w);
            return Outcome::Found;
        } catch (const NoWitnessError&) {
            spdlog::debug("partition search: incremental and SVD ranks disagree, continuing");
            return Outcome::Exhausted;
        }
    }

    Outcome dfs(std::size_t pos) {
        if (nodes_ >= cap_) return Outcome::Capped;
        ++nodes_;
        while (pos < order_.size() && assignment_[order_[pos]] != kUnassigned) ++pos;
        if (pos == order_.size()) return leaf();
        const std::size_t j = order_[pos];

        for (std::size_t i = 0; i < spans_.size(); ++i) {
            if (absorbed(j, i)) {
                assignment_[j] = i;
                const Outcome r = dfs(pos + 1);
                assignment_[j] = kUnassigned;
                return r;
            }
        }

        std::vector<std::size_t> options;
        for (std::size_t i = 0; i < spans_.size(); ++i) {
            if (has_room(i)) options.push_back(i);
        }
        std::stable_sort(options.begin(), options.end(), [&](std::size_t a, std::size_t b) {
            return spans_[a].dim() - spans_[a].rank() < spans_[b].dim() - spans_[b].rank();
        });

        if (fanout_pending_ && options.size() > 1) {
            fanout_pending_ = false;
            return fan_out(pos, options);
        }

        for (const std::size_t i : options) {
            const Outcome r = try_option(pos, i);
            if (r != Outcome::Exhausted) return r;
        }
        return Outcome::Exhausted;
    }

    Outcome try_option(std::size_t pos, std::size_t party) {
        const std::size_t j = order_[pos];
        spans_[party].push(spans_[party].residual(factors_[j][party]));
        assignment_[j] = party;
        Outcome r = Outcome::Exhausted;
        if (feasible_after_growth(pos + 1)) r = dfs(pos + 1);
        assignment_[j] = kUnassigned;
        spans_[party].pop();
        return r;
    }

    // Explores each option in its own copy, then merges in option order so
    // the result matches the sequential run exactly.
    Outcome fan_out(std::size_t pos, const std::vector<std::size_t>& options) {
        struct Branch {
            Outcome outcome = Outcome::Exhausted;
            std::uint64_t nodes = 0;
            std::vector<std::size_t> found;
            std::optional<ProductOperator> witness;
        };
        std::vector<Branch> branches(options.size());
        const std::uint64_t remaining = cap_ - nodes_;
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (std::size_t k = next++; k < options.size(); k = next++) {
                PartitionSearch child = *this;
                child.nodes_ = 0;
                child.cap_ = remaining;
                branches[k].outcome = child.try_option(pos, options[k]);
                branches[k].nodes = child.nodes_;
                branches[k].found = child.found_;
                branches[k].witness = child.witness_;
            }
        };
        const unsigned workers =
            std::min<unsigned>(opts_.jobs, static_cast<unsigned>(options.size()));
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();

        std::uint64_t left = remaining;
        for (auto& b : branches) {
            if (b.outcome == Outcome::Capped || b.nodes > left) {
                nodes_ = cap_;
                return Outcome::Capped;
            }
            left -= b.nodes;
            nodes_ += b.nodes;
            if (b.outcome == Outcome::Found) {
                found_ = std::move(b.found);
                witness_ = std::move(b.witness);
                return Outcome::Found;
            }
        }
        return Outcome::Exhausted;
    }

    const OperatorSet* set_;
    SearchOptions opts_;
    std::uint64_t cap_;
    std::uint64_t nodes_ = 0;
    bool fanout_pending_ = false;
    std::vector<IncrementalSpan> spans_;
    std::vector<std::vector<EVector>> factors_;
    std::vector<std::size_t> assignment_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> found_;
    std::optional<ProductOperator> witness_;
};

}  // namespace

ExtendibilityVerdict extendibility_search(const OperatorSet& set, const SearchOptions& opts) {
    if (opts.budget == 0) throw ConfigError("search budget must be positive");
    if (set.empty()) throw EmptyInputError("extendibility_search of an empty set");

    PartitionSearch search(set, opts);
    const Outcome outcome = search.run();

    ExtendibilityVerdict v;
    v.budget = opts.budget;
    v.nodes_explored = search.nodes();
    switch (outcome) {
        case Outcome::Found:
            v.status = ExtendibilityStatus::Extendible;
            v.witness = search.witness();
            v.partition = PartitionAssignment{search.found_assignment()};
            break;
        case Outcome::Exhausted:
            v.status = ExtendibilityStatus::Unextendible;
            break;
        case Outcome::Capped:
            v.status = ExtendibilityStatus::Unknown;
            v.nodes_explored = opts.budget;
            break;
    }
    spdlog::debug("extendibility_search: {} members, {} after {} nodes", set.size(),
                  to_string(v.status), v.nodes_explored);
    return v;
}

ExtendibilityVerdict extendibility_search(std::span<const ProductVector> vectors,
                                          const SearchOptions& opts) {
    return extendibility_search(as_column_set(vectors), opts);
}

ProductOperator extract_witness(const PartitionAssignment& partition, const OperatorSet& set,
                                Tolerance tol) {
    const std::size_t m = set.shape().size();
    if (partition.party_of_member.size() != set.size()) {
        throw ConfigError("partition does not cover every member");
    }
    std::vector<std::vector<ComplexMatrix>> subsets(m);
    for (std::size_t j = 0; j < set.size(); ++j) {
        const std::size_t p = partition.party_of_member[j];
        if (p >= m) throw ConfigError("partition names a party out of range");
        subsets[p].push_back(set[j].factor(p));
    }
    std::vector<ComplexMatrix> factors;
    for (std::size_t i = 0; i < m; ++i) {
        const LocalShape& ls = set.shape()[i];
        if (!subsets[i].empty() && numeric_rank(subsets[i], tol) >= ls.dim()) {
            throw NoWitnessError("party " + std::to_string(i) + " subset spans its full space");
        }
        auto comp = complement_basis(subsets[i], ls.rows, ls.cols, tol);
        if (comp.empty()) {
            throw NoWitnessError("party " + std::to_string(i) + " has an empty complement");
        }
        factors.push_back(comp.front());
    }
    return ProductOperator(std::move(factors), "witness");
}

bool verify_witness(const ProductOperator& w, const OperatorSet& set, Tolerance tol) {
    if (!(w.shape() == set.shape())) throw ShapeError("verify_witness: witness shape differs");
    const double wn = w.norm();
    for (const auto& s : set.members()) {
        if (std::abs(hs_inner(w, s)) / (wn * s.norm()) > 10.0 * tol.eps()) return false;
    }
    return true;
}

namespace {

// Local (row * cols + col) index of every party for each flat entry of the
// full matrix, so product contractions need no index arithmetic.
std::vector<std::vector<std::size_t>> local_index_table(const PartyShape& shape) {
    const std::size_t m = shape.size();
    const std::size_t R = shape.total_rows();
    const std::size_t C = shape.total_cols();
    std::vector<std::vector<std::size_t>> table(R * C, std::vector<std::size_t>(m));
    for (std::size_t r = 0; r < R; ++r) {
        for (std::size_t c = 0; c < C; ++c) {
            std::size_t rr = r;
            std::size_t cc = c;
            for (std::size_t k = m; k-- > 0;) {
                const std::size_t lr = rr % shape[k].rows;
                const std::size_t lc = cc % shape[k].cols;
                rr /= shape[k].rows;
                cc /= shape[k].cols;
                table[r * C + c][k] = lr * shape[k].cols + lc;
            }
        }
    }
    return table;
}

// One alternating sweep of the best rank-one product approximation.
void product_sweep(const EVector& z, const std::vector<std::vector<std::size_t>>& table,
                   std::vector<EVector>& factors) {
    const std::size_t m = factors.size();
    for (std::size_t k = 0; k < m; ++k) {
        EVector g = EVector::Zero(factors[k].size());
        double scale = 1.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (j != k) scale *= factors[j].squaredNorm();
        }
        for (std::size_t e = 0; e < table.size(); ++e) {
            Complex w = z(static_cast<Eigen::Index>(e));
            if (w == Complex(0.0)) continue;
            for (std::size_t j = 0; j < m; ++j) {
                if (j != k) w *= std::conj(factors[j](static_cast<Eigen::Index>(table[e][j])));
            }
            g(static_cast<Eigen::Index>(table[e][k])) += w;
        }
        if (scale > 0.0) g /= scale;
        if (g.norm() > 0.0) factors[k] = g;
    }
}

// Exact best product approximation across a two-party cut.
void bipartite_product(const EVector& z, const std::vector<std::vector<std::size_t>>& table,
                       std::vector<EVector>& factors) {
    EMatrix realigned = EMatrix::Zero(factors[0].size(), factors[1].size());
    for (std::size_t e = 0; e < table.size(); ++e) {
        realigned(static_cast<Eigen::Index>(table[e][0]), static_cast<Eigen::Index>(table[e][1])) =
            z(static_cast<Eigen::Index>(e));
    }
    Eigen::JacobiSVD<EMatrix> svd(realigned, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double s = svd.singularValues()(0);
    factors[0] = svd.matrixU().col(0) * s;
    factors[1] = svd.matrixV().col(0).conjugate();
}

EVector product_vec(const std::vector<EVector>& factors,
                    const std::vector<std::vector<std::size_t>>& table) {
    EVector out(static_cast<Eigen::Index>(table.size()));
    for (std::size_t e = 0; e < table.size(); ++e) {
        Complex w = 1.0;
        for (std::size_t j = 0; j < factors.size(); ++j) {
            w *= factors[j](static_cast<Eigen::Index>(table[e][j]));
        }
        out(static_cast<Eigen::Index>(e)) = w;
    }
    return out;
}

EMatrix as_square(const EVector& v, std::size_t d) {
    EMatrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                v(static_cast<Eigen::Index>(r * d + c));
        }
    }
    return m;
}

EVector flatten(const EMatrix& m) {
    EVector v(m.size());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) v(r * m.cols() + c) = m(r, c);
    }
    return v;
}

}  // namespace

std::optional<ProductOperator> unitary_witness_search(const OperatorSet& set,
                                                      const UnitarySearchOptions& opts) {
    const PartyShape& shape = set.shape();
    if (!shape.all_square() || set.empty()) return std::nullopt;
    const std::size_t total = shape.total_rows();
    if (total > kMaxUnitarySearchDim) {
        spdlog::info("unitary_witness_search: dimension {} above heuristic limit, skipped", total);
        return std::nullopt;
    }

    std::vector<ComplexMatrix> fulls;
    fulls.reserve(set.size());
    for (const auto& m : set.members()) fulls.push_back(m.full());
    const auto comp = complement_basis(fulls, total, total, opts.tol);
    if (comp.empty()) return std::nullopt;

    EMatrix basis(static_cast<Eigen::Index>(total * total), static_cast<Eigen::Index>(comp.size()));
    for (std::size_t k = 0; k < comp.size(); ++k) {
        basis.col(static_cast<Eigen::Index>(k)) = detail::vec(comp[k]);
    }
    const auto table = local_index_table(shape);
    const std::size_t m = shape.size();

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal;
    auto random_vec = [&](Eigen::Index n) {
        EVector v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(normal(rng), normal(rng));
        return v;
    };

    for (int restart = 0; restart < opts.restarts; ++restart) {
        EVector z = basis * random_vec(basis.cols());
        std::vector<EVector> factors;
        for (std::size_t i = 0; i < m; ++i) {
            factors.push_back(random_vec(static_cast<Eigen::Index>(shape[i].dim())));
        }
        for (int it = 0; it < opts.iters; ++it) {
            if (m == 2) {
                bipartite_product(z, table, factors);
            } else {
                for (int sweep = 0; sweep < 3; ++sweep) product_sweep(z, table, factors);
            }
            for (std::size_t i = 0; i < m; ++i) {
                factors[i] = flatten(detail::polar_unitary(as_square(factors[i], shape[i].rows)));
            }
            const EVector w = product_vec(factors, table);
            const EVector projected = basis * (basis.adjoint() * w);
            const double residual = (w - projected).norm() / w.norm();
            if (residual <= opts.tol.eps()) {
                std::vector<ComplexMatrix> local;
                for (std::size_t i = 0; i < m; ++i) {
                    local.push_back(detail::from_eigen(as_square(factors[i], shape[i].rows)));
                }
                ProductOperator cand(std::move(local), "unitary-witness");
                if (cand.is_unitary(opts.tol) && verify_witness(cand, set, opts.tol)) {
                    spdlog::debug("unitary_witness_search: found at restart {}, iter {}", restart,
                                  it);
                    return cand;
                }
            }
            z = projected;
        }
    }
    return std::nullopt;
}

Classification classify(const OperatorSet& set, const ClassifyOptions& opts) {
    const Tolerance tol = opts.search.tol;
    Classification c;
    c.is_product_set = true;
    c.is_all_unitary = set.shape().all_square() && set.all_unitary(tol);
    c.is_orthonormal = is_orthonormal(set, tol);
    c.upob = extendibility_search(set, opts.search);

    const bool unextendible = c.upob.status == ExtendibilityStatus::Unextendible;
    if (!unextendible && c.is_all_unitary && c.is_orthonormal &&
        set.shape().total_rows() <= kMaxUnitarySearchDim) {
        c.unitary_search_ran = true;
        c.unitary_witness = unitary_witness_search(set, opts.unitary);
    }

    if (c.is_orthonormal && unextendible) {
        c.verdict_labels.insert(kLabelUpob);
        if (c.is_all_unitary) c.verdict_labels.insert(kLabelStrongUpuob);
    }
    if (c.is_all_unitary && c.is_orthonormal &&
        (unextendible || (c.unitary_search_ran && !c.unitary_witness))) {
        c.verdict_labels.insert(kLabelUpuobEvidence);
    }
    return c;
}

}  // namespace upoblab
