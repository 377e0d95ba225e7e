#include "wickito/basis.hpp"

#include "wickito/errors.hpp"
#include "wickito/kernels.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>

namespace wickito {

MultiIndexSet::MultiIndexSet(std::size_t max_order, std::size_t modes, std::size_t cap)
    : max_order_(max_order), modes_(modes) {
    if (modes == 0) throw ParameterError("MultiIndexSet: need at least one mode");
    indices_ = enumerate(max_order, modes, cap);
    if (indices_.size() >= std::numeric_limits<std::uint32_t>::max())
        throw TruncationOverflow("MultiIndexSet: too many indices");
    const std::size_t n = indices_.size();
    lookup_.reserve(n);
    orders_.resize(n);
    order_start_.assign(max_order + 1, n);
    for (std::size_t i = 0; i < n; ++i) {
        lookup_.emplace(indices_[i], static_cast<std::uint32_t>(i));
        orders_[i] = static_cast<std::uint32_t>(indices_[i].order());
    }
    for (std::size_t i = n; i-- > 0;) order_start_[orders_[i]] = i;

    std::vector<double> log_mode(modes);
    for (std::size_t k = 0; k < modes; ++k) log_mode[k] = std::log(2.0 * static_cast<double>(k + 1));

    support_start_.assign(n + 1, 0);
    pred_start_.assign(n + 1, 0);
    log_unit_weight_.resize(n);
    log_factorial_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto e = indices_[i].entries();
        double lw = 0.0;
        double lf = 0.0;
        for (std::size_t j = 0; j < e.size(); ++j) {
            if (e[j] == 0) continue;
            support_.push_back({static_cast<std::uint32_t>(j), e[j]});
            lw += e[j] * log_mode[j];
            lf += std::lgamma(e[j] + 1.0);
        }
        support_start_[i + 1] = support_.size();
        log_unit_weight_[i] = lw;
        log_factorial_[i] = lf;
    }

    // predecessors: one per nonzero entry
    pred_.reserve(support_.size());
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<MultiIndex::value_type> e(indices_[i].entries().begin(), indices_[i].entries().end());
        for (const auto& s : support(i)) {
            --e[s.mode];
            const auto it = lookup_.find(MultiIndex(e));
            ++e[s.mode];
            pred_.push_back({s.mode, it->second});
        }
        pred_start_[i + 1] = pred_.size();
    }

    // successors for the lower orders
    const std::size_t lower = order_begin(max_order);
    succ_.assign(lower * modes, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& p : predecessors(i)) succ_[static_cast<std::size_t>(p.index) * modes + p.mode] =
            static_cast<std::uint32_t>(i);
    }
}

std::optional<std::size_t> MultiIndexSet::find(const MultiIndex& alpha) const {
    const auto it = lookup_.find(alpha);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
}

std::shared_ptr<const MultiIndexSet> shared_basis(std::size_t max_order, std::size_t modes) {
    static std::mutex mu;
    static std::map<std::pair<std::size_t, std::size_t>, std::weak_ptr<const MultiIndexSet>> memo;
    std::lock_guard lock(mu);
    auto& slot = memo[{max_order, modes}];
    if (auto p = slot.lock()) return p;
    auto p = std::make_shared<const MultiIndexSet>(max_order, modes);
    slot = p;
    return p;
}

ChaosVector to_sparse(const MultiIndexSet& basis, std::span<const double> x) {
    if (x.size() != basis.size()) throw ParameterError("to_sparse: size mismatch");
    std::vector<ChaosVector::Term> terms;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0.0) terms.push_back({basis[i], x[i]});
    return ChaosVector(std::move(terms), {basis.max_order(), basis.modes()});
}

std::vector<double> to_dense(const MultiIndexSet& basis, const ChaosVector& f) {
    std::vector<double> x(basis.size(), 0.0);
    for (const auto& t : f.terms()) {
        const auto i = basis.find(t.alpha);
        if (!i) throw TruncationOverflow("to_dense: index " + t.alpha.to_string() + " outside the basis");
        x[*i] = t.coeff;
    }
    return x;
}

double dual_norm(const MultiIndexSet& basis, std::span<const double> x, double p) {
    if (x.size() != basis.size()) throw ParameterError("dual_norm: size mismatch");
    return std::sqrt(kernels::omp::weighted_sq_norm(x, basis.log_unit_weights(), p));
}

}  // namespace wickito
