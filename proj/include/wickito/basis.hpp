#pragma once

#include "wickito/chaos.hpp"
#include "wickito/multi_index.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace wickito {

// Every alpha with |alpha| <= max_order supported on modes 1..modes, stored
// in canonical order with adjacency tables for the dense kernels.
class MultiIndexSet {
public:
    // alpha_i = alpha_index + eps^(mode + 1)
    struct Link {
        std::uint32_t mode;  // 0-based
        std::uint32_t index;
    };
    struct Entry {
        std::uint32_t mode;  // 0-based
        std::uint32_t exponent;
    };

    MultiIndexSet(std::size_t max_order, std::size_t modes, std::size_t cap = kDefaultEnumerationCap);

    std::size_t size() const noexcept { return indices_.size(); }
    std::size_t max_order() const noexcept { return max_order_; }
    std::size_t modes() const noexcept { return modes_; }

    const MultiIndex& operator[](std::size_t i) const { return indices_[i]; }
    std::optional<std::size_t> find(const MultiIndex& alpha) const;

    // Entries of order q occupy [order_begin(q), order_begin(q + 1)).
    std::size_t order_begin(std::size_t q) const { return q > max_order_ ? size() : order_start_[q]; }
    std::uint32_t order(std::size_t i) const { return orders_[i]; }

    // Pairs (k, j) with alpha_j + eps^(k+1) = alpha_i.
    std::span<const Link> predecessors(std::size_t i) const {
        return {pred_.data() + pred_start_[i], pred_.data() + pred_start_[i + 1]};
    }
    // Index of alpha_i + eps^(mode+1); only for order(i) < max_order.
    std::uint32_t successor(std::size_t i, std::size_t mode) const { return succ_[i * modes_ + mode]; }

    // Nonzero entries of alpha_i.
    std::span<const Entry> support(std::size_t i) const {
        return {support_.data() + support_start_[i], support_.data() + support_start_[i + 1]};
    }

    // log (2N)^{alpha_i} = sum_j alpha_j log(2j), per element.
    std::span<const double> log_unit_weights() const noexcept { return log_unit_weight_; }
    double log_factorial(std::size_t i) const { return log_factorial_[i]; }

private:
    std::size_t max_order_;
    std::size_t modes_;
    std::vector<MultiIndex> indices_;
    std::unordered_map<MultiIndex, std::uint32_t, MultiIndexHash> lookup_;
    std::vector<std::size_t> order_start_;
    std::vector<std::uint32_t> orders_;
    std::vector<std::size_t> pred_start_;
    std::vector<Link> pred_;
    std::vector<std::uint32_t> succ_;
    std::vector<std::size_t> support_start_;
    std::vector<Entry> support_;
    std::vector<double> log_unit_weight_;
    std::vector<double> log_factorial_;
};

// Process-wide memo of bases keyed by (max_order, modes).
std::shared_ptr<const MultiIndexSet> shared_basis(std::size_t max_order, std::size_t modes);

// Dense coefficient array over a basis -> sparse vector with the given truncation.
ChaosVector to_sparse(const MultiIndexSet& basis, std::span<const double> x);

// Sparse -> dense; throws TruncationOverflow if a term is not in the basis.
std::vector<double> to_dense(const MultiIndexSet& basis, const ChaosVector& f);

// ||x||'_p over the basis.
double dual_norm(const MultiIndexSet& basis, std::span<const double> x, double p);

}  // namespace wickito
