#include "wickito/multi_index.hpp"

#include "wickito/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

namespace wickito {

MultiIndex::MultiIndex(std::initializer_list<value_type> entries) : entries_(entries) { trim(); }

MultiIndex::MultiIndex(std::vector<value_type> entries) : entries_(std::move(entries)) { trim(); }

MultiIndex MultiIndex::unit(std::size_t mode) {
    if (mode == 0) throw ParameterError("MultiIndex::unit: modes are numbered from 1");
    std::vector<value_type> e(mode, 0);
    e.back() = 1;
    return MultiIndex(std::move(e));
}

void MultiIndex::trim() {
    while (!entries_.empty() && entries_.back() == 0) entries_.pop_back();
}

std::uint64_t MultiIndex::order() const noexcept {
    return std::accumulate(entries_.begin(), entries_.end(), std::uint64_t{0});
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
    const auto oa = a.order();
    const auto ob = b.order();
    if (oa != ob) return oa <=> ob;
    const std::size_t n = std::max(a.length(), b.length());
    for (std::size_t j = 1; j <= n; ++j) {
        const auto x = a(j);
        const auto y = b(j);
        // larger leading entry sorts first
        if (x != y) return y <=> x;
    }
    return std::strong_ordering::equal;
}

std::string MultiIndex::to_string() const {
    if (entries_.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i) out.push_back(',');
        out += std::to_string(entries_[i]);
    }
    return out;
}

MultiIndex MultiIndex::parse(std::string_view text) {
    std::vector<value_type> e;
    auto is_space = [](char c) { return c == ' ' || c == '\t'; };
    while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
    while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
    if (text.empty()) return MultiIndex{};
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        std::string_view tok = text.substr(pos, comma == std::string_view::npos ? text.size() - pos : comma - pos);
        while (!tok.empty() && is_space(tok.front())) tok.remove_prefix(1);
        while (!tok.empty() && is_space(tok.back())) tok.remove_suffix(1);
        value_type v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
            throw ParameterError("MultiIndex::parse: bad entry '" + std::string(tok) + "'");
        e.push_back(v);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return MultiIndex(std::move(e));
}

std::size_t MultiIndex::hash() const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto v : entries_) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

std::uint64_t factorial(const MultiIndex& alpha) {
    std::uint64_t out = 1;
    for (auto a : alpha.entries()) {
        for (std::uint64_t i = 2; i <= a; ++i) {
            if (out > std::numeric_limits<std::uint64_t>::max() / i)
                throw TruncationOverflow("factorial: alpha! overflows 64 bits for alpha=" + alpha.to_string());
            out *= i;
        }
    }
    return out;
}

double log_factorial(const MultiIndex& alpha) {
    double s = 0.0;
    for (auto a : alpha.entries()) s += std::lgamma(static_cast<double>(a) + 1.0);
    return s;
}

double log_weight(const MultiIndex& alpha, double k) {
    double s = 0.0;
    const auto e = alpha.entries();
    for (std::size_t j = 0; j < e.size(); ++j) {
        if (e[j]) s += static_cast<double>(e[j]) * std::log(2.0 * static_cast<double>(j + 1));
    }
    return k * s;
}

double weight(const MultiIndex& alpha, double k) {
    const double lw = log_weight(alpha, k);
    if (std::abs(lw) > 600.0) return std::exp(lw);
    double out = 1.0;
    const auto e = alpha.entries();
    for (std::size_t j = 0; j < e.size(); ++j) {
        if (e[j]) out *= std::pow(2.0 * static_cast<double>(j + 1), k * static_cast<double>(e[j]));
    }
    return out;
}

MultiIndex add(const MultiIndex& a, const MultiIndex& b) {
    const auto ea = a.entries();
    const auto eb = b.entries();
    std::vector<MultiIndex::value_type> out(std::max(ea.size(), eb.size()), 0);
    for (std::size_t i = 0; i < ea.size(); ++i) out[i] += ea[i];
    for (std::size_t i = 0; i < eb.size(); ++i) out[i] += eb[i];
    return MultiIndex(std::move(out));
}

std::size_t count_indices(std::size_t max_order, std::size_t max_length) {
    // C(n + k, k) computed incrementally with saturation
    const std::size_t k = std::min(max_order, max_length);
    const std::size_t n = max_order + max_length;
    long double c = 1.0L;
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * static_cast<long double>(n - k + i) / static_cast<long double>(i);
        if (c > static_cast<long double>(std::numeric_limits<std::size_t>::max() / 2))
            return std::numeric_limits<std::size_t>::max();
    }
    return static_cast<std::size_t>(std::llround(static_cast<double>(c)));
}

namespace {

// Emit all compositions of `remaining` over positions [pos, len) in
// descending lexicographic order.
void compositions(std::vector<MultiIndex::value_type>& buf, std::size_t pos, std::uint32_t remaining,
                  std::vector<MultiIndex>& out) {
    if (pos + 1 == buf.size()) {
        buf[pos] = remaining;
        out.emplace_back(buf);
        buf[pos] = 0;
        return;
    }
    for (std::uint32_t v = remaining + 1; v-- > 0;) {
        buf[pos] = v;
        compositions(buf, pos + 1, remaining - v, out);
    }
    buf[pos] = 0;
}

}  // namespace

std::vector<MultiIndex> enumerate(std::size_t max_order, std::size_t max_length, std::size_t cap) {
    if (max_length < 1) throw ParameterError("enumerate: max_length must be >= 1");
    const std::size_t count = count_indices(max_order, max_length);
    if (count > cap)
        throw TruncationOverflow("enumerate: " + std::to_string(count) + " indices exceed cap " +
                                 std::to_string(cap));
    std::vector<MultiIndex> out;
    out.reserve(count);
    out.emplace_back();
    std::vector<MultiIndex::value_type> buf(max_length, 0);
    for (std::uint32_t q = 1; q <= max_order; ++q) compositions(buf, 0, q, out);
    return out;
}

}  // namespace wickito
