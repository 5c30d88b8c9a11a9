#pragma once

#include "hypermap/bigint.hpp"
#include "hypermap/collection.hpp"
#include "hypermap/permutation.hpp"

#include <cstddef>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hypermap {

/// A set partition of positions 0..m-1 as restricted-growth block labels
/// (block ids numbered in order of first occurrence).
using BlockLabels = std::vector<int>;

namespace detail {

inline void normalize_labels(BlockLabels& labels)
{
    std::vector<int> rename(labels.size(), -1);
    int next = 0;
    for (int& l : labels) {
        if (rename[static_cast<std::size_t>(l)] < 0) {
            rename[static_cast<std::size_t>(l)] = next++;
        }
        l = rename[static_cast<std::size_t>(l)];
    }
}

struct NcGenerator {
    using Interval = std::pair<int, int>; // half-open [lo, hi)

    BlockLabels labels;
    std::vector<BlockLabels> out;

    void emit(std::vector<Interval> pending, int next_id)
    {
        while (!pending.empty() && pending.back().first >= pending.back().second) {
            pending.pop_back();
        }
        if (pending.empty()) {
            BlockLabels copy = labels;
            normalize_labels(copy);
            out.push_back(std::move(copy));
            return;
        }
        const auto [lo, hi] = pending.back();
        pending.pop_back();
        labels[static_cast<std::size_t>(lo)] = next_id;
        grow(lo, hi, next_id, pending, next_id + 1);
    }

    // The block of `lo` currently ends at `last`; either close it or add a later member.
    void grow(int last, int hi, int id, const std::vector<Interval>& pending, int next_id)
    {
        {
            std::vector<Interval> p = pending;
            p.emplace_back(last + 1, hi);
            emit(std::move(p), next_id);
        }
        for (int j = last + 1; j < hi; ++j) {
            labels[static_cast<std::size_t>(j)] = id;
            std::vector<Interval> p = pending;
            p.emplace_back(last + 1, j);
            grow(j, hi, id, p, next_id);
        }
    }
};

} // namespace detail

/// All noncrossing partitions of {0..m-1}, in deterministic order; Catalan(m) of them.
/// Built by fixing the block of the minimum element and recursing on the gaps it leaves.
inline std::vector<BlockLabels> generate_noncrossing_partitions(int m)
{
    if (m < 0) {
        throw std::invalid_argument("negative partition size");
    }
    detail::NcGenerator gen;
    gen.labels.assign(static_cast<std::size_t>(m), -1);
    gen.emit({{0, m}}, 0);
    std::sort(gen.out.begin(), gen.out.end());
    return gen.out;
}

/// Cached copy of generate_noncrossing_partitions(m).
inline const std::vector<BlockLabels>& noncrossing_partitions(int m)
{
    static std::mutex mutex;
    static std::map<int, std::vector<BlockLabels>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(m);
    if (it == cache.end()) {
        it = cache.emplace(m, generate_noncrossing_partitions(m)).first;
    }
    return it->second;
}

/// The refinements of one permutation, indexed as a mixed-radix product of the
/// per-cycle noncrossing partitions.
///
/// Each block of a partition of a cycle (c0 c1 ... c_{m-1}), c0 its minimum, becomes
/// the cycle visiting its points in the order they occur along the parent cycle.
class RefinementSpace {
public:
    explicit RefinementSpace(const Permutation& alpha) : alpha_(alpha), cycles_(alpha.cycles())
    {
        options_.reserve(cycles_.size());
        for (const Cycle& c : cycles_) {
            const int m = static_cast<int>(c.size());
            std::vector<std::vector<int>> succ_per_partition;
            for (const BlockLabels& labels : noncrossing_partitions(m)) {
                // successor position of each position inside its block
                std::vector<int> succ(static_cast<std::size_t>(m));
                std::vector<int> first(static_cast<std::size_t>(m), -1), last(static_cast<std::size_t>(m), -1);
                for (int p = 0; p < m; ++p) {
                    const int b = labels[static_cast<std::size_t>(p)];
                    if (first[static_cast<std::size_t>(b)] < 0) {
                        first[static_cast<std::size_t>(b)] = p;
                    } else {
                        succ[static_cast<std::size_t>(last[static_cast<std::size_t>(b)])] = p;
                    }
                    last[static_cast<std::size_t>(b)] = p;
                }
                for (int b = 0; b < m; ++b) {
                    if (first[static_cast<std::size_t>(b)] >= 0) {
                        succ[static_cast<std::size_t>(last[static_cast<std::size_t>(b)])] = first[static_cast<std::size_t>(b)];
                    }
                }
                succ_per_partition.push_back(std::move(succ));
            }
            options_.push_back(std::move(succ_per_partition));
        }
    }

    const Permutation& parent() const noexcept { return alpha_; }

    BigInt count() const
    {
        BigInt total = 1;
        for (const auto& o : options_) {
            total *= o.size();
        }
        return total;
    }

    /// count() as a machine integer; throws SizeLimitError above `cap`.
    std::uint64_t checked_count(std::uint64_t cap) const
    {
        const BigInt total = count();
        if (total > cap) {
            throw SizeLimitError("refinement count " + total.str() + " exceeds cap " + std::to_string(cap));
        }
        return static_cast<std::uint64_t>(total);
    }

    /// Mixed-radix digits -> refinement.
    Permutation at_digits(const std::vector<std::size_t>& digits) const
    {
        std::vector<Point> images(static_cast<std::size_t>(alpha_.size()));
        for (std::size_t k = 0; k < cycles_.size(); ++k) {
            const Cycle& c = cycles_[k];
            const std::vector<int>& succ = options_[k][digits[k]];
            for (std::size_t p = 0; p < c.size(); ++p) {
                images[static_cast<std::size_t>(c[p] - 1)] = c[static_cast<std::size_t>(succ[p])];
            }
        }
        return Permutation::from_images(images);
    }

    Permutation at(std::uint64_t index) const
    {
        std::vector<std::size_t> digits(cycles_.size());
        for (std::size_t k = 0; k < cycles_.size(); ++k) {
            const std::size_t radix = options_[k].size();
            digits[k] = static_cast<std::size_t>(index % radix);
            index /= radix;
        }
        return at_digits(digits);
    }

    /// Calls fn(beta) for every refinement, the first cycle's choice varying fastest.
    template <class Fn>
    void for_each(Fn&& fn) const
    {
        std::vector<std::size_t> digits(cycles_.size(), 0);
        while (true) {
            fn(at_digits(digits));
            std::size_t k = 0;
            while (k < digits.size()) {
                if (++digits[k] < options_[k].size()) {
                    break;
                }
                digits[k] = 0;
                ++k;
            }
            if (k == digits.size()) {
                return;
            }
        }
    }

private:
    Permutation alpha_;
    std::vector<Cycle> cycles_;
    std::vector<std::vector<std::vector<int>>> options_;
};

inline constexpr std::uint64_t kDefaultRefinementCap = 1'000'000;

template <class Fn>
void for_each_refinement(const Permutation& alpha, Fn&& fn)
{
    RefinementSpace(alpha).for_each(std::forward<Fn>(fn));
}

inline BigInt refinement_count(const Permutation& alpha)
{
    return RefinementSpace(alpha).count();
}

/// Every beta <= alpha exactly once.
inline std::vector<Permutation> refinements(const Permutation& alpha, std::uint64_t cap = kDefaultRefinementCap)
{
    const RefinementSpace space(alpha);
    std::vector<Permutation> out;
    out.reserve(space.checked_count(cap));
    space.for_each([&](const Permutation& beta) { out.push_back(beta); });
    return out;
}

/// beta <= alpha: every beta-cycle lies inside an alpha-cycle and each restricted pair
/// (alpha_i, beta_i) has genus 0.
inline bool is_refinement(const Permutation& beta, const Permutation& alpha)
{
    if (beta.size() != alpha.size()) {
        return false;
    }
    const std::vector<int> index = alpha.cycle_index();
    for (int i = 1; i <= alpha.size(); ++i) {
        if (index[static_cast<std::size_t>(i)] != index[static_cast<std::size_t>(beta(i))]) {
            return false;
        }
    }
    // With containment, kappa(alpha, beta) = z(alpha) and the total genus is the sum of
    // the per-cycle genera, each nonnegative.
    return genus_of(alpha, beta) == 0;
}

namespace detail {

inline std::vector<Permutation> interval_unchecked(const Permutation& beta, const Permutation& alpha)
{
    std::vector<Permutation> out;
    for_each_refinement(alpha, [&](const Permutation& gamma) {
        if (is_refinement(beta, gamma)) {
            out.push_back(gamma);
        }
    });
    return out;
}

inline void require_refinement(const Permutation& beta, const Permutation& alpha, const char* what)
{
    if (!is_refinement(beta, alpha)) {
        throw std::invalid_argument(std::string(what) + ": " + beta.to_string() + " is not a refinement of " +
                                    alpha.to_string());
    }
}

} // namespace detail

/// All gamma with beta <= gamma <= alpha.
inline std::vector<Permutation> interval(const Permutation& beta, const Permutation& alpha)
{
    detail::require_refinement(beta, alpha, "interval");
    return detail::interval_unchecked(beta, alpha);
}

/// Restriction of beta <= alpha to one alpha-cycle, relabeled so the cycle reads (1 2 ... m).
inline std::pair<Permutation, Permutation> restrict_to_cycle(const Permutation& beta, const Cycle& cycle)
{
    const int m = static_cast<int>(cycle.size());
    std::vector<int> position(static_cast<std::size_t>(beta.size()) + 1, -1);
    for (int p = 0; p < m; ++p) {
        position[static_cast<std::size_t>(cycle[static_cast<std::size_t>(p)])] = p;
    }
    std::vector<Point> parent(static_cast<std::size_t>(m)), local(static_cast<std::size_t>(m));
    for (int p = 0; p < m; ++p) {
        parent[static_cast<std::size_t>(p)] = (p + 1) % m + 1;
        local[static_cast<std::size_t>(p)] = position[static_cast<std::size_t>(beta(cycle[static_cast<std::size_t>(p)]))] + 1;
    }
    return {Permutation::from_images(parent), Permutation::from_images(local)};
}

/// Memoized Moebius function of refinement intervals, keyed on the isomorphism class of
/// the pair (alpha, beta). Safe for concurrent use.
class MobiusTable {
public:
    /// mu(beta, alpha) straight from the recursive definition over the whole interval:
    /// mu(beta, beta) = 1 and the sum of mu(beta, gamma) over [beta, alpha] vanishes.
    BigInt recursive(const Permutation& beta, const Permutation& alpha)
    {
        detail::require_refinement(beta, alpha, "mobius");
        return recurse(beta, alpha);
    }

    /// mu(beta, alpha) as the product over the alpha-cycles of the recursively computed
    /// Moebius function of each restricted interval.
    BigInt operator()(const Permutation& beta, const Permutation& alpha)
    {
        detail::require_refinement(beta, alpha, "mobius");
        BigInt result = 1;
        for (const Cycle& c : alpha.cycles()) {
            if (c.size() == 1) {
                continue;
            }
            const auto [local_alpha, local_beta] = restrict_to_cycle(beta, c);
            result *= recurse(local_beta, local_alpha);
            if (result == 0) {
                break;
            }
        }
        return result;
    }

    std::size_t size() const
    {
        std::shared_lock lock(mutex_);
        return memo_.size();
    }

private:
    BigInt recurse(const Permutation& beta, const Permutation& alpha)
    {
        if (beta == alpha) {
            return 1;
        }
        const CanonicalKey key = canonical_form(HypermapCollection(alpha, beta));
        {
            std::shared_lock lock(mutex_);
            if (auto it = memo_.find(key); it != memo_.end()) {
                return it->second;
            }
        }
        BigInt sum = 0;
        for (const Permutation& gamma : detail::interval_unchecked(beta, alpha)) {
            if (gamma != alpha) {
                sum += recurse(beta, gamma);
            }
        }
        const BigInt value = -sum;
        std::unique_lock lock(mutex_);
        memo_.emplace(key, value);
        return value;
    }

    mutable std::shared_mutex mutex_;
    std::unordered_map<CanonicalKey, BigInt, CanonicalKeyHash> memo_;
};

inline MobiusTable& default_mobius_table()
{
    static MobiusTable table;
    return table;
}

/// Moebius function of [beta, alpha] in the refinement order.
inline BigInt mobius(const Permutation& beta, const Permutation& alpha)
{
    return default_mobius_table()(beta, alpha);
}

} // namespace hypermap
