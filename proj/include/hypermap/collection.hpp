#pragma once

#include "hypermap/permutation.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypermap {

namespace detail {

class UnionFind {
public:
    explicit UnionFind(std::size_t size) : parent_(size), rank_(size, 0)
    {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b) {
            return false;
        }
        if (rank_[a] < rank_[b]) {
            std::swap(a, b);
        }
        parent_[b] = a;
        if (rank_[a] == rank_[b]) {
            ++rank_[a];
        }
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<unsigned> rank_;
};

} // namespace detail

/// kappa(sigma, alpha): number of orbits of the group generated by sigma and alpha.
inline int orbit_count(const Permutation& sigma, const Permutation& alpha)
{
    if (sigma.size() != alpha.size()) {
        throw std::invalid_argument("orbit_count: size mismatch");
    }
    const int n = sigma.size();
    detail::UnionFind uf(static_cast<std::size_t>(n) + 1);
    int orbits = n;
    for (int i = 1; i <= n; ++i) {
        if (uf.unite(static_cast<std::size_t>(i), static_cast<std::size_t>(sigma(i)))) {
            --orbits;
        }
        if (uf.unite(static_cast<std::size_t>(i), static_cast<std::size_t>(alpha(i)))) {
            --orbits;
        }
    }
    return orbits;
}

/// Orbit label (0-based, numbered by smallest point) for every point; index 0 unused.
inline std::vector<int> orbit_labels(const Permutation& sigma, const Permutation& alpha)
{
    const int n = sigma.size();
    detail::UnionFind uf(static_cast<std::size_t>(n) + 1);
    for (int i = 1; i <= n; ++i) {
        uf.unite(static_cast<std::size_t>(i), static_cast<std::size_t>(sigma(i)));
        uf.unite(static_cast<std::size_t>(i), static_cast<std::size_t>(alpha(i)));
    }
    std::vector<int> label(static_cast<std::size_t>(n) + 1, -1);
    std::vector<int> root_label(static_cast<std::size_t>(n) + 1, -1);
    int next = 0;
    for (int i = 1; i <= n; ++i) {
        const std::size_t root = uf.find(static_cast<std::size_t>(i));
        if (root_label[root] < 0) {
            root_label[root] = next++;
        }
        label[static_cast<std::size_t>(i)] = root_label[root];
    }
    return label;
}

/// Twice the total genus, n + 2 kappa - z(sigma) - z(alpha) - z(alpha^-1 sigma).
/// Throws std::logic_error if the value is odd or negative (impossible for valid permutations).
inline int genus_of(const Permutation& sigma, const Permutation& alpha)
{
    const int n = sigma.size();
    const int twice = n + 2 * orbit_count(sigma, alpha) - sigma.cycle_count() - alpha.cycle_count() -
                      compose(alpha.inverse(), sigma).cycle_count();
    if (twice < 0 || twice % 2 != 0) {
        throw std::logic_error("genus formula produced " + std::to_string(twice) + "/2");
    }
    return twice / 2;
}

/// A pair (sigma, alpha) on a common ground set; a hypermap when kappa == 1.
/// sigma-cycles are vertices, alpha-cycles hyperedges, (alpha^-1 sigma)-cycles faces.
class HypermapCollection {
public:
    HypermapCollection() = default;

    HypermapCollection(Permutation sigma, Permutation alpha) : sigma_(std::move(sigma)), alpha_(std::move(alpha))
    {
        if (sigma_.size() != alpha_.size()) {
            throw std::invalid_argument("sigma and alpha act on different ground sets (" + std::to_string(sigma_.size()) +
                                        " vs " + std::to_string(alpha_.size()) + " points)");
        }
        kappa_ = orbit_count(sigma_, alpha_);
        genus_ = genus_of(sigma_, alpha_);
    }

    static HypermapCollection from_cycles(int n, const std::vector<Cycle>& sigma, const std::vector<Cycle>& alpha)
    {
        return {Permutation::from_cycles(n, sigma), Permutation::from_cycles(n, alpha)};
    }

    const Permutation& sigma() const noexcept { return sigma_; }
    const Permutation& alpha() const noexcept { return alpha_; }
    int size() const noexcept { return sigma_.size(); }
    int kappa() const noexcept { return kappa_; }
    int genus() const noexcept { return genus_; }
    bool is_hypermap() const noexcept { return kappa_ == 1; }

    /// alpha^-1 sigma.
    Permutation faces() const { return compose(alpha_.inverse(), sigma_); }

    friend bool operator==(const HypermapCollection& a, const HypermapCollection& b)
    {
        return a.sigma_ == b.sigma_ && a.alpha_ == b.alpha_;
    }

private:
    Permutation sigma_;
    Permutation alpha_;
    int kappa_ = 0;
    int genus_ = 0;
};

inline int orbit_count(const HypermapCollection& h) { return h.kappa(); }
inline int genus(const HypermapCollection& h) { return h.genus(); }

/// Applies the relabeling r to both permutations.
inline HypermapCollection relabel(const HypermapCollection& h, const Permutation& r)
{
    return {relabel(h.sigma(), r), relabel(h.alpha(), r)};
}

/// Places b's points after a's: point i of b becomes a.size() + i.
inline HypermapCollection disjoint_union(const HypermapCollection& a, const HypermapCollection& b)
{
    const int na = a.size();
    const int n = na + b.size();
    std::vector<Point> s(static_cast<std::size_t>(n)), al(static_cast<std::size_t>(n));
    for (int i = 1; i <= na; ++i) {
        s[static_cast<std::size_t>(i - 1)] = a.sigma()(i);
        al[static_cast<std::size_t>(i - 1)] = a.alpha()(i);
    }
    for (int i = 1; i <= b.size(); ++i) {
        s[static_cast<std::size_t>(na + i - 1)] = na + b.sigma()(i);
        al[static_cast<std::size_t>(na + i - 1)] = na + b.alpha()(i);
    }
    return {Permutation::from_images(s), Permutation::from_images(al)};
}

/// Relabeling-invariant key for the pair (sigma, alpha).
///
/// Each component is encoded by a breadth-first traversal from every start point
/// (children sigma(x) then alpha(x)), keeping the lexicographically least code; the
/// component codes are sorted and concatenated with length prefixes. For connected
/// collections the traversal from a fixed start determines the labeling, so equal
/// keys mean isomorphic collections.
using CanonicalKey = std::vector<std::uint16_t>;

inline CanonicalKey canonical_form(const HypermapCollection& h)
{
    const int n = h.size();
    const std::vector<int> comp = orbit_labels(h.sigma(), h.alpha());
    std::vector<std::vector<Point>> members(static_cast<std::size_t>(h.kappa()));
    for (int i = 1; i <= n; ++i) {
        members[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])].push_back(i);
    }

    std::vector<int> label(static_cast<std::size_t>(n) + 1, -1);
    std::vector<Point> order;
    order.reserve(static_cast<std::size_t>(n));
    std::vector<std::uint16_t> code, best;
    std::vector<CanonicalKey> comp_codes;
    comp_codes.reserve(members.size());

    for (const std::vector<Point>& pts : members) {
        best.clear();
        for (Point start : pts) {
            order.clear();
            order.push_back(start);
            label[static_cast<std::size_t>(start)] = 0;
            code.clear();
            bool worse = false;
            bool better = best.empty();
            for (std::size_t head = 0; head < order.size() && !worse; ++head) {
                const Point x = order[head];
                for (Point y : {h.sigma()(x), h.alpha()(x)}) {
                    if (label[static_cast<std::size_t>(y)] < 0) {
                        label[static_cast<std::size_t>(y)] = static_cast<int>(order.size());
                        order.push_back(y);
                    }
                    const auto symbol = static_cast<std::uint16_t>(label[static_cast<std::size_t>(y)]);
                    if (!better) {
                        const std::size_t pos = code.size();
                        if (symbol < best[pos]) {
                            better = true;
                        } else if (symbol > best[pos]) {
                            worse = true;
                            break;
                        }
                    }
                    code.push_back(symbol);
                }
            }
            for (Point p : order) {
                label[static_cast<std::size_t>(p)] = -1;
            }
            if (!worse && better) {
                best = code;
            }
        }
        comp_codes.push_back(best);
    }
    std::sort(comp_codes.begin(), comp_codes.end());

    CanonicalKey key;
    key.reserve(static_cast<std::size_t>(2 * n + h.kappa()));
    for (const CanonicalKey& c : comp_codes) {
        key.push_back(static_cast<std::uint16_t>(c.size() / 2));
        key.insert(key.end(), c.begin(), c.end());
    }
    return key;
}

struct CanonicalKeyHash {
    std::size_t operator()(const CanonicalKey& key) const noexcept
    {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (std::uint16_t s : key) {
            h = (h ^ s) * 0x100000001b3ULL;
        }
        return h;
    }
};

} // namespace hypermap
