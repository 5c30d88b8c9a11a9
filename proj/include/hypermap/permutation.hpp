#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypermap {

/// A point of the ground set {1, ..., n}.
using Point = int;
using Cycle = std::vector<Point>;

/// Bijection on the points 1..n.
///
/// Composition follows the right-to-left convention used for products like
/// alpha^-1 sigma: `compose(p, q)(i) == p(q(i))`, i.e. q acts first.
class Permutation {
public:
    Permutation() = default;

    static Permutation identity(int n)
    {
        if (n < 0) {
            throw std::invalid_argument("permutation size must be nonnegative");
        }
        Permutation p;
        p.image_.resize(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) {
            p.image_[static_cast<std::size_t>(i)] = i;
        }
        return p;
    }

    /// Builds from `images[i-1] = p(i)`. Throws unless the images form a bijection on 1..n.
    static Permutation from_images(std::span<const Point> images)
    {
        const int n = static_cast<int>(images.size());
        Permutation p = identity(n);
        std::vector<bool> hit(images.size() + 1, false);
        for (int i = 1; i <= n; ++i) {
            const Point target = images[static_cast<std::size_t>(i - 1)];
            if (target < 1 || target > n) {
                throw std::invalid_argument("image " + std::to_string(target) + " out of range 1.." + std::to_string(n));
            }
            if (hit[static_cast<std::size_t>(target)]) {
                throw std::invalid_argument("image " + std::to_string(target) + " repeated");
            }
            hit[static_cast<std::size_t>(target)] = true;
            p.image_[static_cast<std::size_t>(i)] = target;
        }
        return p;
    }

    /// Builds from disjoint cycles; points not mentioned are fixed.
    static Permutation from_cycles(int n, const std::vector<Cycle>& cycles)
    {
        Permutation p = identity(n);
        std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
        for (const Cycle& cycle : cycles) {
            for (std::size_t k = 0; k < cycle.size(); ++k) {
                const Point a = cycle[k];
                if (a < 1 || a > n) {
                    throw std::invalid_argument("point " + std::to_string(a) + " out of range 1.." + std::to_string(n));
                }
                if (seen[static_cast<std::size_t>(a)]) {
                    throw std::invalid_argument("point " + std::to_string(a) + " appears twice");
                }
                seen[static_cast<std::size_t>(a)] = true;
                p.image_[static_cast<std::size_t>(a)] = cycle[(k + 1) % cycle.size()];
            }
        }
        return p;
    }

    /// The transposition (i j); (i i) is the identity.
    static Permutation transposition(int n, Point i, Point j)
    {
        Permutation p = identity(n);
        p.check_point(i);
        p.check_point(j);
        std::swap(p.image_[static_cast<std::size_t>(i)], p.image_[static_cast<std::size_t>(j)]);
        return p;
    }

    int size() const noexcept { return image_.empty() ? 0 : static_cast<int>(image_.size()) - 1; }

    Point operator()(Point i) const { return image_[static_cast<std::size_t>(i)]; }

    Point at(Point i) const
    {
        check_point(i);
        return image_[static_cast<std::size_t>(i)];
    }

    Permutation inverse() const
    {
        Permutation r = *this;
        for (int i = 1; i <= size(); ++i) {
            r.image_[static_cast<std::size_t>(image_[static_cast<std::size_t>(i)])] = i;
        }
        return r;
    }

    bool is_identity() const noexcept
    {
        for (int i = 1; i <= size(); ++i) {
            if (image_[static_cast<std::size_t>(i)] != i) {
                return false;
            }
        }
        return true;
    }

    /// Cycles in canonical form: each starts at its minimum, sorted by minimum.
    /// Fixed points are included as 1-cycles.
    std::vector<Cycle> cycles() const
    {
        std::vector<Cycle> out;
        std::vector<bool> seen(image_.size(), false);
        for (int i = 1; i <= size(); ++i) {
            if (seen[static_cast<std::size_t>(i)]) {
                continue;
            }
            Cycle c;
            for (Point j = i; !seen[static_cast<std::size_t>(j)]; j = (*this)(j)) {
                seen[static_cast<std::size_t>(j)] = true;
                c.push_back(j);
            }
            out.push_back(std::move(c));
        }
        return out;
    }

    /// z(p): number of cycles, fixed points included.
    int cycle_count() const
    {
        int count = 0;
        std::vector<bool> seen(image_.size(), false);
        for (int i = 1; i <= size(); ++i) {
            if (seen[static_cast<std::size_t>(i)]) {
                continue;
            }
            ++count;
            for (Point j = i; !seen[static_cast<std::size_t>(j)]; j = (*this)(j)) {
                seen[static_cast<std::size_t>(j)] = true;
            }
        }
        return count;
    }

    /// For each point, the index of its cycle in `cycles()` order.
    std::vector<int> cycle_index() const
    {
        std::vector<int> index(image_.size(), -1);
        int next = 0;
        for (int i = 1; i <= size(); ++i) {
            if (index[static_cast<std::size_t>(i)] >= 0) {
                continue;
            }
            for (Point j = i; index[static_cast<std::size_t>(j)] < 0; j = (*this)(j)) {
                index[static_cast<std::size_t>(j)] = next;
            }
            ++next;
        }
        return index;
    }

    bool same_cycle(Point i, Point j) const
    {
        Point k = i;
        do {
            if (k == j) {
                return true;
            }
            k = (*this)(k);
        } while (k != i);
        return false;
    }

    /// Canonical cycle notation, e.g. "(1 4)(2 5)(3)". The empty permutation prints as "()".
    std::string to_string() const
    {
        if (size() == 0) {
            return "()";
        }
        std::string s;
        for (const Cycle& c : cycles()) {
            s += '(';
            for (std::size_t k = 0; k < c.size(); ++k) {
                if (k > 0) {
                    s += ' ';
                }
                s += std::to_string(c[k]);
            }
            s += ')';
        }
        return s;
    }

    std::vector<Point> images() const { return {image_.begin() + (image_.empty() ? 0 : 1), image_.end()}; }

    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
    void check_point(Point i) const
    {
        if (i < 1 || i > size()) {
            throw std::out_of_range("point " + std::to_string(i) + " out of range 1.." + std::to_string(size()));
        }
    }

    // image_[0] is unused so that points index directly.
    std::vector<Point> image_;
};

/// compose(p, q)(i) = p(q(i)).
inline Permutation compose(const Permutation& p, const Permutation& q)
{
    if (p.size() != q.size()) {
        throw std::invalid_argument("compose: size mismatch " + std::to_string(p.size()) + " vs " + std::to_string(q.size()));
    }
    std::vector<Point> images(static_cast<std::size_t>(p.size()));
    for (int i = 1; i <= p.size(); ++i) {
        images[static_cast<std::size_t>(i - 1)] = p(q(i));
    }
    return Permutation::from_images(images);
}

inline Permutation operator*(const Permutation& p, const Permutation& q)
{
    return compose(p, q);
}

/// Conjugates p by the relabeling r: the result maps r(i) to r(p(i)).
inline Permutation relabel(const Permutation& p, const Permutation& r)
{
    return r * p * r.inverse();
}

struct PermutationHash {
    std::size_t operator()(const Permutation& p) const noexcept
    {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (int i = 1; i <= p.size(); ++i) {
            h = (h ^ static_cast<std::size_t>(p(i))) * 0x100000001b3ULL;
        }
        return h;
    }
};

} // namespace hypermap
