#pragma once

#include "hypermap/collection.hpp"
#include "hypermap/nc_lattice.hpp"
#include "hypermap/polynomial.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hypermap {

/// Arithmetic in GF(q) for a prime q, on representatives 0..q-1.
class PrimeField {
public:
    explicit PrimeField(int q) : q_(q)
    {
        if (q < 2) {
            throw std::invalid_argument("field size must be a prime, got " + std::to_string(q));
        }
        for (int d = 2; d * d <= q; ++d) {
            if (q % d == 0) {
                throw std::invalid_argument("field size must be a prime, got " + std::to_string(q));
            }
        }
    }

    int order() const noexcept { return q_; }
    int reduce(long long x) const { return static_cast<int>(((x % q_) + q_) % q_); }
    int add(int a, int b) const { return reduce(static_cast<long long>(a) + b); }
    int sub(int a, int b) const { return reduce(static_cast<long long>(a) - b); }
    int mul(int a, int b) const { return reduce(static_cast<long long>(a) * b); }
    int neg(int a) const { return reduce(-static_cast<long long>(a)); }

    int inv(int a) const
    {
        a = reduce(a);
        if (a == 0) {
            throw std::domain_error("inverse of 0 in GF(" + std::to_string(q_) + ")");
        }
        // Fermat: a^(q-2).
        int result = 1;
        int base = a;
        for (int e = q_ - 2; e > 0; e >>= 1) {
            if (e & 1) {
                result = mul(result, base);
            }
            base = mul(base, base);
        }
        return result;
    }

private:
    int q_;
};

/// chi(sigma, alpha; t) = sum over beta <= alpha of mu(id, beta) t^(kappa(sigma,beta) - kappa(sigma,alpha)).
inline UnivariatePolynomial characteristic_polynomial(const HypermapCollection& h, std::uint64_t cap = kDefaultRefinementCap)
{
    const RefinementSpace space(h.alpha());
    space.checked_count(cap);
    const Permutation id = Permutation::identity(h.size());
    UnivariatePolynomial chi;
    space.for_each([&](const Permutation& beta) {
        chi.add_term({orbit_count(h.sigma(), beta) - h.kappa()}, mobius(id, beta));
    });
    return chi;
}

/// X([alpha1, alpha2]; t) = sum over beta in [alpha1, alpha2] of mu(alpha1, beta) t^kappa(sigma,beta).
inline UnivariatePolynomial x_interval(const HypermapCollection& h, const Permutation& alpha1, const Permutation& alpha2)
{
    detail::require_refinement(alpha2, h.alpha(), "x_interval: alpha2");
    detail::require_refinement(alpha1, alpha2, "x_interval: alpha1");
    UnivariatePolynomial x;
    for (const Permutation& beta : detail::interval_unchecked(alpha1, alpha2)) {
        x.add_term({orbit_count(h.sigma(), beta)}, mobius(alpha1, beta));
    }
    return x;
}

/// C(sigma, alpha; t) = sum over beta <= alpha of mu(beta, alpha) t^(n + kappa(sigma,beta) - z(beta) - z(sigma)).
inline UnivariatePolynomial flow_polynomial(const HypermapCollection& h, std::uint64_t cap = kDefaultRefinementCap)
{
    const RefinementSpace space(h.alpha());
    space.checked_count(cap);
    const int base = h.size() - h.sigma().cycle_count();
    UnivariatePolynomial c;
    space.for_each([&](const Permutation& beta) {
        c.add_term({base + orbit_count(h.sigma(), beta) - beta.cycle_count()}, mobius(beta, h.alpha()));
    });
    return c;
}

namespace detail {

// Calls fn(color) for every assignment of m colors to the sigma-cycles; color is
// indexed by point.
template <class Fn>
void for_each_vertex_coloring(const HypermapCollection& h, int m, std::uint64_t cap, Fn&& fn)
{
    if (m < 0) {
        throw std::invalid_argument("number of colors must be nonnegative");
    }
    const int vertices = h.sigma().cycle_count();
    if (ipow(BigInt(m), static_cast<unsigned>(vertices)) > cap) {
        throw SizeLimitError("more than " + std::to_string(cap) + " vertex colorings");
    }
    if (m == 0 && vertices > 0) {
        return;
    }
    const std::vector<int> vertex = h.sigma().cycle_index();
    std::vector<int> vcolor(static_cast<std::size_t>(vertices), 0);
    std::vector<int> color(static_cast<std::size_t>(h.size()) + 1, 0);
    while (true) {
        for (Point i = 1; i <= h.size(); ++i) {
            color[static_cast<std::size_t>(i)] = vcolor[static_cast<std::size_t>(vertex[static_cast<std::size_t>(i)])];
        }
        fn(static_cast<const std::vector<int>&>(color));
        std::size_t k = 0;
        for (; k < vcolor.size(); ++k) {
            if (++vcolor[k] < m) {
                break;
            }
            vcolor[k] = 0;
        }
        if (k == vcolor.size()) {
            return;
        }
    }
}

} // namespace detail

/// m-colorings of the vertices in which the points of every alpha-cycle see pairwise
/// distinct colors. Exhaustive.
inline BigInt proper_coloring_count(const HypermapCollection& h, int m, std::uint64_t cap = kDefaultRefinementCap)
{
    const std::vector<Cycle> edges = h.alpha().cycles();
    BigInt count = 0;
    detail::for_each_vertex_coloring(h, m, cap, [&](const std::vector<int>& color) {
        for (const Cycle& e : edges) {
            for (std::size_t a = 0; a < e.size(); ++a) {
                for (std::size_t b = a + 1; b < e.size(); ++b) {
                    if (color[static_cast<std::size_t>(e[a])] == color[static_cast<std::size_t>(e[b])]) {
                        return;
                    }
                }
            }
        }
        ++count;
    });
    return count;
}

/// (alpha1, alpha)-compatible m-colorings: two points of one alpha-cycle get equal
/// colors exactly when they share an alpha1-cycle. Exhaustive.
inline BigInt compatible_coloring_count(const HypermapCollection& h, const Permutation& alpha1, int m,
                                        std::uint64_t cap = kDefaultRefinementCap)
{
    detail::require_refinement(alpha1, h.alpha(), "compatible_coloring_count: alpha1");
    const std::vector<Cycle> edges = h.alpha().cycles();
    const std::vector<int> block = alpha1.cycle_index();
    BigInt count = 0;
    detail::for_each_vertex_coloring(h, m, cap, [&](const std::vector<int>& color) {
        for (const Cycle& e : edges) {
            for (std::size_t a = 0; a < e.size(); ++a) {
                for (std::size_t b = a + 1; b < e.size(); ++b) {
                    const bool same_block = block[static_cast<std::size_t>(e[a])] == block[static_cast<std::size_t>(e[b])];
                    const bool same_color = color[static_cast<std::size_t>(e[a])] == color[static_cast<std::size_t>(e[b])];
                    if (same_block != same_color) {
                        return;
                    }
                }
            }
        }
        ++count;
    });
    return count;
}

using Flow = std::vector<int>; // indexed by point, entry 0 unused

struct FlowSpace {
    int q = 2;
    int dimension = 0;
    std::vector<Flow> basis;
};

/// Flows over GF(q): f with zero sum over every cycle of sigma and of alpha.
inline bool is_flow(const HypermapCollection& h, const Flow& f, int q)
{
    const PrimeField field(q);
    if (f.size() != static_cast<std::size_t>(h.size()) + 1) {
        throw std::invalid_argument("flow has wrong length");
    }
    for (const Permutation* p : {&h.sigma(), &h.alpha()}) {
        for (const Cycle& c : p->cycles()) {
            int sum = 0;
            for (Point i : c) {
                sum = field.add(sum, field.reduce(f[static_cast<std::size_t>(i)]));
            }
            if (sum != 0) {
                return false;
            }
        }
    }
    return true;
}

/// Nullspace of the cycle-sum constraints over GF(q) by Gaussian elimination. The
/// dimension is checked against n + kappa - z(sigma) - z(alpha).
inline FlowSpace flow_space(const HypermapCollection& h, int q)
{
    const PrimeField field(q);
    const int n = h.size();
    std::vector<std::vector<int>> rows;
    for (const Permutation* p : {&h.sigma(), &h.alpha()}) {
        for (const Cycle& c : p->cycles()) {
            std::vector<int> row(static_cast<std::size_t>(n), 0);
            for (Point i : c) {
                row[static_cast<std::size_t>(i - 1)] = 1;
            }
            rows.push_back(std::move(row));
        }
    }

    std::vector<int> pivot_col;
    std::size_t rank = 0;
    for (int col = 0; col < n && rank < rows.size(); ++col) {
        std::size_t pick = rank;
        while (pick < rows.size() && rows[pick][static_cast<std::size_t>(col)] == 0) {
            ++pick;
        }
        if (pick == rows.size()) {
            continue;
        }
        std::swap(rows[rank], rows[pick]);
        const int scale = field.inv(rows[rank][static_cast<std::size_t>(col)]);
        for (int& x : rows[rank]) {
            x = field.mul(x, scale);
        }
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const int factor = rows[r][static_cast<std::size_t>(col)];
            if (r == rank || factor == 0) {
                continue;
            }
            for (int k = 0; k < n; ++k) {
                rows[r][static_cast<std::size_t>(k)] =
                    field.sub(rows[r][static_cast<std::size_t>(k)], field.mul(factor, rows[rank][static_cast<std::size_t>(k)]));
            }
        }
        pivot_col.push_back(col);
        ++rank;
    }

    FlowSpace space;
    space.q = q;
    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    for (int c : pivot_col) {
        is_pivot[static_cast<std::size_t>(c)] = true;
    }
    for (int free = 0; free < n; ++free) {
        if (is_pivot[static_cast<std::size_t>(free)]) {
            continue;
        }
        Flow f(static_cast<std::size_t>(n) + 1, 0);
        f[static_cast<std::size_t>(free + 1)] = 1;
        for (std::size_t r = 0; r < pivot_col.size(); ++r) {
            f[static_cast<std::size_t>(pivot_col[r] + 1)] = field.neg(rows[r][static_cast<std::size_t>(free)]);
        }
        space.basis.push_back(std::move(f));
    }
    space.dimension = static_cast<int>(space.basis.size());

    const int expected = n + h.kappa() - h.sigma().cycle_count() - h.alpha().cycle_count();
    if (space.dimension != expected) {
        throw std::logic_error("flow space has dimension " + std::to_string(space.dimension) + ", expected " +
                               std::to_string(expected));
    }
    return space;
}

/// Calls fn(f) for each of the q^dim flows.
template <class Fn>
void for_each_flow(const HypermapCollection& h, int q, std::uint64_t cap, Fn&& fn)
{
    const FlowSpace space = flow_space(h, q);
    if (ipow(BigInt(q), static_cast<unsigned>(space.dimension)) > cap) {
        throw SizeLimitError("flow space has more than " + std::to_string(cap) + " elements");
    }
    const PrimeField field(q);
    std::vector<int> coeff(static_cast<std::size_t>(space.dimension), 0);
    Flow f(static_cast<std::size_t>(h.size()) + 1, 0);
    while (true) {
        std::fill(f.begin(), f.end(), 0);
        for (std::size_t b = 0; b < coeff.size(); ++b) {
            if (coeff[b] == 0) {
                continue;
            }
            for (std::size_t i = 1; i < f.size(); ++i) {
                f[i] = field.add(f[i], field.mul(coeff[b], space.basis[b][i]));
            }
        }
        fn(static_cast<const Flow&>(f));
        std::size_t k = 0;
        for (; k < coeff.size(); ++k) {
            if (++coeff[k] < q) {
                break;
            }
            coeff[k] = 0;
        }
        if (k == coeff.size()) {
            return;
        }
    }
}

inline constexpr std::uint64_t kDefaultFlowCap = 1'000'000;

inline BigInt flow_count(const HypermapCollection& h, int q)
{
    return ipow(BigInt(q), static_cast<unsigned>(flow_space(h, q).dimension));
}

/// f vanishes only at fixed points (buds) of alpha.
inline bool is_nowhere_zero(const HypermapCollection& h, const Flow& f)
{
    for (Point i = 1; i <= h.size(); ++i) {
        if (f[static_cast<std::size_t>(i)] == 0 && h.alpha()(i) != i) {
            return false;
        }
    }
    return true;
}

inline BigInt nowhere_zero_flow_count(const HypermapCollection& h, int q, std::uint64_t cap = kDefaultFlowCap)
{
    BigInt count = 0;
    for_each_flow(h, q, cap, [&](const Flow& f) {
        if (is_nowhere_zero(h, f)) {
            ++count;
        }
    });
    return count;
}

/// Turns every zero point of f into a bud, alpha <- alpha (alpha^-1(i) i), visiting the
/// points in `order` (default 1..n). Needs alpha-cycles of length <= 3 and f a flow.
inline Permutation unique_nz_refinement(const HypermapCollection& h, const Flow& f, int q,
                                        const std::optional<std::vector<Point>>& order = std::nullopt)
{
    for (const Cycle& c : h.alpha().cycles()) {
        if (c.size() > 3) {
            throw std::invalid_argument("unique_nz_refinement needs alpha-cycles of length <= 3");
        }
    }
    if (!is_flow(h, f, q)) {
        throw std::invalid_argument("unique_nz_refinement: assignment is not a flow");
    }
    std::vector<Point> visit;
    if (order) {
        visit = *order;
    } else {
        for (Point i = 1; i <= h.size(); ++i) {
            visit.push_back(i);
        }
    }
    const PrimeField field(q);
    Permutation beta = h.alpha();
    for (Point i : visit) {
        if (field.reduce(f.at(static_cast<std::size_t>(i))) != 0 || beta(i) == i) {
            continue;
        }
        beta = beta * Permutation::transposition(h.size(), beta.inverse()(i), i);
    }
    return beta;
}

} // namespace hypermap
