#pragma once

#include "hypermap/collection.hpp"
#include "hypermap/nc_lattice.hpp"
#include "hypermap/polynomial.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hypermap {

enum class WhitneyMethod { BruteForce, PhiRecurrence, PsiRecurrence };

inline std::string to_string(WhitneyMethod m)
{
    switch (m) {
    case WhitneyMethod::BruteForce:
        return "brute";
    case WhitneyMethod::PhiRecurrence:
        return "phi";
    case WhitneyMethod::PsiRecurrence:
        return "psi";
    }
    return "?";
}

struct WhitneyStats {
    std::uint64_t nodes = 0;
    std::uint64_t memo_hits = 0;
    std::uint64_t memo_entries = 0;
    std::uint64_t refinements = 0;
    /// Branch weights seen, indexed 1, u, v, uv.
    std::array<std::uint64_t, 4> weights{};
};

struct WhitneyResult {
    BivariatePolynomial polynomial;
    WhitneyMethod method = WhitneyMethod::BruteForce;
    WhitneyStats stats;
};

struct BruteForceOptions {
    std::uint64_t refinement_cap = kDefaultRefinementCap;
    unsigned threads = 1;
};

namespace detail {

using ExponentCounts = std::map<std::pair<int, int>, std::uint64_t>;

inline void accumulate_refinement(const HypermapCollection& h, const Permutation& beta, ExponentCounts& counts)
{
    const int k_beta = orbit_count(h.sigma(), beta);
    const int eu = k_beta - h.kappa();
    const int ev = k_beta + h.size() - beta.cycle_count() - h.sigma().cycle_count();
    ++counts[{eu, ev}];
}

inline BivariatePolynomial to_polynomial(const ExponentCounts& counts)
{
    BivariatePolynomial p;
    for (const auto& [e, c] : counts) {
        p.add_term({e.first, e.second}, c);
    }
    return p;
}

} // namespace detail

/// R(sigma, alpha; u, v) as the sum over beta <= alpha of
/// u^(kappa(sigma,beta) - kappa(sigma,alpha)) v^(kappa(sigma,beta) + n - z(beta) - z(sigma)).
inline WhitneyResult whitney_bruteforce_result(const HypermapCollection& h, const BruteForceOptions& options = {})
{
    const RefinementSpace space(h.alpha());
    const std::uint64_t total = space.checked_count(options.refinement_cap);
    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(std::min<std::uint64_t>(total, 64))));

    detail::ExponentCounts counts;
    if (threads == 1) {
        space.for_each([&](const Permutation& beta) { detail::accumulate_refinement(h, beta, counts); });
    } else {
        std::vector<detail::ExponentCounts> partial(threads);
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                const std::uint64_t lo = total * t / threads;
                const std::uint64_t hi = total * (t + 1) / threads;
                for (std::uint64_t i = lo; i < hi; ++i) {
                    detail::accumulate_refinement(h, space.at(i), partial[t]);
                }
            });
        }
        for (std::thread& th : pool) {
            th.join();
        }
        for (const detail::ExponentCounts& part : partial) {
            for (const auto& [e, c] : part) {
                counts[e] += c;
            }
        }
    }
    WhitneyResult result;
    result.polynomial = detail::to_polynomial(counts);
    result.method = WhitneyMethod::BruteForce;
    result.stats.refinements = total;
    return result;
}

inline BivariatePolynomial whitney_bruteforce(const HypermapCollection& h, const BruteForceOptions& options = {})
{
    return whitney_bruteforce_result(h, options).polynomial;
}

/// The alpha-cycle of length >= 2 containing the smallest such point, starting at that
/// point; nullopt when alpha is the identity.
inline std::optional<Cycle> pivot_cycle(const HypermapCollection& h)
{
    for (int i = 1; i <= h.size(); ++i) {
        if (h.alpha()(i) != i) {
            Cycle c{i};
            for (Point j = h.alpha()(i); j != i; j = h.alpha()(j)) {
                c.push_back(j);
            }
            return c;
        }
    }
    return std::nullopt;
}

namespace detail {

inline void require_pivot(const HypermapCollection& h, const Cycle& cycle, int k)
{
    const int m = static_cast<int>(cycle.size());
    if (m < 2) {
        throw std::invalid_argument("recursion cycle must have length >= 2");
    }
    if (k < 1 || k > m) {
        throw std::invalid_argument("k = " + std::to_string(k) + " out of range 1.." + std::to_string(m));
    }
    for (int p = 0; p < m; ++p) {
        if (h.alpha().at(cycle[static_cast<std::size_t>(p)]) != cycle[static_cast<std::size_t>((p + 1) % m)]) {
            throw std::invalid_argument("points do not form a cycle of alpha in the given order");
        }
    }
}

inline Permutation swap_with(int n, Point a, Point b)
{
    return Permutation::transposition(n, a, b);
}

} // namespace detail

/// phi_k for the alpha-cycle (c1 c2 ... cm), read as (1 2 ... m), and k in 1..m:
/// sigma_k = (c1 ck) sigma unless c1 and ck share a sigma-cycle, and the cycle is replaced
/// by (c1)(c2 ... cm) for k <= 2, by (c1)(c2 ... c_{k-1})(ck ... cm) otherwise.
inline HypermapCollection phi_k(const HypermapCollection& h, const Cycle& cycle, int k)
{
    detail::require_pivot(h, cycle, k);
    const int m = static_cast<int>(cycle.size());
    const int n = h.size();
    const Point c1 = cycle[0];
    const Point ck = cycle[static_cast<std::size_t>(k - 1)];

    Permutation sigma_k = h.sigma();
    if (k != 1 && !h.sigma().same_cycle(c1, ck)) {
        sigma_k = detail::swap_with(n, c1, ck) * h.sigma();
    }

    std::vector<Point> a = h.alpha().images();
    auto set = [&](Point from, Point to) { a[static_cast<std::size_t>(from - 1)] = to; };
    set(c1, c1);
    if (k <= 2) {
        set(cycle[static_cast<std::size_t>(m - 1)], cycle[1]);
    } else {
        set(cycle[static_cast<std::size_t>(k - 2)], cycle[1]);
        set(cycle[static_cast<std::size_t>(m - 1)], ck);
    }
    return {std::move(sigma_k), Permutation::from_images(a)};
}

/// The transposition form of phi_k: ((1,k) sigma, (1,k) alpha (1,k-1)) when
/// z((1,k) sigma) <= z(sigma), else (sigma, (1,k) alpha (1,k-1)); indices mod m, so
/// k - 1 means m when k = 1, and (1,1) is the identity.
inline HypermapCollection phi_k_by_transpositions(const HypermapCollection& h, const Cycle& cycle, int k)
{
    detail::require_pivot(h, cycle, k);
    const int m = static_cast<int>(cycle.size());
    const int n = h.size();
    const Point c1 = cycle[0];
    const Point ck = cycle[static_cast<std::size_t>(k - 1)];
    const Point ck_prev = cycle[static_cast<std::size_t>(k == 1 ? m - 1 : k - 2)];

    const Permutation t1 = detail::swap_with(n, c1, ck);
    const Permutation t2 = detail::swap_with(n, c1, ck_prev);
    Permutation alpha_k = t1 * h.alpha() * t2;
    const Permutation moved = t1 * h.sigma();
    if (moved.cycle_count() <= h.sigma().cycle_count()) {
        return {moved, std::move(alpha_k)};
    }
    return {h.sigma(), std::move(alpha_k)};
}

/// Exponents (of u, of v) of the branch weight w_k; each is 0 or 1.
struct BranchWeight {
    int u = 0;
    int v = 0;

    BivariatePolynomial monomial() const { return BivariatePolynomial::monomial(1, {u, v}); }
    int index() const { return u + 2 * v; }
    friend bool operator==(const BranchWeight&, const BranchWeight&) = default;
};

/// w_k = u^(kappa(phi_k H) - kappa(H)) times v when k != 1 and c1, ck share a sigma-cycle.
inline BranchWeight branch_weight(const HypermapCollection& h, const HypermapCollection& phi, const Cycle& cycle, int k)
{
    BranchWeight w;
    w.u = phi.kappa() - h.kappa();
    w.v = (k != 1 && h.sigma().same_cycle(cycle[0], cycle[static_cast<std::size_t>(k - 1)])) ? 1 : 0;
    if (w.u != 0 && w.u != 1) {
        throw std::logic_error("branch weight has u-exponent " + std::to_string(w.u));
    }
    return w;
}

/// The same-collection correction (i j) sigma for points in different components;
/// R is unchanged and kappa drops by one.
inline HypermapCollection merge_components(const HypermapCollection& h, Point i, Point j)
{
    const std::vector<int> comp = orbit_labels(h.sigma(), h.alpha());
    if (i < 1 || i > h.size() || j < 1 || j > h.size()) {
        throw std::invalid_argument("merge_components: point out of range");
    }
    if (comp[static_cast<std::size_t>(i)] == comp[static_cast<std::size_t>(j)]) {
        throw std::invalid_argument("merge_components: points " + std::to_string(i) + " and " + std::to_string(j) +
                                    " lie in the same component");
    }
    return {Permutation::transposition(h.size(), i, j) * h.sigma(), h.alpha()};
}

/// psi_k: like phi_k, but when deleting (1, k-1) would split off a component, the
/// pieces holding 1 and 2 are re-joined through sigma, so kappa never changes.
inline HypermapCollection psi_k(const HypermapCollection& h, const Cycle& cycle, int k)
{
    const HypermapCollection phi = phi_k(h, cycle, k);
    const int m = static_cast<int>(cycle.size());
    const int n = h.size();
    const Point c1 = cycle[0];
    const Point c2 = cycle[1];
    const Point cm = cycle[static_cast<std::size_t>(m - 1)];
    const Point ck = cycle[static_cast<std::size_t>(k - 1)];
    const Point ck_prev = cycle[static_cast<std::size_t>(k == 1 ? m - 1 : k - 2)];
    const bool same_vertex = k != 1 && h.sigma().same_cycle(c1, ck);
    const bool splits = phi.kappa() > h.kappa();
    auto t = [n](Point a, Point b) { return Permutation::transposition(n, a, b); };

    if (!same_vertex && !splits) {
        return {t(c1, ck) * h.sigma(), t(c1, ck) * h.alpha() * t(c1, ck_prev)};
    }
    if (!same_vertex && splits) {
        return {t(c1, c2) * t(c1, ck) * h.sigma(), t(c1, c2) * t(c1, ck) * h.alpha()};
    }
    if (!splits) {
        return {h.sigma(), h.alpha() * t(c1, ck_prev) * t(c1, cm)};
    }
    return {t(c1, c2) * h.sigma(), t(c1, c2) * h.alpha() * t(ck_prev, cm)};
}

struct WhitneyBranch {
    int k = 0;
    HypermapCollection child;
    BranchWeight weight;
};

/// One expansion step of the phi (or psi) recurrence on the pivot cycle.
inline std::vector<WhitneyBranch> whitney_branches(const HypermapCollection& h, const Cycle& cycle,
                                                   WhitneyMethod method = WhitneyMethod::PhiRecurrence)
{
    std::vector<WhitneyBranch> out;
    for (int k = 1; k <= static_cast<int>(cycle.size()); ++k) {
        HypermapCollection phi = phi_k(h, cycle, k);
        const BranchWeight w = branch_weight(h, phi, cycle, k);
        if (method == WhitneyMethod::PsiRecurrence) {
            HypermapCollection psi = psi_k(h, cycle, k);
            if (psi.kappa() != h.kappa()) {
                throw std::logic_error("psi_k changed the number of components");
            }
            out.push_back({k, std::move(psi), w});
        } else {
            out.push_back({k, std::move(phi), w});
        }
    }
    return out;
}

/// Recursive evaluation of R through the phi or psi recurrence, memoized on canonical_form.
class WhitneyEngine {
public:
    explicit WhitneyEngine(WhitneyMethod method, std::size_t cache_limit = std::size_t{1} << 20)
        : method_(method), cache_limit_(cache_limit)
    {
        if (method == WhitneyMethod::BruteForce) {
            throw std::invalid_argument("WhitneyEngine is for the recursive methods");
        }
    }

    BivariatePolynomial compute(const HypermapCollection& h) { return recurse(h); }

    const WhitneyStats& stats() const noexcept { return stats_; }

private:
    BivariatePolynomial recurse(const HypermapCollection& h)
    {
        ++stats_.nodes;
        const std::optional<Cycle> cycle = pivot_cycle(h);
        if (!cycle) {
            return BivariatePolynomial::constant(1);
        }
        CanonicalKey key = canonical_form(h);
        if (auto it = memo_.find(key); it != memo_.end()) {
            ++stats_.memo_hits;
            return it->second;
        }
        BivariatePolynomial sum;
        for (const WhitneyBranch& b : whitney_branches(h, *cycle, method_)) {
            ++stats_.weights[static_cast<std::size_t>(b.weight.index())];
            if (method_ == WhitneyMethod::PsiRecurrence && h.is_hypermap() && !b.child.is_hypermap()) {
                throw std::logic_error("psi recursion left the class of hypermaps");
            }
            sum += recurse(b.child) * b.weight.monomial();
        }
        if (memo_.size() < cache_limit_) {
            memo_.emplace(std::move(key), sum);
            stats_.memo_entries = memo_.size();
        }
        return sum;
    }

    WhitneyMethod method_;
    std::size_t cache_limit_;
    std::unordered_map<CanonicalKey, BivariatePolynomial, CanonicalKeyHash> memo_;
    WhitneyStats stats_;
};

inline WhitneyResult whitney_recursive_result(const HypermapCollection& h, WhitneyMethod method)
{
    WhitneyEngine engine(method);
    WhitneyResult r;
    r.polynomial = engine.compute(h);
    r.method = method;
    r.stats = engine.stats();
    return r;
}

inline BivariatePolynomial whitney_phi(const HypermapCollection& h)
{
    return WhitneyEngine(WhitneyMethod::PhiRecurrence).compute(h);
}

inline BivariatePolynomial whitney_psi(const HypermapCollection& h)
{
    return WhitneyEngine(WhitneyMethod::PsiRecurrence).compute(h);
}

inline WhitneyResult whitney(const HypermapCollection& h, WhitneyMethod method, const BruteForceOptions& options = {})
{
    if (method == WhitneyMethod::BruteForce) {
        return whitney_bruteforce_result(h, options);
    }
    return whitney_recursive_result(h, method);
}

/// The dual collection (alpha^-1 sigma, alpha^-1).
inline HypermapCollection dual(const HypermapCollection& h)
{
    const Permutation ainv = h.alpha().inverse();
    return {compose(ainv, h.sigma()), ainv};
}

struct Specializations {
    BigInt hyperforests;          // R(0, 0)
    BigInt spanning_collections;  // R(0, 1)
    UnivariatePolynomial hyperbola; // R(v^-1, v), Laurent in v
};

inline Specializations specializations(const BivariatePolynomial& r)
{
    Specializations s;
    s.hyperforests = evaluate_integer(r, {BigInt(0), BigInt(0)});
    s.spanning_collections = evaluate_integer(r, {BigInt(0), BigInt(1)});
    const UnivariatePolynomial v = UnivariatePolynomial::variable(0);
    s.hyperbola = substitute<2, 1>(r, {pow(v, -1), v});
    return s;
}

inline Specializations specializations(const HypermapCollection& h)
{
    return specializations(whitney_bruteforce(h));
}

/// Sum over beta <= alpha of u^wet(beta) v^dry(beta) with wet = kappa(sigma, beta), one
/// outer coastline per component, and dry = z(beta^-1 sigma) - kappa(sigma, beta), the
/// remaining faces.
inline BivariatePolynomial wet_dry_count(const HypermapCollection& h, std::uint64_t cap = kDefaultRefinementCap)
{
    const RefinementSpace space(h.alpha());
    space.checked_count(cap);
    detail::ExponentCounts counts;
    space.for_each([&](const Permutation& beta) {
        const int wet = orbit_count(h.sigma(), beta);
        const int dry = compose(beta.inverse(), h.sigma()).cycle_count() - wet;
        ++counts[{wet, dry}];
    });
    return detail::to_polynomial(counts);
}

/// The wet/dry count of a genus 0 collection, checked against u^kappa(sigma,alpha) R.
inline BivariatePolynomial wet_dry_polynomial(const HypermapCollection& h, std::uint64_t cap = kDefaultRefinementCap)
{
    if (h.genus() != 0) {
        throw std::invalid_argument("wet/dry count needs a genus 0 collection (genus is " + std::to_string(h.genus()) + ")");
    }
    BivariatePolynomial wd = wet_dry_count(h, cap);
    const BivariatePolynomial expected =
        BivariatePolynomial::monomial(1, {h.kappa(), 0}) * whitney_bruteforce(h, {cap, 1});
    if (!(wd == expected)) {
        throw std::logic_error("wet/dry count disagrees with u^kappa R");
    }
    return wd;
}

} // namespace hypermap
