#pragma once

#include "hypermap/collection.hpp"
#include "hypermap/nc_lattice.hpp"
#include "hypermap/polynomial.hpp"
#include "hypermap/whitney.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hypermap {

/// Signed points of a medial structure on n base points are the integers 1..2n:
/// i- is 2i-1 and i+ is 2i.
namespace signed_point {

inline constexpr int minus(Point i) { return 2 * i - 1; }
inline constexpr int plus(Point i) { return 2 * i; }
inline constexpr Point base(int p) { return (p + 1) / 2; }
inline constexpr bool is_plus(int p) { return p % 2 == 0; }

inline std::string to_string(int p)
{
    return std::to_string(base(p)) + (is_plus(p) ? "+" : "-");
}

} // namespace signed_point

/// Eulerian map on signed points: sigma' has vertex cycles (i1- i1+ i2- i2+ ...) and
/// alpha' pairs every positive point with a negative one.
struct EulerianMap {
    Permutation sigma_prime;
    Permutation alpha_prime;

    int base_size() const { return sigma_prime.size() / 2; }

    HypermapCollection as_collection() const { return {sigma_prime, alpha_prime}; }

    /// Throws std::invalid_argument naming the first violated invariant.
    void validate() const
    {
        using namespace signed_point;
        if (sigma_prime.size() != alpha_prime.size() || sigma_prime.size() % 2 != 0) {
            throw std::invalid_argument("Eulerian map needs 2n signed points in both permutations");
        }
        for (Point i = 1; i <= base_size(); ++i) {
            if (sigma_prime(minus(i)) != plus(i)) {
                throw std::invalid_argument("vertex cycle does not continue " + to_string(minus(i)) + " with " +
                                            to_string(plus(i)));
            }
            if (is_plus(sigma_prime(plus(i)))) {
                throw std::invalid_argument("vertex cycle signs do not alternate at " + to_string(plus(i)));
            }
            const int partner = alpha_prime(plus(i));
            if (is_plus(partner) || alpha_prime(partner) != plus(i)) {
                throw std::invalid_argument("edge at " + to_string(plus(i)) + " is not a (+,-) pair");
            }
        }
    }

    /// The collection (sigma, alpha) this map is the medial map of.
    HypermapCollection source() const
    {
        using namespace signed_point;
        validate();
        const int n = base_size();
        std::vector<Point> s(static_cast<std::size_t>(n)), a(static_cast<std::size_t>(n));
        for (Point i = 1; i <= n; ++i) {
            a[static_cast<std::size_t>(i - 1)] = base(sigma_prime(plus(i)));
            s[static_cast<std::size_t>(i - 1)] = base(alpha_prime(plus(i)));
        }
        return {Permutation::from_images(s), Permutation::from_images(a)};
    }
};

/// M(sigma, alpha): each alpha-cycle (i1 ... ik) becomes the vertex (i1- i1+ ... ik- ik+)
/// and each point i gives the edge (i+, sigma(i)-).
inline EulerianMap medial_map(const HypermapCollection& h)
{
    using namespace signed_point;
    const int n = h.size();
    std::vector<Point> sp(static_cast<std::size_t>(2 * n)), ap(static_cast<std::size_t>(2 * n));
    auto set = [](std::vector<Point>& v, int from, int to) { v[static_cast<std::size_t>(from - 1)] = to; };
    for (Point i = 1; i <= n; ++i) {
        set(sp, minus(i), plus(i));
        set(sp, plus(i), minus(h.alpha()(i)));
        set(ap, plus(i), minus(h.sigma()(i)));
        set(ap, minus(h.sigma()(i)), plus(i));
    }
    return {Permutation::from_images(sp), Permutation::from_images(ap)};
}

/// A coherent matching stored as a fixed-point-free involution on the signed points.
using CoherentMatching = Permutation;

namespace detail {

// All noncrossing perfect matchings of positions [lo, hi) on a cycle, as (a, b) pairs.
inline void noncrossing_perfect_matchings(int lo, int hi, std::vector<std::pair<int, int>>& current,
                                          const std::function<void()>& emit)
{
    if (lo >= hi) {
        emit();
        return;
    }
    for (int j = lo + 1; j < hi; j += 2) {
        current.emplace_back(lo, j);
        noncrossing_perfect_matchings(lo + 1, j, current, [&] { noncrossing_perfect_matchings(j + 1, hi, current, emit); });
        current.pop_back();
    }
}

inline std::vector<std::vector<std::pair<int, int>>> vertex_matchings(int size)
{
    std::vector<std::vector<std::pair<int, int>>> out;
    std::vector<std::pair<int, int>> current;
    noncrossing_perfect_matchings(0, size, current, [&] { out.push_back(current); });
    return out;
}

} // namespace detail

inline BigInt coherent_matching_count(const EulerianMap& m)
{
    BigInt total = 1;
    for (const Cycle& c : m.sigma_prime.cycles()) {
        total *= catalan(static_cast<unsigned>(c.size() / 2));
    }
    return total;
}

/// Calls fn(mu) for every coherent matching: a noncrossing perfect matching of every
/// vertex cycle, taken independently per vertex.
template <class Fn>
void for_each_coherent_matching(const EulerianMap& m, Fn&& fn, std::uint64_t cap = kDefaultRefinementCap)
{
    m.validate();
    if (coherent_matching_count(m) > cap) {
        throw SizeLimitError("more than " + std::to_string(cap) + " coherent matchings");
    }
    const std::vector<Cycle> vertices = m.sigma_prime.cycles();
    std::vector<std::vector<std::vector<std::pair<int, int>>>> choices;
    choices.reserve(vertices.size());
    for (const Cycle& v : vertices) {
        choices.push_back(detail::vertex_matchings(static_cast<int>(v.size())));
    }
    std::vector<Point> images(static_cast<std::size_t>(m.sigma_prime.size()));
    std::vector<std::size_t> digit(vertices.size(), 0);
    while (true) {
        for (std::size_t v = 0; v < vertices.size(); ++v) {
            for (const auto& [a, b] : choices[v][digit[v]]) {
                const int pa = vertices[v][static_cast<std::size_t>(a)];
                const int pb = vertices[v][static_cast<std::size_t>(b)];
                images[static_cast<std::size_t>(pa - 1)] = pb;
                images[static_cast<std::size_t>(pb - 1)] = pa;
            }
        }
        fn(Permutation::from_images(images));
        std::size_t v = 0;
        for (; v < vertices.size(); ++v) {
            if (++digit[v] < choices[v].size()) {
                break;
            }
            digit[v] = 0;
        }
        if (v == vertices.size()) {
            return;
        }
    }
}

inline std::vector<CoherentMatching> coherent_matchings(const EulerianMap& m, std::uint64_t cap = kDefaultRefinementCap)
{
    std::vector<CoherentMatching> out;
    for_each_coherent_matching(m, [&](const CoherentMatching& mu) { out.push_back(mu); }, cap);
    return out;
}

/// Throws std::invalid_argument unless mu is a coherent matching of m.
inline void validate_matching(const EulerianMap& m, const CoherentMatching& mu)
{
    using namespace signed_point;
    if (mu.size() != m.sigma_prime.size()) {
        throw std::invalid_argument("matching size differs from the Eulerian map");
    }
    const std::vector<int> vertex = m.sigma_prime.cycle_index();
    for (int p = 1; p <= mu.size(); ++p) {
        const int q = mu(p);
        if (q == p || mu(q) != p) {
            throw std::invalid_argument("matching is not a perfect pairing at " + to_string(p));
        }
        if (is_plus(p) == is_plus(q)) {
            throw std::invalid_argument("matched points " + to_string(p) + " and " + to_string(q) + " have equal signs");
        }
        if (vertex[static_cast<std::size_t>(p)] != vertex[static_cast<std::size_t>(q)]) {
            throw std::invalid_argument("matched points " + to_string(p) + " and " + to_string(q) +
                                        " lie on different vertices");
        }
    }
    for (const Cycle& c : m.sigma_prime.cycles()) {
        std::vector<int> pos(static_cast<std::size_t>(mu.size()) + 1, -1);
        for (std::size_t k = 0; k < c.size(); ++k) {
            pos[static_cast<std::size_t>(c[k])] = static_cast<int>(k);
        }
        for (Point a : c) {
            const int pa = pos[static_cast<std::size_t>(a)];
            const int pb = pos[static_cast<std::size_t>(mu(a))];
            if (pa > pb) {
                continue;
            }
            for (Point x : c) {
                const int px = pos[static_cast<std::size_t>(x)];
                const int py = pos[static_cast<std::size_t>(mu(x))];
                if (pa < px && px < pb && (py < pa || py > pb)) {
                    throw std::invalid_argument("matching crosses at " + to_string(a) + " and " + to_string(x));
                }
            }
        }
    }
}

/// The refinement encoded by mu: beta(i) = j when i+ is matched with j-.
inline Permutation matching_to_refinement(const CoherentMatching& mu)
{
    using namespace signed_point;
    const int n = mu.size() / 2;
    std::vector<Point> images(static_cast<std::size_t>(n));
    for (Point i = 1; i <= n; ++i) {
        images[static_cast<std::size_t>(i - 1)] = base(mu(plus(i)));
    }
    return Permutation::from_images(images);
}

inline CoherentMatching refinement_to_matching(const Permutation& beta)
{
    using namespace signed_point;
    std::vector<Point> images(static_cast<std::size_t>(2 * beta.size()));
    for (Point i = 1; i <= beta.size(); ++i) {
        images[static_cast<std::size_t>(plus(i) - 1)] = minus(beta(i));
        images[static_cast<std::size_t>(minus(beta(i)) - 1)] = plus(i);
    }
    return Permutation::from_images(images);
}

using Circuit = std::vector<int>;

/// Circuits of the Eulerian state mu: from each i- follow the matched pair to j+, then
/// the edge to sigma(j)-. The count is checked against z(beta^-1 sigma).
inline std::vector<Circuit> circuits_of_state(const EulerianMap& m, const CoherentMatching& mu)
{
    using namespace signed_point;
    validate_matching(m, mu);
    const int n = m.base_size();
    std::vector<bool> seen(static_cast<std::size_t>(2 * n) + 1, false);
    std::vector<Circuit> circuits;
    for (Point i = 1; i <= n; ++i) {
        if (seen[static_cast<std::size_t>(minus(i))]) {
            continue;
        }
        Circuit c;
        int p = minus(i);
        while (!seen[static_cast<std::size_t>(p)]) {
            const int q = mu(p);
            seen[static_cast<std::size_t>(p)] = true;
            seen[static_cast<std::size_t>(q)] = true;
            c.push_back(p);
            c.push_back(q);
            p = m.alpha_prime(q);
        }
        circuits.push_back(std::move(c));
    }
    const Permutation sigma = m.source().sigma();
    const int faces = compose(matching_to_refinement(mu).inverse(), sigma).cycle_count();
    if (faces != static_cast<int>(circuits.size())) {
        throw std::logic_error("traced " + std::to_string(circuits.size()) + " circuits, expected " + std::to_string(faces));
    }
    return circuits;
}

inline std::string format_circuit(const Circuit& c)
{
    std::string s = "(";
    for (std::size_t k = 0; k < c.size(); ++k) {
        s += (k ? " " : "") + signed_point::to_string(c[k]);
    }
    return s + ")";
}

/// j(M; x) = sum over noncrossing Eulerian states of x^(number of circuits).
inline UnivariatePolynomial circuit_partition_polynomial(const EulerianMap& m, std::uint64_t cap = kDefaultRefinementCap)
{
    std::map<int, std::uint64_t> counts;
    for_each_coherent_matching(m, [&](const CoherentMatching& mu) { ++counts[static_cast<int>(circuits_of_state(m, mu).size())]; },
                               cap);
    UnivariatePolynomial j;
    for (const auto& [k, c] : counts) {
        j.add_term({k}, c);
    }
    return j;
}

/// The same count read off the refinements: sum over beta <= alpha of x^z(beta^-1 sigma).
inline UnivariatePolynomial circuit_partition_polynomial_via_refinements(const HypermapCollection& h,
                                                                         std::uint64_t cap = kDefaultRefinementCap)
{
    const RefinementSpace space(h.alpha());
    space.checked_count(cap);
    std::map<int, std::uint64_t> counts;
    space.for_each([&](const Permutation& beta) { ++counts[compose(beta.inverse(), h.sigma()).cycle_count()]; });
    UnivariatePolynomial j;
    for (const auto& [k, c] : counts) {
        j.add_term({k}, c);
    }
    return j;
}

/// Both computations of j(M(sigma, alpha); x); throws std::logic_error if they differ.
inline UnivariatePolynomial circuit_partition_polynomial(const HypermapCollection& h, std::uint64_t cap = kDefaultRefinementCap)
{
    UnivariatePolynomial by_states = circuit_partition_polynomial(medial_map(h), cap);
    if (!(by_states == circuit_partition_polynomial_via_refinements(h, cap))) {
        throw std::logic_error("circuit partition polynomial: state enumeration and refinement sum differ");
    }
    return by_states;
}

/// Directed multigraph on vertices 0..vertex_count-1; loops and parallel edges allowed.
struct EulerianDigraph {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges;

    bool is_eulerian() const
    {
        std::vector<int> balance(static_cast<std::size_t>(vertex_count), 0);
        for (const auto& [t, hd] : edges) {
            ++balance[static_cast<std::size_t>(t)];
            --balance[static_cast<std::size_t>(hd)];
        }
        return std::all_of(balance.begin(), balance.end(), [](int b) { return b == 0; });
    }

    void validate() const
    {
        for (const auto& [t, hd] : edges) {
            if (t < 0 || t >= vertex_count || hd < 0 || hd >= vertex_count) {
                throw std::invalid_argument("edge endpoint out of range");
            }
        }
    }
};

/// The directed medial graph: one vertex per alpha-cycle, one edge per point i running
/// from the vertex of i to the vertex of sigma(i) (the edge i+ -> sigma(i)-).
inline EulerianDigraph medial_digraph(const HypermapCollection& h)
{
    const std::vector<int> vertex = h.alpha().cycle_index();
    EulerianDigraph d;
    d.vertex_count = h.alpha().cycle_count();
    for (Point i = 1; i <= h.size(); ++i) {
        d.edges.emplace_back(vertex[static_cast<std::size_t>(i)], vertex[static_cast<std::size_t>(h.sigma()(i))]);
    }
    return d;
}

/// A collection whose directed medial graph is isomorphic to d. At each vertex the s-th
/// incoming and s-th outgoing edge ends become the points i-, i+ of one label i; the
/// labels of a vertex form its alpha-cycle and sigma(i) is the label entered by i's
/// outgoing edge. Isolated vertices carry no points and are dropped.
inline HypermapCollection from_eulerian_digraph(const EulerianDigraph& d)
{
    d.validate();
    if (!d.is_eulerian()) {
        throw std::invalid_argument("digraph is not Eulerian: some vertex has in-degree != out-degree");
    }
    const auto vc = static_cast<std::size_t>(d.vertex_count);
    std::vector<std::vector<std::size_t>> out(vc), in(vc);
    for (std::size_t e = 0; e < d.edges.size(); ++e) {
        out[static_cast<std::size_t>(d.edges[e].first)].push_back(e);
        in[static_cast<std::size_t>(d.edges[e].second)].push_back(e);
    }
    const int n = static_cast<int>(d.edges.size());
    std::vector<Point> label_out(d.edges.size()), label_in(d.edges.size());
    std::vector<Cycle> alpha_cycles;
    Point next = 1;
    for (std::size_t v = 0; v < vc; ++v) {
        Cycle c;
        for (std::size_t s = 0; s < out[v].size(); ++s) {
            label_out[out[v][s]] = next;
            label_in[in[v][s]] = next;
            c.push_back(next++);
        }
        if (!c.empty()) {
            alpha_cycles.push_back(std::move(c));
        }
    }
    std::vector<Point> s(static_cast<std::size_t>(n));
    for (std::size_t e = 0; e < d.edges.size(); ++e) {
        s[static_cast<std::size_t>(label_out[e] - 1)] = label_in[e];
    }
    return {Permutation::from_images(s), Permutation::from_cycles(n, alpha_cycles)};
}

/// Number of noncrossing perfect matchings of the cyclic sequence `colors` that only
/// pair equal colors (positions alternate in sign, so every such pair is (+,-)).
inline BigInt valence(const std::vector<int>& colors)
{
    const int len = static_cast<int>(colors.size());
    if (len % 2 != 0) {
        return 0;
    }
    // f[l][r]: matchings of positions l..r-1.
    std::vector<std::vector<BigInt>> f(static_cast<std::size_t>(len) + 1, std::vector<BigInt>(static_cast<std::size_t>(len) + 1, 0));
    for (int l = 0; l <= len; ++l) {
        f[static_cast<std::size_t>(l)][static_cast<std::size_t>(l)] = 1;
    }
    for (int width = 2; width <= len; width += 2) {
        for (int l = 0; l + width <= len; ++l) {
            const int r = l + width;
            BigInt total = 0;
            for (int j = l + 1; j < r; j += 2) {
                if (colors[static_cast<std::size_t>(l)] == colors[static_cast<std::size_t>(j)]) {
                    total += f[static_cast<std::size_t>(l + 1)][static_cast<std::size_t>(j)] *
                             f[static_cast<std::size_t>(j + 1)][static_cast<std::size_t>(r)];
                }
            }
            f[static_cast<std::size_t>(l)][static_cast<std::size_t>(r)] = total;
        }
    }
    return f[0][static_cast<std::size_t>(len)];
}

/// Valence of a vertex cycle of signed points under an edge coloring of M(sigma, alpha):
/// edge i is (i+, sigma(i)-), so i+ gets lambda(i) and j- gets lambda(sigma^-1(j)).
inline BigInt valence(const Cycle& vertex, const std::vector<int>& edge_color, const Permutation& sigma_inverse)
{
    using namespace signed_point;
    std::vector<int> colors;
    colors.reserve(vertex.size());
    for (int p : vertex) {
        const Point edge = is_plus(p) ? base(p) : sigma_inverse(base(p));
        colors.push_back(edge_color[static_cast<std::size_t>(edge)]);
    }
    return valence(colors);
}

namespace detail {

// Visits every m-coloring of the medial edges 1..n whose color classes are Eulerian:
// at each vertex, each color leaves (on + points) as often as it enters (on - points).
template <class Fn>
void for_each_eulerian_coloring(const HypermapCollection& h, int m, Fn&& fn)
{
    const int n = h.size();
    const std::vector<int> vertex = h.alpha().cycle_index();
    const auto vcount = static_cast<std::size_t>(h.alpha().cycle_count());
    const auto colors = static_cast<std::size_t>(m);
    // balance[v * m + c]: out minus in for color c at vertex v; open[v]: unassigned ends.
    std::vector<int> balance(vcount * colors, 0);
    std::vector<int> open(vcount, 0);
    for (Point i = 1; i <= n; ++i) {
        open[static_cast<std::size_t>(vertex[static_cast<std::size_t>(i)])] += 2;
    }
    std::vector<int> lambda(static_cast<std::size_t>(n) + 1, 0);

    auto feasible = [&](std::size_t v) {
        int excess = 0;
        for (std::size_t c = 0; c < colors; ++c) {
            excess += std::abs(balance[v * colors + c]);
        }
        return excess <= open[v];
    };

    std::function<void(Point)> assign = [&](Point i) {
        if (i > n) {
            fn(static_cast<const std::vector<int>&>(lambda));
            return;
        }
        const auto tail = static_cast<std::size_t>(vertex[static_cast<std::size_t>(i)]);
        const auto head = static_cast<std::size_t>(vertex[static_cast<std::size_t>(h.sigma()(i))]);
        --open[tail];
        --open[head];
        for (int c = 0; c < m; ++c) {
            lambda[static_cast<std::size_t>(i)] = c;
            ++balance[tail * colors + static_cast<std::size_t>(c)];
            --balance[head * colors + static_cast<std::size_t>(c)];
            if (feasible(tail) && feasible(head)) {
                assign(i + 1);
            }
            --balance[tail * colors + static_cast<std::size_t>(c)];
            ++balance[head * colors + static_cast<std::size_t>(c)];
        }
        ++open[tail];
        ++open[head];
    };
    assign(1);
}

inline void require_coloring_size(const HypermapCollection& h, int m, std::uint64_t cap)
{
    if (m < 1) {
        throw std::invalid_argument("number of colors must be positive");
    }
    BigInt total = ipow(BigInt(m), static_cast<unsigned>(h.size()));
    if (total > cap) {
        throw SizeLimitError("more than " + std::to_string(cap) + " edge colorings");
    }
}

} // namespace detail

/// Sum over Eulerian m-colorings lambda of the medial map of the product of vertex
/// valences, without the closed-form check.
inline BigInt eulerian_coloring_sum_unchecked(const HypermapCollection& h, int m, std::uint64_t cap = kDefaultRefinementCap)
{
    detail::require_coloring_size(h, m, cap);
    const std::vector<Cycle> vertices = medial_map(h).sigma_prime.cycles();
    const Permutation sinv = h.sigma().inverse();
    BigInt total = 0;
    detail::for_each_eulerian_coloring(h, m, [&](const std::vector<int>& lambda) {
        BigInt product = 1;
        for (const Cycle& v : vertices) {
            product *= valence(v, lambda, sinv);
            if (product == 0) {
                return;
            }
        }
        total += product;
    });
    return total;
}

/// The same sum; requires genus 0 and checks it against m^kappa R(m, m).
inline BigInt eulerian_coloring_sum(const HypermapCollection& h, int m, std::uint64_t cap = kDefaultRefinementCap)
{
    if (h.genus() != 0) {
        throw std::invalid_argument("Eulerian coloring identity needs genus 0 (genus is " + std::to_string(h.genus()) + ")");
    }
    BigInt total = eulerian_coloring_sum_unchecked(h, m, cap);
    const BigInt expected = ipow(BigInt(m), static_cast<unsigned>(h.kappa())) *
                            evaluate_integer(whitney_bruteforce(h, {cap, 1}), {BigInt(m), BigInt(m)});
    if (total != expected) {
        throw std::logic_error("Eulerian coloring sum " + to_string(total) + " differs from m^kappa R(m,m) = " +
                               to_string(expected));
    }
    return total;
}

/// For maps: sum over edge colorings with every valence positive of 2^(number of
/// monochromatic 4-point vertices).
inline BigInt map_coloring_sum(const HypermapCollection& h, int m, std::uint64_t cap = kDefaultRefinementCap)
{
    for (const Cycle& c : h.alpha().cycles()) {
        if (c.size() > 2) {
            throw std::invalid_argument("map_coloring_sum needs alpha-cycles of length <= 2");
        }
    }
    detail::require_coloring_size(h, m, cap);
    const std::vector<Cycle> vertices = medial_map(h).sigma_prime.cycles();
    const Permutation sinv = h.sigma().inverse();
    BigInt total = 0;
    detail::for_each_eulerian_coloring(h, m, [&](const std::vector<int>& lambda) {
        unsigned mono = 0;
        for (const Cycle& v : vertices) {
            if (valence(v, lambda, sinv) == 0) {
                return;
            }
            if (v.size() == 4) {
                const Point i = signed_point::base(v[0]);
                const Point j = signed_point::base(v[2]);
                const int c = lambda[static_cast<std::size_t>(i)];
                if (lambda[static_cast<std::size_t>(j)] == c && lambda[static_cast<std::size_t>(sinv(i))] == c &&
                    lambda[static_cast<std::size_t>(sinv(j))] == c) {
                    ++mono;
                }
            }
        }
        total += ipow(BigInt(2), mono);
    });
    return total;
}

} // namespace hypermap
