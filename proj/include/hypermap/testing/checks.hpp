#pragma once

// Property checks over instance corpora. Each returns a CheckResult instead of
// asserting so the same code serves `selftest`, the acceptance suite and unit tests.

#include "hypermap/hypermap.hpp"
#include "hypermap/testing/corpus.hpp"
#include "hypermap/testing/oracles.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace hypermap::testing {

struct CheckResult {
    std::string name;
    bool passed = true;
    std::uint64_t cases = 0;
    std::string failure;

    explicit CheckResult(std::string check_name) : name(std::move(check_name)) {}

    void fail(const std::string& message)
    {
        if (passed) {
            passed = false;
            failure = message;
        }
    }

    void expect(bool condition, const std::function<std::string()>& message)
    {
        if (!condition) {
            fail(message());
        }
    }
};

using Corpus = std::vector<HypermapCollection>;

namespace detail {

inline std::string describe(const HypermapCollection& h)
{
    return "sigma=" + h.sigma().to_string() + " alpha=" + h.alpha().to_string();
}

// Runs body on each member selected by `keep`, turning exceptions into failures.
template <class Keep, class Body>
void each(CheckResult& r, const Corpus& corpus, Keep&& keep, Body&& body)
{
    for (const HypermapCollection& h : corpus) {
        if (!r.passed) {
            return;
        }
        if (!keep(h)) {
            continue;
        }
        ++r.cases;
        try {
            body(h);
        } catch (const std::exception& e) {
            r.fail(describe(h) + ": " + e.what());
        }
    }
}

inline bool any(const HypermapCollection&) { return true; }
inline bool planar(const HypermapCollection& h) { return h.genus() == 0; }
inline bool is_map(const HypermapCollection& h) { return max_cycle_length(h.alpha()) <= 2; }

inline UnivariatePolynomial t_power(int e) { return UnivariatePolynomial::monomial(1, {e}); }

// R(x, x) as a polynomial in x.
inline UnivariatePolynomial diagonal(const BivariatePolynomial& r)
{
    const UnivariatePolynomial x = UnivariatePolynomial::variable(0);
    return substitute<2, 1>(r, {x, x});
}

} // namespace detail

// ---- permutations and collections -------------------------------------------------

inline CheckResult check_genus_formula(const Corpus& corpus)
{
    CheckResult r{"genus formula is even, nonnegative"};
    detail::each(r, corpus, detail::any, [&](const HypermapCollection& h) {
        const int twice = h.size() + 2 * h.kappa() - h.sigma().cycle_count() - h.alpha().cycle_count() - h.faces().cycle_count();
        r.expect(twice >= 0 && twice % 2 == 0 && twice == 2 * h.genus(),
                 [&] { return detail::describe(h) + ": 2g = " + std::to_string(twice); });
    });
    return r;
}

inline CheckResult check_orbit_identities(const Corpus& corpus)
{
    CheckResult r{"orbit counts against identity"};
    detail::each(r, corpus, detail::any, [&](const HypermapCollection& h) {
        const Permutation id = Permutation::identity(h.size());
        r.expect(orbit_count(h.sigma(), id) == h.sigma().cycle_count() && orbit_count(id, h.alpha()) == h.alpha().cycle_count(),
                 [&] { return detail::describe(h); });
    });
    return r;
}

inline CheckResult check_map_euler_genus(const Corpus& corpus)
{
    CheckResult r{"map genus matches V - E + F"};
    detail::each(
        r, corpus, [](const HypermapCollection& h) { return detail::is_map(h) && h.kappa() == 1; },
        [&](const HypermapCollection& h) {
            const int v = h.sigma().cycle_count();
            const int e = static_cast<int>(graph_of_map(h).edges.size());
            // Faces traced as sigma after alpha, a conjugate of alpha^-1 sigma for involutions.
            std::vector<bool> seen(static_cast<std::size_t>(h.size()) + 1, false);
            int f = 0;
            for (Point d = 1; d <= h.size(); ++d) {
                if (seen[static_cast<std::size_t>(d)]) {
                    continue;
                }
                ++f;
                for (Point x = d; !seen[static_cast<std::size_t>(x)]; x = h.sigma()(h.alpha()(x))) {
                    seen[static_cast<std::size_t>(x)] = true;
                }
            }
            const int euler = 2 - v + e - f;
            r.expect(euler % 2 == 0 && euler / 2 == h.genus(), [&] { return detail::describe(h) + ": Euler genus differs"; });
        });
    return r;
}

// ---- noncrossing partitions and Moebius --------------------------------------------

inline Permutation long_cycle(int m)
{
    Cycle c(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        c[static_cast<std::size_t>(i)] = i + 1;
    }
    return Permutation::from_cycles(m, {c});
}

inline CheckResult check_refinement_counts(int m_max = 8)
{
    CheckResult r{"refinements of an m-cycle number Catalan(m)"};
    for (int m = 1; m <= m_max; ++m) {
        ++r.cases;
        std::uint64_t seen = 0;
        for_each_refinement(long_cycle(m), [&](const Permutation&) { ++seen; });
        r.expect(seen == catalan(static_cast<unsigned>(m)) && refinement_count(long_cycle(m)) == catalan(static_cast<unsigned>(m)),
                 [&] { return "m=" + std::to_string(m) + ": " + std::to_string(seen); });
    }
    return r;
}

inline CheckResult check_refinement_definition(int m_max = 5)
{
    CheckResult r{"refinement enumeration matches the definition"};
    for (int m = 1; m <= m_max; ++m) {
        const Permutation alpha = long_cycle(m);
        std::set<Permutation> yielded;
        for_each_refinement(alpha, [&](const Permutation& b) { yielded.insert(b); });
        std::vector<Point> images(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            images[static_cast<std::size_t>(i)] = i + 1;
        }
        do {
            ++r.cases;
            const Permutation beta = Permutation::from_images(images);
            const bool listed = yielded.count(beta) > 0;
            r.expect(listed == is_refinement(beta, alpha) && listed == is_refinement_by_definition(beta, alpha),
                     [&] { return beta.to_string() + " vs " + alpha.to_string(); });
        } while (std::next_permutation(images.begin(), images.end()));
    }
    return r;
}

inline CheckResult check_mobius_nc(int m_max = 7)
{
    CheckResult r{"Moebius sum-to-zero and closed form on NC(m)"};
    for (int m = 1; m <= m_max && r.passed; ++m) {
        const Permutation alpha = long_cycle(m);
        const std::vector<Permutation> refs = refinements(alpha);
        for (const Permutation& beta : refs) {
            ++r.cases;
            BigInt sum = 0;
            for (const Permutation& gamma : interval(beta, alpha)) {
                sum += mobius(beta, gamma);
            }
            r.expect(sum == (beta == alpha ? 1 : 0), [&] { return "sum over [" + beta.to_string() + ", " + alpha.to_string() + "]"; });
            r.expect(mobius(beta, alpha) == mobius_closed_form(beta, alpha),
                     [&] { return "closed form at " + beta.to_string() + " in NC(" + std::to_string(m) + ")"; });
        }
        BigInt expected = catalan(static_cast<unsigned>(m - 1));
        if ((m - 1) % 2 == 1) {
            expected = -expected;
        }
        r.expect(mobius(Permutation::identity(m), alpha) == expected,
                 [&] { return "mu(NC(" + std::to_string(m) + ")) = " + to_string(mobius(Permutation::identity(m), alpha)); });
    }
    return r;
}

inline CheckResult check_mobius_multiplicative(const Corpus& corpus)
{
    CheckResult r{"Moebius multiplicative over alpha-cycles"};
    detail::each(
        r, corpus, [](const HypermapCollection& h) { return refinement_count(h.alpha()) <= 60; },
        [&](const HypermapCollection& h) {
            MobiusTable table;
            for (const Permutation& beta : refinements(h.alpha())) {
                const BigInt whole = table.recursive(beta, h.alpha());
                r.expect(whole == table(beta, h.alpha()) && whole == mobius_closed_form(beta, h.alpha()),
                         [&] { return detail::describe(h) + " beta=" + beta.to_string(); });
            }
        });
    return r;
}

// ---- polynomials -------------------------------------------------------------------

inline BivariatePolynomial random_polynomial(Rng& rng, int terms = 4, int max_degree = 3)
{
    BivariatePolynomial p;
    for (int k = 0; k < terms; ++k) {
        p.add_term({rng.between(0, max_degree), rng.between(-1, max_degree)}, rng.between(-5, 5));
    }
    return p;
}

inline CheckResult check_polynomial_ring(std::uint64_t seed, int trials = 300)
{
    CheckResult r{"polynomial ring axioms"};
    Rng rng(seed);
    for (int k = 0; k < trials && r.passed; ++k) {
        ++r.cases;
        const BivariatePolynomial a = random_polynomial(rng);
        const BivariatePolynomial b = random_polynomial(rng);
        const BivariatePolynomial c = random_polynomial(rng);
        r.expect((a * b) * c == a * (b * c), [&] { return "associativity: " + format(a) + ", " + format(b) + ", " + format(c); });
        r.expect(a * (b + c) == a * b + a * c, [&] { return "distributivity: " + format(a); });
        r.expect(a + b == b + a && a * b == b * a, [&] { return "commutativity: " + format(a) + ", " + format(b); });
        r.expect((a - a).is_zero() && a * BivariatePolynomial::constant(1) == a, [&] { return "identities: " + format(a); });
    }
    return r;
}

inline CheckResult check_polynomial_roundtrip(const Corpus& corpus, std::uint64_t seed)
{
    CheckResult r{"polynomial print/parse round trip"};
    Rng rng(seed);
    auto round = [&](const BivariatePolynomial& p) {
        ++r.cases;
        const std::string text = format(p);
        const BivariatePolynomial back = parse_polynomial<2>(text, kWhitneyVariables);
        r.expect(back == p && format(back) == text, [&] { return "round trip of " + text; });
    };
    for (int k = 0; k < 200; ++k) {
        round(random_polynomial(rng, 5, 4));
    }
    detail::each(r, corpus, detail::any, [&](const HypermapCollection& h) { round(whitney_bruteforce(h)); });
    return r;
}

// ---- Whitney polynomial ------------------------------------------------------------

inline CheckResult check_whitney_triangle(const Corpus& corpus)
{
    CheckResult r{"brute force = phi recurrence = psi recurrence"};
    detail::each(r, corpus, detail::any, [&](const HypermapCollection& h) {
        const BivariatePolynomial brute = whitney_bruteforce(h);
        const WhitneyResult phi = whitney_recursive_result(h, WhitneyMethod::PhiRecurrence);
        const WhitneyResult psi = whitney_recursive_result(h, WhitneyMethod::PsiRecurrence);
        r.expect(brute == phi.polynomial && brute == psi.polynomial, [&] {
            return detail::describe(h) + ": " + format(brute) + " / " + format(phi.polynomial) + " / " + format(psi.polynomial);
        });
    });
    return r;
}

/// Every branch of both recurrences carries a weight in {1, u, v, uv}, and psi keeps a
/// connected input connected, on every node of the recursion tree.
inline CheckResult check_recursion_branches(const Corpus& corpus)
{
    CheckResult r{"branch weights in {1,u,v,uv}; psi keeps hypermaps connected"};
    detail::each(r, corpus, detail::any, [&](const HypermapCollection& root) {
        std::vector<HypermapCollection> stack{root};
        while (!stack.empty() && r.passed) {
            const HypermapCollection h = stack.back();
            stack.pop_back();
            const std::optional<Cycle> cycle = pivot_cycle(h);
            if (!cycle) {
                continue;
            }
            for (WhitneyMethod method : {WhitneyMethod::PhiRecurrence, WhitneyMethod::PsiRecurrence}) {
                for (const WhitneyBranch& b : whitney_branches(h, *cycle, method)) {
                    r.expect((b.weight.u == 0 || b.weight.u == 1) && (b.weight.v == 0 || b.weight.v == 1),
                             [&] { return detail::describe(h) + ": weight out of range"; });
                    if (method == WhitneyMethod::PsiRecurrence) {
                        r.expect(b.child.kappa() == h.kappa(), [&] { return detail::describe(h) + ": psi changed kappa"; });
                        stack.push_back(b.child);
                    }
                }
            }
            for (int k = 1; k <= static_cast<int>(cycle->size()); ++k) {
                r.expect(phi_k(h, *cycle, k) == phi_k_by_transpositions(h, *cycle, k),
                         [&] { return detail::describe(h) + ": transposition form differs at k=" + std::to_string(k); });
            }
        }
    });
    return r;
}

inline CheckResult check_product(const Corpus& corpus)
{
    CheckResult r{"R of a disjoint union is the product"};
    for (std::size_t k = 0; k + 1 < corpus.size() && r.passed; k += 2) {
        const HypermapCollection& a = corpus[k];
        const HypermapCollection& b = corpus[k + 1];
        if (refinement_count(a.alpha()) * refinement_count(b.alpha()) > 100'000) {
            continue;
        }
        ++r.cases;
        const HypermapCollection u = disjoint_union(a, b);
        const BivariatePolynomial expected = whitney_bruteforce(a) * whitney_bruteforce(b);
        r.expect(whitney_bruteforce(u) == expected && whitney_phi(u) == expected,
                 [&] { return detail::describe(a) + " + " + detail::describe(b); });
    }
    return r;
}

inline CheckResult check_merge(const Corpus& corpus)
{
    CheckResult r{"merging components leaves R unchanged"};
    detail::each(
        r, corpus, [](const HypermapCollection& h) { return h.kappa() >= 2; },
        [&](const HypermapCollection& h) {
            const std::vector<int> comp = orbit_labels(h.sigma(), h.alpha());
            Point j = 2;
            while (comp[static_cast<std::size_t>(j)] == comp[1]) {
                ++j;
            }
            const HypermapCollection merged = merge_components(h, 1, j);
            r.expect(merged.kappa() == h.kappa() - 1 && whitney_bruteforce(merged) == whitney_bruteforce(h),
                     [&] { return detail::describe(h) + " merged at 1," + std::to_string(j); });
        });
    return r;
}

inline CheckResult check_planar_duality(const Corpus& corpus)
{
    CheckResult r{"genus 0: R(dual; u, v) = R(v, u)"};
    detail::each(r, corpus, detail::planar, [&](const HypermapCollection& h) {
        const HypermapCollection d = dual(h);
        r.expect(d.genus() == 0 && whitney_bruteforce(d) == swap_variables(whitney_bruteforce(h)) && dual(d) == h,
                 [&] { return detail::describe(h); });
    });
    return r;
}

inline CheckResult check_map_whitney(const Corpus& corpus)
{
    CheckResult r{"maps: R equals the graph Whitney rank polynomial"};
    detail::each(r, corpus, detail::is_map, [&](const HypermapCollection& h) {
        const BivariatePolynomial expected = graph_whitney(graph_of_map(h));
        r.expect(whitney_bruteforce(h) == expected, [&] { return detail::describe(h) + ": expected " + format(expected); });
    });
    return r;
}

inline BigInt narayana(int n, int k)
{
    return binomial(static_cast<unsigned>(n), static_cast<unsigned>(k)) * binomial(static_cast<unsigned>(n), static_cast<unsigned>(k - 1)) / n;
}

inline CheckResult check_narayana(int n_min = 2, int n_max = 7)
{
    CheckResult r{"R(identity, n-cycle) is the Narayana polynomial"};
    for (int n = n_min; n <= n_max; ++n) {
        ++r.cases;
        const HypermapCollection h(Permutation::identity(n), long_cycle(n));
        const BivariatePolynomial p = whitney_bruteforce(h);
        std::vector<std::uint64_t> by_blocks(static_cast<std::size_t>(n) + 1, 0);
        for (const BlockLabels& part : noncrossing_partitions(n)) {
            ++by_blocks[static_cast<std::size_t>(*std::max_element(part.begin(), part.end()) + 1)];
        }
        BivariatePolynomial expected;
        for (int k = 1; k <= n; ++k) {
            expected.add_term({k - 1, 0}, narayana(n, k));
            r.expect(narayana(n, k) == by_blocks[static_cast<std::size_t>(k)], [&] { return "NC rank count, n=" + std::to_string(n); });
        }
        r.expect(p == expected && p.degree(1) == 0, [&] { return "n=" + std::to_string(n) + ": " + format(p); });
        r.expect(whitney_bruteforce(dual(h)) == swap_variables(expected), [&] { return "dual, n=" + std::to_string(n); });
    }
    return r;
}

inline CheckResult check_specializations(const Corpus& corpus)
{
    CheckResult r{"R(0,0), R(0,1), R(1/v, v) against direct counts"};
    detail::each(r, corpus, detail::any, [&](const HypermapCollection& h) {
        const std::vector<Permutation> refs = refinements(h.alpha());
        const Specializations s = specializations(h);
        UnivariatePolynomial hyperbola;
        for (const Permutation& beta : refs) {
            hyperbola.add_term({h.size() + h.kappa() - beta.cycle_count() - h.sigma().cycle_count()}, 1);
        }
        r.expect(s.hyperforests == count_spanning_hyperforests(h, refs) && s.spanning_collections == count_spanning_collections(h, refs) &&
                     s.hyperbola == hyperbola,
                 [&] { return detail::describe(h); });
    });
    return r;
}

inline CheckResult check_wet_dry(const Corpus& corpus)
{
    CheckResult r{"genus 0: wet/dry count = u^kappa R"};
    detail::each(r, corpus, detail::planar, [&](const HypermapCollection& h) {
        r.expect(wet_dry_count(h) == BivariatePolynomial::monomial(1, {h.kappa(), 0}) * whitney_bruteforce(h),
                 [&] { return detail::describe(h); });
    });
    return r;
}

// ---- medial maps -------------------------------------------------------------------

inline CheckResult check_medial_structure(const Corpus& corpus)
{
    CheckResult r{"medial map: genus, z(sigma') = z(alpha), z(alpha') = n"};
    detail::each(r, corpus, detail::any, [&](const HypermapCollection& h) {
        const EulerianMap m = medial_map(h);
        m.validate();
        r.expect(m.as_collection().genus() == h.genus() && m.sigma_prime.cycle_count() == h.alpha().cycle_count() &&
                     m.alpha_prime.cycle_count() == h.size() && m.source() == h,
                 [&] { return detail::describe(h); });
    });
    return r;
}

inline CheckResult check_matching_bijection(const Corpus& corpus)
{
    CheckResult r{"coherent matchings biject with refinements; circuits = z(beta^-1 sigma)"};
    detail::each(r, corpus, detail::any, [&](const HypermapCollection& h) {
        const EulerianMap m = medial_map(h);
        std::set<Permutation> betas;
        std::uint64_t count = 0;
        for_each_coherent_matching(m, [&](const CoherentMatching& mu) {
            ++count;
            const Permutation beta = matching_to_refinement(mu);
            betas.insert(beta);
            const std::size_t circuits = circuits_of_state(m, mu).size();
            r.expect(is_refinement_by_definition(beta, h.alpha()) && refinement_to_matching(beta) == mu &&
                         static_cast<int>(circuits) == compose(beta.inverse(), h.sigma()).cycle_count(),
                     [&] { return detail::describe(h) + " beta=" + beta.to_string(); });
        });
        r.expect(count == refinement_count(h.alpha()) && betas.size() == count, [&] { return detail::describe(h) + ": counts"; });
    });
    return r;
}

inline CheckResult check_worked_matching()
{
    CheckResult r{"worked matching (1+2-)(2+3-)(3+1-)(4+4-)(5+5-)(6+6-) has 2 circuits"};
    ++r.cases;
    const HypermapCollection h = HypermapCollection::from_cycles(6, {{1, 5}, {2, 6}}, {{1, 2, 3, 4}, {5, 6}});
    const Permutation beta = Permutation::from_cycles(6, {{1, 2, 3}});
    using namespace signed_point;
    std::vector<Cycle> pairs{{plus(1), minus(2)}, {plus(2), minus(3)}, {plus(3), minus(1)},
                             {plus(4), minus(4)}, {plus(5), minus(5)}, {plus(6), minus(6)}};
    const CoherentMatching mu = Permutation::from_cycles(12, pairs);
    const std::vector<Circuit> circuits = circuits_of_state(medial_map(h), mu);
    r.expect(matching_to_refinement(mu) == beta && circuits.size() == 2 &&
                 compose(beta.inverse(), h.sigma()) == Permutation::from_cycles(6, {{1, 5, 3, 2, 6}}),
             [&] { return "got " + std::to_string(circuits.size()) + " circuits"; });
    return r;
}

inline CheckResult check_circuit_partition(const Corpus& corpus, int max_edges = 14)
{
    CheckResult r{"genus 0: j(M; x) = x^kappa R(x, x)"};
    detail::each(
        r, corpus, [&](const HypermapCollection& h) { return h.genus() == 0 && h.size() <= max_edges; },
        [&](const HypermapCollection& h) {
            const UnivariatePolynomial expected = detail::t_power(h.kappa()) * detail::diagonal(whitney_bruteforce(h));
            r.expect(circuit_partition_polynomial(medial_map(h)) == expected &&
                         circuit_partition_polynomial_via_refinements(h) == expected,
                     [&] { return detail::describe(h) + ": expected " + format(expected, "x"); });
        });
    return r;
}

inline CheckResult check_map_states(const Corpus& corpus)
{
    CheckResult r{"maps: 2^(edges) noncrossing Eulerian states"};
    detail::each(r, corpus, detail::is_map, [&](const HypermapCollection& h) {
        const auto edges = static_cast<unsigned>(graph_of_map(h).edges.size());
        r.expect(coherent_matching_count(medial_map(h)) == ipow(BigInt(2), edges), [&] { return detail::describe(h); });
    });
    return r;
}

/// For every Eulerian 2-coloring, all valences are positive exactly when some coherent
/// matching joins only equal colors (a global monochromatic-circuit state exists).
inline CheckResult check_valence_equivalence(const Corpus& corpus, int m = 2, int max_edges = 8)
{
    CheckResult r{"per-vertex valence test = global monochromatic state"};
    detail::each(
        r, corpus, [&](const HypermapCollection& h) { return h.genus() == 0 && h.size() <= max_edges; },
        [&](const HypermapCollection& h) {
            const EulerianMap medial = medial_map(h);
            const std::vector<CoherentMatching> states = coherent_matchings(medial);
            const std::vector<Cycle> vertices = medial.sigma_prime.cycles();
            const Permutation sinv = h.sigma().inverse();
            hypermap::detail::for_each_eulerian_coloring(h, m, [&](const std::vector<int>& lambda) {
                auto color = [&](int p) {
                    using namespace signed_point;
                    return lambda[static_cast<std::size_t>(is_plus(p) ? base(p) : sinv(base(p)))];
                };
                bool local = true;
                for (const Cycle& v : vertices) {
                    local = local && valence(v, lambda, sinv) > 0;
                }
                bool global = false;
                for (const CoherentMatching& mu : states) {
                    bool mono = true;
                    for (int p = 1; p <= mu.size() && mono; ++p) {
                        mono = color(p) == color(mu(p));
                    }
                    if (mono) {
                        global = true;
                        break;
                    }
                }
                r.expect(local == global, [&] { return detail::describe(h) + ": valence test disagrees"; });
            });
        });
    return r;
}

inline CheckResult check_eulerian_colorings(const Corpus& corpus, int max_edges = 8)
{
    CheckResult r{"genus 0: sum over Eulerian m-colorings of valence products = m^kappa R(m, m)"};
    detail::each(
        r, corpus, [&](const HypermapCollection& h) { return h.genus() == 0 && h.size() <= max_edges; },
        [&](const HypermapCollection& h) {
            const BivariatePolynomial rp = whitney_bruteforce(h);
            const UnivariatePolynomial j = circuit_partition_polynomial(medial_map(h));
            for (int m = 1; m <= 3; ++m) {
                const BigInt expected =
                    ipow(BigInt(m), static_cast<unsigned>(h.kappa())) * evaluate_integer(rp, {BigInt(m), BigInt(m)});
                const BigInt sum = eulerian_coloring_sum_unchecked(h, m);
                r.expect(sum == expected && evaluate_integer(j, {BigInt(m)}) == expected,
                         [&] { return detail::describe(h) + ": m=" + std::to_string(m) + " sum " + to_string(sum) + " vs " + to_string(expected); });
                if (detail::is_map(h)) {
                    r.expect(map_coloring_sum(h, m) == expected, [&] { return detail::describe(h) + ": map form, m=" + std::to_string(m); });
                }
            }
        });
    return r;
}

inline CheckResult check_digraph_roundtrip(std::uint64_t seed, int trials = 50)
{
    CheckResult r{"from_eulerian_digraph: medial digraph isomorphic to input"};
    Rng rng(seed);
    for (int k = 0; k < trials && r.passed; ++k) {
        ++r.cases;
        const EulerianDigraph d = random_eulerian_digraph(rng, 6, 12);
        try {
            const HypermapCollection h = from_eulerian_digraph(d);
            r.expect(digraphs_isomorphic(medial_digraph(h), d), [&] { return "digraph\n" + print_edge_list(d); });
        } catch (const std::exception& e) {
            r.fail(std::string("digraph trial ") + std::to_string(k) + ": " + e.what());
        }
    }
    return r;
}

inline CheckResult check_digraph_of_collections(const Corpus& corpus)
{
    CheckResult r{"medial digraph of a collection survives the round trip"};
    detail::each(
        r, corpus, [](const HypermapCollection& h) { return h.alpha().cycle_count() <= 6; },
        [&](const HypermapCollection& h) {
            const EulerianDigraph d = medial_digraph(h);
            const HypermapCollection back = from_eulerian_digraph(d);
            r.expect(d.is_eulerian() && back.size() == h.size() && back.alpha().cycle_count() == h.alpha().cycle_count() &&
                         digraphs_isomorphic(medial_digraph(back), d),
                     [&] { return detail::describe(h); });
        });
    return r;
}

// ---- characteristic and flow polynomials -------------------------------------------

inline CheckResult check_chromatic_identity(const Corpus& corpus)
{
    CheckResult r{"sum of X([beta, alpha]; t) = t^z(sigma); X([id, alpha]) = t^kappa chi"};
    detail::each(r, corpus, detail::any, [&](const HypermapCollection& h) {
        UnivariatePolynomial sum;
        for (const Permutation& beta : refinements(h.alpha())) {
            sum += x_interval(h, beta, h.alpha());
        }
        const Permutation id = Permutation::identity(h.size());
        r.expect(sum == detail::t_power(h.sigma().cycle_count()) &&
                     x_interval(h, id, h.alpha()) == detail::t_power(h.kappa()) * characteristic_polynomial(h) &&
                     x_interval(h, h.alpha(), h.alpha()) == detail::t_power(h.kappa()),
                 [&] { return detail::describe(h) + ": " + format(sum, "t"); });
    });
    return r;
}

inline CheckResult check_flow_identity(const Corpus& corpus)
{
    CheckResult r{"sum of C(sigma, beta; t) = t^(n + kappa - z(alpha) - z(sigma))"};
    detail::each(r, corpus, detail::any, [&](const HypermapCollection& h) {
        UnivariatePolynomial sum;
        for (const Permutation& beta : refinements(h.alpha())) {
            sum += flow_polynomial(HypermapCollection(h.sigma(), beta));
        }
        const int e = h.size() + h.kappa() - h.alpha().cycle_count() - h.sigma().cycle_count();
        r.expect(sum == detail::t_power(e), [&] { return detail::describe(h) + ": " + format(sum, "t"); });
        if (h.genus() == 0) {
            // t^kappa sum C = t^z(faces); for a hypermap that is the single factor t.
            r.expect(detail::t_power(h.kappa()) * sum == detail::t_power(h.faces().cycle_count()),
                     [&] { return detail::describe(h) + ": face identity"; });
        }
    });
    return r;
}

inline CheckResult check_map_char_flow(const Corpus& corpus)
{
    CheckResult r{"maps: chi and C against graph subset expansions"};
    detail::each(r, corpus, detail::is_map, [&](const HypermapCollection& h) {
        const Graph g = graph_of_map(h);
        const UnivariatePolynomial chi = characteristic_polynomial(h);
        const UnivariatePolynomial t = UnivariatePolynomial::variable(0);
        UnivariatePolynomial from_r = substitute<2, 1>(whitney_bruteforce(h), {-t, UnivariatePolynomial::constant(-1)});
        if ((h.sigma().cycle_count() - h.kappa()) % 2 != 0) {
            from_r = -from_r;
        }
        r.expect(detail::t_power(h.kappa()) * chi == graph_chromatic(g) && chi == from_r,
                 [&] { return detail::describe(h) + ": chi = " + format(chi, "t"); });
        r.expect(flow_polynomial(h) == graph_flow(g), [&] { return detail::describe(h) + ": C = " + format(flow_polynomial(h), "t"); });
    });
    return r;
}

inline bool small_hyperedges(const HypermapCollection& h) { return max_cycle_length(h.alpha()) <= 3; }

inline CheckResult check_three_coloring(const Corpus& corpus)
{
    CheckResult r{"hyperedges <= 3: proper colorings = m^kappa chi(m), compatible = X(m)"};
    detail::each(r, corpus, small_hyperedges, [&](const HypermapCollection& h) {
        const UnivariatePolynomial chi = characteristic_polynomial(h);
        for (int m : {2, 3, 5}) {
            const BigInt expected = ipow(BigInt(m), static_cast<unsigned>(h.kappa())) * evaluate_integer(chi, {BigInt(m)});
            const BigInt count = proper_coloring_count(h, m);
            r.expect(count == expected, [&] { return detail::describe(h) + ": m=" + std::to_string(m) + " " + to_string(count) + " vs " + to_string(expected); });
        }
        for (const Permutation& alpha1 : refinements(h.alpha())) {
            const UnivariatePolynomial x = x_interval(h, alpha1, h.alpha());
            for (int m = 1; m <= 3; ++m) {
                r.expect(compatible_coloring_count(h, alpha1, m) == evaluate_integer(x, {BigInt(m)}),
                         [&] { return detail::describe(h) + ": alpha1=" + alpha1.to_string() + " m=" + std::to_string(m); });
            }
        }
    });
    return r;
}

inline CheckResult check_nowhere_zero(const Corpus& corpus)
{
    CheckResult r{"hyperedges <= 3: nowhere-zero flows = C(q); unique refinement"};
    detail::each(r, corpus, small_hyperedges, [&](const HypermapCollection& h) {
        const UnivariatePolynomial c = flow_polynomial(h);
        for (int q : {2, 3, 5}) {
            const BigInt expected = evaluate_integer(c, {BigInt(q)});
            r.expect(nowhere_zero_flow_count(h, q) == expected, [&] { return detail::describe(h) + ": q=" + std::to_string(q); });
        }
        const int q = 3;
        std::vector<Point> reversed;
        for (Point i = h.size(); i >= 1; --i) {
            reversed.push_back(i);
        }
        for_each_flow(h, q, kDefaultFlowCap, [&](const Flow& f) {
            const Permutation beta = unique_nz_refinement(h, f, q);
            const HypermapCollection sub(h.sigma(), beta);
            r.expect(is_refinement(beta, h.alpha()) && is_flow(sub, f, q) && is_nowhere_zero(sub, f) &&
                         unique_nz_refinement(h, f, q, reversed) == beta,
                     [&] { return detail::describe(h) + ": refinement " + beta.to_string(); });
            std::uint64_t carriers = 0;
            for (const Permutation& b : refinements(h.alpha())) {
                const HypermapCollection s(h.sigma(), b);
                carriers += is_flow(s, f, q) && is_nowhere_zero(s, f) ? 1 : 0;
            }
            r.expect(carriers == 1, [&] { return detail::describe(h) + ": flow carried by " + std::to_string(carriers) + " refinements"; });
        });
    });
    return r;
}

inline CheckResult check_flow_space(const Corpus& corpus)
{
    CheckResult r{"flow space dimension n + kappa - z(sigma) - z(alpha); q^dim flows"};
    detail::each(r, corpus, detail::any, [&](const HypermapCollection& h) {
        for (int q : {2, 3, 5}) {
            const FlowSpace space = flow_space(h, q);
            for (const Flow& f : space.basis) {
                r.expect(is_flow(h, f, q), [&] { return detail::describe(h) + ": basis vector is not a flow"; });
            }
            if (ipow(BigInt(q), static_cast<unsigned>(h.size())) > 20'000) {
                continue;
            }
            // Every assignment, independently of the elimination.
            std::uint64_t flows = 0;
            Flow f(static_cast<std::size_t>(h.size()) + 1, 0);
            while (true) {
                flows += is_flow(h, f, q) ? 1 : 0;
                std::size_t k = 1;
                for (; k < f.size(); ++k) {
                    if (++f[k] < q) {
                        break;
                    }
                    f[k] = 0;
                }
                if (k == f.size()) {
                    break;
                }
            }
            r.expect(flows == ipow(BigInt(q), static_cast<unsigned>(space.dimension)),
                     [&] { return detail::describe(h) + ": q=" + std::to_string(q) + " counted " + std::to_string(flows); });
        }
    });
    return r;
}

/// The two documented failure cases for hyperedges of length 4: the 4-cycle coloring
/// example and the nowhere-zero flow carried by several refinements.
inline CheckResult check_counterexamples()
{
    CheckResult r{"length-4 hyperedge counterexamples"};
    r.cases = 2;
    const HypermapCollection c4 = HypermapCollection::from_cycles(4, {}, {{1, 2, 3, 4}});
    const BigInt colorings = proper_coloring_count(c4, 2);
    const BigInt formula = ipow(BigInt(2), 1) * evaluate_integer(characteristic_polynomial(c4), {BigInt(2)});
    r.expect(!is_refinement(Permutation::from_cycles(4, {{1, 3}, {2, 4}}), c4.alpha()) && colorings == 0 && formula == -2,
             [&] { return "4-cycle: colorings " + to_string(colorings) + ", m^kappa chi(m) " + to_string(formula); });

    const HypermapCollection h =
        HypermapCollection::from_cycles(8, {{1, 5}, {2, 6}, {3, 7}, {4, 8}}, {{1, 2, 3, 4}, {5, 6}, {7, 8}});
    const Permutation beta1 = Permutation::from_cycles(8, {{1, 2}, {3, 4}, {5, 6}, {7, 8}});
    const Permutation beta2 = Permutation::from_cycles(8, {{1, 4}, {2, 3}, {5, 6}, {7, 8}});
    r.expect(flow_space(h, 2).dimension == 2 && is_refinement(beta1, h.alpha()) && is_refinement(beta2, h.alpha()),
             [] { return "flow example: dimension or refinements"; });
    auto carried_everywhere = [&](const Flow& f, int q) {
        for (const Permutation& b : {h.alpha(), beta1, beta2}) {
            const HypermapCollection s(h.sigma(), b);
            if (!is_flow(s, f, q) || !is_nowhere_zero(s, f)) {
                return false;
            }
        }
        return true;
    };
    // f(i) = (-1)^i, literally; it is a flow only in characteristic 2.
    Flow literal(9, 0);
    for (int i = 1; i <= 8; ++i) {
        literal[static_cast<std::size_t>(i)] = i % 2 == 0 ? 1 : -1;
    }
    Flow literal2 = literal;
    for (int& x : literal2) {
        x = PrimeField(2).reduce(x);
    }
    r.expect(carried_everywhere(literal2, 2) && !is_flow(h, literal, 3), [] { return "f(i) = (-1)^i over GF(2)"; });
    // The sign-corrected flow works in every characteristic.
    for (int q : {3, 5}) {
        Flow f(9, 0);
        for (int i = 1; i <= 8; ++i) {
            const int sign = (i <= 4 ? i : i + 1) % 2 == 0 ? 1 : -1;
            f[static_cast<std::size_t>(i)] = PrimeField(q).reduce(sign);
        }
        r.expect(carried_everywhere(f, q), [&] { return "sign-corrected flow over GF(" + std::to_string(q) + ")"; });
    }
    // A leaf vertex admits no nowhere-zero flow.
    const HypermapCollection leaf = HypermapCollection::from_cycles(2, {}, {{1, 2}});
    r.expect(nowhere_zero_flow_count(leaf, 3) == 0, [] { return "leaf vertex"; });
    // An empty compatible set.
    const HypermapCollection six = HypermapCollection::from_cycles(6, {{1, 2}, {3, 4}, {5, 6}}, {{2, 3}, {4, 5}, {1, 6}});
    r.expect(compatible_coloring_count(six, Permutation::from_cycles(6, {{2, 3}, {4, 5}}), 3) == 0,
             [] { return "empty compatible colorings"; });
    return r;
}

// ---- input/output ------------------------------------------------------------------

inline CheckResult check_io_roundtrip(const Corpus& corpus)
{
    CheckResult r{"hypermap text and JSON round trips"};
    detail::each(r, corpus, detail::any, [&](const HypermapCollection& h) {
        const HypermapDocument doc = HypermapDocument::from_collection(h);
        const std::string text = print_hypermap(doc);
        const HypermapDocument back = parse_hypermap(text);
        const HypermapDocument from_json = parse_hypermap(to_json(doc).dump());
        r.expect(back.collection() == h && print_hypermap(back) == text && from_json.collection() == h,
                 [&] { return "round trip of\n" + text; });
    });
    const std::vector<std::string> malformed{
        "sigma: (1 2\nalpha: (1 2)",     "sigma: (1 2)(2 3)\nalpha: ()", "n: 2\nsigma: (1 3)\nalpha: ()",
        "sigma: (1 x)\nalpha: ()",       "alpha: (1 2)",                 "sigma: (0)\nalpha: ()",
        "{\"sigma\": [[1, 2]], \"alpha\": 3}", "{\"sigma\": [[1, 1]], \"alpha\": []}", "{\"sigma\": [[1, 2]",
        "sigma (1 2)\nalpha: ()",        "sigma: (1 2)\nalpha: (1 2)\nbeta: (1)"};
    for (const std::string& bad : malformed) {
        ++r.cases;
        try {
            parse_hypermap(bad);
            r.fail("accepted malformed input: " + bad);
        } catch (const ParseError&) {
        }
    }
    return r;
}

struct SuiteOptions {
    std::uint64_t seed = 0;
    int n_max = 8;
    int count = 500;
};

/// Every property check, in a fixed order.
inline std::vector<CheckResult> run_all_checks(const SuiteOptions& options, const std::function<void(const CheckResult&)>& report = {})
{
    CorpusOptions co;
    co.count = options.count;
    co.n_max = options.n_max;
    const Corpus corpus = make_corpus(options.seed, co);
    std::vector<std::function<CheckResult()>> checks{
        [&] { return check_genus_formula(corpus); },
        [&] { return check_orbit_identities(corpus); },
        [&] { return check_map_euler_genus(corpus); },
        [&] { return check_refinement_counts(8); },
        [&] { return check_refinement_definition(5); },
        [&] { return check_mobius_nc(7); },
        [&] { return check_mobius_multiplicative(corpus); },
        [&] { return check_polynomial_ring(options.seed); },
        [&] { return check_polynomial_roundtrip(corpus, options.seed); },
        [&] { return check_whitney_triangle(corpus); },
        [&] { return check_recursion_branches(corpus); },
        [&] { return check_product(corpus); },
        [&] { return check_merge(corpus); },
        [&] { return check_planar_duality(corpus); },
        [&] { return check_map_whitney(corpus); },
        [&] { return check_narayana(2, 7); },
        [&] { return check_specializations(corpus); },
        [&] { return check_wet_dry(corpus); },
        [&] { return check_medial_structure(corpus); },
        [&] { return check_matching_bijection(corpus); },
        [&] { return check_worked_matching(); },
        [&] { return check_circuit_partition(corpus, 14); },
        [&] { return check_map_states(corpus); },
        [&] { return check_eulerian_colorings(corpus, 8); },
        [&] { return check_valence_equivalence(corpus, 2, 8); },
        [&] { return check_digraph_roundtrip(options.seed, 50); },
        [&] { return check_digraph_of_collections(corpus); },
        [&] { return check_chromatic_identity(corpus); },
        [&] { return check_flow_identity(corpus); },
        [&] { return check_map_char_flow(corpus); },
        [&] { return check_three_coloring(corpus); },
        [&] { return check_nowhere_zero(corpus); },
        [&] { return check_flow_space(corpus); },
        [&] { return check_counterexamples(); },
        [&] { return check_io_roundtrip(corpus); },
    };
    std::vector<CheckResult> results;
    for (const auto& check : checks) {
        results.push_back(check());
        if (report) {
            report(results.back());
        }
    }
    return results;
}

} // namespace hypermap::testing
