#include "glab/invariants.hpp"

#include <algorithm>
#include <bit>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace glab {

int binary_ones(std::uint64_t n) { return std::popcount(n); }

namespace {

// Incremental closure: extend a closed set by one generator.
std::vector<elem_t> extend_closure(const FiniteGroup& g, const std::vector<elem_t>& closed, elem_t x) {
    thread_local std::vector<std::uint32_t> stamp;
    thread_local std::uint32_t stamp_val = 0;
    if (stamp.size() < g.order()) stamp.resize(g.order(), 0);
    ++stamp_val;
    if (stamp_val == 0) {
        std::fill(stamp.begin(), stamp.end(), 0);
        stamp_val = 1;
    }
    std::vector<elem_t> out = closed;
    for (elem_t m : closed) stamp[m] = stamp_val;
    std::vector<elem_t> frontier;
    if (stamp[x] != stamp_val) {
        stamp[x] = stamp_val;
        out.push_back(x);
        frontier.push_back(x);
    }
    // multiply frontier with everything known (both sides) until stable
    while (!frontier.empty()) {
        std::vector<elem_t> next;
        const std::size_t snapshot = out.size();
        for (elem_t f : frontier) {
            for (std::size_t i = 0; i < snapshot; ++i) {
                elem_t a = g.mul(f, out[i]);
                if (stamp[a] != stamp_val) {
                    stamp[a] = stamp_val;
                    out.push_back(a);
                    next.push_back(a);
                }
                elem_t b = g.mul(out[i], f);
                if (stamp[b] != stamp_val) {
                    stamp[b] = stamp_val;
                    out.push_back(b);
                    next.push_back(b);
                }
            }
        }
        frontier = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

bool is_incompressible(const FiniteGroup& g, std::span<const elem_t> s) {
    if (s.empty()) return false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::vector<elem_t> rest;
        rest.reserve(s.size() - 1);
        for (std::size_t j = 0; j < s.size(); ++j)
            if (j != i) rest.push_back(s[j]);
        if (closure(g, rest).contains(s[i])) return false;
    }
    return true;
}

std::uint32_t subset_rank(const FiniteGroup& g, std::span<const elem_t> universe, std::vector<elem_t>* witness) {
    if (universe.size() == 1) {
        if (witness) witness->clear();
        return 0;
    }
    std::vector<elem_t> target(universe.begin(), universe.end());
    std::sort(target.begin(), target.end());

    // single element
    for (elem_t x : target) {
        if (x == 0) continue;
        if (g.element_order(x) == target.size()) {
            auto c = closure(g, std::span<const elem_t>(&x, 1));
            if (c.members == target) {
                if (witness) *witness = {x};
                return 1;
            }
        }
    }

    std::vector<elem_t> identityless;
    for (elem_t x : target)
        if (x != 0) identityless.push_back(x);

    // DFS over subsets in lexicographic order; every element added must lie
    // outside the closure of the earlier ones, which is exhaustive at k = d(G)
    // because minimal generating sets have strictly growing prefix closures.
    for (std::uint32_t k = 2;; ++k) {
        std::vector<elem_t> chosen;
        std::vector<elem_t> found;
        std::vector<std::vector<elem_t>> closures{{0}};
        auto dfs = [&](auto&& self, std::size_t start) -> bool {
            if (chosen.size() == k) return false;  // only leaves of exact size checked below
            for (std::size_t i = start; i < identityless.size(); ++i) {
                elem_t x = identityless[i];
                const auto& cur = closures.back();
                if (std::binary_search(cur.begin(), cur.end(), x)) continue;
                auto ext = extend_closure(g, cur, x);
                if (ext.size() > target.size()) continue;  // escaped the universe (subgroup case)
                chosen.push_back(x);
                if (chosen.size() == k) {
                    if (ext == target) {
                        found = chosen;
                        chosen.pop_back();
                        return true;
                    }
                } else {
                    closures.push_back(std::move(ext));
                    if (self(self, i + 1)) {
                        closures.pop_back();
                        chosen.pop_back();
                        return true;
                    }
                    closures.pop_back();
                }
                chosen.pop_back();
            }
            return false;
        };
        if (dfs(dfs, 0)) {
            if (witness) *witness = found;
            return k;
        }
        if (k > 64) throw ValidationError("rank", "rank search runaway (internal)");
    }
}

std::uint32_t rank(const FiniteGroup& g, std::vector<elem_t>* witness) {
    std::vector<elem_t> all(g.order());
    for (std::uint64_t i = 0; i < g.order(); ++i) all[i] = static_cast<elem_t>(i);
    return subset_rank(g, all, witness);
}

namespace {

// Sets of exact size k, every element outside the closure of its predecessors
// (a necessary condition for incompressibility). Leaves get the full check.
// Returns the lexicographically first hit.
bool search_incompressible(const FiniteGroup& g, std::uint32_t k, bool require_generating,
                           std::vector<elem_t>* witness) {
    const std::uint64_t n = g.order();
    std::vector<elem_t> candidates;
    for (std::uint64_t x = 1; x < n; ++x) candidates.push_back(static_cast<elem_t>(x));
    if (k == 0) return false;
    if (k == 1) {
        // any single non-identity element is incompressible; generating needs ord = |G|
        for (elem_t x : candidates) {
            if (require_generating && g.element_order(x) != n) continue;
            if (witness) *witness = {x};
            return true;
        }
        return false;
    }

    struct Hit {
        bool found = false;
        std::vector<elem_t> set;
    };
    std::vector<Hit> hits(candidates.size());

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::size_t first = 0; first < candidates.size(); ++first) {
        // deterministic: each first-element subtree reports its own lex-min hit
        std::vector<elem_t> chosen{candidates[first]};
        std::vector<std::vector<elem_t>> closures;
        closures.push_back(extend_closure(g, {0}, candidates[first]));
        auto dfs = [&](auto&& self, std::size_t start) -> bool {
            for (std::size_t i = start; i < candidates.size(); ++i) {
                elem_t x = candidates[i];
                const auto& cur = closures.back();
                if (std::binary_search(cur.begin(), cur.end(), x)) continue;
                chosen.push_back(x);
                if (chosen.size() == k) {
                    bool ok = !require_generating || extend_closure(g, cur, x).size() == n;
                    if (ok && is_incompressible(g, chosen)) return true;
                } else {
                    closures.push_back(extend_closure(g, cur, x));
                    if (self(self, i + 1)) {
                        closures.pop_back();
                        return true;
                    }
                    closures.pop_back();
                }
                chosen.pop_back();
            }
            return false;
        };
        if (dfs(dfs, first + 1)) {
            hits[first].found = true;
            hits[first].set = chosen;
        }
    }
    for (const auto& h : hits)
        if (h.found) {
            if (witness) *witness = h.set;
            return true;
        }
    return false;
}

}  // namespace

std::uint32_t ic(const FiniteGroup& g, std::uint32_t cl_upper, std::vector<elem_t>* witness) {
    if (g.order() == 1) {
        if (witness) witness->clear();
        return 0;
    }
    for (std::uint32_t k = cl_upper;; --k) {
        if (search_incompressible(g, k, true, witness)) return k;
        if (k == 0) break;
    }
    throw ValidationError("ic", "no incompressible generating set found (internal)");
}

std::uint32_t ic_tilde(const FiniteGroup& g, std::uint32_t cl_upper, std::vector<elem_t>* witness) {
    if (g.order() == 1) {
        if (witness) witness->clear();
        return 0;
    }
    for (std::uint32_t k = cl_upper;; --k) {
        if (search_incompressible(g, k, false, witness)) return k;
        if (k == 0) break;
    }
    throw ValidationError("ic_tilde", "no incompressible set found (internal)");
}

bool jordan_size_check(const FiniteGroup& g, const SubgroupLattice& lattice, std::uint64_t J, std::uint64_t R,
                       int* witness_subgroup) {
    for (std::size_t i = 0; i < lattice.subgroups.size(); ++i) {
        const auto& s = lattice.subgroups[i];
        if (g.order() / s.order() > J) continue;
        if (!lattice.is_normal_subgroup(static_cast<int>(i))) continue;
        if (!is_abelian_set(g, s.members)) continue;
        if (subset_rank(g, s.members) > R) continue;
        if (witness_subgroup) *witness_subgroup = static_cast<int>(i);
        return true;
    }
    if (witness_subgroup) *witness_subgroup = -1;
    return false;
}

InvariantReport compute_invariants(const FiniteGroup& g, const SubgroupLattice& lattice, bool skip_ic_tilde) {
    InvariantReport r;
    r.order = g.order();
    r.chain = longest_chain(lattice);
    r.cl = static_cast<std::uint32_t>(r.chain.size()) - 1;
    r.d = rank(g, &r.d_witness);
    r.ic = ic(g, r.cl, &r.ic_witness);
    if (skip_ic_tilde) {
        r.ic_tilde_skipped = true;
        r.ic_tilde = r.ic;
    } else {
        r.ic_tilde = ic_tilde(g, r.cl, &r.ic_tilde_witness);
    }
    // d~ = max rank over lattice subgroups
    r.d_tilde = 0;
    for (std::size_t i = 0; i < lattice.subgroups.size(); ++i) {
        std::vector<elem_t> w;
        std::uint32_t dk = subset_rank(g, lattice.subgroups[i].members, &w);
        if (dk > r.d_tilde) {
            r.d_tilde = dk;
            r.d_tilde_subgroup = static_cast<int>(i);
            r.d_tilde_witness = w;
        }
    }
    return r;
}

}  // namespace glab
