#include "glab/lattice.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace glab {

int SubgroupLattice::index_of(const std::vector<elem_t>& members) const {
    for (std::size_t i = 0; i < subgroups.size(); ++i)
        if (subgroups[i].members == members) return static_cast<int>(i);
    return -1;
}

bool SubgroupLattice::contains(int inner, int outer) const {
    const auto& a = subgroups[inner].members;
    const auto& b = subgroups[outer].members;
    if (a.size() > b.size()) return false;
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

SubgroupLattice enumerate_subgroups(const FiniteGroup& g, std::size_t max_subgroups, std::uint64_t max_order) {
    if (g.order() > max_order)
        throw ValidationError("order", "group order " + std::to_string(g.order()) +
                                           " exceeds the lattice limit " + std::to_string(max_order));

    SubgroupLattice lat;
    lat.group = g;

    std::set<std::vector<elem_t>> known;
    std::vector<Subgroup> queue_subs;

    auto add = [&](Subgroup s) -> bool {
        if (known.count(s.members)) return false;
        known.insert(s.members);
        queue_subs.push_back(std::move(s));
        if (known.size() > max_subgroups) {
            SubgroupLattice partial;
            partial.group = g;
            partial.subgroups = queue_subs;
            throw LatticeBudgetError("subgroup budget " + std::to_string(max_subgroups) + " exceeded", partial);
        }
        return true;
    };

    // trivial subgroup and cyclic seeds
    add(closure(g, std::vector<elem_t>{}));
    std::vector<Subgroup> cyclic;
    for (std::uint64_t x = 1; x < g.order(); ++x) {
        Subgroup c = closure(g, std::vector<elem_t>{static_cast<elem_t>(x)});
        if (!known.count(c.members)) cyclic.push_back(c);
        add(std::move(c));
    }

    // fixed point: close unions of known subgroups with cyclic subgroups
    std::size_t processed = 0;
    while (processed < queue_subs.size()) {
        const std::size_t batch_end = queue_subs.size();
        for (std::size_t si = processed; si < batch_end; ++si) {
            for (const auto& c : cyclic) {
                const Subgroup& s = queue_subs[si];
                if (std::includes(s.members.begin(), s.members.end(), c.members.begin(), c.members.end())) continue;
                std::vector<elem_t> gens = s.gens;
                gens.insert(gens.end(), c.gens.begin(), c.gens.end());
                Subgroup u = closure(g, gens);
                add(std::move(u));
            }
        }
        processed = batch_end;
    }

    lat.subgroups = std::move(queue_subs);
    std::sort(lat.subgroups.begin(), lat.subgroups.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
        return a.members < b.members;
    });

    const int n = static_cast<int>(lat.subgroups.size());

    // covering relation: strict inclusion with nothing in between
    std::vector<std::vector<char>> inc(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && lat.subgroups[i].members.size() < lat.subgroups[j].members.size())
                inc[i][j] = lat.contains(i, j);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!inc[i][j]) continue;
            bool covered = true;
            for (int k = 0; covered && k < n; ++k)
                if (inc[i][k] && inc[k][j]) covered = false;
            if (covered) lat.covering.emplace_back(i, j);
        }

    // conjugacy classes of subgroups
    std::map<std::vector<elem_t>, int> index;
    for (int i = 0; i < n; ++i) index[lat.subgroups[i].members] = i;
    lat.class_of.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        if (lat.class_of[i] != -1) continue;
        const int cls = static_cast<int>(lat.conjugacy_classes.size());
        lat.conjugacy_classes.push_back({});
        std::vector<int> todo{i};
        lat.class_of[i] = cls;
        lat.conjugacy_classes[cls].push_back(i);
        while (!todo.empty()) {
            int cur = todo.back();
            todo.pop_back();
            for (std::uint64_t x = 0; x < g.order(); ++x) {
                std::vector<elem_t> conj;
                conj.reserve(lat.subgroups[cur].members.size());
                for (elem_t m : lat.subgroups[cur].members) conj.push_back(g.conj(static_cast<elem_t>(x), m));
                std::sort(conj.begin(), conj.end());
                int idx = index.at(conj);
                if (lat.class_of[idx] == -1) {
                    lat.class_of[idx] = cls;
                    lat.conjugacy_classes[cls].push_back(idx);
                    todo.push_back(idx);
                }
            }
        }
        std::sort(lat.conjugacy_classes[cls].begin(), lat.conjugacy_classes[cls].end());
    }

    return lat;
}

std::uint32_t chain_length(const SubgroupLattice& l) { return static_cast<std::uint32_t>(longest_chain(l).size()) - 1; }

std::vector<int> longest_chain(const SubgroupLattice& l) {
    const int n = static_cast<int>(l.subgroups.size());
    // longest path in the covering DAG; subgroups are sorted by order, so the
    // index order is a topological order
    std::vector<int> best(n, 0), pred(n, -1);
    std::vector<std::vector<int>> preds_of(n);
    for (auto [i, j] : l.covering) preds_of[j].push_back(i);
    for (int j = 0; j < n; ++j)
        for (int i : preds_of[j])
            if (best[i] + 1 > best[j]) {
                best[j] = best[i] + 1;
                pred[j] = i;
            }
    std::vector<int> chain;
    for (int cur = n - 1; cur != -1; cur = pred[cur]) chain.push_back(cur);
    std::reverse(chain.begin(), chain.end());
    return chain;
}

}  // namespace glab
