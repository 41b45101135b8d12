#pragma once

#include <cstdint>
#include <vector>

#include "glab/group.hpp"

namespace glab {

struct SubgroupLattice {
    FiniteGroup group;
    // Sorted by (order, member list); [0] is trivial, back() the full group.
    std::vector<Subgroup> subgroups;
    // (i, j): subgroups[i] is maximal in subgroups[j].
    std::vector<std::pair<int, int>> covering;
    std::vector<std::vector<int>> conjugacy_classes;
    std::vector<int> class_of;

    int index_of(const std::vector<elem_t>& members) const;
    int full_index() const { return static_cast<int>(subgroups.size()) - 1; }
    bool is_normal_subgroup(int idx) const { return conjugacy_classes[class_of[idx]].size() == 1; }
    bool contains(int inner, int outer) const;  // member-set inclusion
};

// Thrown when enumeration exceeds its subgroup budget; carries the partial result.
class LatticeBudgetError : public BudgetError {
public:
    LatticeBudgetError(const std::string& msg, SubgroupLattice partial)
        : BudgetError(msg), partial(std::move(partial)) {}
    SubgroupLattice partial;
};

// Complete subgroup list by cyclic seeding followed by closures of unions of
// known subgroups with cyclic subgroups, iterated to a fixed point.
SubgroupLattice enumerate_subgroups(const FiniteGroup& g, std::size_t max_subgroups = 100000,
                                    std::uint64_t max_order = 10000);

// cl(G): longest path from the trivial subgroup to the full group.
std::uint32_t chain_length(const SubgroupLattice& l);
// One maximal chain realizing cl(G), as subgroup indices (trivial .. full).
std::vector<int> longest_chain(const SubgroupLattice& l);

}  // namespace glab
