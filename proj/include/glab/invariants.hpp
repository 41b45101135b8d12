#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "glab/group.hpp"
#include "glab/lattice.hpp"

namespace glab {

struct InvariantReport {
    std::uint64_t order = 0;
    std::uint32_t d = 0, d_tilde = 0, ic = 0, ic_tilde = 0, cl = 0;
    std::vector<elem_t> d_witness, ic_witness, ic_tilde_witness, d_tilde_witness;
    int d_tilde_subgroup = -1;
    std::vector<int> chain;  // subgroup indices realizing cl
    bool ic_tilde_skipped = false;
};

// Number of ones in the binary expansion.
int binary_ones(std::uint64_t n);

// Smallest k such that some k-subset of the universe generates it. The
// universe must be closed (a subgroup's member list, or the whole group).
std::uint32_t subset_rank(const FiniteGroup& g, std::span<const elem_t> universe, std::vector<elem_t>* witness = nullptr);
std::uint32_t rank(const FiniteGroup& g, std::vector<elem_t>* witness = nullptr);

bool is_incompressible(const FiniteGroup& g, std::span<const elem_t> s);

// Exact maxima by descending-size search from the chain-length upper bound.
std::uint32_t ic(const FiniteGroup& g, std::uint32_t cl_upper, std::vector<elem_t>* witness = nullptr);
std::uint32_t ic_tilde(const FiniteGroup& g, std::uint32_t cl_upper, std::vector<elem_t>* witness = nullptr);

// True iff some normal abelian subgroup has rank <= R and index <= J.
bool jordan_size_check(const FiniteGroup& g, const SubgroupLattice& lattice, std::uint64_t J, std::uint64_t R,
                       int* witness_subgroup = nullptr);

InvariantReport compute_invariants(const FiniteGroup& g, const SubgroupLattice& lattice, bool skip_ic_tilde = false);

}  // namespace glab
