#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glab/group.hpp"
#include "glab/lattice.hpp"

namespace glab {

struct Tuple {
    FiniteGroup group;
    std::vector<elem_t> entries;

    std::size_t arity() const { return entries.size(); }
    bool operator==(const Tuple& o) const { return entries == o.entries; }
};

Tuple make_tuple(const FiniteGroup& g, std::vector<elem_t> entries);

struct Move {
    enum class Kind : std::uint8_t { Swap, Invert, RightMul, RightMulInv };
    Kind kind = Kind::Swap;
    std::uint16_t i = 0, j = 0;  // 0-based positions; j ignored for Invert

    Move inverse() const;
    bool operator==(const Move& o) const = default;
};
using MoveSeq = std::vector<Move>;

Move swap_move(int i, int j);
Move invert_move(int i);
Move rmul_move(int i, int j, bool inverse);

void apply_move_inplace(const Move& m, const FiniteGroup& g, std::vector<elem_t>& e);
Tuple apply_move(const Move& m, const Tuple& t);
Tuple apply_moves(const MoveSeq& seq, const Tuple& t);

// Base-|G| packing; requires |G|^n < 2^63.
bool pack_fits(const FiniteGroup& g, std::size_t n);
std::uint64_t pack_tuple(const FiniteGroup& g, const std::vector<elem_t>& entries);
std::vector<elem_t> unpack_tuple(const FiniteGroup& g, std::size_t n, std::uint64_t code);

struct OrbitSet {
    std::vector<std::uint64_t> states;  // sorted packed encodings
    bool complete = true;
};

// Serial reference BFS over the four move kinds (adjacent swaps, inversions,
// right multiplications and their inverses).
OrbitSet orbit_serial(const Tuple& t, std::uint64_t cap = UINT64_MAX);
// Frontier-parallel BFS; identical result set.
OrbitSet orbit(const Tuple& t, std::uint64_t cap = UINT64_MAX);
// Byte-string fallback used when base-|G| packing does not fit in 63 bits.
std::vector<std::string> orbit_bytes(const Tuple& t, std::uint64_t cap, bool* complete);

struct OrbitInfo {
    std::vector<elem_t> representative;  // smallest packed state in the orbit
    std::uint64_t size = 0;
    int image_subgroup = -1;       // index into the lattice
    bool is_epi_of_image = false;  // orbit == Epi(F_n; image subgroup)
    int det_class = -1;            // determinant label for F_q^r basis tuples, else -1
};

struct OrbitReport {
    GroupSpec group;
    int n = 0;
    std::uint64_t space = 0;
    std::uint64_t budget = 0;
    std::vector<OrbitInfo> orbits;
    bool matched_classification = false;
};

// Partition all of G^n into Nielsen orbits (dense bitmap BFS, OpenMP-parallel)
// and compare against the subgroup classification {Epi(F_n; H)}.
OrbitReport classify(const FiniteGroup& g, int n, const SubgroupLattice& lattice, std::uint64_t budget = 300000000);

struct RedundancyResult {
    enum class Verdict { Redundant, NotRedundant, Indeterminate };
    Verdict verdict = Verdict::Indeterminate;
    // Replays from the input to a tuple whose first n-k entries generate the image.
    MoveSeq witness;
};

// k-redundancy: some orbit member's first n-k entries generate closure(t).
// Constructive compression is tried first, exhaustive orbit BFS second.
RedundancyResult is_redundant(const Tuple& t, int k, std::uint64_t cap = 2000000);

// Lemma: redundancy of a prefix (as a tuple) lifts to the full tuple.
// prefix_witness must use only indices < prefix_len and exhibit
// <t'_1..t'_{p-1}> = <t_1..t_p> after replay, with p = prefix_len.
MoveSeq partial_redundancy_lift(const Tuple& t, int prefix_len, const MoveSeq& prefix_witness);

// |Epi(F_n; H)| for every lattice subgroup, by Moebius inversion of |H|^n.
std::vector<std::uint64_t> epi_counts(const SubgroupLattice& lattice, int n);

}  // namespace glab
