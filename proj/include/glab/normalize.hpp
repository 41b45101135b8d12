#pragma once

#include <span>

#include "glab/invariants.hpp"
#include "glab/nielsen.hpp"

namespace glab {

struct CanonicalForm {
    Tuple source;
    Tuple target;
    MoveSeq witness;
};

// 0 -> A -> G -> Q -> 1 with A abelian and normal, plus the invariants of Q
// the normalization bounds are phrased in.
struct ExactSequenceData {
    FiniteGroup group;
    Subgroup A;
    FiniteGroup Q;
    std::vector<elem_t> projection;  // element -> Q element
    std::uint32_t dA = 0;
    std::uint32_t icQ_tilde = 0;
    std::uint32_t dQ_tilde = 0;

    static ExactSequenceData make(const FiniteGroup& g, const Subgroup& a);
};

// Lattice and invariants of a group, shared by the normalization routines.
struct NormalizeContext {
    FiniteGroup group;
    SubgroupLattice lattice;
    InvariantReport inv;

    static NormalizeContext make(const FiniteGroup& g);
};

// Entry i becomes entry_i * w^{sign} (or w^{sign} * entry_i on the left),
// where w is a word over the other tuple positions (signed 1-based letters).
// The move sequence uses only RightMul/RightMulInv/Invert.
std::pair<Tuple, MoveSeq> compress_step(const Tuple& t, int index, const Word& word, bool left, int sign);

// Witness carrying an epimorphism tuple to (targets, id, ..., id).
CanonicalForm canonicalize_epi(const Tuple& t, std::span<const elem_t> targets, const NormalizeContext& ctx);

// Abelian transitivity witness to (targets, id, ..., id), by induction through
// a maximal chain (recurse in A/G_1 for a prime-order G_1, then fix up the
// G_1 discrepancies).
CanonicalForm dunwoody_abelian(const Tuple& t, std::span<const elem_t> targets);

// Witness to a tuple with trailing identity and unchanged image:
// incompressible Q-generating prefix, tail pushed into A, tail reduced.
MoveSeq exseq_redundancy(const Tuple& t, const ExactSequenceData& data);

// Witness to the canonical form (u_1..u_e, q_1..q_d, id, ..., id) of the
// image subgroup, where the u's generate A n H and the q's project onto
// generators of the projection of H.
CanonicalForm jordan_canonical(const Tuple& t, const ExactSequenceData& data);

// Replay seq on src; checks the endpoint and optionally that the closure of
// the entries is unchanged after every single move.
bool verify_witness(const Tuple& src, const MoveSeq& seq, const Tuple& expected, bool check_image_each_step,
                    std::string* diagnostic = nullptr);

}  // namespace glab
