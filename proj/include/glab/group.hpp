#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "glab/errors.hpp"

namespace glab {

using elem_t = std::uint32_t;

// Structured description of a finite group. Parsed from the spec DSL:
//   sym:n | cyc:N | ab:d1,d2,... | gl:r,q | sl:r,q | lamp:r,q
//   | prod(spec;spec;...) | cayley:path.json
struct GroupSpec {
    enum class Kind { Symmetric, Cyclic, Abelian, GeneralLinear, SpecialLinear, Lamplighter, Product, Cayley };
    Kind kind = Kind::Cyclic;

    std::uint32_t letters = 0;                  // Symmetric
    std::uint64_t modulus = 0;                  // Cyclic
    std::vector<std::uint64_t> moduli;          // Abelian
    std::uint32_t dim = 0, q = 0;               // GeneralLinear / SpecialLinear
    std::uint32_t shift_mod = 0, lamp_mod = 0;  // Lamplighter: Z/r acting on (Z/q)^r
    std::vector<GroupSpec> factors;             // Product
    std::string cayley_path;                    // Cayley (empty when inline)
    std::vector<std::vector<elem_t>> cayley;    // Cayley inline table
    std::vector<std::string> cayley_names;      // optional element names

    static GroupSpec parse(const std::string& dsl);
    std::string str() const;
};

// A word over an implicit generator list: signed 1-based indices,
// +i = gens[i-1], -i = its inverse.
struct Word {
    std::vector<std::int32_t> letters;

    Word inverted() const;
    // Concatenation with cancellation of adjacent inverse pairs.
    static Word concat(const Word& a, const Word& b);
    bool empty() const { return letters.empty(); }
};

class FiniteGroup {
public:
    FiniteGroup() = default;

    static FiniteGroup build(const GroupSpec& spec);

    bool valid() const { return impl_ != nullptr; }
    std::uint64_t order() const;
    elem_t id() const { return 0; }
    elem_t mul(elem_t a, elem_t b) const;
    elem_t inv(elem_t a) const;
    elem_t conj(elem_t g, elem_t x) const { return mul(mul(g, x), inv(g)); }
    elem_t pow(elem_t a, std::int64_t e) const;
    std::uint32_t element_order(elem_t a) const;
    bool is_abelian() const;
    const GroupSpec& spec() const;
    std::string describe(elem_t e) const;

    // Same underlying representation (not isomorphism).
    bool same_group(const FiniteGroup& other) const { return impl_ == other.impl_; }

    // Residue class {det, -det} of a general_linear element, as the smaller
    // field code of the pair. Throws for non-matrix groups.
    std::uint32_t determinant_class(elem_t e) const;

    // For matrix groups: element id of the matrix with the given row-major
    // field codes, or nullopt when the matrix is not in the group.
    std::optional<elem_t> element_from_matrix(std::span<const std::uint32_t> rowmajor) const;
    // Row-major field codes of a matrix-group element.
    std::vector<std::uint32_t> matrix_of(elem_t e) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    explicit FiniteGroup(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    friend std::pair<FiniteGroup, std::vector<elem_t>> quotient(const FiniteGroup&, const struct Subgroup&);
};

struct Subgroup {
    FiniteGroup owner;
    std::vector<elem_t> members;               // sorted, contains 0
    std::vector<elem_t> gens;                  // generating set used to build it
    std::unordered_map<elem_t, Word> witness;  // member -> word over gens, when requested

    bool contains(elem_t e) const;
    std::size_t order() const { return members.size(); }
};

// Smallest subgroup containing gens: BFS orbit of the identity under left
// multiplication by gens and their inverses. With witnesses, every member
// carries a word over gens that evaluates to it.
Subgroup closure(const FiniteGroup& g, std::span<const elem_t> gens, bool with_witnesses = false);

elem_t evaluate_word(const FiniteGroup& g, std::span<const elem_t> gens, const Word& w);

bool is_normal(const FiniteGroup& g, const Subgroup& s);
bool is_abelian_set(const FiniteGroup& g, std::span<const elem_t> members);

// Cayley-table group on cosets plus the projection map (element -> coset id).
// The subgroup must be normal.
std::pair<FiniteGroup, std::vector<elem_t>> quotient(const FiniteGroup& g, const Subgroup& n);

// A closed member set as a standalone Cayley group. Returns the group and the
// member list (new id -> old id); old ids map back via binary search.
std::pair<FiniteGroup, std::vector<elem_t>> subgroup_as_group(const FiniteGroup& g,
                                                              const std::vector<elem_t>& members);

}  // namespace glab
