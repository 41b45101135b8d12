#include "glab/normalize.hpp"

#include <algorithm>

#include "glab/field.hpp"

namespace glab {

namespace {

// Remap a word over a generator list to a word over tuple positions.
Word word_over_positions(const Word& w, const std::vector<int>& positions) {
    Word out;
    out.letters.reserve(w.letters.size());
    for (std::int32_t l : w.letters) {
        int gi = (l > 0 ? l : -l) - 1;
        std::int32_t pos = positions[gi] + 1;
        out.letters.push_back(l > 0 ? pos : -pos);
    }
    return out;
}

// Emit and apply moves realizing entry_index *= word (sign +1) or *= word^{-1}
// (sign -1). Word letters are signed 1-based tuple positions.
void apply_right_word(Tuple& cur, MoveSeq& seq, int index, const Word& word, int sign) {
    auto emit = [&](std::int32_t letter) {
        int j = (letter > 0 ? letter : -letter) - 1;
        Move m = rmul_move(index, j, letter < 0);
        seq.push_back(m);
        apply_move_inplace(m, cur.group, cur.entries);
    };
    if (sign > 0)
        for (std::int32_t l : word.letters) emit(l);
    else
        for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it) emit(-*it);
}

// Swap the items currently at the given source positions into positions
// 0..k-1 (in order), emitting only the swaps actually needed.
void emit_front_swaps(Tuple& cur, MoveSeq& seq, const std::vector<int>& sources) {
    const std::size_t n = cur.arity();
    std::vector<int> at(n);
    for (std::size_t i = 0; i < n; ++i) at[i] = static_cast<int>(i);
    for (std::size_t target = 0; target < sources.size(); ++target) {
        std::size_t pos = target;
        while (at[pos] != sources[target]) ++pos;
        if (pos != target) {
            Move m = swap_move(static_cast<int>(target), static_cast<int>(pos));
            seq.push_back(m);
            apply_move_inplace(m, cur.group, cur.entries);
            std::swap(at[target], at[pos]);
        }
    }
}

// Greedy removal of entries lying in the closure of the remaining ones
// (lowest index first). Returns the kept positions, ascending.
std::vector<int> incompressible_core(const FiniteGroup& g, const std::vector<elem_t>& entries,
                                     const std::vector<elem_t>* projected, const FiniteGroup* proj_group) {
    std::vector<int> active(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) active[i] = static_cast<int>(i);
    const FiniteGroup& cg = projected ? *proj_group : g;
    auto val = [&](int pos) { return projected ? (*projected)[pos] : entries[pos]; };
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t p = 0; p < active.size(); ++p) {
            std::vector<elem_t> rest;
            rest.reserve(active.size() - 1);
            for (std::size_t q = 0; q < active.size(); ++q)
                if (q != p) rest.push_back(val(active[q]));
            if (closure(cg, rest).contains(val(active[p]))) {
                active.erase(active.begin() + p);
                changed = true;
                break;
            }
        }
    }
    return active;
}

}  // namespace

NormalizeContext NormalizeContext::make(const FiniteGroup& g) {
    NormalizeContext ctx;
    ctx.group = g;
    ctx.lattice = enumerate_subgroups(g);
    ctx.inv = compute_invariants(g, ctx.lattice);
    return ctx;
}

ExactSequenceData ExactSequenceData::make(const FiniteGroup& g, const Subgroup& a) {
    if (!is_abelian_set(g, a.members)) throw ValidationError("A", "subgroup is not abelian");
    ExactSequenceData d;
    d.group = g;
    d.A = a;
    auto [q, proj] = quotient(g, a);  // validates normality
    d.Q = q;
    d.projection = proj;
    d.dA = subset_rank(g, a.members);
    auto qlat = enumerate_subgroups(q);
    auto qinv = compute_invariants(q, qlat);
    d.icQ_tilde = qinv.ic_tilde;
    d.dQ_tilde = qinv.d_tilde;
    return d;
}

std::pair<Tuple, MoveSeq> compress_step(const Tuple& t, int index, const Word& word, bool left, int sign) {
    const std::size_t n = t.arity();
    if (index < 0 || static_cast<std::size_t>(index) >= n) throw ValidationError("index", "out of range");
    for (std::int32_t l : word.letters) {
        int pos = (l > 0 ? l : -l) - 1;
        if (pos < 0 || static_cast<std::size_t>(pos) >= n) throw ValidationError("word", "letter out of range");
        if (pos == index) throw ValidationError("word", "word references the target index");
    }
    Tuple cur = t;
    MoveSeq seq;
    if (!left) {
        apply_right_word(cur, seq, index, word, sign);
    } else {
        // h^s * e = (e^{-1} * h^{-s})^{-1}
        Move iv = invert_move(index);
        seq.push_back(iv);
        apply_move_inplace(iv, cur.group, cur.entries);
        apply_right_word(cur, seq, index, word, -sign);
        seq.push_back(iv);
        apply_move_inplace(iv, cur.group, cur.entries);
    }
    return {cur, seq};
}

CanonicalForm canonicalize_epi(const Tuple& t, std::span<const elem_t> targets, const NormalizeContext& ctx) {
    const FiniteGroup& g = t.group;
    const std::size_t n = t.arity();
    if (!g.same_group(ctx.group)) throw ValidationError("ctx", "context built for a different group");
    if (closure(g, t.entries).order() != g.order()) throw ValidationError("tuple", "tuple is not an epimorphism");
    auto tsub_check = closure(g, targets);
    if (tsub_check.order() != g.order()) throw ValidationError("targets", "targets do not generate the group");
    if (n < static_cast<std::size_t>(ctx.inv.ic) + ctx.inv.d)
        throw ValidationError("n", "need n >= ic(G)+d(G) = " + std::to_string(ctx.inv.ic + ctx.inv.d));

    CanonicalForm cf;
    cf.source = t;
    Tuple cur = t;
    MoveSeq seq;

    std::vector<elem_t> endpoint(targets.begin(), targets.end());
    endpoint.resize(n, 0);
    if (cur.entries == endpoint) {  // already canonical
        cf.target = cur;
        cf.witness = seq;
        return cf;
    }

    // phase 1: compress to an incompressible generating prefix
    std::vector<int> kept = incompressible_core(g, cur.entries, nullptr, nullptr);
    const std::size_t m = kept.size();
    if (n < m + targets.size())
        throw ValidationError("n", "need n >= core size + targets = " + std::to_string(m + targets.size()));
    emit_front_swaps(cur, seq, kept);

    // phase 2: clear the tail through words over the prefix
    std::vector<elem_t> prefix(cur.entries.begin(), cur.entries.begin() + m);
    std::vector<int> prefix_pos(m);
    for (std::size_t i = 0; i < m; ++i) prefix_pos[i] = static_cast<int>(i);
    Subgroup sub = closure(g, prefix, true);
    for (std::size_t kpos = m; kpos < n; ++kpos) {
        if (cur.entries[kpos] == 0) continue;
        Word w = word_over_positions(sub.witness.at(cur.entries[kpos]), prefix_pos);
        apply_right_word(cur, seq, static_cast<int>(kpos), w, -1);
    }

    if (cur.entries == endpoint) {
        cf.target = cur;
        cf.witness = seq;
        return cf;
    }

    // phase 3: write the targets into the free slots after the prefix
    for (std::size_t j = 0; j < targets.size(); ++j) {
        if (targets[j] == 0) continue;
        Word w = word_over_positions(sub.witness.at(targets[j]), prefix_pos);
        apply_right_word(cur, seq, static_cast<int>(m + j), w, +1);
    }

    // phase 4: erase the prefix through words over the targets block
    std::vector<int> target_pos(targets.size());
    for (std::size_t j = 0; j < targets.size(); ++j) target_pos[j] = static_cast<int>(m + j);
    Subgroup tsub = closure(g, std::vector<elem_t>(targets.begin(), targets.end()), true);
    for (std::size_t i = 0; i < m; ++i) {
        if (cur.entries[i] == 0) continue;
        Word w = word_over_positions(tsub.witness.at(cur.entries[i]), target_pos);
        apply_right_word(cur, seq, static_cast<int>(i), w, -1);
    }

    // phase 5: bring the targets block to the front
    for (std::size_t j = 0; j < targets.size(); ++j) {
        if (m + j == j) continue;
        Move mv = swap_move(static_cast<int>(j), static_cast<int>(m + j));
        seq.push_back(mv);
        apply_move_inplace(mv, cur.group, cur.entries);
    }

    if (cur.entries != endpoint) throw ValidationError("canonicalize_epi", "endpoint mismatch (internal)");
    cf.target = cur;
    cf.witness = seq;
    return cf;
}

namespace {

// First prime-order subgroup in lattice enumeration order: minimal
// (order, member list) among cyclic subgroups of prime order.
Subgroup first_prime_subgroup(const FiniteGroup& g) {
    bool found = false;
    Subgroup best;
    for (std::uint64_t x = 1; x < g.order(); ++x) {
        if (!is_prime(g.element_order(static_cast<elem_t>(x)))) continue;
        Subgroup c = closure(g, std::vector<elem_t>{static_cast<elem_t>(x)});
        if (!found || c.members.size() < best.members.size() ||
            (c.members.size() == best.members.size() && c.members < best.members)) {
            best = std::move(c);
            found = true;
        }
    }
    if (!found) throw ValidationError("dunwoody", "no prime-order subgroup (internal)");
    return best;
}

int dlog_in_cyclic(const FiniteGroup& g, elem_t base, elem_t x, std::uint32_t order) {
    elem_t cur = 0;
    for (std::uint32_t e = 0; e < order; ++e) {
        if (cur == x) return static_cast<int>(e);
        cur = g.mul(cur, base);
    }
    throw ValidationError("dunwoody", "discrete log failure (internal)");
}

// Recursion of Dunwoody's proof over a standalone abelian group: carries the
// tuple to (targets, id, ..., id). Moves are emitted onto seq through the
// callback to allow index offsetting into an enclosing tuple.
void dunwoody_rec(const FiniteGroup& A, std::vector<elem_t>& entries, const std::vector<elem_t>& targets,
                  MoveSeq& seq, int offset) {
    if (A.order() == 1) return;
    const std::size_t n = entries.size(), k = targets.size();

    auto push = [&](Move m) {
        apply_move_inplace(m, A, entries);
        m.i = static_cast<std::uint16_t>(m.i + offset);
        if (m.kind != Move::Kind::Invert) m.j = static_cast<std::uint16_t>(m.j + offset);
        seq.push_back(m);
    };

    Subgroup g1 = first_prime_subgroup(A);
    const std::uint32_t p = static_cast<std::uint32_t>(g1.members.size());
    auto [Q, proj] = quotient(A, g1);

    std::vector<elem_t> qentries(n), qtargets(k);
    for (std::size_t i = 0; i < n; ++i) qentries[i] = proj[entries[i]];
    for (std::size_t i = 0; i < k; ++i) qtargets[i] = proj[targets[i]];

    // induction in A/G_1; the same index moves apply to the lift
    MoveSeq subseq;
    dunwoody_rec(Q, qentries, qtargets, subseq, 0);
    for (Move m : subseq) {
        apply_move_inplace(m, A, entries);
        m.i = static_cast<std::uint16_t>(m.i + offset);
        if (m.kind != Move::Kind::Invert) m.j = static_cast<std::uint16_t>(m.j + offset);
        seq.push_back(m);
    }
    // now entries[i] = m_i * targets[i] for i < k and entries[j] in G_1 for j >= k

    // pivot: a non-trivial G_1 discrepancy in the tail
    std::size_t pivot = n;
    for (std::size_t j = k; j < n; ++j)
        if (entries[j] != 0) {
            pivot = j;
            break;
        }
    if (pivot == n) {
        // all tail discrepancies trivial: the m_i*targets[i] generate A, so a
        // non-trivial element of G_1 is a word in the first k entries
        std::vector<elem_t> head(entries.begin(), entries.begin() + k);
        Subgroup hs = closure(A, head, true);
        elem_t w = g1.members[1];
        const Word& word = hs.witness.at(w);
        pivot = k;
        for (std::int32_t l : word.letters) {
            int gi = (l > 0 ? l : -l) - 1;
            push(rmul_move(static_cast<int>(pivot), gi, l < 0));
        }
    }

    elem_t mj = entries[pivot];  // generates G_1
    // clear the head discrepancies: entries[i] *= mj^{-e_i}
    for (std::size_t i = 0; i < k; ++i) {
        elem_t disc = A.mul(entries[i], A.inv(targets[i]));
        int e = dlog_in_cyclic(A, mj, disc, p);
        for (int c = 0; c < e; ++c) push(rmul_move(static_cast<int>(i), static_cast<int>(pivot), true));
    }
    // clear the other tail entries
    for (std::size_t j = k; j < n; ++j) {
        if (j == pivot || entries[j] == 0) continue;
        int e = dlog_in_cyclic(A, mj, entries[j], p);
        for (int c = 0; c < e; ++c) push(rmul_move(static_cast<int>(j), static_cast<int>(pivot), true));
    }
    // clear the pivot through a word over the targets
    std::vector<elem_t> head(entries.begin(), entries.begin() + k);
    Subgroup hs = closure(A, head, true);
    const Word& word = hs.witness.at(A.inv(mj));
    for (std::int32_t l : word.letters) {
        int gi = (l > 0 ? l : -l) - 1;
        push(rmul_move(static_cast<int>(pivot), gi, l < 0));
    }
}

}  // namespace

CanonicalForm dunwoody_abelian(const Tuple& t, std::span<const elem_t> targets) {
    const FiniteGroup& g = t.group;
    const std::size_t n = t.arity();
    Subgroup image = closure(g, t.entries);
    if (!is_abelian_set(g, image.members)) throw ValidationError("tuple", "image subgroup is not abelian");
    Subgroup tgt = closure(g, targets);
    if (tgt.members != image.members) throw ValidationError("targets", "targets generate a different subgroup");
    std::uint32_t dA = subset_rank(g, image.members);
    if (n <= dA)
        throw ValidationError("n", "need n >= d(A)+1 = " + std::to_string(dA + 1) +
                                       " (transitivity genuinely fails at n = d)");
    if (targets.size() >= n) throw ValidationError("targets", "need fewer targets than tuple entries");

    // run the recursion inside the image subgroup as a standalone group
    auto [absg, members] = subgroup_as_group(g, image.members);
    auto local = [&](elem_t x) {
        return static_cast<elem_t>(std::lower_bound(members.begin(), members.end(), x) - members.begin());
    };
    std::vector<elem_t> entries(n), tg(targets.size());
    for (std::size_t i = 0; i < n; ++i) entries[i] = local(t.entries[i]);
    for (std::size_t i = 0; i < targets.size(); ++i) tg[i] = local(targets[i]);

    CanonicalForm cf;
    cf.source = t;
    MoveSeq seq;
    dunwoody_rec(absg, entries, tg, seq, 0);

    cf.witness = seq;
    cf.target = apply_moves(seq, t);
    std::vector<elem_t> endpoint(targets.begin(), targets.end());
    endpoint.resize(n, 0);
    if (cf.target.entries != endpoint) throw ValidationError("dunwoody_abelian", "endpoint mismatch (internal)");
    return cf;
}

namespace {

// Shared first stage of the exact-sequence constructions: carry the tuple to
// (h_1..h_I, tail in A) where the projected prefix is an incompressible
// generating set of Q_H. Returns I.
std::size_t exseq_stage1(Tuple& cur, MoveSeq& seq, const ExactSequenceData& data) {
    const FiniteGroup& g = cur.group;
    const std::size_t n = cur.arity();
    std::vector<elem_t> projected(n);
    for (std::size_t i = 0; i < n; ++i) projected[i] = data.projection[cur.entries[i]];
    std::vector<int> kept = incompressible_core(g, cur.entries, &projected, &data.Q);
    emit_front_swaps(cur, seq, kept);
    const std::size_t I = kept.size();

    if (I > 0) {
        std::vector<elem_t> qprefix(I);
        for (std::size_t i = 0; i < I; ++i) qprefix[i] = data.projection[cur.entries[i]];
        std::vector<int> prefix_pos(I);
        for (std::size_t i = 0; i < I; ++i) prefix_pos[i] = static_cast<int>(i);
        Subgroup qsub = closure(data.Q, qprefix, true);
        for (std::size_t j = I; j < n; ++j) {
            elem_t pj = data.projection[cur.entries[j]];
            if (pj == 0) continue;
            Word w = word_over_positions(qsub.witness.at(pj), prefix_pos);
            // the same word over the lifted prefix entries projects onto pj
            apply_right_word(cur, seq, static_cast<int>(j), w, -1);
        }
    }
    for (std::size_t j = I; j < n; ++j)
        if (data.projection[cur.entries[j]] != 0)
            throw ValidationError("exseq", "tail escaped the abelian kernel (internal)");
    return I;
}

// Dunwoody on the sub-tuple at the given positions, over the subgroup
// generated by those entries, towards the given targets.
void dunwoody_on_positions(Tuple& cur, MoveSeq& seq, const std::vector<int>& positions,
                           const std::vector<elem_t>& targets) {
    const FiniteGroup& g = cur.group;
    std::vector<elem_t> sub_entries;
    sub_entries.reserve(positions.size());
    for (int p : positions) sub_entries.push_back(cur.entries[p]);
    Subgroup b = closure(g, sub_entries);
    auto [bg, members] = subgroup_as_group(g, b.members);
    auto local = [&](elem_t x) {
        return static_cast<elem_t>(std::lower_bound(members.begin(), members.end(), x) - members.begin());
    };
    std::vector<elem_t> lentries(sub_entries.size()), ltargets(targets.size());
    for (std::size_t i = 0; i < sub_entries.size(); ++i) lentries[i] = local(sub_entries[i]);
    for (std::size_t i = 0; i < targets.size(); ++i) ltargets[i] = local(targets[i]);

    MoveSeq sub_seq;
    dunwoody_rec(bg, lentries, ltargets, sub_seq, 0);
    for (Move m : sub_seq) {
        // positions in the sub-tuple map to enclosing positions
        Move mapped = m;
        mapped.i = static_cast<std::uint16_t>(positions[m.i]);
        if (m.kind != Move::Kind::Invert) mapped.j = static_cast<std::uint16_t>(positions[m.j]);
        seq.push_back(mapped);
        apply_move_inplace(mapped, g, cur.entries);
    }
}

}  // namespace

MoveSeq exseq_redundancy(const Tuple& t, const ExactSequenceData& data) {
    const FiniteGroup& g = t.group;
    const std::size_t n = t.arity();
    const std::size_t bound = data.dA + data.icQ_tilde + 1;
    if (n < bound) throw ValidationError("n", "need n >= d(A)+ic~(Q)+1 = " + std::to_string(bound));

    Tuple cur = t;
    MoveSeq seq;
    const std::size_t I = exseq_stage1(cur, seq, data);

    // tail reduction: Dunwoody within B = <tail>
    std::vector<int> tailpos;
    for (std::size_t j = I; j < n; ++j) tailpos.push_back(static_cast<int>(j));
    std::vector<elem_t> tail_entries;
    for (int p : tailpos) tail_entries.push_back(cur.entries[p]);
    Subgroup b = closure(g, tail_entries);
    std::vector<elem_t> btargets;
    subset_rank(g, b.members, &btargets);
    if (tailpos.size() < btargets.size() + 1) throw ValidationError("exseq", "tail too short (internal)");
    dunwoody_on_positions(cur, seq, tailpos, btargets);

    if (cur.entries[n - 1] != 0) throw ValidationError("exseq", "trailing entry not cleared (internal)");
    return seq;
}

CanonicalForm jordan_canonical(const Tuple& t, const ExactSequenceData& data) {
    const FiniteGroup& g = t.group;
    const std::size_t n = t.arity();
    const std::size_t bound = 1 + data.dA + data.dQ_tilde + data.icQ_tilde;
    if (n < bound)
        throw ValidationError("n", "need n >= 1+d(A)+d~(Q)+ic~(Q) = " + std::to_string(bound));

    Subgroup H = closure(g, t.entries);

    // canonical generators, functions of the image subgroup H only
    std::vector<elem_t> ah_members;
    for (elem_t m : H.members)
        if (data.A.contains(m)) ah_members.push_back(m);  // A n H, sorted
    std::vector<elem_t> u;
    std::uint32_t e = ah_members.size() == 1 ? 0 : subset_rank(g, ah_members, &u);

    std::vector<elem_t> qh_members_dup;
    for (elem_t m : H.members) qh_members_dup.push_back(data.projection[m]);
    std::sort(qh_members_dup.begin(), qh_members_dup.end());
    qh_members_dup.erase(std::unique(qh_members_dup.begin(), qh_members_dup.end()), qh_members_dup.end());
    std::vector<elem_t> qbar;
    std::uint32_t d = qh_members_dup.size() == 1 ? 0 : subset_rank(data.Q, qh_members_dup, &qbar);
    std::vector<elem_t> q(d);
    for (std::uint32_t j = 0; j < d; ++j) {
        elem_t lift = 0;
        bool found = false;
        for (elem_t m : H.members)
            if (data.projection[m] == qbar[j]) {
                lift = m;
                found = true;
                break;
            }
        if (!found) throw ValidationError("jordan", "no lift for a quotient generator (internal)");
        q[j] = lift;
    }

    CanonicalForm cf;
    cf.source = t;
    Tuple cur = t;
    MoveSeq seq;

    // omega_1: incompressible Q_H-generating prefix, tail in A_H
    const std::size_t I = exseq_stage1(cur, seq, data);

    // omega_2: reduce the tail to minimal generators of B = <tail>
    std::vector<int> tailpos;
    for (std::size_t j = I; j < n; ++j) tailpos.push_back(static_cast<int>(j));
    std::vector<elem_t> tail_entries;
    for (int p : tailpos) tail_entries.push_back(cur.entries[p]);
    Subgroup b = closure(g, tail_entries);
    std::vector<elem_t> btargets;
    std::uint32_t eprime = b.members.size() == 1 ? 0 : subset_rank(g, b.members, &btargets);
    dunwoody_on_positions(cur, seq, tailpos, btargets);
    // tuple: (h_1..h_I, b_1..b_e', id, ..., id)

    // write the q lifts after the b block
    const std::size_t qstart = I + eprime;
    if (qstart + d + 1 > n) throw ValidationError("jordan", "no spare slot for the q block (internal)");
    {
        std::vector<elem_t> gens(cur.entries.begin(), cur.entries.begin() + qstart);
        std::vector<int> gen_pos(qstart);
        for (std::size_t i = 0; i < qstart; ++i) gen_pos[i] = static_cast<int>(i);
        Subgroup hsub = closure(g, gens, true);
        for (std::uint32_t j = 0; j < d; ++j) {
            if (q[j] == 0) continue;
            Word w = word_over_positions(hsub.witness.at(q[j]), gen_pos);
            apply_right_word(cur, seq, static_cast<int>(qstart + j), w, +1);
        }
    }

    // omega_3: push the prefix into A_H through words over the q block
    if (I > 0 && d > 0) {
        std::vector<elem_t> qproj(d);
        for (std::uint32_t j = 0; j < d; ++j) qproj[j] = data.projection[q[j]];
        std::vector<int> q_pos(d);
        for (std::uint32_t j = 0; j < d; ++j) q_pos[j] = static_cast<int>(qstart + j);
        Subgroup qsub = closure(data.Q, qproj, true);
        for (std::size_t i = 0; i < I; ++i) {
            elem_t pi = data.projection[cur.entries[i]];
            if (pi == 0) continue;
            Word w = word_over_positions(qsub.witness.at(pi), q_pos);
            apply_right_word(cur, seq, static_cast<int>(i), w, -1);
        }
    }
    for (std::size_t i = 0; i < I; ++i)
        if (data.projection[cur.entries[i]] != 0)
            throw ValidationError("jordan", "prefix escaped the abelian kernel (internal)");

    // abelian slots: everything except the q block
    std::vector<int> abpos;
    for (std::size_t i = 0; i < n; ++i)
        if (i < qstart || i >= qstart + d) abpos.push_back(static_cast<int>(i));

    // grow the abelian block to all of A_H, one missing generator at a time
    for (std::uint32_t ui = 0; ui < e; ++ui) {
        std::vector<elem_t> ab_entries;
        for (int p : abpos) ab_entries.push_back(cur.entries[p]);
        Subgroup b0 = closure(g, ab_entries);
        if (b0.contains(u[ui])) continue;
        // find a free abelian slot, compacting if necessary
        int slot = -1;
        for (int p : abpos)
            if (cur.entries[p] == 0) {
                slot = p;
                break;
            }
        if (slot == -1) {
            std::vector<elem_t> b0targets;
            subset_rank(g, b0.members, &b0targets);
            dunwoody_on_positions(cur, seq, abpos, b0targets);
            for (int p : abpos)
                if (cur.entries[p] == 0) {
                    slot = p;
                    break;
                }
        }
        if (slot == -1) throw ValidationError("jordan", "no abelian slot available (internal)");
        // u_i as a word over all other entries
        std::vector<elem_t> gens;
        std::vector<int> gen_pos;
        for (std::size_t i = 0; i < n; ++i)
            if (static_cast<int>(i) != slot) {
                gens.push_back(cur.entries[i]);
                gen_pos.push_back(static_cast<int>(i));
            }
        Subgroup hsub = closure(g, gens, true);
        Word w = word_over_positions(hsub.witness.at(u[ui]), gen_pos);
        apply_right_word(cur, seq, slot, w, +1);
    }

    // final compaction of the abelian block onto (u_1..u_e, id, ...)
    dunwoody_on_positions(cur, seq, abpos, u);

    // final permutation: u block to 0..e-1, q block to e..e+d-1
    std::vector<int> sources;
    for (std::uint32_t i = 0; i < e; ++i) sources.push_back(abpos[i]);
    for (std::uint32_t j = 0; j < d; ++j) sources.push_back(static_cast<int>(qstart + j));
    emit_front_swaps(cur, seq, sources);

    std::vector<elem_t> endpoint;
    endpoint.insert(endpoint.end(), u.begin(), u.end());
    endpoint.insert(endpoint.end(), q.begin(), q.end());
    endpoint.resize(n, 0);
    if (cur.entries != endpoint) throw ValidationError("jordan_canonical", "endpoint mismatch (internal)");
    cf.target = cur;
    cf.witness = seq;
    return cf;
}

bool verify_witness(const Tuple& src, const MoveSeq& seq, const Tuple& expected, bool check_image_each_step,
                    std::string* diagnostic) {
    const FiniteGroup& g = src.group;
    Tuple cur = src;
    std::vector<elem_t> image;
    if (check_image_each_step) image = closure(g, cur.entries).members;
    for (std::size_t k = 0; k < seq.size(); ++k) {
        apply_move_inplace(seq[k], g, cur.entries);
        if (check_image_each_step) {
            auto now = closure(g, cur.entries).members;
            if (now != image) {
                if (diagnostic) *diagnostic = "image subgroup changed at move " + std::to_string(k);
                return false;
            }
        }
    }
    if (cur.entries != expected.entries) {
        if (diagnostic) *diagnostic = "endpoint mismatch";
        return false;
    }
    return true;
}

}  // namespace glab
