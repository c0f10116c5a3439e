"""Brute-force deciders: frozen examples, implication chain, witnesses."""

import itertools
import random
from fractions import Fraction

import pytest

from votemanip.core import (
    ExtensionBudgetExceeded,
    LinearVote,
    ManipulationInstance,
    Profile,
    build_partial_vote,
    complete_vote,
    default_candidates,
    profile_extensions,
)
from votemanip.oracle import (
    EnumerationBudgetExceeded,
    Witness,
    _positional_classes,
    add_empty_votes,
    append_c_top_votes,
    ballot_space,
    c_top_ranking,
    coalitional_manipulation_bf,
    is_c_optimal,
    necessary_winner_bf,
    opportunistic_manipulation_bf,
    possible_winner_bf,
    strong_manipulation_bf,
    viable_extensions,
    weak_manipulation_bf,
)
from votemanip.rules import (
    borda,
    bucklin,
    copeland,
    evaluate,
    fallback,
    k_approval,
    maximin,
    plurality,
    simplified_bucklin,
    veto,
)


def complete_profile(rankings, m, approvals=None):
    cands = default_candidates(m)
    return Profile(cands, [(complete_vote(r), 1) for r in rankings], approvals)


def partial_profile(pair_lists, m, approvals=None):
    cands = default_candidates(m)
    votes = [(build_partial_vote(pairs, m), 1) for pairs in pair_lists]
    return Profile(cands, votes, approvals)


def append_witness(P, w):
    votes = [(complete_vote(v.ranking), 1) for v in w.manipulator_votes]
    return P.with_votes_appended(votes, w.manipulator_approvals)


# ------------------------------------------------------------------ CM


def test_cm_single_voter_helps_c():
    # P = {c>a} with a=0, c=1
    P = complete_profile([(1, 0)], 2)
    ok, w = coalitional_manipulation_bf(P, 1, 1, plurality(2))
    assert ok
    assert w.manipulator_votes[0].ranking == (1, 0)


def test_cm_hopeless_plurality():
    P = complete_profile([(0, 1, 2)] * 3, 3)
    ok, w = coalitional_manipulation_bf(P, 1, 1, plurality(3))
    assert not ok and w.manipulator_votes is None


def test_cm_empty_profile_every_rule():
    cands3 = default_candidates(3)
    empty = Profile(cands3, [])
    for r in (borda(3), maximin(), copeland(Fraction(1, 2)), bucklin(),
              simplified_bucklin()):
        ok, w = coalitional_manipulation_bf(empty, 1, 1, r)
        assert ok, r
        assert evaluate(append_witness(empty, w), r).winners == {1}
    ok, w = coalitional_manipulation_bf(Profile(cands3, [], ()), 1, 1, fallback())
    assert ok
    P = complete_profile([(1, 0)], 2)
    ok, _ = coalitional_manipulation_bf(P, 1, 1, plurality(2))
    assert ok


# ------------------------------------------------------------------ PW / NW


def test_pw_nw_single_empty_vote():
    P = partial_profile([[]], 2)
    assert possible_winner_bf(P, 1, plurality(2))
    assert not necessary_winner_bf(P, 1, plurality(2))


def test_pw_nw_collapse_on_complete():
    rng = random.Random(24121838)
    for _ in range(25):
        m = rng.randint(2, 4)
        n = rng.randint(1, 3)
        P = complete_profile([tuple(rng.sample(range(m), m)) for _ in range(n)], m)
        r = borda(m)
        c = rng.randrange(m)
        uniq = evaluate(P, r).winners == {c}
        assert possible_winner_bf(P, c, r) == uniq
        assert necessary_winner_bf(P, c, r) == uniq


def test_pw_false_when_c_fixed_last():
    # c = 2 pinned below both rivals in each of two votes
    P = partial_profile([[(0, 2), (1, 2)], [(0, 2), (1, 2)]], 3)
    assert not possible_winner_bf(P, 2, plurality(3))


# ------------------------------------------------------------------ WM


def test_wm_empty_vote_one_manipulator():
    P = partial_profile([[]], 2)
    inst = ManipulationInstance(P, 1, 1, plurality(2))
    ok, w = weak_manipulation_bf(inst)
    assert ok
    # witness extension + manipulator votes re-verify
    full = append_witness(w.extension, w)
    assert evaluate(full, plurality(2)).winners == {1}


def test_wm_matches_cm_on_complete():
    rng = random.Random(99)
    for _ in range(20):
        m = rng.randint(2, 4)
        P = complete_profile(
            [tuple(rng.sample(range(m), m)) for _ in range(rng.randint(1, 3))], m
        )
        c = rng.randrange(m)
        r = borda(m)
        inst = ManipulationInstance(P, 1, c, r)
        assert weak_manipulation_bf(inst)[0] == coalitional_manipulation_bf(
            P, 1, c, r
        )[0]


def test_wm_hopeless():
    P = complete_profile([(0, 1, 2)] * 3, 3)
    inst = ManipulationInstance(P, 1, 1, plurality(3))
    assert not weak_manipulation_bf(inst)[0]


# ------------------------------------------------------------------ viable extensions


def test_viable_complete_profiles():
    P_yes = complete_profile([(1, 0)], 2)
    inst = ManipulationInstance(P_yes, 1, 1, plurality(2))
    assert len(list(viable_extensions(inst))) == 1
    P_no = complete_profile([(0, 1, 2)] * 3, 3)
    inst = ManipulationInstance(P_no, 1, 1, plurality(3))
    assert list(viable_extensions(inst)) == []


def test_viable_unique_winner_semantics():
    # empty vote over {a, c}: only the c-first extension is viable
    P = partial_profile([[]], 2)
    inst = ManipulationInstance(P, 1, 1, plurality(2))
    exts = list(viable_extensions(inst))
    assert len(exts) == 1
    assert exts[0].votes[0][0].to_linear().ranking == (1, 0)


# ------------------------------------------------------------------ is_c_optimal


def test_any_q_optimal_without_viable_extensions():
    P = complete_profile([(0, 1, 2)] * 3, 3)
    inst = ManipulationInstance(P, 1, 1, plurality(3))
    assert is_c_optimal([LinearVote((0, 1, 2))], inst)
    assert is_c_optimal([LinearVote((2, 1, 0))], inst)


def test_cm_witness_is_optimal_on_complete_yes():
    P = complete_profile([(1, 0)], 2)
    inst = ManipulationInstance(P, 1, 1, plurality(2))
    ok, w = coalitional_manipulation_bf(P, 1, 1, plurality(2))
    assert ok and is_c_optimal(list(w.manipulator_votes), inst)


VETO_OM_PAIRS = [[(2, 0), (2, 1)]]  # c>a, c>b, {a,b} undetermined


def test_veto_q_fails_an_extension():
    P = partial_profile(VETO_OM_PAIRS, 3)
    inst = ManipulationInstance(P, 1, 2, veto(3))
    veto_a = LinearVote((1, 2, 0))
    assert not is_c_optimal([veto_a], inst)


# ------------------------------------------------------------------ OM


def test_om_vacuous_yes():
    P = complete_profile([(0, 1, 2)] * 3, 3)
    inst = ManipulationInstance(P, 1, 1, plurality(3))
    ok, w = opportunistic_manipulation_bf(inst)
    assert ok
    assert w.manipulator_votes[0].ranking == c_top_ranking(3, 1) == (1, 0, 2)


def test_om_always_yes_on_complete_profiles():
    for v1 in itertools.permutations(range(3)):
        for v2 in itertools.permutations(range(3)):
            P = complete_profile([v1, v2], 3)
            for c in range(3):
                inst = ManipulationInstance(P, 1, c, plurality(3))
                assert opportunistic_manipulation_bf(inst)[0]


def test_om_veto_example_is_no():
    P = partial_profile(VETO_OM_PAIRS, 3)
    inst = ManipulationInstance(P, 1, 2, veto(3))
    ok, w = opportunistic_manipulation_bf(inst)
    assert not ok and w.manipulator_votes is None


# ------------------------------------------------------------------ SM


def test_sm_empty_vote_examples():
    P = partial_profile([[]], 2)
    assert not strong_manipulation_bf(ManipulationInstance(P, 1, 1, plurality(2)))[0]
    ok, w = strong_manipulation_bf(ManipulationInstance(P, 2, 1, plurality(2)))
    assert ok
    # two c-top ballots in the witness
    assert all(v.ranking[0] == 1 for v in w.manipulator_votes)


def test_sm_equals_cm_on_complete():
    rng = random.Random(7)
    for _ in range(20):
        m = rng.randint(2, 4)
        P = complete_profile(
            [tuple(rng.sample(range(m), m)) for _ in range(rng.randint(1, 3))], m
        )
        c = rng.randrange(m)
        r = maximin()
        inst = ManipulationInstance(P, 1, c, r)
        assert strong_manipulation_bf(inst)[0] == coalitional_manipulation_bf(
            P, 1, c, r
        )[0]


# ------------------------------------------------------------------ invariants


def random_partial_instance(rng, m=3, n=2, max_drop=2):
    pair_lists = []
    for _ in range(n):
        ranking = tuple(rng.sample(range(m), m))
        pairs = [
            (ranking[i], ranking[j]) for i in range(m) for j in range(i + 1, m)
        ]
        rng.shuffle(pairs)
        drop = rng.randint(0, max_drop)
        kept = pairs[drop:]
        pair_lists.append(kept)
    return partial_profile(pair_lists, m)


def test_implication_chain_small_sweep():
    rng = random.Random(31415)
    rules = [plurality(3), borda(3), veto(3), maximin(), bucklin()]
    for i in range(30):
        P = random_partial_instance(rng)
        r = rules[i % len(rules)]
        c = rng.randrange(3)
        inst = ManipulationInstance(P, 1, c, r)
        sm = strong_manipulation_bf(inst)[0]
        if sm:
            assert opportunistic_manipulation_bf(inst)[0]
            assert weak_manipulation_bf(inst)[0]


def test_obs1_wm_equals_pw_with_empty_votes():
    rng = random.Random(2718)
    rules = [plurality(3), borda(3), maximin()]
    for i in range(24):
        P = random_partial_instance(rng)
        r = rules[i % len(rules)]
        c = rng.randrange(3)
        l = rng.randint(1, 2)
        wm = weak_manipulation_bf(ManipulationInstance(P, l, c, r))[0]
        pw = possible_winner_bf(add_empty_votes(P, l), c, r)
        assert wm == pw


def test_obs3_cm_equals_wm_with_c_top_votes():
    rng = random.Random(1618)
    rules = [plurality(3), borda(3), maximin(), bucklin()]
    for i in range(24):
        m = 3
        P = complete_profile(
            [tuple(rng.sample(range(m), m)) for _ in range(rng.randint(1, 3))], m
        )
        r = rules[i % len(rules)]
        c = rng.randrange(m)
        l = rng.randint(1, 3)
        cm = coalitional_manipulation_bf(P, l, c, r)[0]
        inst = ManipulationInstance(append_c_top_votes(P, l - 1, c), 1, c, r)
        assert cm == weak_manipulation_bf(inst)[0]


def test_manipulator_order_irrelevant():
    rng = random.Random(555)
    for _ in range(15):
        m = rng.randint(2, 4)
        base = [tuple(rng.sample(range(m), m)) for _ in range(2)]
        Q = [tuple(rng.sample(range(m), m)) for _ in range(3)]
        for r in (borda(m), maximin(), bucklin()):
            boards = {
                evaluate(complete_profile(base + list(perm), m), r).winners
                for perm in itertools.permutations(Q)
            }
            assert len(boards) == 1


def test_witnesses_reverify():
    rng = random.Random(808)
    rules = [plurality(3), veto(3), maximin()]
    for i in range(18):
        P = random_partial_instance(rng)
        r = rules[i % len(rules)]
        c = rng.randrange(3)
        inst = ManipulationInstance(P, 1, c, r)
        ok, w = strong_manipulation_bf(inst)
        if ok:
            for E in profile_extensions(P):
                assert evaluate(append_witness(E, w), r).winners == {c}
        ok, w = weak_manipulation_bf(inst)
        if ok:
            assert evaluate(append_witness(w.extension, w), r).winners == {c}
            # the claimed extension really extends P
            for (ve, _), (vp, _) in zip(w.extension.votes, P.votes):
                assert vp.pairs <= ve.pairs
        ok, w = opportunistic_manipulation_bf(inst)
        if ok:
            assert is_c_optimal(list(w.manipulator_votes), inst, w.manipulator_approvals)


# ------------------------------------------------------------------ pruning and dedup


def test_positional_classes_match_permutation_dedup():
    rng = random.Random(4242)
    vectors = [(1, 0, 0), (1, 1, 0), (2, 1, 0), (0, 0, -1), (3, 1, 1, 0), (2, 1, 1, 0)]
    for vec in vectors:
        m = len(vec)
        got = list(_positional_classes(vec, None))
        seen = set()
        want = []
        for perm in itertools.permutations(range(m)):
            key = tuple(sorted((c, vec[i]) for i, c in enumerate(perm)))
            if key not in seen:
                seen.add(key)
                want.append(perm)
        assert got == want
        c = rng.randrange(m)
        got_top = list(_positional_classes(vec, c))
        seen = set()
        want_top = []
        for perm in itertools.permutations(range(m)):
            if perm[0] != c:
                continue
            key = tuple(sorted((x, vec[i]) for i, x in enumerate(perm)))
            if key not in seen:
                seen.add(key)
                want_top.append(perm)
        assert got_top == want_top


def test_c_top_pruning_agrees_with_unpruned():
    rng = random.Random(6006)
    rules = [plurality(3), k_approval(3, 2), borda(3), maximin(), bucklin(),
             copeland(Fraction(1, 2))]
    for i in range(24):
        P = random_partial_instance(rng)
        r = rules[i % len(rules)]
        c = rng.randrange(3)
        inst = ManipulationInstance(P, 1, c, r)
        assert (
            strong_manipulation_bf(inst, assume_c_top=True)[0]
            == strong_manipulation_bf(inst)[0]
        )
        assert (
            opportunistic_manipulation_bf(inst, assume_c_top=True)[0]
            == opportunistic_manipulation_bf(inst)[0]
        )
        E = next(profile_extensions(P))
        assert (
            coalitional_manipulation_bf(E, 2, c, r, assume_c_top=True)[0]
            == coalitional_manipulation_bf(E, 2, c, r)[0]
        )


def test_fallback_oracle_ballots():
    # one ballot per (ordered approved prefix, k); c-top filter keeps c first
    space = ballot_space(fallback(), 3)
    assert len(space) == 3 + 6 + 6
    assert len(set(space)) == len(space)
    assert all(set(rk[:k]) | set(rk[k:]) == {0, 1, 2} for rk, k in space)
    top = ballot_space(fallback(), 3, c_top=2)
    assert all(rk[0] == 2 for rk, _ in top)
    assert len(top) == 1 + 2 + 2


def test_fallback_cm_small():
    # one vote already approves only c=2; the manipulator seconds it
    P = complete_profile([(2, 0, 1), (1, 0, 2)], 3, approvals=[1, 1])
    ok, w = coalitional_manipulation_bf(P, 1, 2, fallback())
    assert ok
    assert w.manipulator_approvals is not None
    full = append_witness(P, w)
    assert evaluate(full, fallback()).winners == {2}


# ------------------------------------------------------------------ budgets


def test_ballot_space_budget():
    P = complete_profile([(0, 1, 2)], 3)
    with pytest.raises(EnumerationBudgetExceeded):
        coalitional_manipulation_bf(P, 1, 2, borda(3), max_tuples=3)


def test_tuple_scan_budget_lazy():
    # 6 ballots fit, but the 2-multiset space (21) crosses the cap of 6
    P = complete_profile([(0, 1, 2)], 3)
    with pytest.raises(EnumerationBudgetExceeded):
        coalitional_manipulation_bf(P, 2, 2, borda(3), max_tuples=6)
    # an early win inside the budget needs no full scan
    ok, _ = coalitional_manipulation_bf(P, 2, 0, borda(3), max_tuples=6)
    assert ok


def test_extension_budget_propagates():
    P = partial_profile([[], []], 3)  # 36 extensions
    inst = ManipulationInstance(P, 1, 0, plurality(3))
    with pytest.raises(ExtensionBudgetExceeded):
        weak_manipulation_bf(inst, max_extensions=10)
    with pytest.raises(ExtensionBudgetExceeded):
        possible_winner_bf(P, 0, plurality(3), max_extensions=35)
    assert possible_winner_bf(P, 0, plurality(3), max_extensions=36) is True
