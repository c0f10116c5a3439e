"""Dispatch table: row mapping, cell lookup, solver selection, run()."""

from fractions import Fraction

import pytest

from votemanip.core import (
    ManipulationInstance,
    Profile,
    build_partial_vote,
    complete_vote,
    default_candidates,
)
from votemanip.oracle import (
    coalitional_manipulation_bf,
    opportunistic_manipulation_bf,
    weak_manipulation_bf,
)
from votemanip.routing import (
    COLUMNS,
    PROBLEMS,
    TABLE,
    classify,
    rule_row,
    run,
    select_solver,
)
from votemanip.rules import (
    borda,
    bucklin,
    copeland,
    fallback,
    k_approval,
    k_veto,
    maximin,
    plurality,
    scoring,
    simplified_bucklin,
    simplified_fallback,
    veto,
)

H = Fraction(1, 2)


# --- the embedded complexity table -------------------------------------------


def test_table_shape():
    assert COLUMNS == (("wm", 1), ("wm", None), ("om", 1), ("om", None), ("sm", 1), ("sm", None))
    assert set(TABLE) == {
        "plurality", "veto", "kapproval", "kveto", "bucklin",
        "fallback", "borda", "maximin", "copeland",
    }
    assert all(len(cells) == 6 for cells in TABLE.values())


def test_table_reference_values():
    # independent transcription, cell for cell
    P, NPC, CONP, NPH = "P", "NP-complete", "coNP-hard", "NP-hard"
    assert TABLE["plurality"] == (P, P, P, P, P, P)
    assert TABLE["veto"] == (P, P, P, P, P, P)
    assert TABLE["kapproval"] == (NPC, NPC, CONP, CONP, P, P)
    assert TABLE["kveto"] == (NPC, NPC, CONP, CONP, P, P)
    assert TABLE["bucklin"] == (NPC, NPC, CONP, CONP, P, P)
    assert TABLE["fallback"] == (NPC, NPC, P, P, P, P)
    assert TABLE["borda"] == (NPC, NPC, CONP, CONP, P, NPH)
    assert TABLE["maximin"] == (NPC, NPC, CONP, CONP, P, NPH)
    assert TABLE["copeland"] == (NPC, NPC, CONP, CONP, CONP, NPH)


# --- rule -> row mapping --------------------------------------------------------


@pytest.mark.parametrize(
    "rule,row",
    [
        (plurality(4), "plurality"),
        (k_approval(4, 1), "plurality"),
        (veto(4), "veto"),
        (k_veto(4, 1), "veto"),
        (k_approval(4, 3), "veto"),  # approving all but one vetoes one
        (k_approval(4, 2), "kapproval"),
        (k_veto(4, 2), "kveto"),
        (borda(5), "borda"),
        (scoring((2, 1, 0)), "borda"),
        (bucklin(), "bucklin"),
        (simplified_bucklin(), "bucklin"),
        (fallback(), "fallback"),
        (simplified_fallback(), "fallback"),
        (maximin(), "maximin"),
        (copeland(H), "copeland"),
        (scoring((3, 1, 0)), None),
        (scoring((2, 2, 1, 0)), None),
    ],
)
def test_rule_row(rule, row):
    assert rule_row(rule) == row


# --- cell lookup ------------------------------------------------------------------


def test_classify_spot_checks():
    assert classify("wm", plurality(3), 1) == "P"
    assert classify("wm", plurality(3), 5) == "P"
    assert classify("wm", k_approval(4, 2), 1) == "NP-complete"
    assert classify("om", borda(4), 2) == "coNP-hard"
    assert classify("om", fallback(), 3) == "P"
    assert classify("sm", maximin(), 1) == "P"
    assert classify("sm", maximin(), 2) == "NP-hard"
    assert classify("sm", copeland(H), 1) == "coNP-hard"
    assert classify("sm", bucklin(), 4) == "P"
    assert classify("cm", plurality(3), 1) is None
    assert classify("pw", plurality(3), 1) is None
    assert classify("wm", scoring((3, 1, 0)), 1) is None


def test_classify_copeland_half_weak_manipulation_is_open():
    # the hardness proofs for weak manipulation need alpha != 1/2
    assert classify("wm", copeland(H), 1) == "open"
    assert classify("wm", copeland(Fraction(1)), 1) == "NP-complete"
    assert classify("wm", copeland(Fraction(1, 3)), 2) == "NP-complete"
    assert classify("om", copeland(H), 1) == "coNP-hard"
    assert classify("sm", copeland(H), 2) == "NP-hard"


# --- solver selection ----------------------------------------------------------------


@pytest.mark.parametrize(
    "problem,rule,l,name",
    [
        ("wm", plurality(3), 1, "wm_plurality_veto"),
        ("wm", plurality(3), 3, "wm_plurality_veto"),
        ("wm", veto(4), 2, "wm_plurality_veto"),
        ("wm", k_approval(4, 3), 2, "wm_plurality_veto"),
        ("wm", k_approval(4, 2), 1, "oracle:wm"),
        ("wm", copeland(H), 1, "oracle:wm"),
        ("om", plurality(3), 2, "om_approve_only"),
        ("om", fallback(), 3, "om_approve_only"),
        ("om", simplified_fallback(), 1, "om_approve_only"),
        ("om", veto(4), 3, "om_veto"),
        ("om", veto(4), 4, "oracle:om"),
        ("om", k_approval(4, 2), 1, "oracle:om"),
        ("om", borda(4), 1, "oracle:om"),
        ("sm", plurality(3), 2, "sm_kapproval_kveto"),
        ("sm", k_approval(4, 2), 3, "sm_kapproval_kveto"),
        ("sm", k_veto(4, 2), 2, "sm_kapproval_kveto"),
        ("sm", bucklin(), 2, "sm_bucklin_family"),
        ("sm", simplified_bucklin(), 1, "sm_bucklin_family"),
        ("sm", fallback(), 3, "sm_bucklin_family"),
        ("sm", simplified_fallback(), 2, "sm_bucklin_family"),
        ("sm", maximin(), 1, "sm_maximin_single"),
        ("sm", maximin(), 2, "oracle:sm"),
        ("sm", borda(4), 1, "sm_scoring_single"),
        ("sm", borda(4), 2, "oracle:sm"),
        ("sm", copeland(H), 1, "oracle:sm"),
        ("sm", scoring((3, 1, 0)), 1, "oracle:sm"),
        ("cm", plurality(3), 2, "wm_plurality_veto"),
        ("cm", veto(3), 1, "wm_plurality_veto"),
        ("cm", borda(3), 1, "oracle:cm"),
        ("pw", borda(3), 1, "oracle:pw"),
        ("nw", plurality(3), 1, "oracle:nw"),
    ],
)
def test_select_solver(problem, rule, l, name):
    got_name, fn = select_solver(problem, rule, l)
    assert got_name == name
    assert (fn is None) == name.startswith("oracle:")


def test_select_solver_rejects_unknown_problem():
    with pytest.raises(ValueError):
        select_solver("stv", plurality(3), 1)


def test_hard_cells_never_get_a_polynomial_decider():
    rules = [
        plurality(4), veto(4), k_approval(4, 2), k_veto(4, 2), borda(4),
        bucklin(), simplified_bucklin(), fallback(), simplified_fallback(),
        maximin(), copeland(H), copeland(Fraction(1)), scoring((3, 1, 0)),
    ]
    for problem in ("wm", "om", "sm"):
        for r in rules:
            for l in (1, 2, 4):
                name, fn = select_solver(problem, r, l)
                if fn is not None:
                    assert classify(problem, r, l) == "P", (problem, r, l, name)


def test_problems_constant():
    assert PROBLEMS == ("wm", "om", "sm", "cm", "pw", "nw")


# --- run() dispatch ---------------------------------------------------------------


def two_vote_profile():
    return Profile(
        default_candidates(3),
        [(complete_vote((0, 1, 2)), 1), (build_partial_vote([(2, 0)], 3), 1)],
    )


def test_run_uses_poly_decider_and_matches_oracle():
    inst = ManipulationInstance(two_vote_profile(), 1, 2, plurality(3))
    ans, wit, name = run("wm", inst, 10 ** 6, 10 ** 4)
    assert name == "wm_plurality_veto"
    assert ans == weak_manipulation_bf(inst)[0]
    assert (wit.manipulator_votes is not None) == ans


def test_run_routes_hard_cell_to_oracle():
    inst = ManipulationInstance(two_vote_profile(), 1, 2, borda(3))
    ans, wit, name = run("om", inst, 10 ** 6, 10 ** 4)
    assert name == "oracle:om"
    assert ans == opportunistic_manipulation_bf(inst)[0]


def test_run_cm_requires_complete_profile():
    inst = ManipulationInstance(two_vote_profile(), 1, 2, plurality(3))
    with pytest.raises(ValueError, match="complete"):
        run("cm", inst, 10 ** 6, 10 ** 4)


def test_run_cm_complete_profile():
    P = Profile(default_candidates(3), [(complete_vote((0, 1, 2)), 2)])
    inst = ManipulationInstance(P, 2, 2, plurality(3))
    ans, wit, name = run("cm", inst, 10 ** 6, 10 ** 4)
    assert name == "wm_plurality_veto"
    assert ans == coalitional_manipulation_bf(P, 2, 2, plurality(3))[0]

    inst = ManipulationInstance(P, 2, 2, borda(3))
    ans, wit, name = run("cm", inst, 10 ** 6, 10 ** 4)
    assert name == "oracle:cm"
    assert ans == coalitional_manipulation_bf(P, 2, 2, borda(3))[0]


def test_run_rejects_winner_problems():
    P = Profile(default_candidates(3), [(complete_vote((0, 1, 2)), 1)])
    inst = ManipulationInstance(P, 1, 0, plurality(3))
    with pytest.raises(ValueError, match="manipulation"):
        run("pw", inst, 10 ** 6, 10 ** 4)
