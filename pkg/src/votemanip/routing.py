"""Complexity-table routing: pick a polynomial decider or the oracle.

The summary table is embedded as data: one row per rule family, one cell
per (problem, coalition-size) column, holding the known complexity class.
select_solver consults it and never hands a hard cell to a polynomial
decider; tractable cells without a matching decider fall back to the
oracle as well, which is slower but always sound.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from . import oracle, polysolve
from .core import ManipulationInstance
from .rules import (
    BUCKLIN,
    BUCKLIN_FAMILIES,
    COPELAND,
    FALLBACK_FAMILIES,
    MAXIMIN,
    POSITIONAL,
    SIMPLIFIED_BUCKLIN,
    Rule,
    classify_score_vector,
)

PROBLEMS = ("wm", "om", "sm", "cm", "pw", "nw")

ROWS = (
    "plurality",
    "veto",
    "kapproval",
    "kveto",
    "bucklin",
    "fallback",
    "borda",
    "maximin",
    "copeland",
)

COLUMNS = (("wm", 1), ("wm", None), ("om", 1), ("om", None), ("sm", 1), ("sm", None))

P = "P"
NPC = "NP-complete"
CONP = "coNP-hard"
NPH = "NP-hard"

# cells ordered as COLUMNS: (wm,1), (wm,*), (om,1), (om,*), (sm,1), (sm,*)
TABLE = {
    "plurality": (P, P, P, P, P, P),
    "veto": (P, P, P, P, P, P),
    "kapproval": (NPC, NPC, CONP, CONP, P, P),
    "kveto": (NPC, NPC, CONP, CONP, P, P),
    "bucklin": (NPC, NPC, CONP, CONP, P, P),
    "fallback": (NPC, NPC, P, P, P, P),
    "borda": (NPC, NPC, CONP, CONP, P, NPH),
    "maximin": (NPC, NPC, CONP, CONP, P, NPH),
    "copeland": (NPC, NPC, CONP, CONP, CONP, NPH),
}

# the Copeland weak-manipulation entries hold for rational alpha other than
# 1/2; treat alpha = 1/2 as hard (unknown), which only ever picks the oracle
COPELAND_WM_ALPHA_EXCLUDED = Fraction(1, 2)


def rule_row(r: Rule) -> Optional[str]:
    """Table row for a rule, or None for a scoring vector outside the table."""
    if r.family in (BUCKLIN, SIMPLIFIED_BUCKLIN):
        return "bucklin"
    if r.family in FALLBACK_FAMILIES:
        return "fallback"
    if r.family == MAXIMIN:
        return "maximin"
    if r.family == COPELAND:
        return "copeland"
    kind, k = classify_score_vector(r.score_vector)
    m = len(r.score_vector)
    if kind == "plurality":
        return "plurality"
    if kind == "kapproval":
        return "veto" if k == m - 1 else "kapproval"
    if kind == "kveto":
        return "veto" if k == 1 else "kveto"
    if kind == "borda":
        return "borda"
    return None


def classify(problem: str, r: Rule, l: int) -> Optional[str]:
    """Complexity-table entry for (problem, rule, coalition size l)."""
    if problem not in ("wm", "om", "sm"):
        return None
    row = rule_row(r)
    if row is None:
        return None
    if problem == "wm" and row == "copeland" and r.alpha == COPELAND_WM_ALPHA_EXCLUDED:
        return "open"
    idx = COLUMNS.index((problem, 1 if l == 1 else None))
    return TABLE[row][idx]


def _poly_decider(problem: str, r: Rule, l: int):
    row = rule_row(r)
    if problem == "wm" and row in ("plurality", "veto"):
        return "wm_plurality_veto", polysolve.wm_plurality_veto
    if problem == "om":
        if row == "plurality" or r.family in FALLBACK_FAMILIES:
            return "om_approve_only", polysolve.om_approve_only
        if row == "veto" and l <= 3:
            return "om_veto", polysolve.om_veto
    if problem == "sm":
        if row in ("plurality", "veto", "kapproval", "kveto"):
            return "sm_kapproval_kveto", polysolve.sm_kapproval_kveto
        if r.family in BUCKLIN_FAMILIES:
            return "sm_bucklin_family", polysolve.sm_bucklin_family
        if row == "maximin" and l == 1:
            return "sm_maximin_single", polysolve.sm_maximin_single
        if r.family == POSITIONAL and l == 1:
            return "sm_scoring_single", polysolve.sm_scoring_single
    if problem == "cm" and row in ("plurality", "veto"):
        # a complete profile makes coalitional manipulation a one-extension
        # weak manipulation question
        return "wm_plurality_veto", polysolve.wm_plurality_veto
    return None


def select_solver(problem: str, r: Rule, l: int):
    """(name, callable or None); None means run the brute-force oracle.

    A polynomial decider is returned only when the table marks the cell P,
    so hard cells always route to the oracle.
    """
    if problem not in PROBLEMS:
        raise ValueError(f"unknown problem {problem!r}")
    if problem in ("pw", "nw"):
        return f"oracle:{problem}", None
    chosen = _poly_decider(problem, r, l)
    if chosen is None:
        return f"oracle:{problem}", None
    if problem != "cm" and classify(problem, r, l) != P:
        return f"oracle:{problem}", None
    return chosen


def run(problem: str, inst: ManipulationInstance, max_extensions: int, max_tuples: int):
    """Dispatch a manipulation question per the table.

    Returns (answer, witness, solver_name).  pw and nw take a bare profile
    rather than an instance and are dispatched by the caller.
    """
    if problem == "cm" and not inst.profile.is_complete():
        raise ValueError("coalitional manipulation needs a complete profile")
    name, fn = select_solver(problem, inst.rule, inst.manipulators)
    if fn is not None:
        ans, wit = fn(inst)
        return ans, wit, name
    if problem == "wm":
        ans, wit = oracle.weak_manipulation_bf(inst, max_extensions, max_tuples)
    elif problem == "om":
        ans, wit = oracle.opportunistic_manipulation_bf(inst, max_extensions, max_tuples)
    elif problem == "sm":
        ans, wit = oracle.strong_manipulation_bf(inst, max_extensions, max_tuples)
    elif problem == "cm":
        ans, wit = oracle.coalitional_manipulation_bf(
            inst.profile, inst.manipulators, inst.favorite, inst.rule, max_tuples
        )
    else:
        raise ValueError(f"{problem!r} is not a manipulation problem")
    return ans, wit, name
