"""Ground-truth brute-force deciders for manipulation under partial votes.

Everything here is trusted by the rest of the package, so the search is
plain: walk the cartesian product of per-vote linear extensions with an
incremental tally (only changed slots are retallied), and walk manipulator
ballot tuples as multisets (all implemented rules are anonymous).  The one
exact reduction applied by default is ballot-class deduplication for
positional rules: two rankings assigning every candidate the same score are
interchangeable, so only one representative per class is enumerated.

Optional c-on-top pruning of manipulator ballots exists behind a flag and is
never the default; tests compare it against the unpruned search.

Budgets: extension products are checked up front and raise
ExtensionBudgetExceeded (from core); ballot-tuple scans are lazy and raise
EnumerationBudgetExceeded only when the budget is crossed before the answer
is settled.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .core import (
    DEFAULT_EXTENSION_BUDGET,
    LinearVote,
    ManipulationInstance,
    PartialVote,
    Profile,
    build_partial_vote,
    complete_vote,
    count_extensions,
    extensions,
)
from .rules import (
    FALLBACK_FAMILIES,
    POSITIONAL,
    MissingApprovals,
    Rule,
    make_tally,
)

DEFAULT_TUPLE_BUDGET = 10 ** 4


class EnumerationBudgetExceeded(RuntimeError):
    """A ballot-tuple scan crossed its budget before settling the answer."""


@dataclass(frozen=True)
class Witness:
    """Certificate for a yes answer; absent fields were not part of the claim."""

    manipulator_votes: Optional[tuple] = None  # LinearVote tuple
    manipulator_approvals: Optional[tuple] = None  # per-vote k, Fallback only
    extension: Optional[Profile] = None


def c_top_ranking(m: int, c: int) -> tuple:
    """c first, everyone else by ascending id."""
    return (c,) + tuple(x for x in range(m) if x != c)


def add_empty_votes(P: Profile, count: int, approval_counts=None) -> Profile:
    """P plus `count` fully undetermined votes."""
    empty = build_partial_vote([], P.m)
    return P.with_votes_appended([(empty, count)] if count else [], approval_counts)


def append_c_top_votes(P: Profile, count: int, c: int) -> Profile:
    """P plus `count` partial votes fixing only c above everyone else.

    Leaving the rest open matters: extensions of these votes range over
    all c-first ballots, which is what lets one free manipulator plus
    `count` of them stand in for a coalition of `count` + 1.
    """
    if count == 0:
        return P
    vote = build_partial_vote([(c, x) for x in range(P.m) if x != c], P.m)
    approvals = [1] if P.approval_counts is not None else None
    return P.with_votes_appended([(vote, count)], approvals)


def _positional_classes(vector, c_top: Optional[int]) -> Iterator[tuple]:
    """Score-class representatives in lexicographic order.

    Positions with equal scores form blocks; a class is an assignment of
    candidates to blocks and its representative lists each block ascending
    (with c pinned first when c_top is set).
    """
    m = len(vector)
    blocks = []
    i = 0
    while i < m:
        j = i
        while j < m and vector[j] == vector[i]:
            j += 1
        blocks.append(j - i)
        i = j

    def rec(remaining, bi):
        if bi == len(blocks):
            yield ()
            return
        for combo in itertools.combinations(remaining, blocks[bi]):
            rest = tuple(x for x in remaining if x not in combo)
            for tail in rec(rest, bi + 1):
                yield combo + tail

    if c_top is None:
        yield from rec(tuple(range(m)), 0)
        return
    others = tuple(x for x in range(m) if x != c_top)
    for combo0 in itertools.combinations(others, blocks[0] - 1):
        rest = tuple(x for x in others if x not in combo0)
        for tail in rec(rest, 1):
            yield (c_top,) + combo0 + tail


def _ballot_iter(r: Rule, m: int, c_top: Optional[int]) -> Iterator[tuple]:
    """(ranking, approval count) ballots a manipulator may cast, lex order."""
    if r.family == POSITIONAL:
        for ranking in _positional_classes(r.score_vector, c_top):
            yield ranking, None
    elif r.family in FALLBACK_FAMILIES:
        # ranking of the approved prefix; the tail is inert, kept ascending
        for k in range(1, m + 1):
            for prefix in itertools.permutations(range(m), k):
                if c_top is not None and prefix[0] != c_top:
                    continue
                tail = tuple(x for x in range(m) if x not in prefix)
                yield prefix + tail, k
    else:
        for ranking in itertools.permutations(range(m)):
            if c_top is None or ranking[0] == c_top:
                yield ranking, None


def ballot_space(r: Rule, m: int, c_top: Optional[int] = None, cap: Optional[int] = None):
    """Materialized ballot list; raises when it outgrows cap."""
    out = []
    for ballot in _ballot_iter(r, m, c_top):
        out.append(ballot)
        if cap is not None and len(out) > cap:
            raise EnumerationBudgetExceeded(
                f"more than {cap} distinct manipulator ballots"
            )
    return out


def _extension_streams(P: Profile, cap: int):
    """Per-expanded-vote lists of candidate rankings, budget checked up front.

    Mirrors core.profile_extensions: same order, same budget semantics, but
    streams plain ranking tuples for tallying speed.
    """
    distinct: dict[PartialVote, list] = {}
    for v, _ in P.votes:
        if v not in distinct:
            if count_extensions(v, cap) > cap:
                raise _budget_error(cap)
            distinct[v] = [e.ranking for e in extensions(v)]
    total = 1
    streams = []
    ks = []
    for i, (v, mult) in enumerate(P.votes):
        k = P.approval_counts[i] if P.approval_counts is not None else None
        for _ in range(mult):
            total *= len(distinct[v])
            if total > cap:
                raise _budget_error(cap)
            streams.append(distinct[v])
            ks.append(k)
    return streams, ks


def _budget_error(cap):
    from .core import ExtensionBudgetExceeded

    return ExtensionBudgetExceeded(f"extension product exceeds budget of {cap}")


class _Odometer:
    """Walks the extension product, keeping a tally current.

    The last slot varies fastest, matching core.profile_extensions order.
    """

    __slots__ = ("streams", "ks", "tally", "idx")

    def __init__(self, streams, ks, tally):
        self.streams = streams
        self.ks = ks
        self.tally = tally
        self.idx = [0] * len(streams)
        for stream, k in zip(streams, ks):
            tally.add(stream[0], k)

    def advance(self) -> bool:
        i = len(self.streams) - 1
        while i >= 0:
            stream = self.streams[i]
            self.tally.remove(stream[self.idx[i]], self.ks[i])
            self.idx[i] += 1
            if self.idx[i] < len(stream):
                self.tally.add(stream[self.idx[i]], self.ks[i])
                return True
            self.idx[i] = 0
            self.tally.add(stream[0], self.ks[i])
            i -= 1
        return False

    def current_rankings(self) -> tuple:
        return tuple(s[i] for s, i in zip(self.streams, self.idx))


def _as_profile(P: Profile, rankings) -> Profile:
    votes = tuple((complete_vote(r), 1) for r in rankings)
    return Profile(P.candidates, votes, P.expanded_approvals())


def _require_approvals(P: Profile, r: Rule):
    if r.needs_approvals() and P.approval_counts is None:
        raise MissingApprovals("rule needs approval counts the profile lacks")


def _unique_win(tally, c: int) -> bool:
    return tally.board().winners == frozenset({c})


class _TupleScan:
    """Lazy multiset scan over manipulator ballots with a shared budget."""

    __slots__ = ("ballots", "l", "budget", "used")

    def __init__(self, ballots, l: int, budget: int):
        self.ballots = ballots
        self.l = l
        self.budget = budget
        self.used = 0

    def find_win(self, tally, c: int) -> Optional[tuple]:
        """First ballot multiset making c the unique winner atop tally."""
        for Q in itertools.combinations_with_replacement(self.ballots, self.l):
            self.used += 1
            if self.used > self.budget:
                raise EnumerationBudgetExceeded(
                    f"ballot-tuple budget of {self.budget} exhausted before an answer"
                )
            for ranking, k in Q:
                tally.add(ranking, k)
            win = _unique_win(tally, c)
            for ranking, k in Q:
                tally.remove(ranking, k)
            if win:
                return Q
        return None


def _tuple_witness(Q, r: Rule) -> Witness:
    votes = tuple(LinearVote(ranking) for ranking, _ in Q)
    approvals = tuple(k for _, k in Q) if r.family in FALLBACK_FAMILIES else None
    return Witness(manipulator_votes=votes, manipulator_approvals=approvals)


def coalitional_manipulation_bf(
    P: Profile,
    l: int,
    c: int,
    r: Rule,
    max_tuples: int = DEFAULT_TUPLE_BUDGET,
    assume_c_top: bool = False,
):
    """Can l fresh ballots added to the complete profile P make c the unique
    winner?  Returns (answer, witness)."""
    if l < 1:
        raise ValueError("need at least one manipulator")
    _require_approvals(P, r)
    tally = make_tally(r, P.m)
    for v, k in P.expanded():
        tally.add(v.to_linear().ranking, k)
    ballots = ballot_space(r, P.m, c if assume_c_top else None, cap=max_tuples)
    Q = _TupleScan(ballots, l, max_tuples).find_win(tally, c)
    if Q is None:
        return False, Witness()
    return True, _tuple_witness(Q, r)


def possible_winner_bf(
    P: Profile, c: int, r: Rule, max_extensions: int = DEFAULT_EXTENSION_BUDGET
) -> bool:
    """Is c the unique winner of at least one extension of P?"""
    _require_approvals(P, r)
    streams, ks = _extension_streams(P, max_extensions)
    odo = _Odometer(streams, ks, make_tally(r, P.m))
    while True:
        if _unique_win(odo.tally, c):
            return True
        if not odo.advance():
            return False


def necessary_winner_bf(
    P: Profile, c: int, r: Rule, max_extensions: int = DEFAULT_EXTENSION_BUDGET
) -> bool:
    """Is c the unique winner of every extension of P?"""
    _require_approvals(P, r)
    streams, ks = _extension_streams(P, max_extensions)
    odo = _Odometer(streams, ks, make_tally(r, P.m))
    while True:
        if not _unique_win(odo.tally, c):
            return False
        if not odo.advance():
            return True


def weak_manipulation_bf(
    inst: ManipulationInstance,
    max_extensions: int = DEFAULT_EXTENSION_BUDGET,
    max_tuples: int = DEFAULT_TUPLE_BUDGET,
    assume_c_top: bool = False,
):
    """Do some extension and some manipulator votes make c win uniquely?

    The tuple budget applies per extension.
    """
    P, l, c, r = inst.profile, inst.manipulators, inst.favorite, inst.rule
    _require_approvals(P, r)
    ballots = ballot_space(r, P.m, c if assume_c_top else None, cap=max_tuples)
    streams, ks = _extension_streams(P, max_extensions)
    odo = _Odometer(streams, ks, make_tally(r, P.m))
    while True:
        Q = _TupleScan(ballots, l, max_tuples).find_win(odo.tally, c)
        if Q is not None:
            ext = _as_profile(P, odo.current_rankings())
            w = _tuple_witness(Q, r)
            return True, Witness(w.manipulator_votes, w.manipulator_approvals, ext)
        if not odo.advance():
            return False, Witness()


def viable_extensions(
    inst: ManipulationInstance,
    max_extensions: int = DEFAULT_EXTENSION_BUDGET,
    max_tuples: int = DEFAULT_TUPLE_BUDGET,
    assume_c_top: bool = False,
) -> Iterator[Profile]:
    """Extensions whose standard coalitional manipulation answer is yes."""
    P, l, c, r = inst.profile, inst.manipulators, inst.favorite, inst.rule
    _require_approvals(P, r)
    ballots = ballot_space(r, P.m, c if assume_c_top else None, cap=max_tuples)
    streams, ks = _extension_streams(P, max_extensions)
    odo = _Odometer(streams, ks, make_tally(r, P.m))
    while True:
        if _TupleScan(ballots, l, max_tuples).find_win(odo.tally, c) is not None:
            yield _as_profile(P, odo.current_rankings())
        if not odo.advance():
            return


def _materialize_tuples(ballots, l: int, cap: int):
    out = []
    for Q in itertools.combinations_with_replacement(ballots, l):
        out.append(Q)
        if len(out) > cap:
            raise EnumerationBudgetExceeded(
                f"more than {cap} manipulator ballot multisets"
            )
    return out


def is_c_optimal(
    Q: Sequence[LinearVote],
    inst: ManipulationInstance,
    approvals: Optional[Sequence[int]] = None,
    max_extensions: int = DEFAULT_EXTENSION_BUDGET,
    max_tuples: int = DEFAULT_TUPLE_BUDGET,
    assume_c_top: bool = False,
) -> bool:
    """Does Q make c the unique winner on every viable extension?

    assume_c_top prunes only the viability scans, never Q itself.
    """
    P, l, c, r = inst.profile, inst.manipulators, inst.favorite, inst.rule
    if len(Q) != l:
        raise ValueError(f"expected {l} manipulator votes, got {len(Q)}")
    _require_approvals(P, r)
    if r.family in FALLBACK_FAMILIES:
        if approvals is None or len(approvals) != l:
            raise MissingApprovals("manipulator votes need approval counts")
    else:
        approvals = [None] * l
    q_ballots = [(v.ranking, k) for v, k in zip(Q, approvals)]
    ballots = ballot_space(r, P.m, c if assume_c_top else None, cap=max_tuples)
    streams, ks = _extension_streams(P, max_extensions)
    odo = _Odometer(streams, ks, make_tally(r, P.m))
    while True:
        # when Q itself wins, the extension cannot refute Q either way
        for ranking, k in q_ballots:
            odo.tally.add(ranking, k)
        win = _unique_win(odo.tally, c)
        for ranking, k in q_ballots:
            odo.tally.remove(ranking, k)
        if not win:
            if _TupleScan(ballots, l, max_tuples).find_win(odo.tally, c) is not None:
                return False
        if not odo.advance():
            return True


def opportunistic_manipulation_bf(
    inst: ManipulationInstance,
    max_extensions: int = DEFAULT_EXTENSION_BUDGET,
    max_tuples: int = DEFAULT_TUPLE_BUDGET,
    assume_c_top: bool = False,
):
    """Is there a ballot tuple that wins on every viable extension?

    Survivor elimination: all candidate tuples are kept and each viable
    extension filters them.  No viable extension at all is a vacuous yes
    witnessed by l c-first ballots.
    """
    P, l, c, r = inst.profile, inst.manipulators, inst.favorite, inst.rule
    _require_approvals(P, r)
    ballots = ballot_space(r, P.m, c if assume_c_top else None, cap=max_tuples)
    survivors = _materialize_tuples(ballots, l, max_tuples)
    streams, ks = _extension_streams(P, max_extensions)
    odo = _Odometer(streams, ks, make_tally(r, P.m))
    any_viable = False
    while True:
        kept = []
        for Q in survivors:
            for ranking, k in Q:
                odo.tally.add(ranking, k)
            win = _unique_win(odo.tally, c)
            for ranking, k in Q:
                odo.tally.remove(ranking, k)
            if win:
                kept.append(Q)
        if kept:
            # a surviving winner certifies viability by itself
            any_viable = True
            survivors = kept
        elif _TupleScan(ballots, l, max_tuples).find_win(odo.tally, c) is not None:
            # viable, yet every remaining tuple fails here
            return False, Witness()
        if not odo.advance():
            break
    if not any_viable:
        top = c_top_ranking(P.m, c)
        k = 1 if r.family in FALLBACK_FAMILIES else None
        return True, _tuple_witness(tuple((top, k) for _ in range(l)), r)
    return True, _tuple_witness(survivors[0], r)


def strong_manipulation_bf(
    inst: ManipulationInstance,
    max_extensions: int = DEFAULT_EXTENSION_BUDGET,
    max_tuples: int = DEFAULT_TUPLE_BUDGET,
    assume_c_top: bool = False,
):
    """Is there a ballot tuple that wins on every extension?"""
    P, l, c, r = inst.profile, inst.manipulators, inst.favorite, inst.rule
    _require_approvals(P, r)
    ballots = ballot_space(r, P.m, c if assume_c_top else None, cap=max_tuples)
    survivors = _materialize_tuples(ballots, l, max_tuples)
    streams, ks = _extension_streams(P, max_extensions)
    odo = _Odometer(streams, ks, make_tally(r, P.m))
    while True:
        kept = []
        for Q in survivors:
            for ranking, k in Q:
                odo.tally.add(ranking, k)
            win = _unique_win(odo.tally, c)
            for ranking, k in Q:
                odo.tally.remove(ranking, k)
            if win:
                kept.append(Q)
        survivors = kept
        if not survivors:
            return False, Witness()
        if not odo.advance():
            return True, _tuple_witness(survivors[0], r)
