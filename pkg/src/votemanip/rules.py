"""Voting rules and incremental tallies.

Rules are small frozen descriptors; all score arithmetic is exact (integers
and fractions.Fraction, never floats).  Tally objects accept ballots one at a
time and can retract them, so brute-force search can walk ballot spaces
without recomputing whole profiles.  evaluate() is a thin wrapper that feeds
a complete profile through the same tally code path.

A ballot is a full ranking tuple plus an optional approval count k.  Under
the Fallback families a candidate is counted at depth l iff its position is
at most min(l, k); the order beyond position k never matters.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import Profile

POSITIONAL = "PositionalScoring"
BUCKLIN = "Bucklin"
SIMPLIFIED_BUCKLIN = "SimplifiedBucklin"
FALLBACK = "Fallback"
SIMPLIFIED_FALLBACK = "SimplifiedFallback"
MAXIMIN = "Maximin"
COPELAND = "Copeland"

FAMILIES = (
    POSITIONAL,
    BUCKLIN,
    SIMPLIFIED_BUCKLIN,
    FALLBACK,
    SIMPLIFIED_FALLBACK,
    MAXIMIN,
    COPELAND,
)

BUCKLIN_FAMILIES = (BUCKLIN, SIMPLIFIED_BUCKLIN, FALLBACK, SIMPLIFIED_FALLBACK)
FALLBACK_FAMILIES = (FALLBACK, SIMPLIFIED_FALLBACK)


class IncompleteProfile(ValueError):
    """A complete profile was required but some vote has undetermined pairs."""


class MissingApprovals(ValueError):
    """A Fallback-family rule needs approval counts the profile lacks."""


class NotNormalizable(ValueError):
    """The affine normal form of a score vector is not integral.

    rational_vector carries the exact normal form as Fractions.
    """

    def __init__(self, message, rational_vector):
        super().__init__(message)
        self.rational_vector = tuple(rational_vector)


@dataclass(frozen=True)
class Rule:
    family: str
    score_vector: Optional[tuple] = None
    alpha: Optional[Fraction] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown rule family {self.family!r}")
        if self.family == POSITIONAL:
            v = self.score_vector
            if v is None or len(v) < 2:
                raise ValueError("positional rule needs a score vector, m >= 2")
            if any(v[i] < v[i + 1] for i in range(len(v) - 1)) or v[0] <= v[-1]:
                raise ValueError("score vector must be nonincreasing, first > last")
            object.__setattr__(self, "score_vector", tuple(int(x) for x in v))
        elif self.score_vector is not None:
            raise ValueError("score_vector only applies to positional rules")
        if self.family == COPELAND:
            a = self.alpha
            if a is None or not 0 <= a <= 1:
                raise ValueError("Copeland needs alpha in [0,1]")
            object.__setattr__(self, "alpha", Fraction(a))
        elif self.alpha is not None:
            raise ValueError("alpha only applies to Copeland")

    @property
    def m(self) -> Optional[int]:
        """Candidate count the rule is bound to, or None if size-agnostic."""
        return None if self.score_vector is None else len(self.score_vector)

    def needs_approvals(self) -> bool:
        return self.family in FALLBACK_FAMILIES

    def name(self) -> str:
        if self.family == POSITIONAL:
            kind, k = classify_score_vector(self.score_vector)
            if kind == "kapproval":
                return f"{k}-approval"
            if kind == "kveto":
                return "veto" if k == 1 else f"{k}-veto"
            return kind
        if self.family == COPELAND:
            return f"copeland({self.alpha})"
        return {
            BUCKLIN: "bucklin",
            SIMPLIFIED_BUCKLIN: "simplified-bucklin",
            FALLBACK: "fallback",
            SIMPLIFIED_FALLBACK: "simplified-fallback",
            MAXIMIN: "maximin",
        }[self.family]


def scoring(vector: Sequence[int]) -> Rule:
    return Rule(POSITIONAL, tuple(vector))


def borda(m: int) -> Rule:
    return scoring(tuple(range(m - 1, -1, -1)))


def k_approval(m: int, k: int) -> Rule:
    if not 1 <= k < m:
        raise ValueError("k-approval needs 1 <= k < m")
    return scoring((1,) * k + (0,) * (m - k))


def plurality(m: int) -> Rule:
    return k_approval(m, 1)


def k_veto(m: int, k: int) -> Rule:
    if not 1 <= k < m:
        raise ValueError("k-veto needs 1 <= k < m")
    # stored raw: zeros then -1s, not shifted to approval form
    return scoring((0,) * (m - k) + (-1,) * k)


def veto(m: int) -> Rule:
    return k_veto(m, 1)


def bucklin() -> Rule:
    return Rule(BUCKLIN)


def simplified_bucklin() -> Rule:
    return Rule(SIMPLIFIED_BUCKLIN)


def fallback() -> Rule:
    return Rule(FALLBACK)


def simplified_fallback() -> Rule:
    return Rule(SIMPLIFIED_FALLBACK)


def maximin() -> Rule:
    return Rule(MAXIMIN)


def copeland(alpha) -> Rule:
    return Rule(COPELAND, alpha=Fraction(alpha))


def normalize_score_vector(vector: Sequence) -> tuple:
    """Affine normal form: zero tail, last nonzero gap equal to 1.

    Shift so the final entry is zero, then divide by the smallest positive
    entry.  Raises NotNormalizable (carrying the exact rational form) when
    the division leaves non-integers.
    """
    v = [Fraction(x) for x in vector]
    if len(v) < 2 or any(v[i] < v[i + 1] for i in range(len(v) - 1)) or v[0] == v[-1]:
        raise ValueError("vector must be nonincreasing and not constant")
    shifted = [x - v[-1] for x in v]
    gap = min(x for x in shifted if x > 0)
    scaled = [x / gap for x in shifted]
    if any(x.denominator != 1 for x in scaled):
        raise NotNormalizable("normal form is not integral", scaled)
    return tuple(int(x) for x in scaled)


def classify_score_vector(vector: Sequence[int]):
    """Name the positional family of a vector.

    Returns (kind, k) with kind in {"plurality", "kapproval", "kveto",
    "borda", "scoring"}; k is the approval/veto count when applicable.  Raw
    veto-shaped vectors (zeros then -1s) are reported as kveto; everything
    else is classified by its normal form.
    """
    v = tuple(vector)
    m = len(v)
    k_neg = sum(1 for x in v if x == -1)
    if k_neg and v == (0,) * (m - k_neg) + (-1,) * k_neg:
        return ("kveto", k_neg)
    try:
        norm = normalize_score_vector(v)
    except NotNormalizable:
        return ("scoring", None)
    k_ones = sum(1 for x in norm if x == 1)
    if norm == (1,) * k_ones + (0,) * (m - k_ones):
        return ("plurality", 1) if k_ones == 1 else ("kapproval", k_ones)
    if norm == tuple(range(m - 1, -1, -1)):
        return ("borda", None)
    return ("scoring", None)


@dataclass(frozen=True)
class ScoreBoard:
    scores: tuple
    winners: frozenset
    bucklin_depth: Optional[int] = None


@dataclass(frozen=True)
class MarginMatrix:
    D: tuple  # m tuples of m ints, D[x][y] = N(x,y) - N(y,x)

    @property
    def m(self) -> int:
        return len(self.D)


def _argmax_set(scores) -> frozenset:
    top = max(scores)
    return frozenset(i for i, s in enumerate(scores) if s == top)


class PositionalTally:
    """Running positional scores; add/remove are O(m)."""

    __slots__ = ("vector", "m", "scores", "n")

    def __init__(self, vector: Sequence[int]):
        self.vector = tuple(vector)
        self.m = len(self.vector)
        self.scores = [0] * self.m
        self.n = 0

    def add(self, ranking: Sequence[int], k: Optional[int] = None, mult: int = 1):
        for pos, c in enumerate(ranking):
            self.scores[c] += self.vector[pos] * mult
        self.n += mult

    def remove(self, ranking: Sequence[int], k: Optional[int] = None, mult: int = 1):
        self.add(ranking, k, -mult)

    def board(self) -> ScoreBoard:
        return ScoreBoard(tuple(self.scores), _argmax_set(self.scores))


class BucklinTally:
    """Cumulative depth counts cnt[x][l] = ballots counting x within top l.

    Handles the whole Bucklin family; the family string picks the winner
    semantics.  Approval counts are honored when the family requires them
    and ignored otherwise.
    """

    __slots__ = ("family", "m", "cnt", "n")

    def __init__(self, family: str, m: int):
        if family not in BUCKLIN_FAMILIES:
            raise ValueError(f"not a Bucklin-family rule: {family}")
        self.family = family
        self.m = m
        self.cnt = [[0] * (m + 1) for _ in range(m)]  # index 1..m used
        self.n = 0

    def _effective(self, k: Optional[int]) -> int:
        if self.family in FALLBACK_FAMILIES:
            if k is None:
                raise MissingApprovals("fallback rules need approval counts")
            return min(k, self.m)
        return self.m

    def add(self, ranking: Sequence[int], k: Optional[int] = None, mult: int = 1):
        eff = self._effective(k)
        for pos in range(eff):
            row = self.cnt[ranking[pos]]
            for depth in range(pos + 1, self.m + 1):
                row[depth] += mult
        self.n += mult

    def remove(self, ranking: Sequence[int], k: Optional[int] = None, mult: int = 1):
        self.add(ranking, k, -mult)

    def board(self) -> ScoreBoard:
        half = Fraction(self.n, 2)
        for depth in range(1, self.m + 1):
            counts = tuple(self.cnt[x][depth] for x in range(self.m))
            majority = frozenset(x for x in range(self.m) if counts[x] > half)
            if majority:
                if self.family in (SIMPLIFIED_BUCKLIN, SIMPLIFIED_FALLBACK):
                    return ScoreBoard(counts, majority, depth)
                return ScoreBoard(counts, _argmax_set(counts), depth)
        # no strict majority at any depth
        approvals = tuple(self.cnt[x][self.m] for x in range(self.m))
        if self.family in FALLBACK_FAMILIES:
            return ScoreBoard(approvals, _argmax_set(approvals), None)
        # only possible for empty profiles when ballots are complete
        return ScoreBoard(approvals, frozenset(range(self.m)), None)


class MarginTally:
    """Pairwise margin matrix; winner semantics from maximin or Copeland."""

    __slots__ = ("family", "alpha", "m", "D", "n")

    def __init__(self, family: str, m: int, alpha: Optional[Fraction] = None):
        if family not in (MAXIMIN, COPELAND):
            raise ValueError(f"not a margin-based rule: {family}")
        self.family = family
        self.alpha = alpha
        self.m = m
        self.D = [[0] * m for _ in range(m)]
        self.n = 0

    def add(self, ranking: Sequence[int], k: Optional[int] = None, mult: int = 1):
        for i, a in enumerate(ranking):
            for b in ranking[i + 1:]:
                self.D[a][b] += mult
                self.D[b][a] -= mult
        self.n += mult

    def remove(self, ranking: Sequence[int], k: Optional[int] = None, mult: int = 1):
        self.add(ranking, k, -mult)

    def board(self) -> ScoreBoard:
        m = self.m
        if self.family == MAXIMIN:
            if m == 1:
                return ScoreBoard((0,), frozenset({0}))
            scores = tuple(
                min(self.D[x][y] for y in range(m) if y != x) for x in range(m)
            )
            return ScoreBoard(scores, _argmax_set(scores))
        scores = tuple(
            sum(1 for y in range(m) if y != x and self.D[x][y] > 0)
            + self.alpha * sum(1 for y in range(m) if y != x and self.D[x][y] == 0)
            for x in range(m)
        )
        return ScoreBoard(scores, _argmax_set(scores))


def make_tally(rule: Rule, m: int):
    if rule.family == POSITIONAL:
        if rule.m != m:
            raise ValueError(f"rule is for m={rule.m}, profile has m={m}")
        return PositionalTally(rule.score_vector)
    if rule.family in BUCKLIN_FAMILIES:
        return BucklinTally(rule.family, m)
    return MarginTally(rule.family, m, rule.alpha)


def _complete_ballots(P: Profile):
    """(ranking, approval count, multiplicity) triples of a complete profile."""
    out = []
    for i, (v, mult) in enumerate(P.votes):
        if not v.is_complete():
            raise IncompleteProfile("profile has undetermined pairs")
        k = P.approval_counts[i] if P.approval_counts is not None else None
        out.append((v.to_linear().ranking, k, mult))
    return out


def pairwise_margins(P: Profile) -> MarginMatrix:
    tally = MarginTally(MAXIMIN, P.m)
    for ranking, _, mult in _complete_ballots(P):
        tally.add(ranking, mult=mult)
    return MarginMatrix(tuple(tuple(row) for row in tally.D))


def evaluate(P: Profile, r: Rule) -> ScoreBoard:
    """Score a complete profile under r.

    Majority means strictly more than n/2.  Fallback families require
    approval counts and raise MissingApprovals otherwise.
    """
    if r.needs_approvals() and P.approval_counts is None:
        raise MissingApprovals("profile lacks approval counts")
    tally = make_tally(r, P.m)
    for ranking, k, mult in _complete_ballots(P):
        tally.add(ranking, k, mult)
    return tally.board()


def unique_winner(P: Profile, r: Rule, c: int) -> bool:
    return evaluate(P, r).winners == frozenset({c})
