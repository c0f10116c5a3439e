"""Candidates, votes, profiles, and strict-partial-order machinery.

A partial vote is a transitively closed strict partial order over the
candidate ids 0..m-1.  Linear extensions are enumerated in lexicographic
order of the ranking sequence so that every downstream witness is
deterministic.  Extension enumeration over whole profiles is guarded by an
explicit product budget: brute-force consumers fail loudly instead of
hanging.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Iterator, Optional, Sequence

if TYPE_CHECKING:  # pragma: no cover
    from .rules import Rule

DEFAULT_EXTENSION_BUDGET = 10 ** 6


class CycleError(ValueError):
    """The pair set orders some candidate above itself."""


class UnknownCandidate(ValueError):
    """A candidate id is outside 0..m-1."""


class NotDeletable(ValueError):
    """Transitivity re-derives a pair that was asked to be removed."""


class ExtensionBudgetExceeded(RuntimeError):
    """The extension product of a profile exceeds the configured budget."""


@dataclass(frozen=True)
class Candidate:
    id: int
    name: str


def make_candidates(names: Sequence[str]) -> tuple[Candidate, ...]:
    if len(set(names)) != len(names) or any(not n for n in names):
        raise ValueError("candidate names must be unique and nonempty")
    return tuple(Candidate(i, n) for i, n in enumerate(names))


def default_candidates(m: int) -> tuple[Candidate, ...]:
    return make_candidates([f"c{i}" for i in range(m)])


@dataclass(frozen=True)
class LinearVote:
    """A complete ranking; position 0 is the most preferred candidate."""

    ranking: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.ranking) != list(range(len(self.ranking))):
            raise ValueError("ranking must be a permutation of 0..m-1")

    @property
    def m(self) -> int:
        return len(self.ranking)

    def position(self, c: int) -> int:
        """1-based position of candidate c."""
        return self.ranking.index(c) + 1

    def prefers(self, a: int, b: int) -> bool:
        return self.ranking.index(a) < self.ranking.index(b)

    def as_partial(self) -> "PartialVote":
        pairs = frozenset(
            (a, b) for i, a in enumerate(self.ranking) for b in self.ranking[i + 1:]
        )
        return PartialVote(len(self.ranking), pairs)


def _transitive_closure(m: int, pairs: Iterable[tuple[int, int]]) -> frozenset:
    succ = [set() for _ in range(m)]
    for a, b in pairs:
        succ[a].add(b)
    # Warshall, adequate at the m ~ tens this package works with.
    for k in range(m):
        for a in range(m):
            if k in succ[a]:
                succ[a] |= succ[k]
    closed = set()
    for a in range(m):
        if a in succ[a]:
            raise CycleError(f"candidate {a} ordered above itself")
        for b in succ[a]:
            closed.add((a, b))
    return frozenset(closed)


class PartialVote:
    """Strict partial order over candidates 0..m-1, stored transitively closed.

    pairs holds ordered tuples (a, b) meaning a is strictly preferred to b.
    Instances are immutable; every constructor recomputes the closure.
    """

    __slots__ = ("m", "pairs", "_succ", "_pred")

    def __init__(self, m: int, pairs: frozenset):
        self.m = m
        self.pairs = pairs
        succ = [set() for _ in range(m)]
        pred = [set() for _ in range(m)]
        for a, b in pairs:
            succ[a].add(b)
            pred[b].add(a)
        self._succ = tuple(frozenset(s) for s in succ)
        self._pred = tuple(frozenset(p) for p in pred)

    def below(self, a: int) -> frozenset:
        """Candidates forced below a."""
        return self._succ[a]

    def above(self, a: int) -> frozenset:
        """Candidates forced above a."""
        return self._pred[a]

    def determines(self, a: int, b: int) -> bool:
        return (a, b) in self.pairs or (b, a) in self.pairs

    def __eq__(self, other):
        return (
            isinstance(other, PartialVote)
            and self.m == other.m
            and self.pairs == other.pairs
        )

    def __hash__(self):
        return hash((self.m, self.pairs))

    def __repr__(self):
        return f"PartialVote(m={self.m}, pairs={sorted(self.pairs)})"

    def is_complete(self) -> bool:
        return len(self.pairs) == self.m * (self.m - 1) // 2

    def to_linear(self) -> LinearVote:
        if not self.is_complete():
            raise ValueError("partial vote is not a complete order")
        order = sorted(range(self.m), key=lambda c: -len(self._succ[c]))
        return LinearVote(tuple(order))


def build_partial_vote(pairs: Iterable[tuple[int, int]], m: int) -> PartialVote:
    """Transitive closure of the given strict preference pairs.

    Raises CycleError on antisymmetry violations, UnknownCandidate on
    out-of-range ids.
    """
    pairs = list(pairs)
    for a, b in pairs:
        if not (0 <= a < m and 0 <= b < m):
            raise UnknownCandidate(f"candidate pair ({a},{b}) outside 0..{m - 1}")
        if a == b:
            raise CycleError(f"candidate {a} ordered above itself")
    return PartialVote(m, _transitive_closure(m, pairs))


def complete_vote(ranking: Sequence[int]) -> PartialVote:
    return LinearVote(tuple(ranking)).as_partial()


def delete_pairs(v: LinearVote, removed: Iterable) -> PartialVote:
    """Drop the order among each pair in `removed` from the linear vote v.

    removed contains unordered pairs (any 2-iterables).  The result is the
    closure of the kept pairs; if that closure re-derives a removed pair the
    deletion is ill-defined and NotDeletable is raised.
    """
    m = v.m
    removed_set = set()
    for pair in removed:
        a, b = tuple(pair)
        if not (0 <= a < m and 0 <= b < m) or a == b:
            raise UnknownCandidate(f"bad pair {(a, b)}")
        removed_set.add(frozenset((a, b)))
    kept = [
        (a, b)
        for i, a in enumerate(v.ranking)
        for b in v.ranking[i + 1:]
        if frozenset((a, b)) not in removed_set
    ]
    closed = _transitive_closure(m, kept)
    for a, b in closed:
        if frozenset((a, b)) in removed_set:
            raise NotDeletable(
                f"pair ({a},{b}) is re-derived by transitivity and cannot be removed"
            )
    return PartialVote(m, closed)


def extensions(v: PartialVote) -> Iterator[LinearVote]:
    """All linear extensions of v, lexicographic in the ranking sequence."""
    m = v.m
    pred_count = [len(v.above(c)) for c in range(m)]
    succs = [sorted(v.below(c)) for c in range(m)]
    prefix = []

    def rec():
        if len(prefix) == m:
            yield LinearVote(tuple(prefix))
            return
        for c in range(m):
            if pred_count[c] == 0:
                pred_count[c] = -1  # mark placed
                for d in succs[c]:
                    pred_count[d] -= 1
                prefix.append(c)
                yield from rec()
                prefix.pop()
                for d in succs[c]:
                    pred_count[d] += 1
                pred_count[c] = 0

    return rec()


def count_extensions(v: PartialVote, cap: Optional[int] = None) -> int:
    """Number of linear extensions; if cap is given, stop at cap + 1."""
    count = 0
    for _ in extensions(v):
        count += 1
        if cap is not None and count > cap:
            return count
    return count


def undetermined_pair_count(v: PartialVote) -> int:
    return v.m * (v.m - 1) // 2 - len(v.pairs)


class Profile:
    """A multiset of (partial) votes over a shared candidate set.

    votes is a sequence of (PartialVote, multiplicity).  approval_counts, if
    present, aligns with votes and gives the number of approved candidates of
    each vote group (Fallback-family rules only).
    """

    __slots__ = ("candidates", "votes", "approval_counts")

    def __init__(
        self,
        candidates: Sequence[Candidate],
        votes: Sequence[tuple[PartialVote, int]],
        approval_counts: Optional[Sequence[int]] = None,
    ):
        self.candidates = tuple(candidates)
        m = len(self.candidates)
        for v, mult in votes:
            if v.m != m:
                raise ValueError("vote candidate count differs from profile")
            if mult < 1:
                raise ValueError("multiplicities must be positive")
        self.votes = tuple((v, int(mult)) for v, mult in votes)
        if approval_counts is not None:
            approval_counts = tuple(int(k) for k in approval_counts)
            if len(approval_counts) != len(self.votes):
                raise ValueError("approval_counts must align with votes")
            if any(not 1 <= k <= m for k in approval_counts):
                raise ValueError("approval counts must lie in 1..m")
        self.approval_counts = approval_counts

    @property
    def m(self) -> int:
        return len(self.candidates)

    @property
    def n(self) -> int:
        return sum(mult for _, mult in self.votes)

    def is_complete(self) -> bool:
        return all(v.is_complete() for v, _ in self.votes)

    def expanded(self) -> Iterator[tuple[PartialVote, Optional[int]]]:
        """Votes with multiplicities unrolled, paired with approval counts."""
        for i, (v, mult) in enumerate(self.votes):
            k = self.approval_counts[i] if self.approval_counts is not None else None
            for _ in range(mult):
                yield v, k

    def expanded_approvals(self) -> Optional[tuple[int, ...]]:
        if self.approval_counts is None:
            return None
        out = []
        for i, (_, mult) in enumerate(self.votes):
            out.extend([self.approval_counts[i]] * mult)
        return tuple(out)

    def with_votes_appended(
        self,
        extra: Sequence[tuple[PartialVote, int]],
        extra_approvals: Optional[Sequence[int]] = None,
    ) -> "Profile":
        approvals = None
        if self.approval_counts is not None or extra_approvals is not None:
            if self.approval_counts is None or extra_approvals is None:
                raise ValueError("approval counts must be given for all votes or none")
            approvals = tuple(self.approval_counts) + tuple(extra_approvals)
        return Profile(self.candidates, tuple(self.votes) + tuple(extra), approvals)

    def __eq__(self, other):
        return (
            isinstance(other, Profile)
            and self.candidates == other.candidates
            and self.votes == other.votes
            and self.approval_counts == other.approval_counts
        )

    def __repr__(self):
        return f"Profile(m={self.m}, n={self.n}, groups={len(self.votes)})"


def profile_extensions(
    P: Profile, cap: int = DEFAULT_EXTENSION_BUDGET
) -> Iterator[Profile]:
    """Cartesian product of per-vote extension streams, multiplicities expanded.

    The product size is computed up front (counting each distinct vote's
    extensions with a cutoff) and ExtensionBudgetExceeded is raised when it
    would exceed cap.  Within each yielded profile the expanded votes keep
    their original order; the last vote varies fastest.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    distinct: dict[PartialVote, list[PartialVote]] = {}
    for v, _ in P.votes:
        if v not in distinct:
            exts = []
            for i, e in enumerate(extensions(v)):
                if i + 1 > cap:
                    raise ExtensionBudgetExceeded(
                        f"a single vote admits more than {cap} extensions"
                    )
                exts.append(e.as_partial())
            distinct[v] = exts
    total = 1
    streams = []
    approvals = []
    for i, (v, mult) in enumerate(P.votes):
        for _ in range(mult):
            total *= len(distinct[v])
            if total > cap:
                raise ExtensionBudgetExceeded(
                    f"extension product exceeds budget of {cap}"
                )
            streams.append(distinct[v])
            if P.approval_counts is not None:
                approvals.append(P.approval_counts[i])
    for combo in itertools.product(*streams):
        yield Profile(
            P.candidates,
            tuple((e, 1) for e in combo),
            tuple(approvals) if P.approval_counts is not None else None,
        )


def profile_extension_count(P: Profile, cap: int = DEFAULT_EXTENSION_BUDGET) -> int:
    """Extension product size, or cap + 1 if it exceeds the cap."""
    total = 1
    counts: dict[PartialVote, int] = {}
    for v, mult in P.votes:
        if v not in counts:
            counts[v] = count_extensions(v, cap)
        for _ in range(mult):
            total *= counts[v]
            if total > cap:
                return cap + 1
    return total


@dataclass(frozen=True)
class ManipulationInstance:
    """(partial profile, manipulator count, favorite candidate, rule)."""

    profile: Profile
    manipulators: int
    favorite: int
    rule: "Rule"

    def __post_init__(self):
        if self.manipulators < 1:
            raise ValueError("manipulator count must be at least 1")
        if not 0 <= self.favorite < self.profile.m:
            raise UnknownCandidate(f"favorite {self.favorite} out of range")


def all_linear_votes(m: int) -> Iterator[LinearVote]:
    """Every ranking of 0..m-1, lexicographic."""
    for perm in itertools.permutations(range(m)):
        yield LinearVote(perm)


def factorial(m: int) -> int:
    return math.factorial(m)
