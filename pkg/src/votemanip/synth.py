"""Profile synthesizers: exact pairwise margins and exact relative scores.

Two primitives drive every reduction in this package:

- mcgarvey_profile realizes any even antisymmetric margin matrix with vote
  pairs {x > y > rest-ascending, rest-descending > x > y}: each pair adds 2
  to D(x, y) and cancels everywhere else.

- score_target_profile realizes prescribed relative positional scores
  (named candidate i lands exactly at lambda + X_i, every dummy strictly
  below).  Approval and veto slots are distributed by a cyclic allocator;
  Borda uses the same vote-pair trick, which shifts x up one point and y
  down one against a uniform baseline.

Both post-verify their output with rules.evaluate before returning; a miss
is a defect (ConstructionFailed), never silent.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import Profile, complete_vote, default_candidates
from .rules import evaluate, pairwise_margins, scoring


class OddMargin(ValueError):
    """Margin targets must be even: realizer votes come in pairs."""


class TwoCandidateNonzero(ValueError):
    """A nonzero margin needs at least two candidates."""


class ConstructionFailed(RuntimeError):
    """Post-verification caught a miss; this is a bug, not a user error."""


class UnsupportedVector(ValueError):
    """No exact realizer for this score vector family."""


@dataclass(frozen=True)
class MarginTarget:
    f: tuple  # m x m, antisymmetric, zero diagonal

    @property
    def m(self) -> int:
        return len(self.f)


@dataclass(frozen=True)
class ScoreTarget:
    named: tuple  # (candidate id, offset X_i) pairs
    dummies: tuple  # candidate ids scoring strictly below lambda
    vector: tuple  # positional score vector


def margin_target(m: int, entries: dict) -> MarginTarget:
    """Build a target from {(a, b): margin}; antisymmetry is filled in."""
    f = [[0] * m for _ in range(m)]
    for (a, b), v in entries.items():
        f[a][b] = v
        f[b][a] = -v
    return MarginTarget(tuple(tuple(row) for row in f))


def _vote_pair(m: int, x: int, y: int):
    """Two votes adding +2 to D(x,y) and nothing elsewhere."""
    rest = [z for z in range(m) if z not in (x, y)]
    first = (x, y) + tuple(rest)
    second = tuple(reversed(rest)) + (x, y)
    return first, second


def mcgarvey_profile(t: MarginTarget) -> Profile:
    """Complete profile whose pairwise margins equal t.f exactly.

    Voter count is the sum of |f(a,b)| over unordered pairs (the lemma's
    bound); a zero target gives the empty profile.
    """
    m = t.m
    for a in range(m):
        if t.f[a][a] != 0:
            raise ValueError("margin diagonal must be zero")
        for b in range(m):
            if t.f[a][b] != -t.f[b][a]:
                raise ValueError("margin target must be antisymmetric")
            if a != b and t.f[a][b] % 2 != 0:
                raise OddMargin(f"margin f({a},{b}) = {t.f[a][b]} is odd")
            if a != b and t.f[a][b] != 0 and m < 2:
                raise TwoCandidateNonzero("nonzero margin needs two candidates")
    counts = Counter()
    for a in range(m):
        for b in range(a + 1, m):
            g = t.f[a][b]
            if g == 0:
                continue
            x, y = (a, b) if g > 0 else (b, a)
            first, second = _vote_pair(m, x, y)
            counts[first] += abs(g) // 2
            counts[second] += abs(g) // 2
    votes = [(complete_vote(r), mult) for r, mult in counts.items()]
    P = Profile(default_candidates(m), votes)
    got = pairwise_margins(P).D if votes else tuple(tuple(r) for r in t.f)
    if votes and got != t.f:
        raise ConstructionFailed("margin post-verification mismatch")
    return P


def slot_profile(m: int, k: int, counts: Sequence[int], kind: str) -> Profile:
    """n = sum(counts)/k votes, each approving (or vetoing) exactly k
    candidates, with candidate c in the decisive slots counts[c] times.

    Cyclic allocation: placing each candidate's slots consecutively modulo n
    covers sum(counts) consecutive positions, so every vote ends up with
    exactly k decisive slots; counts[c] <= n keeps them distinct per vote.
    """
    if kind not in ("approve", "veto"):
        raise ValueError("kind must be approve or veto")
    if not 1 <= k < m:
        raise ValueError("need 1 <= k < m")
    total = sum(counts)
    if len(counts) != m or min(counts) < 0:
        raise ValueError("counts must be m nonnegative integers")
    if total % k != 0:
        raise ValueError("sum of counts must be divisible by k")
    n = total // k
    if any(c > n for c in counts):
        raise ValueError("no candidate can take more slots than votes")
    chosen = [[] for _ in range(n)]
    pointer = 0
    for c in range(m):
        for _ in range(counts[c]):
            chosen[pointer % n].append(c)
            pointer += 1
    vote_counter = Counter()
    for picks in chosen:
        inside = tuple(sorted(picks))
        outside = tuple(x for x in range(m) if x not in picks)
        ranking = inside + outside if kind == "approve" else outside + inside
        vote_counter[ranking] += 1
    votes = [(complete_vote(r), mult) for r, mult in vote_counter.items()]
    return Profile(default_candidates(m), votes)


def _slot_family(vector: tuple):
    """Literal canonical families with exact realizers, or raise."""
    m = len(vector)
    ones = sum(1 for x in vector if x == 1)
    if 1 <= ones < m and vector == (1,) * ones + (0,) * (m - ones):
        return "kapproval", ones
    negs = sum(1 for x in vector if x == -1)
    if 1 <= negs < m and vector == (0,) * (m - negs) + (-1,) * negs:
        return "kveto", negs
    if vector == tuple(range(m - 1, -1, -1)):
        return "borda", None
    raise UnsupportedVector(f"no exact score realizer for vector {vector}")


def _verify_scores(P: Profile, t: ScoreTarget, lam: int, margin: int):
    board = evaluate(P, scoring(t.vector))
    for c, x in t.named:
        if board.scores[c] != lam + x:
            raise ConstructionFailed(
                f"candidate {c} scored {board.scores[c]}, wanted {lam + x}"
            )
    for d in t.dummies:
        if board.scores[d] > lam - margin:
            raise ConstructionFailed(
                f"dummy {d} scored {board.scores[d]}, cap {lam - margin}"
            )


def _approval_veto_target(t: ScoreTarget, k: int, kind: str, margin: int):
    """Search a small (level, voter-count) grid for a feasible slot layout.

    Approval scores count decisive slots directly (s = lambda + X); veto
    scores count them negatively (v = -(lambda + X)), so dummies need MANY
    vetoes instead of few approvals.
    """
    m = len(t.vector)
    offsets = [x for _, x in t.named]
    ndum = len(t.dummies)
    spread = max(abs(x) for x in offsets)
    for bump in range(0, 4 * (k + m) + 2 * spread + 8):
        if kind == "kapproval":
            lam = margin + max(0, -min(offsets)) + bump
            named_slots = [lam + x for x in offsets]
            dummy_low = 0
        else:
            lam = -(max(0, max(offsets)) + bump)
            named_slots = [-(lam + x) for x in offsets]
            dummy_low = -lam + margin  # vetoes needed to push a dummy below
        base = sum(named_slots)
        need = base + ndum * dummy_low
        n_min = max([(need + k - 1) // k, 1] + named_slots + [dummy_low])
        for n in range(n_min, n_min + k + m + 4):
            cap_per = (min(lam - margin, n) if kind == "kapproval" else n) - dummy_low
            extra = n * k - need
            if not 0 <= extra <= ndum * cap_per:
                continue
            dummy_slots = []
            for _ in range(ndum):
                take = min(cap_per, extra)
                dummy_slots.append(dummy_low + take)
                extra -= take
            counts = [0] * m
            for (c, _), s in zip(t.named, named_slots):
                counts[c] = s
            for d, s in zip(t.dummies, dummy_slots):
                counts[d] = s
            if max(counts) > n:
                continue
            P = slot_profile(m, k, counts, "approve" if kind == "kapproval" else "veto")
            return P, lam
    raise ConstructionFailed("no feasible slot assignment found")


def _borda_target(t: ScoreTarget, margin: int):
    """Vote pairs against dummy 1 set the offsets; pairs against every dummy
    bury them a uniform amount below the named baseline."""
    m = len(t.vector)
    named = [c for c, _ in t.named]
    a, ndum = len(named), len(t.dummies)
    d1 = t.dummies[0]
    sum_x = sum(x for _, x in t.named)
    boost = 0
    while boost * (a + ndum) < margin or boost * (a + ndum) < margin - sum_x:
        boost += 1
    pair_counter = Counter()
    for c, x in t.named:
        if x > 0:
            pair_counter[(c, d1)] += x
        elif x < 0:
            pair_counter[(d1, c)] += -x
    for c in named:
        for d in t.dummies:
            pair_counter[(c, d)] += boost
    vote_counter = Counter()
    total_pairs = 0
    for (x, y), mult in pair_counter.items():
        first, second = _vote_pair(m, x, y)
        vote_counter[first] += mult
        vote_counter[second] += mult
        total_pairs += mult
    lam = (m - 1) * total_pairs + boost * ndum
    votes = [(complete_vote(r), mult) for r, mult in vote_counter.items()]
    return Profile(default_candidates(m), votes), lam


def score_target_profile(t: ScoreTarget, dummy_margin: int = 1):
    """Profile where named candidate i scores exactly lambda + X_i and every
    dummy scores at most lambda - dummy_margin.  Returns (profile, lambda)."""
    if dummy_margin < 1:
        raise ValueError("dummy_margin must be at least 1")
    m = len(t.vector)
    ids = [c for c, _ in t.named] + list(t.dummies)
    if sorted(ids) != list(range(m)):
        raise ValueError("named and dummies must partition the candidates")
    if not t.dummies:
        raise ValueError("at least one dummy is required")
    if not t.named:
        raise ValueError("at least one named candidate is required")
    family, k = _slot_family(tuple(t.vector))
    if family == "borda":
        P, lam = _borda_target(t, dummy_margin)
    else:
        P, lam = _approval_veto_target(t, k, family, dummy_margin)
    _verify_scores(P, t, lam, dummy_margin)
    return P, lam
