"""Instance generators: exact 3-cover and possible-winner questions, recast
as manipulation questions.

Each generator emits a GadgetOutput holding a ManipulationInstance together
with the relation that ties the source answer to the instance answer
(for example "X3C_yes_iff_manip_no").  The constructions follow a common
recipe: one partial vote per source set whose undetermined pairs gate how
far a handful of special candidates can slide, plus a complete-vote block
from synth that pins every score or pairwise margin exactly where the
argument needs it.

Sizes grow polynomially but quickly, so brute-force round trips are only
possible on the smallest inputs; everything else is checked structurally
(candidate/voter counts, per-vote undetermined pairs, margin and score
tables) and through hand-picked certificate extensions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    LinearVote,
    ManipulationInstance,
    Profile,
    build_partial_vote,
    complete_vote,
    delete_pairs,
    make_candidates,
)
from .rules import (
    bucklin,
    copeland,
    fallback,
    k_approval,
    k_veto,
    borda,
    maximin,
    simplified_bucklin,
    simplified_fallback,
)
from .synth import ScoreTarget, margin_target, mcgarvey_profile, score_target_profile

X3C_YES_IFF_MANIP_YES = "X3C_yes_iff_manip_yes"
X3C_YES_IFF_MANIP_NO = "X3C_yes_iff_manip_no"
PW_YES_IFF_MANIP_YES = "PW_yes_iff_manip_yes"


class UniverseNotDivisibleBy3(ValueError):
    """The set-cover encodings need |universe| divisible by 3."""


class X3CParseError(ValueError):
    """Malformed set-cover file; the message names the offending line."""


@dataclass(frozen=True)
class X3CInstance:
    """Exact cover by 3-sets: universe 1..m and a list of 3-element subsets."""

    universe_size: int
    sets: tuple

    @property
    def m(self) -> int:
        return self.universe_size

    @property
    def t(self) -> int:
        return len(self.sets)


def x3c_instance(universe_size: int, sets: Sequence) -> X3CInstance:
    m = int(universe_size)
    if m < 3:
        raise ValueError("universe needs at least 3 elements")
    packed = []
    for s in sets:
        fs = frozenset(int(e) for e in s)
        if len(fs) != 3:
            raise ValueError(f"set {sorted(int(e) for e in s)} must have exactly 3 distinct elements")
        if not all(1 <= e <= m for e in fs):
            raise ValueError(f"set {sorted(fs)} falls outside the universe 1..{m}")
        packed.append(fs)
    if not packed:
        raise ValueError("at least one set is required")
    return X3CInstance(m, tuple(packed))


def parse_x3c(text: str) -> X3CInstance:
    """One set per line: ``3 a b c`` is the 3-set {a, b, c}.

    The universe is the union of all elements, relabeled 1..m in sorted
    order (numeric when every label is an integer).  ``#`` starts a comment.
    """
    raw_sets = []
    labels = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        tokens = body.split()
        size, elems = tokens[0], tokens[1:]
        if size != "3":
            raise X3CParseError(f"line {lineno}: set size must be 3, got {size!r}")
        if len(elems) != 3 or len(set(elems)) != 3:
            raise X3CParseError(f"line {lineno}: expected 3 distinct elements, got {elems}")
        raw_sets.append(elems)
        labels.update(elems)
    if not raw_sets:
        raise X3CParseError("no sets found")
    try:
        order = sorted(labels, key=int)
    except ValueError:
        order = sorted(labels)
    index = {lab: i + 1 for i, lab in enumerate(order)}
    return x3c_instance(len(order), [[index[e] for e in s] for s in raw_sets])


def x3c_bf(inst: X3CInstance) -> Optional[tuple]:
    """An exact cover as a tuple of frozensets, or None when there is none.

    Branches on the smallest uncovered element; duplicate sets are skipped.
    """
    if inst.m % 3 != 0:
        return None
    distinct = []
    seen = set()
    for s in inst.sets:
        if s not in seen:
            seen.add(s)
            distinct.append(s)

    def rec(uncovered, chosen):
        if not uncovered:
            return tuple(chosen)
        pivot = min(uncovered)
        for s in distinct:
            if pivot in s and s <= uncovered:
                got = rec(uncovered - s, chosen + [s])
                if got is not None:
                    return got
        return None

    return rec(frozenset(range(1, inst.m + 1)), [])


@dataclass(frozen=True)
class GadgetOutput:
    """A generated instance plus the relation its answer must satisfy.

    roles maps candidate id to that candidate's role in the construction;
    notes record input normalizations and facts worth auditing.
    """

    instance: ManipulationInstance
    expected_relation: str
    construction: str
    roles: dict
    notes: tuple = ()


# --- shared helpers -------------------------------------------------------


def _ranking(m: int, *segments) -> tuple:
    """Concatenate segments, then every remaining id in ascending order."""
    out = []
    seen = set()
    for seg in segments:
        for c in seg:
            out.append(c)
            seen.add(c)
    out.extend(c for c in range(m) if c not in seen)
    return tuple(out)


def _cross(A, B):
    return [(a, b) for a in A for b in B]


def _fresh_names(base: str, count: int, taken: set) -> list:
    out = []
    j = 1
    while len(out) < count:
        name = f"{base}{j}"
        if name not in taken:
            out.append(name)
            taken.add(name)
        j += 1
    return out


def _require_divisible(x3c: X3CInstance):
    if x3c.m % 3 != 0:
        raise UniverseNotDivisibleBy3(f"universe size {x3c.m} is not divisible by 3")


def _pad_sets(x3c: X3CInstance, even=False, odd=False, minimum=1):
    """Duplicate sets round-robin until t has the parity/minimum asked for.

    Duplicates never change whether an exact cover exists.
    """
    sets = list(x3c.sets)
    i = 0
    while len(sets) < minimum or (even and len(sets) % 2) or (odd and len(sets) % 2 == 0):
        sets.append(x3c.sets[i % x3c.t])
        i += 1
    if len(sets) == x3c.t:
        return x3c, ()
    note = f"set list padded from t={x3c.t} to t={len(sets)} by duplicating sets"
    return X3CInstance(x3c.m, tuple(sets)), (note,)


def _break_divisible_by_6(x3c: X3CInstance):
    """Add three fresh elements and the set holding them when 6 divides m."""
    if x3c.m % 6 != 0:
        return x3c, ()
    m = x3c.m
    out = X3CInstance(m + 3, x3c.sets + (frozenset((m + 1, m + 2, m + 3)),))
    note = f"universe padded from {m} to {m + 3} elements to break divisibility by 6"
    return out, (note,)


def _margins(m: int, weighted_orders) -> list:
    D = [[0] * m for _ in range(m)]
    for order, mult in weighted_orders:
        for i, a in enumerate(order):
            for b in order[i + 1:]:
                D[a][b] += mult
                D[b][a] -= mult
    return D


def _positional_scores(vec, weighted_orders, m: int) -> list:
    s = [0] * m
    for order, mult in weighted_orders:
        for pos, cand in enumerate(order):
            if vec[pos]:
                s[cand] += vec[pos] * mult
    return s


def _universe_split(S, m: int):
    """0-based ids of a set's members and of the rest of the universe."""
    inside = sorted(e - 1 for e in S)
    outside = sorted(set(range(m)) - set(inside))
    return inside, outside


# --- possible-winner lifts (k-approval / k-veto) --------------------------


def gen_wm_kapproval(profile: Profile, favorite: int, k: int) -> GadgetOutput:
    """Recast a k-approval possible-winner question as weak manipulation.

    One fresh group of k-1 dummies per non-favorite soaks up the +1 that
    candidate gets from a complete vote c_i > group_i > rest; one reserved
    group is left over for the manipulator to approve alongside the
    favorite.  Every source vote is extended with all source candidates
    above all dummies and the dummy order pinned, so per-vote undetermined
    pairs are preserved exactly.
    """
    if k < 2:
        raise ValueError("the k-approval lift needs k >= 2")
    if profile.approval_counts is not None:
        raise ValueError("source must be a plain ranking profile")
    M = profile.m
    if not 0 <= favorite < M:
        raise ValueError(f"favorite {favorite} out of range")
    others = [a for a in range(M) if a != favorite]
    width = k - 1
    groups = [list(range(M + i * width, M + (i + 1) * width)) for i in range(len(others) + 1)]
    dummy_ids = [d for g in groups for d in g]
    m_new = M + len(dummy_ids)

    names = [c.name for c in profile.candidates]
    names += _fresh_names("d", len(dummy_ids), set(names))
    candidates = make_candidates(names)

    chain = [(dummy_ids[i], dummy_ids[j]) for i in range(len(dummy_ids)) for j in range(i + 1, len(dummy_ids))]
    below_all = _cross(range(M), dummy_ids)
    votes = []
    for v, mult in profile.votes:
        votes.append((build_partial_vote(list(v.pairs) + below_all + chain, m_new), mult))
    for ci, group in zip(others, groups):
        votes.append((complete_vote(_ranking(m_new, [ci], group)), 1))

    inst = ManipulationInstance(Profile(candidates, votes), 1, favorite, k_approval(m_new, k))
    roles = {favorite: "c"}
    roles.update({a: f"source:{names[a]}" for a in others})
    for i, g in enumerate(groups):
        tag = "reserved" if i == len(groups) - 1 else f"absorbs:{names[others[i]]}"
        roles.update({d: f"dummy:{tag}" for d in g})
    notes = (
        f"{len(groups)} dummy groups of {width}; reserved group ids {tuple(groups[-1])}",
        "dummy order pinned inside modified votes, keeping undetermined pairs unchanged",
        "a winning manipulator ballot approves c and the reserved group",
    )
    return GadgetOutput(inst, PW_YES_IFF_MANIP_YES, "wm-kapproval", roles, notes)


def gen_wm_kveto(profile: Profile, favorite: int, k: int) -> GadgetOutput:
    """Recast a k-veto possible-winner question as weak manipulation.

    The favorite is first fixed as high as possible in every source vote;
    the stated relation is against this lifted profile.  Dummies d_1..d_k
    are pinned above everyone, and a score block makes each d_i tie the
    favorite exactly, which forces the manipulator to spend all k vetoes
    on them; a guard dummy stays strictly below.
    """
    if k < 2:
        raise ValueError("the k-veto lift needs k >= 2")
    M = profile.m
    if k >= M:
        raise ValueError("k-veto needs more source candidates than vetoes")
    if not 0 <= favorite < M:
        raise ValueError(f"favorite {favorite} out of range")

    lifted = []
    lifts = 0
    for v, mult in profile.votes:
        above = v.above(favorite)
        extra = [(favorite, a) for a in range(M) if a != favorite and a not in above]
        pv = build_partial_vote(list(v.pairs) + extra, M)
        lifts += pv.pairs != v.pairs
        lifted.append((pv, mult))
    # c's position is now fixed, so its veto count over the source is too
    beta = sum(mult for pv, mult in lifted if len(pv.above(favorite)) + 1 > M - k)

    d_ids = list(range(M, M + k))
    guard = M + k
    m_new = M + k + 1
    names = [c.name for c in profile.candidates]
    names += _fresh_names("d", k + 1, set(names))
    candidates = make_candidates(names)

    prefix = d_ids + [guard]
    prefix_pairs = [(prefix[i], prefix[j]) for i in range(len(prefix)) for j in range(i + 1, len(prefix))]
    prefix_pairs += _cross(prefix, range(M))
    votes = [(build_partial_vote(list(pv.pairs) + prefix_pairs, m_new), mult) for pv, mult in lifted]

    vec = (0,) * (m_new - k) + (-1,) * k
    named = tuple((a, 0) for a in range(M)) + tuple((d, -beta) for d in d_ids)
    Q, lam = score_target_profile(ScoreTarget(named, (guard,), vec), dummy_margin=beta + 1)
    votes += list(Q.votes)

    inst = ManipulationInstance(Profile(candidates, votes), 1, favorite, k_veto(m_new, k))
    roles = {favorite: "c"}
    roles.update({a: f"source:{names[a]}" for a in range(M) if a != favorite})
    roles.update({d: "forced-veto dummy" for d in d_ids})
    roles[guard] = "guard dummy"
    notes = (
        f"favorite lifted as high as possible in {lifts} vote group(s); the relation holds against the lifted source",
        f"base-profile scores: favorite and each forced-veto dummy sit at {lam - beta}, the guard below",
        "a winning manipulator ballot vetoes exactly the forced-veto dummies",
    )
    return GadgetOutput(inst, PW_YES_IFF_MANIP_YES, "wm-kveto", roles, notes)


# --- weak manipulation, Bucklin family ------------------------------------

_BUCKLIN_VARIANTS = {
    "bucklin": bucklin,
    "simplified_bucklin": simplified_bucklin,
    "fallback": fallback,
    "simplified_fallback": simplified_fallback,
}


def gen_wm_bucklin(x3c: X3CInstance, variant: str = "bucklin") -> GadgetOutput:
    """Exact 3-cover as weak manipulation for the Bucklin family.

    Per set S_i one partial vote W > X > S_i > c > (U \\ S_i) > D with the
    16 pairs X x ({c} u S_i) left open: pulling c above the four X
    candidates is what a cover vote does.  The fixed blocks meter how often
    that may happen before some universe candidate reaches a majority too
    early.  Fallback variants approve every candidate, which makes them
    behave identically.
    """
    if variant not in _BUCKLIN_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    _require_divisible(x3c)
    m, t = x3c.m, x3c.t

    c_id, w_id, a_id, b_id = m, m + 1, m + 2, m + 3
    W = list(range(m + 4, 2 * m + 1))
    X = list(range(2 * m + 1, 2 * m + 5))
    D = list(range(2 * m + 5, 3 * m + 6))
    m_new = 3 * m + 6
    names = [f"u{j}" for j in range(1, m + 1)] + ["c", "w", "a", "b"]
    names += [f"w{j}" for j in range(1, m - 2)]
    names += [f"x{j}" for j in range(1, 5)]
    names += [f"d{j}" for j in range(1, m + 2)]
    candidates = make_candidates(names)

    votes = []
    for S in x3c.sets:
        inside, outside = _universe_split(S, m)
        order = _ranking(m_new, W, X, inside, [c_id], outside, D)
        votes.append((delete_pairs(LinearVote(order), _cross(X, inside + [c_id])), 1))
    blocks = [
        (t, _ranking(m_new, range(m), [c_id])),
        (m // 3 - 1, _ranking(m_new, range(m), [a_id, c_id])),
        (m // 3 + 1, _ranking(m_new, D, [b_id])),
    ]
    for mult, order in blocks:
        if mult:
            votes.append((complete_vote(order), mult))

    approvals = [m_new] * len(votes) if variant in ("fallback", "simplified_fallback") else None
    inst = ManipulationInstance(
        Profile(candidates, votes, approvals), 1, c_id, _BUCKLIN_VARIANTS[variant]()
    )
    roles = {i: names[i] for i in range(m_new)}
    roles[c_id] = "c"
    notes = (
        f"voters including the manipulator: {inst.profile.n + 1} = 2t + 2m/3 + 1",
        "a winning manipulator ballot ranks c first and the four x candidates next; they draw no early support",
    )
    return GadgetOutput(inst, X3C_YES_IFF_MANIP_YES, "wm-bucklin", roles, notes)


# --- strong manipulation, Copeland ----------------------------------------


def gen_sm_copeland(x3c: X3CInstance, alpha=Fraction(1, 2)) -> GadgetOutput:
    """Exact 3-cover as the complement of strong manipulation for Copeland.

    Per set S_i one partial vote (U \\ S_i) > c > z > d > S_i > w with the
    10 pairs {c, z} x (S_i u {d, w}) left open; a margin block realizes the
    fixed table (4t edges, the z-to-universe t edges, the c-to-w edge at
    t - 2m/3 - 2).  A cover extension drops c and z behind d, S_i and w in
    exactly m/3 votes, which costs c the election no matter what the
    manipulator does.
    """
    _require_divisible(x3c)
    padded, pad_notes = _pad_sets(x3c, even=True)
    m, t = padded.m, padded.t

    c_id, w_id, z_id, d_id = m, m + 1, m + 2, m + 3
    m_new = m + 4
    names = [f"u{j}" for j in range(1, m + 1)] + ["c", "w", "z", "d"]
    candidates = make_candidates(names)

    votes = []
    for S in padded.sets:
        inside, outside = _universe_split(S, m)
        order = _ranking(m_new, outside, [c_id, z_id, d_id], inside, [w_id])
        removal = _cross([c_id, z_id], inside + [d_id, w_id])
        votes.append((delete_pairs(LinearVote(order), removal), 1))

    entries = {
        (d_id, z_id): 4 * t,
        (z_id, c_id): 4 * t,
        (c_id, d_id): 4 * t,
        (w_id, z_id): 4 * t,
        (c_id, w_id): t - 2 * m // 3 - 2,
    }
    for u in range(m):
        entries[(u, d_id)] = 4 * t
        entries[(c_id, u)] = 4 * t
        entries[(z_id, u)] = t
        entries[(u, (u + 1) % m)] = 4 * t
    Q = mcgarvey_profile(margin_target(m_new, entries))
    votes += list(Q.votes)

    inst = ManipulationInstance(Profile(candidates, votes), 1, c_id, copeland(alpha))
    roles = {i: names[i] for i in range(m_new)}
    roles[c_id] = "c"
    notes = pad_notes + (
        f"margin block spans {Q.n} votes and realizes the table exactly",
        "total voter count including the manipulator is odd, so alpha never decides",
    )
    return GadgetOutput(inst, X3C_YES_IFF_MANIP_NO, "sm-copeland", roles, notes)


# --- opportunistic manipulation -------------------------------------------


def gen_om(rule_tag: str, x3c: X3CInstance, k: Optional[int] = None, alpha=None) -> GadgetOutput:
    """Exact 3-cover as the complement of opportunistic manipulation.

    rule_tag picks the construction: kapproval (k >= 3), kveto (k >= 4),
    borda, maximin, copeland (alpha), bucklin, simplified_bucklin.  Parity
    and divisibility preconditions are normalized automatically and noted
    in the output.
    """
    _require_divisible(x3c)
    if rule_tag == "kapproval":
        if k is None or k < 3:
            raise ValueError("the k-approval construction needs k >= 3")
        return _om_kapproval(x3c, k)
    if rule_tag == "kveto":
        if k is None or k < 4:
            raise ValueError("the k-veto construction needs k >= 4")
        return _om_kveto(x3c, k)
    if rule_tag == "borda":
        return _om_borda(x3c)
    if rule_tag == "maximin":
        return _om_maximin(x3c)
    if rule_tag == "copeland":
        return _om_copeland(x3c, Fraction(1, 2) if alpha is None else alpha)
    if rule_tag in ("bucklin", "simplified_bucklin"):
        return _om_bucklin(x3c, rule_tag)
    raise ValueError(f"unknown rule tag {rule_tag!r}")


def _om_kapproval(x3c: X3CInstance, k: int) -> GadgetOutput:
    """k-approval: per set W > S_i > y > z1 > z2 > x > (U \\ S_i) > c > d
    with the 15 pairs {y,x,z1,z2} x S_i u {(z1,z2),(x,z1),(x,z2)} open.

    Score block (relative to c): z1, z2, y at -m/3 and x at -1 in the block
    alone; each u_j at +1 counting the canonical completions; d and the
    padding candidates at least 2t below.  Pushing every u_j out of the top
    k at least once forces exactly m/3 cover votes.
    """
    m, t = x3c.m, x3c.t
    c_id, z1, z2, d_id, x_id, y_id = m, m + 1, m + 2, m + 3, m + 4, m + 5
    W = list(range(m + 6, m + 3 + k))
    m_new = m + k + 3
    names = [f"u{j}" for j in range(1, m + 1)] + ["c", "z1", "z2", "d", "x", "y"]
    names += [f"w{j}" for j in range(1, k - 2)]
    candidates = make_candidates(names)

    occ = [0] * m
    votes = []
    for S in x3c.sets:
        inside, outside = _universe_split(S, m)
        for u in inside:
            occ[u] += 1
        order = _ranking(m_new, W, inside, [y_id, z1, z2, x_id], outside, [c_id, d_id])
        removal = _cross([y_id, x_id, z1, z2], inside) + [(z1, z2), (x_id, z1), (x_id, z2)]
        votes.append((delete_pairs(LinearVote(order), removal), 1))

    named = [(c_id, 0), (z1, -(m // 3)), (z2, -(m // 3)), (y_id, -(m // 3)), (x_id, -1)]
    named += [(u, 1 - occ[u]) for u in range(m)]
    vec = (1,) * k + (0,) * (m_new - k)
    Q, lam = score_target_profile(ScoreTarget(tuple(named), tuple([d_id] + W), vec), dummy_margin=2 * t)
    votes += list(Q.votes)

    inst = ManipulationInstance(Profile(candidates, votes), 1, c_id, k_approval(m_new, k))
    roles = {i: names[i] for i in range(m_new)}
    roles[c_id] = "c"
    notes = (f"score block spans {Q.n} votes at base score {lam}",)
    return GadgetOutput(inst, X3C_YES_IFF_MANIP_NO, "om-kapproval", roles, notes)


def _om_kveto(x3c: X3CInstance, k: int) -> GadgetOutput:
    """k-veto: per set c > a1 a2 a3 > (U \\ S_i) > d > S_i > y > x > z1 > z2 > W
    with the same 15 open pairs as the k-approval construction.

    Counting the canonical completions, z1 and z2 trail c by m/3, y by
    m/3 + 1, x by 2; everyone else ties c.  Covering votes move S_i into
    the veto zone and pull y up, so only an exact cover lets the
    manipulator protect c, and the two z candidates demand incompatible
    veto choices.
    """
    m, t = x3c.m, x3c.t
    c_id, z1, z2, d_id, x_id, y_id = m, m + 1, m + 2, m + 3, m + 4, m + 5
    A = [m + 6, m + 7, m + 8]
    W = list(range(m + 9, m + 5 + k))
    m_new = m + k + 5
    names = [f"u{j}" for j in range(1, m + 1)] + ["c", "z1", "z2", "d", "x", "y"]
    names += ["a1", "a2", "a3"] + [f"w{j}" for j in range(1, k - 3)]
    candidates = make_candidates(names)

    orders = []
    votes = []
    for S in x3c.sets:
        inside, outside = _universe_split(S, m)
        order = _ranking(m_new, [c_id], A, outside, [d_id], inside, [y_id, x_id, z1, z2], W)
        orders.append((order, 1))
        removal = _cross([y_id, x_id, z1, z2], inside) + [(z1, z2), (x_id, z1), (x_id, z2)]
        votes.append((delete_pairs(LinearVote(order), removal), 1))

    vec = (0,) * (m_new - k) + (-1,) * k
    base = _positional_scores(vec, orders, m_new)
    off = {a: 0 for a in list(range(m)) + A + W}
    off[z1] = off[z2] = -(m // 3)
    off[y_id] = -(m // 3) - 1
    off[x_id] = -2
    named = tuple((a, off[a] - base[a] + base[c_id]) for a in sorted(off) if a != c_id)
    named = ((c_id, 0),) + named
    Q, lam = score_target_profile(ScoreTarget(named, (d_id,), vec), dummy_margin=1)
    votes += list(Q.votes)

    inst = ManipulationInstance(Profile(candidates, votes), 1, c_id, k_veto(m_new, k))
    roles = {i: names[i] for i in range(m_new)}
    roles[c_id] = "c"
    notes = (f"score block spans {Q.n} votes at base score {lam}",)
    return GadgetOutput(inst, X3C_YES_IFF_MANIP_NO, "om-kveto", roles, notes)


def _om_borda(x3c: X3CInstance) -> GadgetOutput:
    """Borda: per set y > S_i > z1 > z2 > (U \\ S_i) > d > c with the 9
    pairs ({y} u S_i) x {z1, z2} u {(z1, z2)} open.

    Counting canonical completions, y leads c by m + m/3 + 3, u_i leads by
    m + 5 - i, z1 trails by 3*floor(m/6) + 2 and z2 by 5*floor(m/6) + 3; d
    sits at least 5m below.  Only cover votes can pull y down, and the two
    z candidates force incompatible manipulator orders.
    """
    padded, pad_notes = _break_divisible_by_6(x3c)
    m, t = padded.m, padded.t
    c_id, z1, z2, d_id, y_id = m, m + 1, m + 2, m + 3, m + 4
    m_new = m + 5
    names = [f"u{j}" for j in range(1, m + 1)] + ["c", "z1", "z2", "d", "y"]
    candidates = make_candidates(names)

    orders = []
    votes = []
    for S in padded.sets:
        inside, outside = _universe_split(S, m)
        order = _ranking(m_new, [y_id], inside, [z1, z2], outside, [d_id, c_id])
        orders.append((order, 1))
        removal = _cross([y_id] + inside, [z1, z2]) + [(z1, z2)]
        votes.append((delete_pairs(LinearVote(order), removal), 1))

    vec = tuple(range(m_new - 1, -1, -1))
    base = _positional_scores(vec, orders, m_new)
    off = {y_id: m + m // 3 + 3, z1: -(3 * (m // 6) + 2), z2: -(5 * (m // 6) + 3)}
    for u in range(m):
        off[u] = m + 5 - (u + 1)
    named = ((c_id, 0),) + tuple((a, off[a] - base[a] + base[c_id]) for a in sorted(off))
    Q, lam = score_target_profile(ScoreTarget(named, (d_id,), vec), dummy_margin=5 * m + t)
    votes += list(Q.votes)

    inst = ManipulationInstance(Profile(candidates, votes), 1, c_id, borda(m_new))
    roles = {i: names[i] for i in range(m_new)}
    roles[c_id] = "c"
    notes = pad_notes + (
        f"score block spans {Q.n} votes at base score {lam}",
        "c-optimal candidates have the shape c > d > {z1,z2} > u_m..u_1 > y",
    )
    return GadgetOutput(inst, X3C_YES_IFF_MANIP_NO, "om-borda", roles, notes)


def _om_maximin(x3c: X3CInstance) -> GadgetOutput:
    """Maximin: per set S_i > x > d > y > (U \\ S_i) > z1 > z2 > z3 > c with
    the 8 pairs ({x} u S_i) x {d, y} open, plus one extra partial vote
    leaving only the order among z1, z2, z3 open.

    Margins counting the canonical completions: d over c at 4t + 1, x over
    d at 4t + 2m/3 + 1, y over x at 4t - 2m/3 + 1, c over y at 4t + 1, d
    over each u_j at 4t - 1; the z cycle carries 4t + 2 without the extra
    vote; every other margin is +-1.  The c-over-y edge is fixed in every
    partial vote and keeps y out of contention.  Protecting c needs exactly
    m/3 votes with y over x, which must come from a cover, and the z cycle
    splits the manipulator.
    """
    padded, pad_notes = _pad_sets(x3c, even=True)
    m, t = padded.m, padded.t
    c_id, z1, z2, z3, d_id, x_id, y_id = m, m + 1, m + 2, m + 3, m + 4, m + 5, m + 6
    m_new = m + 7
    names = [f"u{j}" for j in range(1, m + 1)] + ["c", "z1", "z2", "z3", "d", "x", "y"]
    candidates = make_candidates(names)

    orders = []
    votes = []
    for S in padded.sets:
        inside, outside = _universe_split(S, m)
        order = _ranking(m_new, inside, [x_id, d_id, y_id], outside, [z1, z2, z3], [c_id])
        orders.append((order, 1))
        votes.append((delete_pairs(LinearVote(order), _cross([x_id] + inside, [d_id, y_id])), 1))

    frak_order = _ranking(m_new, [z1, z2, z3])
    frak = delete_pairs(LinearVote(frak_order), [(z1, z2), (z1, z3), (z2, z3)])

    DP = _margins(m_new, orders)
    Dp = _margins(m_new, [(frak_order, 1)])
    zset = {z1, z2, z3}
    targets = {
        (d_id, c_id): 4 * t + 1,
        (x_id, d_id): 4 * t + 2 * m // 3 + 1,
        (y_id, x_id): 4 * t - 2 * m // 3 + 1,
        (c_id, y_id): 4 * t + 1,
    }
    for u in range(m):
        targets[(d_id, u)] = 4 * t - 1
    entries = {}
    for a in range(m_new):
        for b in range(a + 1, m_new):
            if a in zset and b in zset:
                continue
            if (a, b) in targets:
                total = targets[(a, b)]
            elif (b, a) in targets:
                total = -targets[(b, a)]
            else:
                seed = DP[a][b] + Dp[a][b]  # odd, so never zero
                total = 1 if seed > 0 else -1
            q = total - DP[a][b] - Dp[a][b]
            if q:
                entries[(a, b)] = q
    for a, b in ((z1, z2), (z2, z3), (z3, z1)):
        entries[(a, b)] = 4 * t + 2 - DP[a][b]
    Q = mcgarvey_profile(margin_target(m_new, entries))
    votes.append((frak, 1))
    votes += list(Q.votes)

    inst = ManipulationInstance(Profile(candidates, votes), 1, c_id, maximin())
    roles = {i: names[i] for i in range(m_new)}
    roles[c_id] = "c"
    notes = pad_notes + (
        "c is pinned last in every set vote",
        f"margin block spans {Q.n} votes",
    )
    return GadgetOutput(inst, X3C_YES_IFF_MANIP_NO, "om-maximin", roles, notes)


def _om_copeland(x3c: X3CInstance, alpha) -> GadgetOutput:
    """Copeland: per set S_i > x > y > c > rest with the 8 pairs
    ({x} u S_i) x {c, y} open, plus the same z1/z2/z3 antichain vote as the
    maximin construction.

    Margins counting the canonical completions: each u_j over c at 2, x
    over y at 2m/3, a lattice of 4t edges wiring c, x, y, the z block and
    the d block (c beats y and every z_k; x beats c; the d block beats c,
    x and y; y beats every u_j and z_k; each u_j beats x and the d block),
    a 4t universe sub-cycle, and a +1 z cycle without the extra vote;
    every other margin is 0.  c must overtake every u_j, which takes a
    cover, and the z cycle splits the manipulator.
    """
    padded, pad_notes = _pad_sets(x3c, odd=True)
    m, t = padded.m, padded.t
    c_id = m
    zs = [m + 1, m + 2, m + 3]
    ds = [m + 4, m + 5, m + 6]
    x_id, y_id = m + 7, m + 8
    m_new = m + 9
    names = [f"u{j}" for j in range(1, m + 1)] + ["c", "z1", "z2", "z3", "d1", "d2", "d3", "x", "y"]
    candidates = make_candidates(names)

    orders = []
    votes = []
    for S in padded.sets:
        inside, _ = _universe_split(S, m)
        order = _ranking(m_new, inside, [x_id, y_id, c_id])
        orders.append((order, 1))
        votes.append((delete_pairs(LinearVote(order), _cross([x_id] + inside, [c_id, y_id])), 1))

    z1, z2, z3 = zs
    frak_order = _ranking(m_new, zs)
    frak = delete_pairs(LinearVote(frak_order), [(z1, z2), (z1, z3), (z2, z3)])

    DP = _margins(m_new, orders)
    Dp = _margins(m_new, [(frak_order, 1)])
    targets = {(x_id, y_id): 2 * m // 3, (c_id, y_id): 4 * t, (x_id, c_id): 4 * t}
    for u in range(m):
        targets[(u, c_id)] = 2
        targets[(u, x_id)] = 4 * t
        targets[(y_id, u)] = 4 * t
        for s in range(1, m // 3 + 1):
            targets[(u, (u + s) % m)] = -4 * t
    for zk in zs:
        targets[(c_id, zk)] = 4 * t
        targets[(x_id, zk)] = 4 * t
        targets[(y_id, zk)] = 4 * t
        targets[(zk, ds[0])] = 4 * t
        targets[(zk, ds[1])] = 4 * t
        targets[(ds[2], zk)] = 4 * t
        for u in range(m):
            targets[(zk, u)] = 4 * t
    for di in ds:
        targets[(di, c_id)] = 4 * t
        targets[(di, x_id)] = 4 * t
        targets[(di, y_id)] = 4 * t
        for u in range(m):
            targets[(u, di)] = 4 * t
    zset = set(zs)
    entries = {}
    for a in range(m_new):
        for b in range(a + 1, m_new):
            if a in zset and b in zset:
                continue
            if (a, b) in targets:
                total = targets[(a, b)]
            elif (b, a) in targets:
                total = -targets[(b, a)]
            else:
                total = 0
            q = total - DP[a][b] - Dp[a][b]
            if q:
                entries[(a, b)] = q
    for a, b in ((z1, z2), (z2, z3), (z3, z1)):
        entries[(a, b)] = 1 - DP[a][b]
    Q = mcgarvey_profile(margin_target(m_new, entries))
    votes.append((frak, 1))
    votes += list(Q.votes)

    inst = ManipulationInstance(Profile(candidates, votes), 1, c_id, copeland(alpha))
    roles = {i: names[i] for i in range(m_new)}
    roles[c_id] = "c"
    notes = pad_notes + (
        f"margin block spans {Q.n} votes",
        "total voter count including the manipulator is odd, so alpha never decides",
    )
    return GadgetOutput(inst, X3C_YES_IFF_MANIP_NO, "om-copeland", roles, notes)


def _om_bucklin(x3c: X3CInstance, tag: str) -> GadgetOutput:
    """Bucklin family: per set (U \\ S_i) > S_i > d > x1 > x2 > z1 > z2 >
    c > W with 20 pairs open: ({d} u S_i) x {x1, x2, z1, z2}, S_i x {d},
    and (z1, z2).

    The fixed blocks put c one short of an early majority and meter z1/z2
    appearances so that only cover votes can free up the slack; the open
    S_i x {d} pairs let a cover vote drop d out of the top m + 1 as well,
    which the no-direction requires.  The two z candidates then demand
    incompatible manipulator ballots.
    """
    padded, notes6 = _break_divisible_by_6(x3c)
    minimum = 2 * (padded.m // 6) + 2
    padded, notes_t = _pad_sets(padded, even=True, minimum=minimum)
    m, t = padded.m, padded.t

    c_id, z1, z2, x1, x2, d_id = m, m + 1, m + 2, m + 3, m + 4, m + 5
    W = list(range(m + 6, 2 * m + 3))
    m_new = 2 * m + 3
    names = [f"u{j}" for j in range(1, m + 1)] + ["c", "z1", "z2", "x1", "x2", "d"]
    names += [f"w{j}" for j in range(1, m - 2)]
    candidates = make_candidates(names)

    votes = []
    for S in padded.sets:
        inside, outside = _universe_split(S, m)
        order = _ranking(m_new, outside, inside, [d_id, x1, x2, z1, z2])
        removal = _cross([d_id] + inside, [x1, x2, z1, z2])
        removal += [(s, d_id) for s in inside] + [(z1, z2)]
        votes.append((delete_pairs(LinearVote(order), removal), 1))

    half = m // 6
    ceil6 = -(-m // 6)
    blocks = [
        (t // 2 - half - 1, _ranking(m_new, W, [z1, z2, x1, c_id])),
        (t // 2 - half - 1, _ranking(m_new, W, [z1, z2, x2, c_id])),
        (2 * ceil6, _ranking(m_new, W, [z1, z2, d_id, c_id])),
        (half, _ranking(m_new, W, [z1, d_id, x1, c_id])),
        (half, _ranking(m_new, W, [z1, d_id, x2, c_id])),
        (2 * ceil6 - 1, _ranking(m_new, range(m), [x1])),
        (1, _ranking(m_new, range(m), [c_id])),
    ]
    for mult, order in blocks:
        if mult:
            votes.append((complete_vote(order), mult))

    rule = bucklin() if tag == "bucklin" else simplified_bucklin()
    inst = ManipulationInstance(Profile(candidates, votes), 1, c_id, rule)
    roles = {i: names[i] for i in range(m_new)}
    roles[c_id] = "c"
    notes = notes6 + notes_t + (
        f"voters including the manipulator: {inst.profile.n + 1} = 2t + 2m/3 + 1",
        "20 open pairs per set vote: the gate pairs plus S_i x {d}, which lets d leave the top m+1",
    )
    return GadgetOutput(inst, X3C_YES_IFF_MANIP_NO, f"om-{tag}", roles, notes)
