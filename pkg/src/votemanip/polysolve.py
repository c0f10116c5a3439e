"""Polynomial-time manipulation deciders for partial profiles.

Every decider returns (answer, Witness) and is contractually equivalent to
the corresponding brute-force oracle on its declared rule family; the test
suite enforces the equivalence on exhaustive small sweeps.  A yes answer
always carries a certificate assembled from the object that proved
feasibility (a flow, a matching, a greedy schedule), so callers can re-check
witnesses independently.

Coverage:
  wm_plurality_veto    weak manipulation, plurality / veto, any coalition
  sm_kapproval_kveto   strong manipulation, k-approval / k-veto, any coalition
  sm_scoring_single    strong manipulation, any scoring vector, one manipulator
  sm_bucklin_family    strong manipulation, Bucklin variants, any coalition
  sm_maximin_single    strong manipulation, maximin, one manipulator
  om_approve_only      opportunistic manipulation, plurality / Fallback family
  om_veto              opportunistic manipulation, veto, small coalitions
"""

from __future__ import annotations

import itertools
from typing import Optional

from .core import (
    DEFAULT_EXTENSION_BUDGET,
    LinearVote,
    ManipulationInstance,
    PartialVote,
    Profile,
    build_partial_vote,
    complete_vote,
    extensions,
)
from .flownet import FlowNetwork, feasible_flow_with_demands, max_flow, perfect_matching
from .oracle import EnumerationBudgetExceeded, Witness, add_empty_votes, c_top_ranking
from .rules import (
    BUCKLIN,
    BUCKLIN_FAMILIES,
    FALLBACK,
    FALLBACK_FAMILIES,
    MAXIMIN,
    POSITIONAL,
    MissingApprovals,
    NotNormalizable,
    Rule,
    classify_score_vector,
    normalize_score_vector,
)

INF = float("inf")


class WrongRule(ValueError):
    """The rule family is outside this decider's contract."""


class MultipleManipulators(ValueError):
    """Raised by single-manipulator deciders when the coalition is larger."""


class ManipulatorCountTooLarge(ValueError):
    """The coalition exceeds the configured constant bound."""


def _unpack(inst: ManipulationInstance):
    P, r = inst.profile, inst.rule
    if r.family == POSITIONAL and len(r.score_vector) != P.m:
        raise WrongRule("score vector length differs from candidate count")
    return P, inst.manipulators, inst.favorite, r


def _normal_form(r: Rule) -> Optional[tuple]:
    if r.family != POSITIONAL:
        return None
    try:
        return normalize_score_vector(r.score_vector)
    except NotNormalizable:
        return None


def _extension_with(v: PartialVote, extra) -> tuple:
    """Ranking of the first linear extension of v augmented with extra pairs."""
    aug = build_partial_vote(tuple(v.pairs) + tuple(extra), v.m)
    return next(extensions(aug)).ranking


def _top_extension(v: PartialVote, x: int) -> tuple:
    return _extension_with(v, ((x, y) for y in range(v.m) if y != x))


def _last_extension(v: PartialVote, x: int) -> tuple:
    return _extension_with(v, ((y, x) for y in range(v.m) if y != x))


# ------------------------------------------------------------------ WM


def wm_plurality_veto(inst: ManipulationInstance):
    """Weak manipulation for plurality and veto via the possible-winner flow.

    The coalition's ballots are appended as fully undetermined votes, turning
    the question into possible-winner on the padded profile: fix c's score
    (plurality: c tops every vote that allows it; veto: c is vetoed only where
    forced), then route each remaining vote's decisive slot through a flow
    whose candidate caps / demands encode "everyone else stays behind c".
    """
    P, l, c, r = _unpack(inst)
    norm = _normal_form(r)
    m = P.m
    if norm == (1,) + (0,) * (m - 1):
        mode = "plurality"
    elif norm == (1,) * (m - 1) + (0,):
        mode = "veto"
    else:
        raise WrongRule(f"{r.name()} is not plurality or veto")
    P2 = add_empty_votes(P, l, (1,) if P.approval_counts is not None else None)
    decode = _pw_plurality(P2, c) if mode == "plurality" else _pw_veto(P2, c)
    if decode is None:
        return False, Witness()
    flat = [ranking for rankings in decode for ranking in rankings]
    ext = Profile(
        P.candidates,
        tuple((complete_vote(ranking), 1) for ranking in flat[: P.n]),
        P.expanded_approvals(),
    )
    votes = tuple(LinearVote(ranking) for ranking in flat[P.n :])
    approvals = (1,) * l if P.approval_counts is not None else None
    return True, Witness(votes, approvals, ext)


def _pw_plurality(P2: Profile, c: int) -> Optional[list]:
    """Per-group rankings of an extension where c wins uniquely, or None."""
    m = P2.m
    groups = P2.votes
    c_top = [not v.above(c) for v, _ in groups]
    s_c = sum(mult for (v, mult), top in zip(groups, c_top) if top)
    free = [gi for gi in range(len(groups)) if not c_top[gi]]
    if s_c == 0:
        return None
    n_free = sum(groups[gi][1] for gi in free)
    src = 0
    first_cand = 1 + len(free)
    sink = first_cand + m
    net = FlowNetwork(sink + 1, src, sink)
    slot_arcs = {}
    for k, gi in enumerate(free):
        v, mult = groups[gi]
        net.add_arc(src, 1 + k, mult)
        for x in range(m):
            if x != c and not v.above(x):  # x can take this vote's top slot
                slot_arcs[(gi, x)] = net.add_arc(1 + k, first_cand + x, mult)
    for x in range(m):
        if x != c:
            net.add_arc(first_cand + x, sink, s_c - 1)
    res = max_flow(net)
    if res.value != n_free:
        return None
    decode = []
    for gi, (v, mult) in enumerate(groups):
        if c_top[gi]:
            decode.append([_top_extension(v, c)] * mult)
        else:
            rankings = []
            for x in range(m):
                f = res.arc_flows[slot_arcs[(gi, x)]] if (gi, x) in slot_arcs else 0
                if f:
                    rankings.extend([_top_extension(v, x)] * f)
            decode.append(rankings)
    return decode


def _pw_veto(P2: Profile, c: int) -> Optional[list]:
    m = P2.m
    groups = P2.votes
    forced = []  # votes whose only minimal candidate is c
    for v, _ in groups:
        minimals = [x for x in range(m) if not v.below(x)]
        forced.append(minimals == [c])
    t_c = sum(mult for (v, mult), f in zip(groups, forced) if f)
    free = [gi for gi in range(len(groups)) if not forced[gi]]
    n_free = sum(groups[gi][1] for gi in free)
    if t_c + 1 > n_free:
        return None
    src = 0
    first_cand = 1 + len(free)
    sink = first_cand + m
    net = FlowNetwork(sink + 1, src, sink)
    slot_arcs = {}
    for k, gi in enumerate(free):
        v, mult = groups[gi]
        net.add_arc(src, 1 + k, mult)
        for x in range(m):
            if x != c and not v.below(x):  # x can take this vote's last slot
                slot_arcs[(gi, x)] = net.add_arc(1 + k, first_cand + x, mult)
    for x in range(m):
        if x != c:
            net.add_arc(first_cand + x, sink, n_free, lower=t_c + 1)
    res = feasible_flow_with_demands(net, n_free)
    if not res.feasible:
        return None
    decode = []
    for gi, (v, mult) in enumerate(groups):
        if forced[gi]:
            # c is the unique minimal candidate, so it lands last regardless
            decode.append([next(extensions(v)).ranking] * mult)
        else:
            rankings = []
            for x in range(m):
                f = res.arc_flows[slot_arcs[(gi, x)]] if (gi, x) in slot_arcs else 0
                if f:
                    rankings.extend([_last_extension(v, x)] * f)
            decode.append(rankings)
    return decode


# ------------------------------------------------------------------ SM, k-approval / k-veto


def _topk_feasible(v: PartialVote, k: int, inside, outside) -> bool:
    """Can some extension's top-k contain `inside` and exclude `outside`?

    The top-k set of an extension is exactly an up-closed k-subset, so the
    test reduces to: the up-closure of `inside` avoids the down-closure of
    `outside` and leaves room for padding.
    """
    pool = set(range(v.m))
    for y in outside:
        pool.discard(y)
        pool -= v.below(y)
    need = set(inside)
    for x in inside:
        need |= v.above(x)
    return need <= pool and len(need) <= k <= len(pool)


def _slot_gap(v: PartialVote, k: int, a: int, c: int) -> int:
    """max over extensions of [a in top-k] - [c in top-k]."""
    best = -2
    for a_in in (True, False):
        for c_in in (True, False):
            inside = [x for x, f in ((a, a_in), (c, c_in)) if f]
            outside = [x for x, f in ((a, a_in), (c, c_in)) if not f]
            if _topk_feasible(v, k, inside, outside):
                best = max(best, int(a_in) - int(c_in))
    return best


def _reversed_vote(v: PartialVote) -> PartialVote:
    return PartialVote(v.m, frozenset((b, a) for a, b in v.pairs))


def sm_kapproval_kveto(inst: ManipulationInstance, k: Optional[int] = None):
    """Strong manipulation for k-approval / k-veto, any coalition size.

    Per challenger, the worst-case score gap decomposes over votes; each vote
    contributes the best of the four in/out-of-slot combinations that its
    partial order allows.  The coalition tops every ballot with c and the
    leftover approval (veto) slots are assigned by a flow whose candidate
    caps (demands) keep every challenger strictly behind c.
    """
    P, l, c, r = _unpack(inst)
    if r.family != POSITIONAL:
        raise WrongRule(f"{r.name()} is not k-approval or k-veto")
    kind, k_rule = classify_score_vector(r.score_vector)
    if kind == "plurality":
        kind, k_rule = "kapproval", 1
    if kind not in ("kapproval", "kveto"):
        raise WrongRule(f"{r.name()} is not k-approval or k-veto")
    if k is None:
        k = k_rule
    if k != k_rule or not 1 <= k <= P.m - 1:
        raise ValueError(f"k={k} out of range for {r.name()}")
    m = P.m
    others = [a for a in range(m) if a != c]
    src = 0
    first_cand = 1 + l
    sink = first_cand + m
    if kind == "kapproval":
        caps = {}
        for a in others:
            gap = sum(mult * _slot_gap(v, k, a, c) for v, mult in P.votes)
            caps[a] = min(l - 1 - gap, l)
            if caps[a] < 0:  # a overtakes c even with zero manipulator approvals
                return False, Witness()
        net = FlowNetwork(sink + 1, src, sink)
        slot_arcs = {}
        for i in range(l):
            net.add_arc(src, 1 + i, k - 1)
            for a in others:
                slot_arcs[(i, a)] = net.add_arc(1 + i, first_cand + a, 1)
        for a in others:
            net.add_arc(first_cand + a, sink, caps[a])
        res = max_flow(net)
        if res.value != l * (k - 1):
            return False, Witness()
        ballots = []
        for i in range(l):
            approved = [a for a in others if res.arc_flows[slot_arcs[(i, a)]]]
            rest = [a for a in others if a not in approved]
            ballots.append((c,) + tuple(approved) + tuple(rest))
    else:
        demands = {}
        for a in others:
            gap = sum(
                mult * _slot_gap(_reversed_vote(v), k, c, a) for v, mult in P.votes
            )
            demands[a] = max(0, gap + 1)
            if demands[a] > l:  # a survives even if every ballot vetoes it
                return False, Witness()
        net = FlowNetwork(sink + 1, src, sink)
        slot_arcs = {}
        for i in range(l):
            net.add_arc(src, 1 + i, k)
            for a in others:
                slot_arcs[(i, a)] = net.add_arc(1 + i, first_cand + a, 1)
        for a in others:
            net.add_arc(first_cand + a, sink, l, lower=demands[a])
        res = feasible_flow_with_demands(net, l * k)
        if not res.feasible:
            return False, Witness()
        ballots = []
        for i in range(l):
            vetoed = [a for a in others if res.arc_flows[slot_arcs[(i, a)]]]
            rest = [a for a in others if a not in vetoed]
            ballots.append((c,) + tuple(rest) + tuple(vetoed))
    votes = tuple(LinearVote(b) for b in ballots)
    return True, Witness(votes, None, None)


# ------------------------------------------------------------------ SM, one manipulator, any scoring vector


def _pair_positions_feasible(v: PartialVote, x: int, i: int, y: int, j: int) -> bool:
    """Is there a linear extension of v with x at 1-indexed position i and y
    at position j, where i < j?

    Counting argument: the prefix before y holds above(x), x itself and
    above(y); members of below(x) forced before y, plus any padding overflow
    that cannot come from free candidates, must fit strictly between x and y.
    """
    if (y, x) in v.pairs:
        return False
    m = v.m
    ax, ay = v.above(x), v.above(y)
    dx, dy = v.below(x), v.below(y)
    if len(ax) > i - 1 or len(ay) > j - 1 or len(dy) > m - j:
        return False
    base = ax | {x} | ay
    if len(base) > j - 1:
        return False
    filler = set(range(m)) - {y} - dy - base - dx
    overflow = max(0, (j - 1 - len(base)) - len(filler))
    return len(dx & ay) + overflow <= j - 1 - i


def _position_gap(v: PartialVote, a: int, c: int, vec) -> int:
    """max over extensions of score(a's slot) - score(c's slot)."""
    m = v.m
    best = None
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            if i == j:
                continue
            if i < j:
                ok = _pair_positions_feasible(v, a, i, c, j)
            else:
                ok = _pair_positions_feasible(v, c, j, a, i)
            if ok:
                g = vec[i - 1] - vec[j - 1]
                if best is None or g > best:
                    best = g
    return best


def sm_scoring_single(inst: ManipulationInstance):
    """Strong manipulation for one manipulator under any scoring vector.

    c takes the manipulator's top slot; challenger a may sit at position p
    only when its worst-case score lead over c plus the slot difference stays
    negative.  Feasibility is a perfect matching of challengers to slots.
    """
    P, l, c, r = _unpack(inst)
    if r.family != POSITIONAL:
        raise WrongRule(f"{r.name()} is not a scoring rule")
    if l != 1:
        raise MultipleManipulators("this decider handles exactly one manipulator")
    vec = r.score_vector
    m = P.m
    others = [a for a in range(m) if a != c]
    gaps = {
        a: sum(mult * _position_gap(v, a, c, vec) for v, mult in P.votes)
        for a in others
    }
    edges = [
        (ai, p - 2)
        for ai, a in enumerate(others)
        for p in range(2, m + 1)
        if gaps[a] + vec[p - 1] - vec[0] < 0
    ]
    match = perfect_matching(len(others), m - 1, edges)
    if match is None:
        return False, Witness()
    ranking = [c] * m
    for ai, pj in match:
        ranking[pj + 1] = others[ai]
    return True, Witness((LinearVote(tuple(ranking)),), None, None)


# ------------------------------------------------------------------ SM, Bucklin family


def _upclosed_ksets(v: PartialVote, k: int) -> list:
    """All possible approved sets: up-closed k-subsets of the partial order."""
    return [
        S
        for S in itertools.combinations(range(v.m), k)
        if all(v.above(x) <= frozenset(S) for x in S)
    ]


def _fallback_approval_defeat(entries, L: int, c: int, m: int, n: int, budget: int) -> bool:
    """Is there an extension decided purely on approvals where c fails?

    Approved sets decouple per vote, so the search is a bounded product over
    per-vote up-closed k-sets.  c fails when nobody reaches a majority at any
    depth and some rival matches c's approval total (manipulators add L).
    """
    half = n // 2
    if L > half:
        return False  # the coalition alone gives c a depth-1 majority
    options = []
    total = 1
    cache = {}
    for v, kv, mult in entries:
        key = (v, kv)
        if key not in cache:
            cache[key] = _upclosed_ksets(v, kv)
        for _ in range(mult):
            total *= len(cache[key])
            if total > budget:
                raise EnumerationBudgetExceeded(
                    f"approval-stage search exceeds {budget} assignments"
                )
            options.append(cache[key])
    for combo in itertools.product(*options):
        tot = [0] * m
        for S in combo:
            for x in S:
                tot[x] += 1
        if tot[c] + L > half:
            continue
        if any(tot[x] > half for x in range(m) if x != c):
            continue
        if any(tot[w] >= tot[c] + L for w in range(m) if w != c):
            return True
    return False


def sm_bucklin_family(inst: ManipulationInstance, approval_budget: int = DEFAULT_EXTENSION_BUDGET):
    """Strong manipulation for Bucklin, simplified Bucklin and the Fallback
    variants, any coalition size.

    For every challenger w and depth d the non-manipulators are pushed to
    their w-friendliest, c-hostile extensions; negating the resulting defeat
    conditions caps how many coalition ballots may show w within the top d.
    Ranked variants then fill the ballots greedily left to right; Fallback
    variants approve c alone, so the caps only need to be nonnegative, plus a
    separate check that no extension defeats c at the approval stage.
    """
    P, L, c, r = _unpack(inst)
    if r.family not in BUCKLIN_FAMILIES:
        raise WrongRule(f"{r.name()} is not in the Bucklin family")
    fallback = r.family in FALLBACK_FAMILIES
    nonsimplified = r.family in (BUCKLIN, FALLBACK)
    m = P.m
    if fallback and P.votes and P.approval_counts is None:
        raise MissingApprovals("Fallback manipulation needs per-vote approval counts")
    if m == 1:
        votes = (LinearVote((0,)),) * L
        return True, Witness(votes, (1,) * L if fallback else None, None)
    n = P.n + L
    entries = []
    for i, (v, mult) in enumerate(P.votes):
        kv = P.approval_counts[i] if fallback else m
        entries.append((v, kv, mult))
    others = [w for w in range(m) if w != c]
    caps = {}
    for w in others:
        for depth in range(1, m + 1):
            # adversarial tallies: d_w = votes showing w within depth, d_cp /
            # d_cl = votes forced to show c within depth-1 / depth, t0 / t1 =
            # coupled votes where lifting w drags c in (split by whether c
            # lands within depth even unlifted)
            d_w = d_cp = d_cl = t0 = t1 = 0
            for v, kv, mult in entries:
                eff = min(depth, kv)
                eff_prev = min(depth - 1, kv)
                min_w = len(v.above(w)) + 1
                max_c = m - len(v.below(c))
                pcp = max_c <= eff_prev
                pcl = max_c <= eff
                if (c, w) not in v.pairs:
                    if min_w <= eff:
                        d_w += mult
                    d_cp += mult * pcp
                    d_cl += mult * pcl
                elif min_w > eff:
                    d_cp += mult * pcp
                    d_cl += mult * pcl
                elif pcp:
                    d_w += mult
                    d_cp += mult
                    d_cl += mult
                elif pcl:
                    t1 += mult
                else:
                    t0 += mult
            lp = L if depth >= 2 else 0
            j_max = (n - 2 * d_cp - 2 * lp) // 2
            if j_max < 0:
                cap = INF  # c holds a majority one level up in every extension
            else:
                # J coupled lifts trade w-count against c's earlier majority;
                # x is safe iff it breaks the majority or the count compare
                cap = INF
                for j in range(min(t0 + t1, j_max) + 1):
                    bound = (n - 2 * d_w - 2 * j) // 2
                    if nonsimplified:
                        compare = d_cl + t1 + L - d_w - min(j, t1) - 1
                        bound = max(bound, compare)
                    cap = min(cap, bound)
            caps[(w, depth)] = cap
    if fallback:
        if any(caps[(w, d)] < 0 for w in others for d in range(1, m + 1)):
            return False, Witness()
        if _fallback_approval_defeat(entries, L, c, m, n, approval_budget):
            return False, Witness()
        votes = (LinearVote(c_top_ranking(m, c)),) * L
        return True, Witness(votes, (1,) * L, None)
    # a negative cap anywhere is lethal: w's count at that depth is >= 0
    if any(caps[(w, d)] < 0 for w in others for d in range(1, m + 1)):
        return False, Witness()
    # ballots exist iff slot counts y[w][p] exist with every prefix sum under
    # its cap; per-candidate chains turn the prefix sums into arc flows
    slots = list(range(2, m + 1))
    src = 0
    slot_node = {p: 1 + i for i, p in enumerate(slots)}
    chain_node = {}
    nid = 1 + len(slots)
    for w in others:
        for d in slots:
            chain_node[(w, d)] = nid
            nid += 1
    net = FlowNetwork(nid + 1, src, nid)
    y_arcs = {}
    for p in slots:
        net.add_arc(src, slot_node[p], L)
        for w in others:
            y_arcs[(w, p)] = net.add_arc(slot_node[p], chain_node[(w, p)], L)
    for w in others:
        for d in slots:
            cc = L if caps[(w, d)] == INF else min(caps[(w, d)], L)
            dst = chain_node[(w, d + 1)] if d < m else nid
            net.add_arc(chain_node[(w, d)], dst, cc)
    res = max_flow(net)
    if res.value != L * (m - 1):
        return False, Witness()
    remaining = {
        (w, p): res.arc_flows[y_arcs[(w, p)]] for w in others for p in slots
    }
    # peel one ballot per round; the leftover counts stay regular, so a
    # perfect slot-candidate matching always remains
    ballots = []
    for _ in range(L):
        edges = [
            (pi, wi)
            for pi, p in enumerate(slots)
            for wi, w in enumerate(others)
            if remaining[(w, p)] > 0
        ]
        match = perfect_matching(len(slots), len(others), edges)
        assert match is not None
        ranking = [c] * m
        for pi, wi in match:
            ranking[slots[pi] - 1] = others[wi]
            remaining[(others[wi], slots[pi])] -= 1
        ballots.append(tuple(ranking))
    votes = tuple(LinearVote(b) for b in ballots)
    return True, Witness(votes, None, None)


# ------------------------------------------------------------------ SM, maximin, one manipulator


def sm_maximin_single(inst: ManipulationInstance):
    """Strong manipulation for maximin with one manipulator.

    For every challenger pair (w, w') the non-manipulators are extended
    per-vote to pin w' above c where possible and lift w as high as it goes;
    those adversarial margins dominate every real extension.  The
    manipulator's ballot is then built greedily under c: a candidate may be
    appended only if, against every w', some opponent still blocks it.
    """
    P, l, c, r = _unpack(inst)
    if r.family != MAXIMIN:
        raise WrongRule(f"{r.name()} is not maximin")
    if l != 1:
        raise MultipleManipulators("this decider handles exactly one manipulator")
    m = P.m
    if m == 1:
        return True, Witness((LinearVote((0,)),), None, None)
    others = [w for w in range(m) if w != c]
    adv_w = {}  # (w, wp) -> per-opponent margin of w in the adversarial extension
    adv_c = {}  # (w, wp) -> margin of c over wp in the same extension
    for w in others:
        for wp in others:
            marg = [0] * m
            bound = 0
            for v, mult in P.votes:
                if (c, wp) in v.pairs:
                    aug = v
                    bound += mult
                else:
                    aug = build_partial_vote(tuple(v.pairs) + ((wp, c),), m)
                    bound -= mult
                upw = aug.above(w)
                for d in range(m):
                    if d != w:
                        marg[d] += mult * (-1 if d in upw else 1)
            adv_w[(w, wp)] = marg
            adv_c[(w, wp)] = bound

    def safe(y, placed):
        # y is placeable iff for every wp some d keeps y's worst margin low:
        # margins gain -1 from candidates above y, +1 from those below
        for wp in others:
            marg = adv_w[(y, wp)]
            bound = adv_c[(y, wp)]
            if not any(
                marg[d] + (-1 if d in placed else 1) <= bound
                for d in range(m)
                if d != y
            ):
                return False
        return True

    placed = {c}
    seq = [c]
    while len(seq) < m:
        pick = None
        for y in others:
            if y not in placed and safe(y, placed):
                pick = y
                break
        if pick is None:
            return False, Witness()
        placed.add(pick)
        seq.append(pick)
    return True, Witness((LinearVote(tuple(seq)),), None, None)


# ------------------------------------------------------------------ OM


def om_approve_only(inst: ManipulationInstance):
    """Opportunistic manipulation where approving c alone always works:
    plurality and the Fallback variants."""
    P, l, c, r = _unpack(inst)
    fallback = r.family in FALLBACK_FAMILIES
    if not fallback:
        kind = None
        if r.family == POSITIONAL:
            kind = classify_score_vector(r.score_vector)[0]
        if kind != "plurality":
            raise WrongRule(f"{r.name()} is not plurality or a Fallback variant")
    top = LinearVote(c_top_ranking(P.m, c))
    return True, Witness((top,) * l, (1,) * l if fallback else None, None)


def _compositions(total: int, parts: int):
    """Nonnegative integer tuples of the given length summing to total."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def _veto_challenge_feasible(P, c, n_t, np_t, a_star, v_c, others) -> bool:
    """Extension where the rival veto split np_t elects c but n_t does not
    (a_star reaches c's veto count), encoded as a demand flow."""
    m = P.m
    groups = P.votes
    nmap = dict(zip(others, n_t))
    npmap = dict(zip(others, np_t))
    src = 0
    first_cand = 1 + len(groups)
    sink = first_cand + m
    net = FlowNetwork(sink + 1, src, sink)
    for gi, (v, mult) in enumerate(groups):
        net.add_arc(src, 1 + gi, mult)
        for x in range(m):
            if not v.below(x):  # x can land last in this vote
                net.add_arc(1 + gi, first_cand + x, mult)
    for x in range(m):
        if x == c:
            net.add_arc(first_cand + c, sink, v_c, lower=v_c)
            continue
        dem = max(0, v_c + 1 - npmap[x])
        cap = v_c - nmap[x] if x == a_star else P.n
        if cap < dem:
            return False
        net.add_arc(first_cand + x, sink, cap, lower=dem)
    return feasible_flow_with_demands(net, P.n).feasible


def om_veto(inst: ManipulationInstance, max_coalition: int = 3):
    """Opportunistic manipulation for veto with a small coalition.

    Coalition ballots never veto c, so only the veto split over rivals
    matters.  A split is rejected when some other split wins an extension the
    candidate split loses; each such challenge is a feasibility flow over
    last-place assignments with c's veto count pinned.  Yes iff a split
    survives every challenge.
    """
    P, l, c, r = _unpack(inst)
    m = P.m
    if _normal_form(r) != (1,) * (m - 1) + (0,):
        raise WrongRule(f"{r.name()} is not veto")
    if l > max_coalition:
        raise ManipulatorCountTooLarge(
            f"{l} manipulators exceed the configured bound of {max_coalition}"
        )
    others = [a for a in range(m) if a != c]
    splits = list(_compositions(l, len(others)))
    for n_t in splits:
        challenged = False
        for np_t in splits:
            if challenged or np_t == n_t:
                continue
            stars = [a for a, na, npa in zip(others, n_t, np_t) if npa > na]
            for a_star in stars:
                if any(
                    _veto_challenge_feasible(P, c, n_t, np_t, a_star, v_c, others)
                    for v_c in range(P.n + 1)
                ):
                    challenged = True
                    break
        if not challenged:
            ballots = []
            for a, cnt in zip(others, n_t):
                mid = tuple(x for x in others if x != a)
                ballots.extend([(c,) + mid + (a,)] * cnt)
            return True, Witness(tuple(LinearVote(b) for b in ballots), None, None)
    return False, Witness()
