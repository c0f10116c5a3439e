"""Line-oriented election file format.

Grammar (one directive per line, ``#`` starts a comment):

    candidates: a b c
    vote: a>b>c x3
    partial: a>b b>c x2
    approve(2) vote: a>b
    approve(2) partial: a>b

``vote:`` lines carry one complete ranking chain; ``partial:`` lines carry
whitespace-separated chains whose pairs are closed transitively.  A trailing
``xN`` token sets the multiplicity.  ``approve(k)`` marks the vote group as
approving its top k candidates and may rank the approved subset only; the
unranked candidates are appended in declaration order.  Mixing approval and
plain groups in one file is rejected, as is any unknown directive.
"""

from __future__ import annotations

from typing import Optional

from .core import (
    CycleError,
    PartialVote,
    Profile,
    build_partial_vote,
    make_candidates,
)


class ParseError(ValueError):
    """Malformed election file; the message carries the line number."""


def _fail(lineno: int, msg: str):
    raise ParseError(f"line {lineno}: {msg}")


def _split_mult(tokens: list, index: dict, lineno: int):
    # a trailing xN is a multiplicity unless it names a candidate
    mult = 1
    if (
        tokens
        and tokens[-1].startswith("x")
        and tokens[-1][1:].isdigit()
        and tokens[-1] not in index
    ):
        mult = int(tokens[-1][1:])
        if mult < 1:
            _fail(lineno, "multiplicity must be at least 1")
        tokens = tokens[:-1]
    return tokens, mult


def _closed(pairs, m: int, lineno: int):
    try:
        return build_partial_vote(pairs, m)
    except CycleError as e:
        raise CycleError(f"line {lineno}: {e}") from e


def _chain_pairs(chain: str, index: dict, lineno: int) -> list:
    names = chain.split(">")
    if len(names) < 2 or any(not n for n in names):
        _fail(lineno, f"malformed chain {chain!r}")
    ids = []
    for n in names:
        if n not in index:
            _fail(lineno, f"unknown candidate {n!r}")
        ids.append(index[n])
    return [(ids[i], ids[i + 1]) for i in range(len(ids) - 1)]


def parse_election(text: str) -> tuple[Profile, dict]:
    """Parse an election file into (Profile, metadata).

    metadata records the candidate names in declaration order and the
    number of vote groups of each kind.
    """
    names: Optional[list] = None
    index: dict = {}
    votes = []
    approvals = []
    kinds = {"vote": 0, "partial": 0}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue

        approve: Optional[int] = None
        if body.startswith("approve(") and ")" in body:
            head, body = body.split(")", 1)
            digits = head[len("approve("):]
            if not digits.isdigit():
                _fail(lineno, f"malformed approval count {digits!r}")
            approve = int(digits)
            body = body.strip()

        if ":" not in body:
            _fail(lineno, f"expected 'key: value', got {raw.strip()!r}")
        key, rest = body.split(":", 1)
        key = key.strip()
        tokens = rest.split()

        if key == "candidates":
            if approve is not None:
                _fail(lineno, "candidates line takes no approval count")
            if names is not None:
                _fail(lineno, "duplicate candidates line")
            if not tokens:
                _fail(lineno, "no candidate names given")
            if len(set(tokens)) != len(tokens):
                _fail(lineno, "candidate names must be distinct")
            names = tokens
            index = {n: i for i, n in enumerate(names)}
            continue

        if key not in ("vote", "partial"):
            _fail(lineno, f"unknown directive {key!r}")
        if names is None:
            _fail(lineno, "votes must follow the candidates line")
        tokens, mult = _split_mult(tokens, index, lineno)
        m = len(names)

        if key == "vote":
            if len(tokens) != 1:
                _fail(lineno, "vote lines take exactly one ranking chain")
            chain = tokens[0].split(">")
            if len(set(chain)) != len(chain):
                _fail(lineno, f"repeated candidate in {tokens[0]!r}")
            pairs = _chain_pairs(tokens[0], index, lineno) if len(chain) > 1 else []
            if len(chain) == 1:
                if chain[0] not in index:
                    _fail(lineno, f"unknown candidate {chain[0]!r}")
                pairs = []
            ranked = [index[n] for n in chain]
            if len(ranked) < m:
                if approve is None:
                    _fail(lineno, "complete votes must rank every candidate")
                tail = [i for i in range(m) if i not in set(ranked)]
                full = ranked + tail
                pairs = [(full[i], full[i + 1]) for i in range(m - 1)]
            v = _closed(pairs, m, lineno)
            if not v.is_complete():
                _fail(lineno, "vote line did not determine a complete ranking")
        else:
            pairs = []
            for chain in tokens:
                pairs += _chain_pairs(chain, index, lineno)
            v = _closed(pairs, m, lineno)

        if approve is not None and not 1 <= approve <= m:
            _fail(lineno, f"approval count {approve} outside 1..{m}")
        votes.append((v, mult))
        approvals.append(approve)
        kinds[key] += 1

    if names is None:
        raise ParseError("no candidates line found")
    if not votes:
        raise ParseError("no votes found")
    given = [a for a in approvals if a is not None]
    if given and len(given) != len(approvals):
        raise ParseError("either every vote group or none carries approve(k)")

    P = Profile(make_candidates(names), votes, approvals if given else None)
    meta = {"names": tuple(names), "groups": dict(kinds)}
    return P, meta


def parse_election_file(path) -> tuple[Profile, dict]:
    with open(path, encoding="utf-8") as fh:
        return parse_election(fh.read())


def _reduction(v: PartialVote) -> list:
    """Cover pairs of the partial order (transitive reduction)."""
    pairs = set(v.pairs)
    out = []
    for a, b in sorted(pairs):
        if not any((a, z) in pairs and (z, b) in pairs for z in range(v.m)):
            out.append((a, b))
    return out


def serialize_profile(P: Profile) -> str:
    """Election file text for P; parse_election inverts it exactly.

    One exception: when a multiplicity marker would collide with a candidate
    literally named xN, the group is unrolled into repeated lines, so the
    parse merely regroups (same expanded profile, one group per line).
    """
    names = [c.name for c in P.candidates]
    lines = [f"candidates: {' '.join(names)}"]
    for i, (v, mult) in enumerate(P.votes):
        prefix = ""
        if P.approval_counts is not None:
            prefix = f"approve({P.approval_counts[i]}) "
        if v.is_complete():
            chain = ">".join(names[c] for c in v.to_linear().ranking)
            line = f"{prefix}vote: {chain}"
        else:
            toks = [f"{names[a]}>{names[b]}" for a, b in _reduction(v)]
            line = " ".join([f"{prefix}partial:"] + toks)
        if mult == 1:
            lines.append(line)
        elif f"x{mult}" in names:
            lines.extend([line] * mult)
        else:
            lines.append(f"{line} x{mult}")
    return "\n".join(lines) + "\n"


def same_profile(a: Profile, b: Profile) -> bool:
    """Structural equality: names, vote groups in order, approval counts."""
    return (
        tuple(c.name for c in a.candidates) == tuple(c.name for c in b.candidates)
        and tuple((v.pairs, k) for v, k in a.votes) == tuple((v.pairs, k) for v, k in b.votes)
        and a.approval_counts == b.approval_counts
    )
