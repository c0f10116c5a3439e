"""Command-line surface.

Verbs: solve (manipulation and winner questions with automatic routing),
gen-gadget (hardness constructions to election files), gen-profile (random
partial profiles), count-extensions, verify (polynomial-vs-oracle sweep
matrix), bench (timing).  Yes answers never print without their witness
passing an independent re-check.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from typing import Optional

from . import gadgets, oracle, polysolve, routing
from .core import (
    DEFAULT_EXTENSION_BUDGET,
    CycleError,
    ExtensionBudgetExceeded,
    ManipulationInstance,
    Profile,
    build_partial_vote,
    complete_vote,
    count_extensions,
    default_candidates,
    profile_extensions,
)
from .electionfile import ParseError, parse_election_file, same_profile, serialize_profile
from .oracle import DEFAULT_TUPLE_BUDGET, EnumerationBudgetExceeded, Witness
from .rules import (
    FALLBACK_FAMILIES,
    MissingApprovals,
    Rule,
    borda,
    bucklin,
    copeland,
    evaluate,
    fallback,
    k_approval,
    k_veto,
    maximin,
    plurality,
    simplified_bucklin,
    simplified_fallback,
    veto,
)

EXIT_YES = 0
EXIT_NO = 1
EXIT_ERROR = 2
EXIT_BUDGET = 3

RULE_TAGS = (
    "plurality",
    "veto",
    "kapproval",
    "kveto",
    "borda",
    "bucklin",
    "simplified_bucklin",
    "fallback",
    "simplified_fallback",
    "maximin",
    "copeland",
)


class CommandError(ValueError):
    """Bad flag combination or unusable input; maps to exit code 2."""


def parse_alpha(text: str) -> Fraction:
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as e:
        raise CommandError(f"bad alpha {text!r}: {e}") from e


def build_rule(tag: str, m: int, k: Optional[int], alpha: Optional[Fraction]) -> Rule:
    if tag == "plurality":
        return plurality(m)
    if tag == "veto":
        return veto(m)
    if tag == "kapproval":
        if k is None:
            raise CommandError("kapproval needs --k")
        return k_approval(m, k)
    if tag == "kveto":
        if k is None:
            raise CommandError("kveto needs --k")
        return k_veto(m, k)
    if tag == "borda":
        return borda(m)
    if tag == "bucklin":
        return bucklin()
    if tag == "simplified_bucklin":
        return simplified_bucklin()
    if tag == "fallback":
        return fallback()
    if tag == "simplified_fallback":
        return simplified_fallback()
    if tag == "maximin":
        return maximin()
    if tag == "copeland":
        return copeland(Fraction(1, 2) if alpha is None else alpha)
    raise CommandError(f"unknown rule {tag!r}")


def resolve_candidate(P: Profile, name: str) -> int:
    for c in P.candidates:
        if c.name == name:
            return c.id
    raise CommandError(f"no candidate named {name!r}")


# --- witness re-verification -------------------------------------------------


def _extends(ext: Profile, P: Profile) -> bool:
    originals = list(P.expanded())
    completed = list(ext.expanded())
    if len(completed) != len(originals):
        return False
    for (orig, ka), (comp, kb) in zip(originals, completed):
        if not (orig.pairs <= comp.pairs and comp.is_complete() and ka == kb):
            return False
    return True


def _wins_with(E: Profile, w: Witness, c: int, r: Rule) -> bool:
    votes = [(complete_vote(v.ranking), 1) for v in w.manipulator_votes]
    approvals = w.manipulator_approvals
    if E.approval_counts is not None and approvals is None:
        approvals = (E.m,) * len(votes)  # ignored by non-approval rules
    full = E.with_votes_appended(votes, approvals)
    return evaluate(full, r).winners == frozenset({c})


def verify_witness(
    problem: str,
    inst: ManipulationInstance,
    w: Witness,
    max_extensions: int,
    max_tuples: int,
) -> bool:
    """Independent re-check of a yes certificate before it is shown."""
    if w.manipulator_votes is None or len(w.manipulator_votes) != inst.manipulators:
        return False
    c, r = inst.favorite, inst.rule
    if problem in ("wm", "cm"):
        E = w.extension
        if E is None:
            if not inst.profile.is_complete():
                return False
            E = inst.profile
        elif not _extends(E, inst.profile):
            return False
        return _wins_with(E, w, c, r)
    if problem == "om":
        return oracle.is_c_optimal(
            w.manipulator_votes,
            inst,
            w.manipulator_approvals,
            max_extensions=max_extensions,
            max_tuples=max_tuples,
        )
    if problem == "sm":
        return all(
            _wins_with(E, w, c, r) for E in profile_extensions(inst.profile, max_extensions)
        )
    return False


def witness_payload(P: Profile, w: Witness):
    if w.manipulator_votes is None:
        return None
    names = [c.name for c in P.candidates]
    payload = {
        "manipulator_votes": [[names[i] for i in v.ranking] for v in w.manipulator_votes],
        "approvals": list(w.manipulator_approvals) if w.manipulator_approvals else None,
        "extension": serialize_profile(w.extension) if w.extension is not None else None,
    }
    return payload


# --- solve -------------------------------------------------------------------


def solve_command(args) -> int:
    P, _ = parse_election_file(args.file)
    rule = build_rule(args.rule, P.m, args.k, args.alpha)
    c = resolve_candidate(P, args.favorite)
    problem = args.problem
    t0 = time.perf_counter()
    witness = None
    if problem == "pw":
        answer = oracle.possible_winner_bf(P, c, rule, args.max_extensions)
        solver = "oracle:pw"
    elif problem == "nw":
        answer = oracle.necessary_winner_bf(P, c, rule, args.max_extensions)
        solver = "oracle:nw"
    else:
        inst = ManipulationInstance(P, args.manipulators, c, rule)
        answer, w, solver = routing.run(problem, inst, args.max_extensions, args.max_tuples)
        if answer and w.manipulator_votes is not None:
            if not verify_witness(problem, inst, w, args.max_extensions, args.max_tuples):
                raise CommandError(f"solver {solver} produced a witness that failed re-verification")
            witness = w
    micros = int((time.perf_counter() - t0) * 1e6)

    report = {
        "problem": problem,
        "rule": rule.name(),
        "answer": bool(answer),
        "witness": witness_payload(P, witness) if witness else None,
        "solver": solver,
        "micros": micros,
    }
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(f"{problem} under {report['rule']}: {'yes' if answer else 'no'}")
        print(f"solver: {solver}  ({micros} us)")
        if witness is not None:
            names = [cd.name for cd in P.candidates]
            for v in witness.manipulator_votes:
                print("  manipulator vote:", ">".join(names[i] for i in v.ranking))
            if witness.manipulator_approvals:
                print("  approvals:", " ".join(map(str, witness.manipulator_approvals)))
            if witness.extension is not None:
                print("  witnessing extension:")
                for line in serialize_profile(witness.extension).splitlines():
                    print("   ", line)
    return EXIT_YES if answer else EXIT_NO


# --- gadget generation ---------------------------------------------------------


GADGET_X3C = (
    "wm-bucklin",
    "sm-copeland",
    "om-kapproval",
    "om-kveto",
    "om-borda",
    "om-maximin",
    "om-copeland",
    "om-bucklin",
    "om-simplified_bucklin",
)
GADGET_SOURCE = ("wm-kapproval", "wm-kveto")


def gen_gadget_command(args) -> int:
    name = args.construction
    if name in GADGET_X3C:
        if not args.x3c:
            raise CommandError(f"{name} needs --x3c")
        with open(args.x3c, encoding="utf-8") as fh:
            x3c = gadgets.parse_x3c(fh.read())
        if name == "wm-bucklin":
            out = gadgets.gen_wm_bucklin(x3c, args.variant or "bucklin")
        elif name == "sm-copeland":
            out = gadgets.gen_sm_copeland(x3c, args.alpha or Fraction(1, 2))
        else:
            tag = name[len("om-"):]
            out = gadgets.gen_om(tag, x3c, k=args.k, alpha=args.alpha)
    elif name in GADGET_SOURCE:
        if not args.source or args.favorite is None or args.k is None:
            raise CommandError(f"{name} needs --source, --favorite and --k")
        src, _ = parse_election_file(args.source)
        fav = resolve_candidate(src, args.favorite)
        gen = gadgets.gen_wm_kapproval if name == "wm-kapproval" else gadgets.gen_wm_kveto
        out = gen(src, fav, args.k)
    else:
        raise CommandError(f"unknown construction {name!r}")

    inst = out.instance
    text = serialize_profile(inst.profile)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    names = [c.name for c in inst.profile.candidates]
    info = {
        "construction": out.construction,
        "relation": out.expected_relation,
        "rule": inst.rule.name(),
        "favorite": names[inst.favorite],
        "manipulators": inst.manipulators,
        "candidates": inst.profile.m,
        "voters": inst.profile.n,
        "roles": {names[i]: role for i, role in sorted(out.roles.items())},
        "notes": list(out.notes),
    }
    if args.json:
        if not args.out:
            info["election"] = text
        print(json.dumps(info, indent=2))
    else:
        print(f"{out.construction}: {inst.profile.m} candidates, {inst.profile.n} votes")
        print(f"relation: {out.expected_relation}")
        print(f"solve with: --problem {out.construction.split('-')[0]} --rule {inst.rule.name()}"
              f" --favorite {names[inst.favorite]} -l {inst.manipulators}")
        for note in out.notes:
            print("note:", note)
        if not args.out:
            sys.stdout.write(text)
    return EXIT_YES


# --- profile generation --------------------------------------------------------


def random_partial_profile(rng, m: int, n: int, max_drop: int, approvals: bool) -> Profile:
    votes = []
    for _ in range(n):
        ranking = list(range(m))
        rng.shuffle(ranking)
        pairs = [(ranking[i], ranking[j]) for i in range(m) for j in range(i + 1, m)]
        rng.shuffle(pairs)
        votes.append((build_partial_vote(pairs[rng.randint(0, max_drop):], m), 1))
    counts = tuple(rng.randint(1, m) for _ in range(n)) if approvals else None
    return Profile(default_candidates(m), votes, counts)


def gen_profile_command(args) -> int:
    if args.m < 1 or args.votes < 1:
        raise CommandError("need at least one candidate and one vote")
    rng = random.Random(args.seed)
    P = random_partial_profile(rng, args.m, args.votes, args.max_drop, args.approvals)
    text = serialize_profile(P)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_YES


# --- extension counting ---------------------------------------------------------


def count_extensions_command(args) -> int:
    P, _ = parse_election_file(args.file)
    budget = args.max_extensions
    total = 1
    rows = []
    for i, (v, mult) in enumerate(P.votes):
        cnt = count_extensions(v, budget)
        rows.append({"group": i, "multiplicity": mult, "extensions": cnt})
        for _ in range(mult):
            total = min(total * cnt, budget + 1)
    capped = total > budget
    report = {
        "groups": rows,
        "profile_extensions": None if capped else total,
        "budget": budget,
        "over_budget": capped,
    }
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        for row in rows:
            print(f"group {row['group']} (x{row['multiplicity']}): {row['extensions']} extensions")
        print(f"profile extensions: {'> ' + str(budget) if capped else total}")
    return EXIT_BUDGET if capped else EXIT_YES


# --- verification sweeps ---------------------------------------------------------


def _sweep_rule(tag: str, m: int, rng):
    if tag == "kapproval":
        return k_approval(m, rng.randint(2, max(2, m - 1)))
    if tag == "kveto":
        return k_veto(m, rng.randint(2, max(2, m - 1)))
    return build_rule(tag, m, None, None)


_SWEEP_CELLS = {
    # cell: (problem, rule tag, decider name, coalition sizes)
    "wm:plurality": ("wm", "plurality", "wm_plurality_veto", (1, 2)),
    "wm:veto": ("wm", "veto", "wm_plurality_veto", (1, 2)),
    "om:plurality": ("om", "plurality", "om_approve_only", (1, 2)),
    "om:veto": ("om", "veto", "om_veto", (1, 2)),
    "om:fallback": ("om", "fallback", "om_approve_only", (1, 2)),
    "om:simplified_fallback": ("om", "simplified_fallback", "om_approve_only", (1, 2)),
    "sm:kapproval": ("sm", "kapproval", "sm_kapproval_kveto", (1, 2)),
    "sm:kveto": ("sm", "kveto", "sm_kapproval_kveto", (1, 2)),
    "sm:bucklin": ("sm", "bucklin", "sm_bucklin_family", (1, 2)),
    "sm:simplified_bucklin": ("sm", "simplified_bucklin", "sm_bucklin_family", (1, 2)),
    "sm:fallback": ("sm", "fallback", "sm_bucklin_family", (1, 2)),
    "sm:simplified_fallback": ("sm", "simplified_fallback", "sm_bucklin_family", (1, 2)),
    "sm:borda": ("sm", "borda", "sm_scoring_single", (1,)),
    "sm:maximin": ("sm", "maximin", "sm_maximin_single", (1,)),
}

_BF = {
    "wm": oracle.weak_manipulation_bf,
    "om": oracle.opportunistic_manipulation_bf,
    "sm": oracle.strong_manipulation_bf,
}


def _run_sweep_cell(cell: str, trials: int, seed: int, solvers: dict):
    problem, tag, decider, sizes = _SWEEP_CELLS[cell]
    fn = solvers[decider]
    rng = random.Random(seed)
    approvals = tag in ("fallback", "simplified_fallback")
    for i in range(trials):
        m = rng.randint(3, 4) if tag in ("kapproval", "kveto") else rng.randint(2, 4)
        n = rng.randint(1, 3)
        P = random_partial_profile(rng, m, n, max_drop=3, approvals=approvals)
        rule = _sweep_rule(tag, m, rng)
        l = rng.choice(sizes)
        inst = ManipulationInstance(P, l, rng.randrange(m), rule)
        got, w = fn(inst)
        want, _ = _BF[problem](inst)
        if got != want:
            return False, f"trial {i}: {decider} said {got}, oracle said {want}"
        if got and w.manipulator_votes is not None:
            if not verify_witness(problem, inst, w, DEFAULT_EXTENSION_BUDGET, DEFAULT_TUPLE_BUDGET):
                return False, f"trial {i}: {decider} witness failed re-verification"
    return True, f"{trials} trials"


def _gadget_roundtrip_cell():
    """Smallest-input generator round-trips against the oracle."""
    x3c = gadgets.x3c_instance(3, [frozenset({1, 2, 3})])
    checks = []

    src = Profile(
        default_candidates(3),
        [(complete_vote((2, 0, 1)), 1), (build_partial_vote([], 3), 1)],
    )
    g = gadgets.gen_wm_kapproval(src, 2, 2)
    checks.append(("wm-kapproval", oracle.weak_manipulation_bf(g.instance)[0], True))
    src = Profile(
        default_candidates(3),
        [(complete_vote((2, 0, 1)), 1), (build_partial_vote([(2, 0), (2, 1)], 3), 1)],
    )
    g = gadgets.gen_wm_kveto(src, 2, 2)
    checks.append(("wm-kveto", oracle.weak_manipulation_bf(g.instance)[0], True))

    # the Bucklin lift is too wide for the full oracle; check the designed
    # manipulator ballot instead: c first, then the early-support-free block
    g = gadgets.gen_wm_bucklin(x3c)
    P = g.instance.profile
    X = [7, 8, 9, 10]
    order = tuple([3] + X + [j for j in range(P.m) if j != 3 and j not in X])
    pinned = P.with_votes_appended([(complete_vote(order), 1)], None)
    checks.append(("wm-bucklin", oracle.possible_winner_bf(pinned, 3, g.instance.rule), True))

    g = gadgets.gen_sm_copeland(x3c)
    checks.append(("sm-copeland", oracle.strong_manipulation_bf(g.instance, assume_c_top=True)[0], False))
    for tag, kw in (("kapproval", {"k": 3}), ("kveto", {"k": 4}), ("borda", {})):
        g = gadgets.gen_om(tag, x3c, **kw)
        got, _ = oracle.opportunistic_manipulation_bf(g.instance, assume_c_top=(tag == "borda"))
        checks.append((f"om-{tag}", got, False))

    for name, got, want in checks:
        if got != want:
            return False, f"{name}: expected {want}, got {got}"
    return True, f"{len(checks)} constructions"


def verify_command(args, solvers: Optional[dict] = None) -> int:
    defaults = {
        "wm_plurality_veto": polysolve.wm_plurality_veto,
        "om_approve_only": polysolve.om_approve_only,
        "om_veto": polysolve.om_veto,
        "sm_kapproval_kveto": polysolve.sm_kapproval_kveto,
        "sm_bucklin_family": polysolve.sm_bucklin_family,
        "sm_scoring_single": polysolve.sm_scoring_single,
        "sm_maximin_single": polysolve.sm_maximin_single,
    }
    if solvers:
        defaults.update(solvers)

    cells = list(_SWEEP_CELLS) + ["gadgets:roundtrip"]
    if args.cell:
        cells = [c for c in cells if c == args.cell or c.startswith(args.cell)]
        if not cells:
            raise CommandError(f"no sweep cell matches {args.cell!r}")

    failures = 0
    for cell in cells:
        if cell == "gadgets:roundtrip":
            ok, detail = _gadget_roundtrip_cell()
        else:
            ok, detail = _run_sweep_cell(cell, args.trials, args.seed, defaults)
        print(f"{cell:28s} {'ok' if ok else 'FAIL'}  ({detail})")
        failures += not ok
    print(f"{len(cells) - failures}/{len(cells)} cells pass")
    return EXIT_YES if failures == 0 else EXIT_NO


# --- bench ---------------------------------------------------------------------


def bench_command(args) -> int:
    P, _ = parse_election_file(args.file)
    rule = build_rule(args.rule, P.m, args.k, args.alpha)
    c = resolve_candidate(P, args.favorite)
    inst = ManipulationInstance(P, args.manipulators, c, rule)
    times = []
    answer = None
    solver = None
    for _ in range(args.repeat):
        t0 = time.perf_counter()
        answer, _, solver = routing.run(args.problem, inst, args.max_extensions, args.max_tuples)
        times.append(int((time.perf_counter() - t0) * 1e6))
    report = {
        "problem": args.problem,
        "rule": rule.name(),
        "answer": bool(answer),
        "solver": solver,
        "repeat": args.repeat,
        "best_micros": min(times),
        "mean_micros": sum(times) // len(times),
    }
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(f"{args.problem} under {report['rule']}: {'yes' if answer else 'no'} via {solver}")
        print(f"best {report['best_micros']} us, mean {report['mean_micros']} us over {args.repeat} runs")
    return EXIT_YES if answer else EXIT_NO


# --- parser --------------------------------------------------------------------


def _add_budgets(p):
    p.add_argument("--max-extensions", type=int, default=DEFAULT_EXTENSION_BUDGET)
    p.add_argument("--max-tuples", type=int, default=DEFAULT_TUPLE_BUDGET)


def _add_rule_flags(p):
    p.add_argument("--rule", required=True, choices=RULE_TAGS)
    p.add_argument("--k", type=int)
    p.add_argument("--alpha", type=parse_alpha)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="votemanip",
        description="solve, generate, and verify manipulation questions over partial election profiles",
    )
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("solve", help="answer a manipulation or winner question")
    p.add_argument("--file", required=True)
    p.add_argument("--problem", required=True, choices=routing.PROBLEMS)
    _add_rule_flags(p)
    p.add_argument("--favorite", required=True)
    p.add_argument("--manipulators", "-l", type=int, default=1)
    _add_budgets(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=solve_command)

    p = sub.add_parser("gen-gadget", help="emit a hardness construction as an election file")
    p.add_argument("--construction", required=True, choices=GADGET_X3C + GADGET_SOURCE)
    p.add_argument("--x3c")
    p.add_argument("--source")
    p.add_argument("--favorite")
    p.add_argument("--k", type=int)
    p.add_argument("--alpha", type=parse_alpha)
    p.add_argument("--variant", choices=("bucklin", "simplified_bucklin", "fallback", "simplified_fallback"))
    p.add_argument("--out")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=gen_gadget_command)

    p = sub.add_parser("gen-profile", help="emit a random partial profile")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--votes", type=int, required=True)
    p.add_argument("--max-drop", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--approvals", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=gen_profile_command)

    p = sub.add_parser("count-extensions", help="count linear extensions per vote group")
    p.add_argument("--file", required=True)
    p.add_argument("--max-extensions", type=int, default=DEFAULT_EXTENSION_BUDGET)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=count_extensions_command)

    p = sub.add_parser("verify", help="run the polynomial-vs-oracle sweep matrix")
    p.add_argument("--cell", help="run only cells with this prefix, e.g. sm:bucklin")
    p.add_argument("--trials", type=int, default=60)
    p.add_argument("--seed", type=int, default=20240131)
    p.set_defaults(func=verify_command)

    p = sub.add_parser("bench", help="time a solve repeatedly")
    p.add_argument("--file", required=True)
    p.add_argument("--problem", required=True, choices=("wm", "om", "sm", "cm"))
    _add_rule_flags(p)
    p.add_argument("--favorite", required=True)
    p.add_argument("--manipulators", "-l", type=int, default=1)
    p.add_argument("--repeat", type=int, default=3)
    _add_budgets(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=bench_command)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (EnumerationBudgetExceeded, ExtensionBudgetExceeded) as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        print("hint: raise --max-extensions / --max-tuples", file=sys.stderr)
        return EXIT_BUDGET
    except (CommandError, ParseError, CycleError, MissingApprovals, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
