"""Command-line front door: analyze positions, dump words, rebuild the
complementary-value table, run the verification suites, and serve the play
API.

Exit codes: 0 success, 1 verification or classifier disagreement, 2 usage
error, 3 memo budget exhausted.  The solver budget can be overridden with
the FIBNIM_MEMO_BUDGET environment variable.
"""

from __future__ import annotations

import functools
import json
import os
import sys
import time

import click

from .classify import (
    applicable_verdicts,
    classify_34n,
    classify_one_pile,
    classify_pow2,
    classify_two_pile_word,
    classify_two_pile_zeck,
)
from .fibcore import (
    INF,
    beatty_a,
    beatty_b,
    beatty_class,
    fib,
    nim_sum,
    z_1,
)
from .solver import (
    DEFAULT_MEMO_BUDGET,
    MEMO_BUDGET_ENV_VAR,
    MemoBudgetExceeded,
    NoneByTheorem,
    NoneUpTo,
    Position,
    Solver,
    comp_table,
    solve_record,
)
from .tables import TABLE1
from .words import (
    fib_word_concat,
    fib_word_morphism,
    fib_word_zeck,
    hybrid_word,
    in_ps,
    ps_set,
    sigma,
    sigma_word,
    sturm_letters,
)

EXIT_FAILURE = 1
EXIT_BUDGET = 3


def _env_budget() -> int:
    raw = os.environ.get(MEMO_BUDGET_ENV_VAR)
    if raw is None:
        return DEFAULT_MEMO_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise click.UsageError(
            f"{MEMO_BUDGET_ENV_VAR} must be an integer, got {raw!r}"
        )
    if value < 1:
        raise click.UsageError(f"{MEMO_BUDGET_ENV_VAR} must be positive")
    return value


def _parse_piles(_ctx, _param, value: str) -> tuple[int, ...]:
    try:
        piles = tuple(int(part) for part in value.split(","))
    except ValueError:
        raise click.BadParameter("expected comma-separated integers")
    if any(v < 0 for v in piles):
        raise click.BadParameter("pile sizes must be nonnegative")
    return piles


def _parse_bound(_ctx, _param, value: str):
    if value.lower() in ("inf", "infinity"):
        return INF
    try:
        bound = int(value)
    except ValueError:
        raise click.BadParameter("expected an integer or 'inf'")
    if bound < 0:
        raise click.BadParameter("bound must be nonnegative")
    return bound


def _budget_guard(f):
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except MemoBudgetExceeded as exc:
            click.echo(f"memo budget exceeded: {exc}", err=True)
            sys.exit(EXIT_BUDGET)

    return wrapper


@click.group()
@click.version_option(package_name="fibnim")
def main():
    """Solve and explore take-away games with a global move bound."""


# --- analyze ---------------------------------------------------------------------

@main.command()
@click.option(
    "--piles", required=True, callback=_parse_piles,
    help="Comma-separated pile sizes.",
)
@click.option(
    "--bound", default="inf", callback=_parse_bound, show_default=True,
    help="Stones removable on the first move; integer or 'inf'.",
)
@click.option(
    "--dynamic", type=click.IntRange(1, 2), default=2, show_default=True,
    help="Bound multiplier after each move: 2 doubles the take, 1 repeats it.",
)
@click.option(
    "--format", "fmt", type=click.Choice(["text", "json"]), default="text",
    show_default=True,
)
@_budget_guard
def analyze(piles, bound, dynamic, fmt):
    """Solve one position and cross-check every applicable classifier."""
    if not piles:
        raise click.UsageError("--piles needs at least one pile")
    solver = Solver(_env_budget())
    pos = Position(piles, bound, dynamic)
    record = solve_record(pos, solver)
    verdicts = applicable_verdicts(pos)
    disagreements = [v for v in verdicts if v.outcome != record.outcome]
    if fmt == "json":
        click.echo(json.dumps({
            "oracle": record.to_dict(),
            "classifiers": [
                {**v.to_dict(), "agrees": v.outcome == record.outcome}
                for v in verdicts
            ],
        }))
    else:
        click.echo(record.to_line())
        if not verdicts:
            click.echo("classifiers: none applicable")
        for v in verdicts:
            flag = "yes" if v.outcome == record.outcome else "NO"
            click.echo(f"{v.to_line()} agree={flag}")
    if disagreements:
        sys.exit(EXIT_FAILURE)


# --- comp-table ------------------------------------------------------------------

def _cell(entry) -> str:
    if isinstance(entry, NoneByTheorem):
        return "inf"
    if isinstance(entry, NoneUpTo):
        return f"?>{entry.cap}"
    return str(entry)


@main.command("comp-table")
@click.option("--max-n", type=click.IntRange(0), default=15, show_default=True)
@click.option("--cap", type=click.IntRange(1), default=1000, show_default=True)
@_budget_guard
def comp_table_cmd(max_n, cap):
    """Print the pairwise complementary-value table as CSV.

    'inf' marks pairs that no third pile completes; '?>cap' marks pairs
    where the scan ran out before finding one.
    """
    solver = Solver(_env_budget())
    table = comp_table(max_n, cap, solver)
    click.echo(",".join([""] + [str(j) for j in range(max_n + 1)]))
    for i, row in enumerate(table):
        click.echo(",".join([str(i)] + [_cell(entry) for entry in row]))


# --- word ------------------------------------------------------------------------

def _parse_hybrid(value: str) -> tuple[int, int]:
    parts = value.split(",")
    if len(parts) != 2:
        raise click.UsageError("--hybrid takes 'm,r'")
    try:
        m, r = int(parts[0]), int(parts[1])
    except ValueError:
        raise click.UsageError("--hybrid takes two integers 'm,r'")
    if m < 1 or r < 1:
        raise click.UsageError("--hybrid needs m >= 1 and r >= 1")
    return m, r


def _letters_up_to(values_at, bound: int) -> list[int]:
    """Letter values whose running sum stays within bound."""
    out: list[int] = []
    total = 0
    count = 64
    while True:
        values = values_at(count)
        for v in values[len(out):]:
            if total + v > bound:
                return out
            out.append(v)
            total += v
        count *= 2


@main.command()
@click.option("--sturm", type=click.IntRange(1), default=None,
              help="Two-letter word level a (letters F(a+1), F(a)).")
@click.option("--hybrid", default=None,
              help="'m,r': the word classifying positions (m, m+k; r).")
@click.option("--length", type=click.IntRange(1), default=None,
              help="Number of letters to print.")
@click.option("--bound", type=click.IntRange(0), default=None,
              help="Stop before the running sum passes this.")
@click.option("--ps", "ps_flag", is_flag=True,
              help="Print the partial-sum set instead of letters.")
def word(sturm, hybrid, length, bound, ps_flag):
    """Print word letters (as values) or their partial-sum set."""
    if (sturm is None) == (hybrid is None):
        raise click.UsageError("pass exactly one of --sturm or --hybrid")
    if ps_flag:
        if bound is None:
            raise click.UsageError("--ps needs --bound")
    elif (length is None) == (bound is None):
        raise click.UsageError("pass exactly one of --length or --bound")

    if ps_flag:
        if sturm is not None:
            members = ps_set(sturm, bound).members
        else:
            members = sigma(*_parse_hybrid(hybrid), bound).members
        click.echo(",".join(str(v) for v in members))
        return

    if sturm is not None:
        def values_at(n: int) -> list[int]:
            return [fib(i) for i in sturm_letters(sturm, n)]
    else:
        m, r = _parse_hybrid(hybrid)

        def values_at(n: int) -> list[int]:
            return list(sigma_word(m, r, n))

    letters = values_at(length) if length is not None else _letters_up_to(values_at, bound)
    click.echo(" ".join(str(v) for v in letters))


# --- verify ----------------------------------------------------------------------

def _result(label: str, bad: int, total: int, first=None) -> tuple[str, bool, str]:
    detail = f"{total - bad}/{total} checks"
    if bad and first is not None:
        detail += f", first failure {first}"
    return label, bad == 0, detail


def _suite_one_pile(solver: Solver, opts) -> list[tuple[str, bool, str]]:
    n_max = opts["n"] or 500
    bad = total = 0
    first = None
    for n in range(n_max + 1):
        for r in list(range(1, n + 2)) + [INF]:
            total += 1
            rec = classify_one_pile(n, r)
            if rec.outcome != solver.outcome(Position([n], r)):
                bad += 1
                first = first or (n, r)
    return [_result(f"one-pile classifier = solver, n <= {n_max}", bad, total, first)]


def _suite_two_pile(solver: Solver, opts) -> list[tuple[str, bool, str]]:
    m_max, k_max, r_max = opts["m"], opts["k"], opts["r"]
    zbad = wbad = total = wtotal = 0
    zfirst = wfirst = None
    for m in range(m_max + 1):
        for k in range(k_max + 1):
            for r in range(1, r_max + 1):
                total += 1
                want = solver.outcome(Position([m, m + k], r))
                if classify_two_pile_zeck(m, k, r)[0] != want:
                    zbad += 1
                    zfirst = zfirst or (m, k, r)
                if m >= 1:
                    wtotal += 1
                    if classify_two_pile_word(m, k, r) != want:
                        wbad += 1
                        wfirst = wfirst or (m, k, r)
    grid = f"m <= {m_max}, k <= {k_max}, r <= {r_max}"
    return [
        _result(f"two-pile term classifier = solver, {grid}", zbad, total, zfirst),
        _result(f"two-pile word route = solver, {grid}", wbad, wtotal, wfirst),
    ]


def _suite_pow2(solver: Solver, opts) -> list[tuple[str, bool, str]]:
    pile_max = opts["n"] or 40
    r_max = min(opts["r"], pile_max)
    bad = corbad = total = cortotal = 0
    first = corfirst = None
    for a in range(pile_max + 1):
        for b in range(a, pile_max + 1):
            for c in range(b, pile_max + 1):
                piles = (a, b, c)
                for r in list(range(1, r_max + 1)) + [INF]:
                    total += 1
                    want = solver.outcome(Position(piles, r, dynamic=1))
                    if classify_pow2(piles, r).outcome != want:
                        bad += 1
                        first = first or (piles, r)
                cortotal += 1
                unbounded = solver.outcome(Position(piles, INF, dynamic=1))
                if (unbounded == "P") != (nim_sum(piles) == 0):
                    corbad += 1
                    corfirst = corfirst or piles
    label = (
        f"halving-dynamic classifier = solver, piles <= {pile_max}, "
        f"r <= {r_max} and inf"
    )
    return [
        _result(label, bad, total, first),
        _result(
            "unbounded halving dynamic: P exactly at zero pile xor",
            corbad, cortotal, corfirst,
        ),
    ]


def _suite_table1(solver: Solver, opts) -> list[tuple[str, bool, str]]:
    max_n = min(opts["max_n"], len(TABLE1) - 1)
    cap = opts["cap"]
    table = comp_table(max_n, cap, solver)
    bad = total = 0
    first = None
    for i in range(max_n + 1):
        for j in range(max_n + 1):
            total += 1
            want = TABLE1[i][j]
            got = table[i][j]
            ok = isinstance(got, NoneByTheorem) if want is None else got == want
            if not ok:
                bad += 1
                first = first or (i, j, want, got)
    label = f"complementary values vs frozen {max_n + 1}x{max_n + 1} table, cap {cap}"
    return [_result(label, bad, total, first)]


def _beatty_sets(limit: int) -> dict[str, set[int]]:
    # 2*limit + slack indexing keeps every composed value <= limit covered:
    # a(n) grows like 1.62n and b(b(n)) like 2.62^2 n, so n up to limit works.
    upto = limit + 16
    a_vals = [beatty_a(n) for n in range(1, upto)]
    b_vals = [beatty_b(n) for n in range(1, upto)]
    return {
        "A": set(a_vals),
        "B": set(b_vals),
        "AA": {beatty_a(v) for v in a_vals},
        "BA": {beatty_b(v) for v in a_vals},
        "AB": {beatty_a(v) for v in b_vals},
        "BB": {beatty_b(v) for v in b_vals},
    }


def _suite_beatty(solver: Solver, opts) -> list[tuple[str, bool, str]]:
    limit = opts["bound"] if opts["bound"] is not None else 1000
    n34 = opts["n"] or 300
    fam_cap = 200
    results = []

    sets = _beatty_sets(limit)

    def shift(name: str, c: int) -> set[int]:
        return {x - c for x in sets[name] if x >= c}

    floor_classes = {
        "B-2": shift("B", 2),
        "AB-2": shift("AB", 2),
        "AB-1": shift("AB", 1),
        "BB-1": shift("BB", 1),
    }
    bad = 0
    first = None
    for z in range(limit + 1):
        got = beatty_class(z)
        want = [name for name, members in floor_classes.items() if z in members]
        if want != [got]:
            bad += 1
            first = first or (z, got, want)
    results.append(_result(
        f"four classes partition 0..{limit}, term test = floor test", bad,
        limit + 1, first,
    ))

    offset_pairs = [
        ("B-2", "AA"), ("AB-2", "BA"), ("AB-1", "AB"), ("BB-1", "BB"),
    ]
    bad = 0
    first = None
    for tag, composite in offset_pairs:
        lhs = {z + 1 for z in floor_classes[tag] if z + 1 <= limit}
        rhs = {z for z in sets[composite] if z <= limit}
        if lhs != rhs:
            bad += 1
            first = first or (tag, composite, sorted(lhs ^ rhs)[:4])
    results.append(_result(
        f"class + 1 equals its two-letter composite set, up to {limit}", bad,
        len(offset_pairs), first,
    ))

    bad = 0
    first = None
    for n in range(n34 + 1):
        pos = Position([3, 4, n], INF)
        rec = classify_34n(n)
        if solver.outcome(pos) != "N":
            bad += 1
            first = first or (n, "not N")
            continue
        child = pos.take(rec.winning_moves[0])
        if solver.outcome(child) != "P":
            bad += 1
            first = first or (n, "suggested move not winning")
    results.append(_result(
        f"(3, 4, n) unbounded is N with a winning class move, n <= {n34}", bad,
        n34 + 1, first,
    ))

    # Each family: (small piles, first bound, class set as (name, shift)).
    families = [
        ((0, 1), 2, ("B", 1)),
        ((0, 1), 6, ("BB", 4)),
        ((0, 2), 4, ("AB", 1)),
        ((0, 3), 2, ("AB", 0)),
        ((1, 1), 2, ("B", 2)),
        ((1, 1), 4, ("BB", 0)),
        ((1, 2), 2, ("BB", 1)),
        ((1, 3), 2, ("AB", 2)),
        ((2, 2), 2, ("B", 2)),
        ((2, 2), 4, ("BB", 0)),
        ((2, 3), 2, ("AB", 1)),
        ((3, 3), 2, ("B", 2)),
        ((2, 4), 2, ("AB", 2)),
        ((1, 4), 4, ("AB", 1)),
        ((0, 4), 6, ("BB", 1)),
    ]
    bad = total = 0
    first = None
    for (u, v), r, (name, c) in families:
        for z in sorted(shift(name, c)):
            if z > fam_cap:
                break
            total += 1
            if solver.outcome(Position([u, v, z], r)) != "P":
                bad += 1
                first = first or (u, v, z, r)
    results.append(_result(
        f"claimed three-pile P families hold, third pile <= {fam_cap}", bad,
        total, first,
    ))
    return results


def _suite_words(_solver: Solver, opts) -> list[tuple[str, bool, str]]:
    limit = opts["bound"] if opts["bound"] is not None else 10_000
    results = []

    w1, w2, w3 = (
        fib_word_concat(limit), fib_word_zeck(limit), fib_word_morphism(limit)
    )
    agree = w1 == w2 == w3
    results.append((
        f"three constructions agree to {limit} letters", agree,
        "identical" if agree else "diverged",
    ))

    bad = total = 0
    first = None
    for a in range(1, 13):
        members = set(ps_set(a, limit).members)
        for n in range(limit + 1):
            total += 1
            if in_ps(a, n) != (n in members):
                bad += 1
                first = first or (a, n)
    results.append(_result(
        f"term test = enumeration for partial sums, a <= 12, n <= {limit}",
        bad, total, first,
    ))

    expected = [
        ((8, -1, 8, 18),
         (13, 8, 13, 21, 13, 8, 13, 13, 8, 13, 21, 13, 8, 13, 21, 13, 8, 13)),
        ((8, -3, 8, 18),
         (8, 5, 8, 5, 3, 5, 8, 5, 8, 8, 5, 8, 5, 3, 5, 8, 5, 8)),
        ((8, -2, 9, 15),
         (8, 5, 8, 13, 8, 5, 8, 8, 5, 8, 13, 8, 5, 8, 13)),
    ]
    bad = 0
    first = None
    for (p, alpha, x, n), want in expected:
        if hybrid_word(p, alpha, x, n) != want:
            bad += 1
            first = first or (p, alpha, x)
    sigma_expected = [
        ((26, 12, 100), (0, 13, 21, 34, 55, 68, 76, 89)),
        ((26, 5, 60), (0, 13, 21, 34, 42, 47, 55)),
    ]
    for (m, r, bound), want in sigma_expected:
        if sigma(m, r, bound).members != want:
            bad += 1
            first = first or (m, r)
    results.append(_result(
        "worked hybrid prefixes and classifying sets reproduced", bad,
        len(expected) + len(sigma_expected), first,
    ))

    stable = sturm_letters(5, 100) == sturm_letters(5, 200)[:100] and (
        hybrid_word(8, -2, 8, 50) == hybrid_word(8, -2, 8, 100)[:50]
    )
    results.append((
        "prefixes never change when a word is extended", stable,
        "stable" if stable else "prefix rewritten",
    ))
    return results


def _suite_lemma3(_solver: Solver, opts) -> list[tuple[str, bool, str]]:
    limit = opts["bound"] if opts["bound"] is not None else 10_000
    bad = total = 0
    first = None
    for a in range(1, 13):
        upper = set(ps_set(a, limit).members)
        for b in range(1, a + 1):
            total += 1
            lower = set(ps_set(b, limit).members)
            if not upper <= lower:
                bad += 1
                first = first or (a, b, sorted(upper - lower)[:3])
    return [_result(
        f"partial-sum sets nest downward, levels <= 12, up to {limit}", bad,
        total, first,
    )]


def _suite_lemma4(_solver: Solver, opts) -> list[tuple[str, bool, str]]:
    limit = opts["bound"] if opts["bound"] is not None else 10_000
    bad = total = 0
    first = None
    for a in range(1, 13):
        for n in range(limit + 1):
            if in_ps(a, n) and not in_ps(a + 1, n):
                total += 1
                if not in_ps(a + 2, n - fib(a + 1)):
                    bad += 1
                    first = first or (a, n)
    return [_result(
        f"dropping one top letter lands two levels down, a <= 12, n <= {limit}",
        bad, total, first,
    )]


def _suite_lemma7(_solver: Solver, opts) -> list[tuple[str, bool, str]]:
    limit = opts["bound"] if opts["bound"] is not None else 10_000
    bad = total = 0
    first = None
    for n in range(2, limit + 1):
        smallest = z_1(n)
        for k in range(1, int(smallest)):
            total += 1
            if z_1(n - k) > 2 * k:
                bad += 1
                first = first or (n, k)
    results = [_result(
        f"taking k below the smallest term leaves a term <= 2k, n <= {limit}",
        bad, total, first,
    )]

    bad = total = 0
    first = None
    for t in range(2, 21):
        for s in range(1, 21):
            total += 1
            if sum(fib(t + j) for j in range(s)) != fib(t + s + 1) - fib(t + 1):
                bad += 1
                first = first or (t, s)
    results.append(_result(
        "consecutive-sum identity, 2 <= t <= 20, 1 <= s <= 20", bad, total,
        first,
    ))
    return results


def _suite_exceptional(solver: Solver, opts) -> list[tuple[str, bool, str]]:
    positions = [(1, 47, 72), (8, 9, 53)]
    if opts["long_run"]:
        positions += [(2, 41, 139), (2, 93, 345)]
    results = []
    for piles in positions:
        start = time.monotonic()
        outcome = solver.outcome(Position(piles, INF))
        elapsed = time.monotonic() - start
        results.append((
            f"{piles} with unbounded first move is P", outcome == "P",
            f"outcome {outcome} in {elapsed:.1f}s, memo {solver.memo_size}",
        ))
    return results


_SUITES = {
    "one-pile": _suite_one_pile,
    "two-pile": _suite_two_pile,
    "pow2": _suite_pow2,
    "table1": _suite_table1,
    "beatty": _suite_beatty,
    "words": _suite_words,
    "lemma3": _suite_lemma3,
    "lemma4": _suite_lemma4,
    "lemma7": _suite_lemma7,
    "exceptional": _suite_exceptional,
}


@main.command()
@click.argument("suite", type=click.Choice(sorted(_SUITES) + ["all"]))
@click.option("--m", type=click.IntRange(0), default=60, show_default=True,
              help="Smaller-pile cap for the two-pile grid.")
@click.option("--k", type=click.IntRange(0), default=120, show_default=True,
              help="Pile-difference cap for the two-pile grid.")
@click.option("--r", type=click.IntRange(1), default=60, show_default=True,
              help="Bound cap for grid sweeps.")
@click.option("--n", type=click.IntRange(0), default=None,
              help="Size cap where a suite takes one (piles, third pile...).")
@click.option("--bound", type=click.IntRange(0), default=None,
              help="Range cap for word and class suites.")
@click.option("--max-n", type=click.IntRange(0), default=15, show_default=True,
              help="Table corner size for the table1 suite.")
@click.option("--cap", type=click.IntRange(1), default=1000, show_default=True,
              help="Search ceiling per table cell.")
@click.option("--long", "long_run", is_flag=True,
              help="Include the slow exceptional positions.")
@_budget_guard
def verify(suite, m, k, r, n, bound, max_n, cap, long_run):
    """Run one verification suite, or all of them."""
    opts = {
        "m": m, "k": k, "r": r, "n": n, "bound": bound, "max_n": max_n,
        "cap": cap, "long_run": long_run,
    }
    solver = Solver(_env_budget())
    names = list(_SUITES) if suite == "all" else [suite]
    failed = 0
    for name in names:
        for label, ok, detail in _SUITES[name](solver, opts):
            status = "PASS" if ok else "FAIL"
            click.echo(f"{status} [{name}] {label}: {detail}")
            failed += 0 if ok else 1
    if failed:
        click.echo(f"{failed} check(s) failed", err=True)
        sys.exit(EXIT_FAILURE)


# --- serve -----------------------------------------------------------------------

@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--static-dir", type=click.Path(file_okay=False, exists=True),
              default=None, help="Directory served at / (the built UI).")
@click.option("--snapshot", type=click.Path(dir_okay=False), default=None,
              help="JSON file for session state across restarts.")
@click.option("--session-ttl", type=float, default=3600.0, show_default=True,
              help="Seconds an idle session survives.")
def serve(host, port, static_dir, snapshot, session_ttl):
    """Serve the play API (and optionally the built UI) over HTTP."""
    import uvicorn

    from .service import create_app

    app = create_app(
        static_dir=static_dir,
        snapshot_path=snapshot,
        session_ttl=session_ttl,
        budget=_env_budget(),
    )
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
