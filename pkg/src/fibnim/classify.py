"""Closed-form position classifiers, each cross-checkable against the solver.

Every function here decides a position family by arithmetic on Zeckendorf
terms, partial-sum sets, or nim bits, without any game-tree search.  The
test suite drives each one against the exhaustive solver; disagreement on
any grid is a bug in exactly one of the two, which is the point of keeping
both routes alive.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fibcore import (
    INF,
    ExtNat,
    beatty_class,
    fib,
    fib_bracket,
    fib_index,
    is_fib,
    is_finite,
    nim_sum,
    smallest_bit,
    z_1,
    z_1_index,
    z_k,
)
from .solver import Move, OutcomeRecord, Position
from .words import sigma


class NotApplicable(ValueError):
    """The position is outside the family this classifier decides."""


# --- one pile -------------------------------------------------------------------

def classify_classic(n: int) -> str:
    """Single pile, first move at most n - 1 stones: who wins with n >= 2.

    'second' exactly when n is a Fibonacci number; equivalent to the
    bounded game ({n}; n - 1).
    """
    if n < 2:
        raise NotApplicable(f"the classic game needs n >= 2, got {n}")
    return "second" if is_fib(n) else "first"


def classify_one_pile(n: int, r: ExtNat) -> OutcomeRecord:
    """One bounded pile: P exactly when the smallest term of n exceeds r.

    The winning take from an N position is z_1(n).  For finite r the verdict
    is double-checked in word form: P exactly when n is a partial sum of the
    word on (F(t+1), F(t)) for F(t) <= r < F(t+1), which is z_1(n) >= F(t+1).
    """
    if n < 0:
        raise ValueError("pile must be nonnegative")
    if is_finite(r) and r < 0:
        raise ValueError("bound must be nonnegative")
    if n == 0 or r == 0:
        return OutcomeRecord(Position([n], r), "P", (), "classify-one-pile")
    win = z_1(n) > r
    if is_finite(r):
        word_form = z_1(n) >= fib(fib_bracket(r) + 1)
        if word_form != win:
            raise AssertionError(f"one-pile term/word forms disagree at ({n}, {r})")
    moves = () if win else (Move(n, int(z_1(n))),)
    return OutcomeRecord(
        Position([n], r), "P" if win else "N", moves, "classify-one-pile"
    )


# --- two piles, Zeckendorf route ---------------------------------------------------

@dataclass(frozen=True)
class TwoPileCase:
    """Which branch of the five-way classification fired, with its data."""

    tag: str          # "1", "2", "3", "4a", "4b", "5a", "5b"
    t: int            # F(t) <= r < F(t+1)
    s: int | None = None   # staircase count for case 4
    d: int | None = None   # gap to the second term for case 5


def classify_two_pile_zeck(m: int, k: int, r: int) -> tuple[str, TwoPileCase]:
    """Outcome of (m, m + k; r) from the Zeckendorf terms of the difference.

    The removal bound only matters through its bracket t.  Writing z1, z2
    for the two smallest terms of k (INF when missing, so k = 0 lands in
    case 2):

      1. z1 <= F(t):             N (the small term is takeable)
      2. z1 >= F(t+2):           P
      3. z1 = F(t+1), m < F(t):  P
      4. z1 = F(t+1), m >= F(t), and z2 misses the staircase:
         with F(t) + ... + F(t+s-1) <= m < F(t) + ... + F(t+s),
         N for s odd, P for s even
      5. z1 = F(t+1), z2 = F(t+d) on the staircase: N for d odd, P even
    """
    if m < 0 or k < 0:
        raise ValueError("piles must be nonnegative")
    if not is_finite(r) or r < 1:
        raise NotApplicable("the two-pile classification needs a finite bound >= 1")
    t = fib_bracket(r)
    z1 = z_1(k)
    if z1 <= fib(t):
        return "N", TwoPileCase("1", t)
    if z1 >= fib(t + 2):
        return "P", TwoPileCase("2", t)
    # z1 is a Fibonacci value strictly between F(t) and F(t+2).
    if m < fib(t):
        return "P", TwoPileCase("3", t)
    z2 = z_k(k, 2)
    if z2 == INF:
        d = None
    else:
        d = fib_index(int(z2)) - t
    # F(t) + ... + F(t+j-1) telescopes to F(t+j+1) - F(t+1).
    if d is not None and m >= fib(t + d - 1) - fib(t + 1):
        return ("N", TwoPileCase("5a", t, d=d)) if d % 2 else (
            "P",
            TwoPileCase("5b", t, d=d),
        )
    s = 1
    while m >= fib(t + s + 2) - fib(t + 1):
        s += 1
    return ("N", TwoPileCase("4a", t, s=s)) if s % 2 else (
        "P",
        TwoPileCase("4b", t, s=s),
    )


class NoWinningMove(Exception):
    """Raised when a winning move is requested from a P position."""


def suggest_move_two_pile(m: int, k: int, r: int) -> Move:
    """A winning move for an N position (m, m + k; r), k > 0 from case 1.

    Case 1 removes z_1(k) from the larger pile, except when the next term
    sits exactly two above and the smaller pile is big enough to spoil
    that: then F(e-1) comes off the smaller pile.  Cases 4/5 take F(t)
    from the smaller pile.
    """
    outcome, case = classify_two_pile_zeck(m, k, r)
    if outcome == "P":
        raise NoWinningMove(f"({m}, {m + k}; {r}) is a P position")
    if case.tag == "1":
        e = z_1_index(k)
        z2 = z_k(k, 2)
        if z2 == fib(e + 2) and m >= fib(e + 1):
            return Move(m, fib(e - 1))
        return Move(m + k, fib(e))
    # cases 4a / 5a
    return Move(m, fib(case.t))


def classify_two_pile_word(m: int, k: int, r: int) -> str:
    """Outcome of (m, m + k; r) by partial-sum membership, m >= 1.

    P exactly when k lies in the classifying set for (m, r); a completely
    different route from the Zeckendorf case split above.
    """
    if m < 1:
        raise NotApplicable("the word route needs m >= 1")
    if k < 0:
        raise ValueError("k must be nonnegative")
    return "P" if k in sigma(m, r, k) else "N"


# --- three piles {3, 4, n} -----------------------------------------------------------

_CLASS_MOVES = {
    # class of n -> (pile to play, stones to take), landing in a P family
    "B-2": (4, 1),    # -> (3, 3, n; 2)
    "AB-2": (3, 1),   # -> (2, 4, n; 2)
    "AB-1": (3, 2),   # -> (1, 4, n; 4)
    "BB-1": (3, 3),   # -> (0, 4, n; 6)
}


def classify_34n(n: int) -> OutcomeRecord:
    """(3, 4, n) with unbounded first removal is always N; gives the move.

    Which small-pile removal wins depends only on which of the four golden
    ratio classes n falls in.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    pile, take = _CLASS_MOVES[beatty_class(n)]
    return OutcomeRecord(
        Position([3, 4, n], INF), "N", (Move(pile, take),), "classify-34n"
    )


# --- power-of-two dynamic -------------------------------------------------------------

def classify_pow2(piles, r: ExtNat) -> OutcomeRecord:
    """Any number of piles, next bound = amount taken (dynamic 1).

    P exactly when the lowest set bit of the pile XOR exceeds r; a zero XOR
    counts as exceeding every bound, including the unbounded first move.
    The winning move takes exactly that lowest bit from any pile the
    standard nim move could play.
    """
    piles = tuple(piles)
    x = nim_sum(piles)
    pos = Position(piles, r, dynamic=1)
    if x == 0 or smallest_bit(x) > r:
        return OutcomeRecord(pos, "P", (), "classify-pow2")
    bit = int(smallest_bit(x))
    target = next(v for v in piles if v ^ x < v)
    return OutcomeRecord(pos, "N", (Move(target, bit),), "classify-pow2")


# --- dispatch ---------------------------------------------------------------------------

def applicable_verdicts(pos: Position) -> list[OutcomeRecord]:
    """Every closed-form verdict that applies to this position."""
    verdicts: list[OutcomeRecord] = []
    live = [v for v in pos.piles if v]
    if pos.dynamic == 1:
        verdicts.append(classify_pow2(pos.piles, pos.bound))
        return verdicts
    if len(live) <= 1:
        n = live[0] if live else 0
        rec = classify_one_pile(n, pos.bound if n else 0)
        verdicts.append(
            OutcomeRecord(pos, rec.outcome, rec.winning_moves, rec.provenance)
        )
        return verdicts
    if len(live) == 2 and pos.bound >= 1:
        m, bigger = live[0], live[1]
        k = bigger - m
        out, _ = classify_two_pile_zeck(m, k, pos.bound)
        moves = ()
        if out == "N":
            moves = (suggest_move_two_pile(m, k, pos.bound),)
        verdicts.append(OutcomeRecord(pos, out, moves, "classify-two-pile-zeck"))
        word_out = classify_two_pile_word(m, k, pos.bound)
        verdicts.append(OutcomeRecord(pos, word_out, (), "classify-two-pile-word"))
        return verdicts
    n = _as_34n(live)
    if n is not None and pos.bound == max(live):
        rec = classify_34n(n)
        verdicts.append(
            OutcomeRecord(pos, rec.outcome, rec.winning_moves, rec.provenance)
        )
    return verdicts


def _as_34n(live: list[int]) -> int | None:
    """The n for which live is the multiset {3, 4, n}, if it is one."""
    if len(live) != 3:
        return None
    rest = list(live)
    for want in (3, 4):
        if want not in rest:
            return None
        rest.remove(want)
    return rest[0]
