"""Exhaustive solver for take-from-one-pile games with a global move bound.

A position is a multiset of piles plus the current removal bound; taking s
stones resets the bound to ``dynamic * s`` for the whole table, not just the
pile played.  ``dynamic`` is 2 for the Fibonacci game and 1 for the
power-of-two game.  The player with no legal move loses.

The solver is a memoized depth-first search written with an explicit stack,
so recursion depth never limits pile sizes.  Memo keys canonicalize a
position to what its option set depends on: zero piles dropped, piles
sorted, and the bound clamped to the largest pile (any larger bound, the
unbounded first move included, allows exactly the same removals).
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .fibcore import INF, ExtNat, is_finite

# Piles are packed into 14-bit digits of one int key; plenty for the pile
# sizes this search can exhaust in practice.
_PILE_BITS = 14
_PILE_LIMIT = 1 << _PILE_BITS

DEFAULT_MEMO_BUDGET = 50_000_000

MEMO_BUDGET_ENV_VAR = "FIBNIM_MEMO_BUDGET"


class MemoBudgetExceeded(RuntimeError):
    """The solve would need more transposition entries than allowed."""


class PileRangeError(ValueError):
    """A pile is too large for the packed memo key."""


# --- positions and moves -------------------------------------------------------

@dataclass(frozen=True, order=True)
class Move:
    """Take ``take`` stones from a pile currently holding ``pile_value``."""

    pile_value: int
    take: int


@dataclass(frozen=True)
class Position:
    """Canonical position: piles sorted ascending, bound already clamped.

    The constructor accepts piles in any order and an int or INF bound and
    normalizes: piles are sorted (zeros kept; they matter for display, not
    for play), and the bound becomes min(bound, largest pile), or 0 when no
    stones remain.  Two positions with the same option tree compare equal.
    """

    piles: tuple[int, ...]
    bound: int
    dynamic: int = 2

    def __init__(self, piles: Iterable[int], bound: ExtNat, dynamic: int = 2):
        piles = tuple(sorted(piles))
        if not piles:
            raise ValueError("a position needs at least one pile")
        if piles[0] < 0:
            raise ValueError("pile sizes must be nonnegative")
        if dynamic not in (1, 2):
            raise ValueError(f"dynamic must be 1 or 2, got {dynamic}")
        top = piles[-1]
        if is_finite(bound):
            if bound < 0:
                raise ValueError("bound must be nonnegative")
            bound = min(bound, top)
        else:
            bound = top
        object.__setattr__(self, "piles", piles)
        object.__setattr__(self, "bound", bound)
        object.__setattr__(self, "dynamic", dynamic)

    def take(self, move: Move) -> "Position":
        """The position after playing ``move``."""
        if move not in legal_moves(self):
            raise ValueError(f"illegal move {move} in {self}")
        idx = self.piles.index(move.pile_value)
        piles = list(self.piles)
        piles[idx] = move.pile_value - move.take
        return Position(piles, self.dynamic * move.take, self.dynamic)


def legal_moves(pos: Position) -> list[Move]:
    """All (pile value, take) pairs, each distinct pile value listed once."""
    moves = []
    seen = 0
    for v in pos.piles:
        if v == 0 or v == seen:
            continue
        seen = v
        for s in range(1, min(pos.bound, v) + 1):
            moves.append(Move(v, s))
    return moves


# --- the solver ------------------------------------------------------------------

def _canonical(pos: Position) -> tuple[tuple[int, ...], int]:
    piles = tuple(v for v in pos.piles if v)
    bound = pos.bound if piles else 0
    return piles, bound


def _pack(piles: tuple[int, ...], bound: int, dynamic: int) -> int:
    key = dynamic
    for v in piles:
        key = (key << _PILE_BITS) | v
    return (key << _PILE_BITS) | bound


class Solver:
    """Shared-memo solver; one instance may serve many queries.

    Results are pure functions of the position, so concurrent use is safe in
    the sense that racing solves only ever publish identical values for the
    same key.  The memo is capped: crossing ``budget`` entries raises
    MemoBudgetExceeded rather than thrashing quietly.
    """

    def __init__(self, budget: int = DEFAULT_MEMO_BUDGET):
        if budget < 1:
            raise ValueError("budget must be positive")
        self._memo: dict[int, bool] = {}
        self._budget = budget

    @property
    def memo_size(self) -> int:
        return len(self._memo)

    def outcome(self, pos: Position) -> str:
        """'N' when the player to move wins, 'P' otherwise."""
        piles, bound = _canonical(pos)
        return "N" if self._solve(piles, bound, pos.dynamic) else "P"

    def winning_moves(self, pos: Position) -> list[Move]:
        """Every legal move to a P position, sorted by (pile value, take)."""
        piles, bound = _canonical(pos)
        dyn = pos.dynamic
        wins = []
        for move in legal_moves(pos):
            child = _child(piles, bound, move.pile_value, move.take, dyn)
            if not self._solve(*child, dyn):
                wins.append(move)
        return wins

    # -- core search --

    def _solve(self, piles: tuple[int, ...], bound: int, dynamic: int) -> bool:
        if any(v >= _PILE_LIMIT for v in piles):
            raise PileRangeError(f"pile beyond solver range {_PILE_LIMIT - 1}")
        if not piles or bound == 0:
            return False
        memo = self._memo
        budget = self._budget
        root = _pack(piles, bound, dynamic)
        cached = memo.get(root)
        if cached is not None:
            return cached
        # Frame: [key, piles, bound, pile cursor, next take, rest cache,
        #         pending child key].  The cursors let a frame resume where
        #         it paused when a child had to be solved first.
        stack = [[root, piles, bound, 0, 1, None, None]]
        while stack:
            frame = stack[-1]
            key, fpiles, fbound = frame[0], frame[1], frame[2]
            verdict = None
            if frame[6] is not None:
                if memo[frame[6]] is False:
                    verdict = True
                frame[6] = None
            if verdict is None:
                i, s, rest = frame[3], frame[4], frame[5]
                npiles = len(fpiles)
                while i < npiles:
                    v = fpiles[i]
                    if i > 0 and v == fpiles[i - 1]:
                        i += 1
                        s = 1
                        rest = None
                        continue
                    if s > (fbound if fbound < v else v):
                        i += 1
                        s = 1
                        rest = None
                        continue
                    if rest is None:
                        rest = fpiles[:i] + fpiles[i + 1 :]
                    nv = v - s
                    if nv:
                        j = bisect_left(rest, nv)
                        cpiles = rest[:j] + (nv,) + rest[j:]
                    elif rest:
                        cpiles = rest
                    else:
                        verdict = True  # took the last stones
                        break
                    nb = dynamic * s
                    top = cpiles[-1]
                    if nb > top:
                        nb = top
                    ckey = _pack(cpiles, nb, dynamic)
                    child = memo.get(ckey)
                    if child is False:
                        verdict = True
                        break
                    s += 1
                    if child is None:
                        frame[3], frame[4], frame[5] = i, s, rest
                        frame[6] = ckey
                        stack.append([ckey, cpiles, nb, 0, 1, None, None])
                        break
                else:
                    verdict = False  # every option leads to N
            if verdict is None:
                continue  # descended into a child; resume this frame later
            if key not in memo:
                if len(memo) >= budget:
                    raise MemoBudgetExceeded(
                        f"memo budget of {budget} entries exhausted"
                    )
                memo[key] = verdict
            stack.pop()
        return memo[root]


def _child(
    piles: tuple[int, ...], bound: int, value: int, take: int, dynamic: int
) -> tuple[tuple[int, ...], int]:
    i = piles.index(value)
    rest = piles[:i] + piles[i + 1 :]
    nv = value - take
    if nv:
        j = bisect_left(rest, nv)
        rest = rest[:j] + (nv,) + rest[j:]
    if not rest:
        return rest, 0
    return rest, min(dynamic * take, rest[-1])


# --- derived queries ---------------------------------------------------------------

def engine_move(
    pos: Position,
    solver: Solver | None = None,
    losing_policy: Callable[[Position], Move] | None = None,
) -> Move:
    """The move the engine plays: best when winning, a stall otherwise.

    From an N position this is the lexicographically smallest winning
    (pile value, take).  From a P position no move helps, so the default
    policy concedes ground slowly: take one stone from the largest pile.
    """
    if not legal_moves(pos):
        raise ValueError("no legal move available")
    solver = solver or Solver()
    wins = solver.winning_moves(pos)
    if wins:
        return wins[0]
    if losing_policy is not None:
        return losing_policy(pos)
    return Move(pos.piles[-1], 1)


class NoComplement:
    """Marker results for a complementary-value search."""


@dataclass(frozen=True)
class NoneUpTo(NoComplement):
    cap: int


@dataclass(frozen=True)
class NoneByTheorem(NoComplement):
    reason: str = "every completion is an N position"


def complementary_value(
    piles: Iterable[int], cap: int, solver: Solver | None = None
) -> int | NoneUpTo:
    """Smallest b <= cap making (piles + {b}; unbounded) a P position.

    Requires cap >= max(piles): the interesting scan range always includes
    the mirror point.  Returns NoneUpTo(cap) when no b works.
    """
    piles = tuple(sorted(piles))
    if not piles:
        raise ValueError("need at least one pile")
    if cap < piles[-1]:
        raise ValueError(f"cap {cap} below largest pile {piles[-1]}")
    solver = solver or Solver()
    for b in range(cap + 1):
        if solver.outcome(Position(piles + (b,), INF)) == "P":
            return b
    return NoneUpTo(cap)


def comp_table(
    max_n: int, cap: int, solver: Solver | None = None
) -> list[list[int | NoneUpTo | NoneByTheorem]]:
    """Complementary values for every pile pair (i, j) with i, j <= max_n.

    The pair {3, 4} is completed by no third pile at all; that cell is
    marked NoneByTheorem instead of burning the scan on it.
    """
    if max_n < 0 or cap < max_n:
        raise ValueError("need 0 <= max_n <= cap")
    solver = solver or Solver()
    table: list[list] = [[None] * (max_n + 1) for _ in range(max_n + 1)]
    for i in range(max_n + 1):
        for j in range(i, max_n + 1):
            if (i, j) == (3, 4):
                entry = NoneByTheorem()
            else:
                entry = complementary_value((i, j), cap, solver)
            table[i][j] = entry
            table[j][i] = entry
    return table


# --- outcome records -----------------------------------------------------------------

@dataclass(frozen=True)
class OutcomeRecord:
    """A solved position, its verdict, and where the verdict came from."""

    position: Position
    outcome: str
    winning_moves: tuple[Move, ...] = ()
    provenance: str = "oracle"

    def to_line(self) -> str:
        piles = ",".join(str(v) for v in self.position.piles)
        moves = ";".join(f"{m.pile_value}:{m.take}" for m in self.winning_moves)
        return (
            f"piles={piles} bound={self.position.bound} "
            f"dyn={self.position.dynamic} outcome={self.outcome} "
            f"moves={moves} prov={self.provenance}"
        )

    def to_dict(self) -> dict:
        return {
            "piles": list(self.position.piles),
            "bound": self.position.bound,
            "dynamic": self.position.dynamic,
            "outcome": self.outcome,
            "winning_moves": [
                {"pile": m.pile_value, "take": m.take} for m in self.winning_moves
            ],
            "provenance": self.provenance,
        }


def record_from_line(line: str) -> OutcomeRecord:
    fields = {}
    for token in line.split():
        name, _, value = token.partition("=")
        fields[name] = value
    try:
        piles = [int(v) for v in fields["piles"].split(",")]
        bound: ExtNat = INF if fields["bound"] == "inf" else int(fields["bound"])
        dynamic = int(fields["dyn"])
        outcome = fields["outcome"]
        moves = tuple(
            Move(int(p), int(s))
            for p, s in (m.split(":") for m in fields["moves"].split(";") if m)
        )
    except (KeyError, ValueError) as exc:
        raise ValueError(f"malformed outcome record: {line!r}") from exc
    if outcome not in ("P", "N"):
        raise ValueError(f"malformed outcome record: {line!r}")
    return OutcomeRecord(
        Position(piles, bound, dynamic),
        outcome,
        moves,
        fields.get("prov", "oracle"),
    )


def record_from_dict(data: dict) -> OutcomeRecord:
    bound = data["bound"]
    if bound == "inf":
        bound = INF
    return OutcomeRecord(
        Position(data["piles"], bound, data.get("dynamic", 2)),
        data["outcome"],
        tuple(Move(m["pile"], m["take"]) for m in data.get("winning_moves", ())),
        data.get("provenance", "oracle"),
    )


def solve_record(pos: Position, solver: Solver | None = None) -> OutcomeRecord:
    """Solve a position and bundle the verdict with its winning moves."""
    solver = solver or Solver()
    outcome = solver.outcome(pos)
    wins = tuple(solver.winning_moves(pos)) if outcome == "N" else ()
    return OutcomeRecord(pos, outcome, wins, "oracle")
