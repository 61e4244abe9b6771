"""Integer groundwork: Fibonacci numbers, Zeckendorf representations, nim bits.

Everything here is exact integer arithmetic.  The one unusual citizen is
``INF``, a sentinel that compares strictly greater than every int and equal
only to itself.  It stands in for "no such term" (``z_k`` past the end of a
representation) and "no removal bound" (unbounded first move), so downstream
comparisons read the same whether a value is finite or not.  ``INF`` supports
ordering and equality only; arithmetic on it is deliberately an error.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass


# --- extended naturals -------------------------------------------------------

class _Infinity:
    """Sentinel greater than every int.  Singleton; compare, never compute."""

    __slots__ = ()

    def __lt__(self, other):
        if isinstance(other, (int, _Infinity)):
            return False
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, _Infinity):
            return True
        if isinstance(other, int):
            return False
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, _Infinity):
            return False
        if isinstance(other, int):
            return True
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, (int, _Infinity)):
            return True
        return NotImplemented

    def __eq__(self, other):
        return isinstance(other, _Infinity)

    def __hash__(self):
        return hash(math.inf)

    def __repr__(self):
        return "INF"

    def __reduce__(self):  # pickle back to the singleton
        return (_restore_inf, ())


def _restore_inf():
    return INF


INF = _Infinity()

ExtNat = int | _Infinity


def is_finite(value: ExtNat) -> bool:
    return isinstance(value, int)


# --- Fibonacci numbers -------------------------------------------------------

MAX_FIB_INDEX = 92  # F(92) is the largest Fibonacci number below 2**63


def _build_fib_table(last_index: int) -> tuple[int, ...]:
    table = [0, 1, 1]
    while len(table) <= last_index:
        table.append(table[-1] + table[-2])
    return tuple(table)


# One extra entry past MAX_FIB_INDEX so brackets near the top stay decidable.
_FIB = _build_fib_table(MAX_FIB_INDEX + 1)


def fib(i: int) -> int:
    """F(i) with F(1) = F(2) = 1.  Valid for 1 <= i <= 92."""
    if not 1 <= i <= MAX_FIB_INDEX:
        raise ValueError(f"Fibonacci index out of range: {i}")
    return _FIB[i]


def fib_bracket(r: int) -> int:
    """The unique t >= 2 with F(t) <= r < F(t+1); requires r >= 1.

    Index 2 is the chosen bracket for r = 1, so brackets are unambiguous
    even though F(1) = F(2).
    """
    if r < 1:
        raise ValueError(f"fib_bracket requires r >= 1, got {r}")
    if r >= _FIB[MAX_FIB_INDEX + 1]:
        raise ValueError(f"value exceeds the supported Fibonacci range: {r}")
    # First index whose entry exceeds r, minus one; table is sorted from F(2).
    return bisect_right(_FIB, r, lo=2) - 1

def fib_index(value: int) -> int:
    """Index i >= 2 with F(i) == value; rejects non-Fibonacci input."""
    i = fib_bracket(value)
    if _FIB[i] != value:
        raise ValueError(f"not a Fibonacci number: {value}")
    return i


def is_fib(value: int) -> bool:
    return value >= 1 and _FIB[fib_bracket(value)] == value


# --- Zeckendorf representations ----------------------------------------------

@dataclass(frozen=True)
class ZeckRep:
    """Zeckendorf representation: indices i >= 2, ascending, nonconsecutive."""

    indices: tuple[int, ...]

    @property
    def terms(self) -> tuple[int, ...]:
        return tuple(_FIB[i] for i in self.indices)

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.indices)


def zeckendorf(n: int) -> ZeckRep:
    """Greedy decomposition of n into nonconsecutive Fibonacci terms.

    The empty representation is returned for n = 0.
    """
    if n < 0:
        raise ValueError(f"zeckendorf requires n >= 0, got {n}")
    indices: list[int] = []
    while n > 0:
        i = fib_bracket(n)
        indices.append(i)
        n -= _FIB[i]
    indices.reverse()
    return ZeckRep(tuple(indices))


def z_k(n: int, k: int) -> ExtNat:
    """The k-th smallest Zeckendorf term of n, or INF when there is none.

    In particular z_k(0, k) = INF for every k: zero has no terms.
    """
    if k < 1:
        raise ValueError(f"z_k requires k >= 1, got {k}")
    rep = zeckendorf(n)
    if len(rep.indices) < k:
        return INF
    return _FIB[rep.indices[k - 1]]


def z_1(n: int) -> ExtNat:
    """Smallest Zeckendorf term of n (INF for n = 0)."""
    if n < 0:
        raise ValueError(f"z_1 requires n >= 0, got {n}")
    if n == 0:
        return INF
    last = 0
    while n > 0:
        last = fib_bracket(n)
        n -= _FIB[last]
    return _FIB[last]


def z_1_index(n: int) -> int:
    """Index of the smallest Zeckendorf term; requires n >= 1."""
    if n < 1:
        raise ValueError(f"z_1_index requires n >= 1, got {n}")
    last = 0
    while n > 0:
        last = fib_bracket(n)
        n -= _FIB[last]
    return last


# --- nim bits ----------------------------------------------------------------

def nim_sum(piles) -> int:
    """XOR over the pile sizes."""
    total = 0
    for p in piles:
        if p < 0:
            raise ValueError(f"pile sizes must be nonnegative, got {p}")
        total ^= p
    return total


def smallest_bit(n: int) -> ExtNat:
    """Lowest set bit of n as a power of two; INF for n = 0."""
    if n < 0:
        raise ValueError(f"smallest_bit requires n >= 0, got {n}")
    if n == 0:
        return INF
    return n & -n


# --- golden-ratio Beatty classes ----------------------------------------------

# The four residue classes below partition the nonnegative integers.  Each is
# a shifted partial-sum set of a Fibonacci word, which collapses to a
# smallest-Zeckendorf-term threshold on a shifted argument (membership in the
# partial sums of the word on (F(a+1), F(a)) is exactly z_1 >= F(a+1)).
BEATTY_CLASS_NAMES = ("B-2", "AB-2", "AB-1", "BB-1")

_BEATTY_TESTS = (
    ("B-2", 0, 3),    # z_1(n)     >= F(4) = 3
    ("AB-2", 1, 5),   # z_1(n - 1) >= F(5) = 5
    ("AB-1", 2, 5),   # z_1(n - 2) >= F(5) = 5
    ("BB-1", 4, 8),   # z_1(n - 4) >= F(6) = 8
)


def beatty_class(n: int) -> str:
    """Which of the four classes n >= 0 belongs to.

    A shifted argument that would go negative simply fails that test, which
    is what makes the classification total.
    """
    if n < 0:
        raise ValueError(f"beatty_class requires n >= 0, got {n}")
    hits = [name for name, shift, floor in _BEATTY_TESTS
            if n >= shift and z_1(n - shift) >= floor]
    if len(hits) != 1:
        raise AssertionError(f"Beatty classes failed to partition at {n}: {hits}")
    return hits[0]


def beatty_a(n: int) -> int:
    """floor(phi * n), computed exactly."""
    if n < 0:
        raise ValueError(f"beatty_a requires n >= 0, got {n}")
    # 5 n^2 is never a perfect square for n >= 1, so the floor is safe.
    return (n + math.isqrt(5 * n * n)) // 2


def beatty_b(n: int) -> int:
    """floor(phi^2 * n) = floor(phi * n) + n."""
    return beatty_a(n) + n
