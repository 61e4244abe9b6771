"""Fibonacci nim with a global move dynamic: solver, classifiers, words, play service."""

from .fibcore import INF, fib, fib_bracket, zeckendorf, z_1, z_k, nim_sum, smallest_bit
from .solver import Position, Move, Solver, legal_moves, engine_move

__all__ = [
    "INF",
    "fib",
    "fib_bracket",
    "zeckendorf",
    "z_1",
    "z_k",
    "nim_sum",
    "smallest_bit",
    "Position",
    "Move",
    "Solver",
    "legal_moves",
    "engine_move",
]

__version__ = "0.1.0"
