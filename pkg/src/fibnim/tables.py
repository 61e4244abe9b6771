"""Frozen reference data for the `table1` verification suite.

TABLE1[i][j] is the unique b making (i, j, b) with unbounded first move a
P position, or None for the one pair (3, 4) that no third pile completes.
The verify suite recomputes every cell from scratch and diffs against this.
"""

TABLE1: tuple[tuple[int | None, ...], ...] = (
    (0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15),
    (1, 0, 4, 6, 2, 9, 3, 11, 12, 5, 14, 7, 8, 17, 10, 16),
    (2, 4, 0, 7, 1, 10, 11, 3, 19, 15, 5, 6, 14, 24, 12, 9),
    (3, 6, 7, 0, None, 11, 1, 2, 16, 12, 13, 5, 9, 10, 17, 18),
    (4, 2, 1, None, 0, 7, 10, 5, 17, 16, 6, 18, 13, 12, 19, 69),
    (5, 9, 10, 11, 7, 0, 35, 4, 15, 1, 2, 3, 18, 22, 23, 8),
    (6, 3, 11, 1, 10, 35, 0, 8, 7, 17, 4, 2, 16, 14, 13, 26),
    (7, 11, 3, 2, 5, 4, 8, 0, 6, 13, 27, 1, 15, 9, 22, 12),
    (8, 12, 19, 16, 17, 15, 7, 6, 0, 53, 11, 10, 1, 57, 35, 5),
    (9, 5, 15, 12, 16, 1, 17, 13, 53, 0, 21, 27, 3, 7, 76, 2),
    (10, 14, 5, 13, 6, 2, 4, 27, 11, 21, 0, 8, 26, 3, 1, 24),
    (11, 7, 6, 5, 18, 3, 2, 1, 10, 27, 8, 0, 22, 21, 64, 88),
    (12, 8, 14, 9, 13, 18, 16, 15, 1, 3, 26, 22, 0, 4, 2, 7),
    (13, 17, 24, 10, 12, 22, 14, 9, 57, 7, 3, 21, 4, 0, 6, 20),
    (14, 10, 12, 17, 19, 23, 13, 22, 35, 76, 1, 64, 2, 6, 0, 21),
    (15, 16, 9, 18, 69, 8, 26, 12, 5, 2, 24, 88, 7, 20, 21, 0),
)
