"""GF(2) linear algebra on int bit-masks (rows as plain Python ints)."""

from __future__ import annotations


def rank(rows: list[int]) -> int:
    r = 0
    basis: list[int] = []
    for row in rows:
        for b in basis:
            row = min(row, row ^ b)
        if row:
            basis.append(row)
            basis.sort(reverse=True)
            r += 1
    return r


class Solver:
    """Incremental row-reduced span with solve-for-combination support."""

    def __init__(self, rows: list[int]):
        self.rows = list(rows)
        # pivot bit -> (reduced row, combination mask over original rows)
        self.pivots: dict[int, tuple[int, int]] = {}
        for i, row in enumerate(self.rows):
            self._insert(row, 1 << i)

    def _insert(self, row: int, combo: int) -> None:
        row, combo = self._reduce(row, combo)
        if row:
            self.pivots[row.bit_length() - 1] = (row, combo)

    def add(self, row: int) -> None:
        """Extend the span by one more row (no solve bookkeeping)."""
        self._insert(row, 0)

    def _reduce(self, row: int, combo: int = 0) -> tuple[int, int]:
        while row:
            pivot = row.bit_length() - 1
            if pivot not in self.pivots:
                break
            prow, pcombo = self.pivots[pivot]
            row ^= prow
            combo ^= pcombo
        return row, combo

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def contains(self, vec: int) -> bool:
        return self._reduce(vec)[0] == 0

    def solve(self, vec: int) -> int | None:
        """Mask over original rows whose XOR equals ``vec``, or None."""
        row, combo = self._reduce(vec)
        return None if row else combo


def nullspace(rows: list[int], n_bits: int) -> list[int]:
    """Basis of {v : row & v has even parity for every row}."""
    # Gaussian elimination on the rows, tracking pivot columns.
    reduced: list[int] = []
    pivot_cols: list[int] = []
    for row in rows:
        for r, c in zip(reduced, pivot_cols):
            if (row >> c) & 1:
                row ^= r
        if row:
            c = row.bit_length() - 1
            # normalise earlier rows against the new pivot
            for i, r in enumerate(reduced):
                if (r >> c) & 1:
                    reduced[i] = r ^ row
            reduced.append(row)
            pivot_cols.append(c)
    pivot_set = set(pivot_cols)
    basis = []
    for free in range(n_bits):
        if free in pivot_set:
            continue
        vec = 1 << free
        for r, c in zip(reduced, pivot_cols):
            if (r >> free) & 1:
                vec |= 1 << c
        basis.append(vec)
    return basis


def solve_affine(rows: list[int], targets: list[int], n_bits: int) -> tuple[int, list[int]] | None:
    """Solve ``parity(rows[i] & v) == targets[i]`` for v.

    Returns (particular solution, nullspace basis) or None when inconsistent.
    """
    # Work on the augmented system: append the target bit at position n_bits.
    augmented = [row | (t << n_bits) for row, t in zip(rows, targets)]
    reduced: list[int] = []
    pivot_cols: list[int] = []
    for row in augmented:
        for r, c in zip(reduced, pivot_cols):
            if (row >> c) & 1:
                row ^= r
        body = row & ((1 << n_bits) - 1)
        if body:
            c = body.bit_length() - 1
            for i, r in enumerate(reduced):
                if (r >> c) & 1:
                    reduced[i] = r ^ row
            reduced.append(row)
            pivot_cols.append(c)
        elif row >> n_bits:
            return None  # 0 = 1
    solution = 0
    for r, c in zip(reduced, pivot_cols):
        if r >> n_bits:
            solution |= 1 << c
    return solution, nullspace([r & ((1 << n_bits) - 1) for r in reduced], n_bits)
