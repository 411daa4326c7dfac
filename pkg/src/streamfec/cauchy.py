"""Cauchy matrices over GF(2^e) and exact dense linear algebra.

Every square submatrix of a Cauchy matrix is invertible. That is the whole
point of using one as a parity generator: any square subset of parity
equations can be solved for any equally sized subset of unknowns.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .gf import GF


class SingularMatrixError(Exception):
    """A square system had no unique solution; signals a construction bug."""


@dataclass(frozen=True)
class CauchyMatrix:
    """dim x dim matrix with entry(i, j) = 1 / (x_i + y_j).

    Invariants: all x points distinct, all y points distinct, and the two
    point sets disjoint, so every denominator is nonzero (addition is XOR).
    """

    field: GF
    xs: tuple[int, ...]
    ys: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.xs) != len(self.ys):
            raise ValueError("point sets must have equal size")
        if len(set(self.xs)) != len(self.xs) or len(set(self.ys)) != len(self.ys):
            raise ValueError("points within a set must be distinct")
        if set(self.xs) & set(self.ys):
            raise ValueError("x and y point sets must be disjoint")

    @property
    def dim(self) -> int:
        return len(self.xs)

    def entry(self, i: int, j: int) -> int:
        return self.field.inv(self.xs[i] ^ self.ys[j])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> list[list[int]]:
        for idx in (*rows, *cols):
            if not 0 <= idx < self.dim:
                raise IndexError(f"index {idx} outside [0, {self.dim - 1}]")
        return [[self.entry(i, j) for j in cols] for i in rows]

    def combine(self, pairs: Iterable[tuple[int, int]], cols: Sequence[int]) -> list[int]:
        """Sparse row vector times the matrix, restricted to `cols`.

        `pairs` holds (row_index, value) entries; zero values are skipped.
        """
        f = self.field
        out = [0] * len(cols)
        for r, val in pairs:
            if val == 0:
                continue
            for ci, c in enumerate(cols):
                out[ci] ^= f.mul(val, self.entry(r, c))
        return out


def build_cauchy(dim: int, fld: GF, seed: int = 0) -> CauchyMatrix:
    """Deterministic Cauchy matrix on 2*dim distinct points drawn by `seed`."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if 2 * dim > fld.order:
        raise ValueError(
            f"field of order {fld.order} cannot host {2 * dim} distinct points"
        )
    pts = random.Random(seed).sample(range(fld.order), 2 * dim)
    return CauchyMatrix(fld, tuple(pts[:dim]), tuple(pts[dim:]))


def vec_mat(fld: GF, vec: Sequence[int], mat: Sequence[Sequence[int]]) -> list[int]:
    """Row vector times matrix."""
    if len(vec) != len(mat):
        raise ValueError(f"shape mismatch: vector {len(vec)} vs {len(mat)} rows")
    cols = len(mat[0]) if mat else 0
    out = [0] * cols
    for v, row in zip(vec, mat):
        if v == 0:
            continue
        for j in range(cols):
            out[j] ^= fld.mul(v, row[j])
    return out


def solve(fld: GF, mat: Sequence[Sequence[int]], rhs: Sequence[int]) -> list[int]:
    """Solve mat @ x = rhs by Gaussian elimination, first-nonzero pivoting.

    Exact arithmetic: there is no pivot-magnitude concern in a finite field.
    """
    n = len(mat)
    if any(len(row) != n for row in mat) or len(rhs) != n:
        raise ValueError("solve needs a square system")
    aug = [list(row) + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            raise SingularMatrixError(f"no pivot available in column {col}")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv_p = fld.inv(aug[col][col])
        aug[col] = [fld.mul(inv_p, v) for v in aug[col]]
        prow = aug[col]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [v ^ fld.mul(factor, prow[j]) for j, v in enumerate(aug[r])]
    return [aug[i][n] for i in range(n)]
