"""Walk matrices and main characteristic polynomials in exact integer arithmetic.

The Krylov sequence 1, A1, A^2 1, ... is extended until the next vector is a
linear combination of the previous ones.  Rank is decided by fraction-free
elimination over the integers, so no floating tolerance is involved.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd

import numpy as np

from .errors import SizeCapError, TheoryViolation
from .graph import Graph
from . import poly


def as_int_vector(values) -> np.ndarray:
    return np.array([int(v) for v in values], dtype=object)


@dataclass(frozen=True)
class WalkMatrix:
    """Columns A^j 1 for j < s, plus the first dependent vector A^s 1."""

    n: int
    s: int
    columns: tuple  # s object-dtype vectors of length n
    next: np.ndarray
    pivots: tuple  # s row indices whose rows of W form an invertible block

    def as_array(self) -> np.ndarray:
        return np.stack(self.columns, axis=1)

    def to_list(self) -> list:
        return [[int(c[i]) for c in self.columns] for i in range(self.n)]


@dataclass(frozen=True)
class MainPolynomial:
    """m(x) = x^s - (c_0 + c_1 x + ... + c_{s-1} x^{s-1})."""

    s: int
    coeffs: tuple

    def __post_init__(self):
        if self.s < 1 or len(self.coeffs) != self.s:
            raise ValueError(f"need s >= 1 and s coefficients, got s={self.s}, {len(self.coeffs)}")

    def ascending(self) -> list:
        return poly.from_main(self.coeffs)

    def __str__(self):
        return poly.format_poly(self.ascending())

    def to_dict(self) -> dict:
        return {"s": self.s, "coeffs": [int(c) for c in self.coeffs]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data) -> "MainPolynomial":
        return cls(int(data["s"]), tuple(int(c) for c in data["coeffs"]))

    @classmethod
    def from_json(cls, text) -> "MainPolynomial":
        return cls.from_dict(json.loads(text))


def _normalize(v: np.ndarray) -> np.ndarray:
    g = reduce(gcd, (int(x) for x in v), 0)
    return v // g if g > 1 else v


class _Echelon:
    """Incremental fraction-free row echelon form over the integers."""

    def __init__(self):
        self.rows = []  # (pivot index, pivot value, row)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = v.copy()
        for pc, pv, row in self.rows:
            a = v[pc]
            if a:
                v = _normalize(pv * v - a * row)
        return v

    def add(self, v: np.ndarray) -> bool:
        """Insert v; False if it is dependent on the rows already present."""
        r = self.reduce(v)
        nz = np.flatnonzero(r != 0)
        if len(nz) == 0:
            return False
        pc = int(nz[0])
        self.rows.append((pc, r[pc], r))
        return True

    @property
    def pivots(self):
        return tuple(pc for pc, _, _ in self.rows)


def krylov_walk(matvec, n: int, max_entry=None) -> WalkMatrix:
    """Walk matrix for an abstract exact matvec on length-n integer vectors.

    ``max_entry`` aborts with SizeCapError once a walk count exceeds it.
    """
    ech = _Echelon()
    cols = []
    v = np.ones(n, dtype=object)
    for _ in range(n + 1):
        if not ech.add(v):
            return WalkMatrix(n, len(cols), tuple(cols), v, ech.pivots)
        cols.append(v)
        v = as_int_vector(matvec(v))
        if max_entry is not None and max(abs(int(x)) for x in v) > max_entry:
            raise SizeCapError(f"walk counts exceed {max_entry} after {len(cols)} steps")
    raise TheoryViolation("Krylov sequence did not terminate within n steps")


def adjacency_matvec(G: Graph):
    nbrs = [np.flatnonzero(row) for row in G.adjacency]

    def matvec(x):
        return np.array([sum(x[nb].tolist()) for nb in nbrs], dtype=object)

    return matvec


def walk_matrix(G: Graph, max_entry=None) -> WalkMatrix:
    return krylov_walk(adjacency_matvec(G), G.order, max_entry=max_entry)


def _solve_exact(M, rhs):
    """Solve a nonsingular square system over the rationals."""
    s = len(M)
    aug = [[Fraction(int(x)) for x in row] + [Fraction(int(b))] for row, b in zip(M, rhs)]
    for col in range(s):
        piv = next((r for r in range(col, s) if aug[r][col] != 0), None)
        if piv is None:
            raise TheoryViolation("walk matrix pivot block is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        for r in range(s):
            if r != col and aug[r][col] != 0:
                f = aug[r][col] / aug[col][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][s] / aug[i][i] for i in range(s)]


def main_poly(W: WalkMatrix) -> MainPolynomial:
    """Solve W c = A^s 1 exactly and return m(x) = x^s - sum c_j x^j."""
    Warr = W.as_array()
    rows = list(W.pivots)
    sol = _solve_exact([Warr[r].tolist() for r in rows], [W.next[r] for r in rows])
    if any(c.denominator != 1 for c in sol):
        raise TheoryViolation(f"main polynomial coefficients are not integers: {sol}")
    coeffs = tuple(int(c) for c in sol)
    resid = Warr.dot(np.array(coeffs, dtype=object)) - W.next
    if any(resid != 0):
        raise TheoryViolation("walk-matrix system is inconsistent (rank detection bug)")
    return MainPolynomial(W.s, coeffs)


def walk_row(W: WalkMatrix) -> list:
    """1^T W: total number of walks of each length 0..s-1."""
    return [int(sum(c.tolist())) for c in W.columns]
