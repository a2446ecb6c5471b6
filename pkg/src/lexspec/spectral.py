"""Eigenvalues, multiplicity classes and main/non-main classification."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import NumericalError, TheoryViolation
from .graph import Graph

MAIN, NONMAIN, UNCLASSIFIED = "main", "nonmain", "unclassified"


@dataclass(frozen=True)
class GroupingConfig:
    """Tolerances for eigenvalue grouping and classification.

    ``None`` selects the default, which scales with the spectral radius
    (group/imag) or with the square root of the matrix order (main).
    """

    group_tol: float | None = None
    imag_tol: float | None = None
    main_tol: float | None = None

    def __post_init__(self):
        for name in ("group_tol", "imag_tol", "main_tol"):
            val = getattr(self, name)
            if val is not None and not val > 0:
                raise ValueError(f"{name} must be positive, got {val}")

    def group(self, radius: float) -> float:
        return self.group_tol if self.group_tol is not None else 1e-7 * (1.0 + radius)

    def imag(self, radius: float) -> float:
        return self.imag_tol if self.imag_tol is not None else 1e-8 * (1.0 + radius)

    def main(self, order: int) -> float:
        return self.main_tol if self.main_tol is not None else 1e-8 * math.sqrt(order)


DEFAULT_CONFIG = GroupingConfig()


@dataclass(frozen=True)
class SpectrumEntry:
    value: float
    multiplicity: int
    main: str = UNCLASSIFIED


@dataclass
class Spectrum:
    """Eigenvalue classes in increasing order.

    ``tol`` is the grouping tolerance that produced the classes; adjacent
    values are guaranteed to differ by more than it.
    """

    entries: list
    order: int
    tol: float = field(default=0.0, compare=False)

    def __post_init__(self):
        total = sum(e.multiplicity for e in self.entries)
        if total != self.order:
            raise TheoryViolation(f"multiplicities sum to {total}, expected order {self.order}")
        vals = [e.value for e in self.entries]
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("spectrum values must be strictly increasing")

    @property
    def values(self) -> np.ndarray:
        return np.array([e.value for e in self.entries])

    @property
    def multiplicities(self) -> list:
        return [e.multiplicity for e in self.entries]

    def flat(self) -> np.ndarray:
        """All eigenvalues with repetition, sorted."""
        return np.repeat(self.values, self.multiplicities)

    def main_values(self) -> np.ndarray:
        return np.array([e.value for e in self.entries if e.main == MAIN])

    def multiplicity_of(self, value, tol=None) -> int:
        tol = self.tol if tol is None else tol
        return sum(e.multiplicity for e in self.entries if abs(e.value - value) <= tol)

    def with_flags(self, flags) -> "Spectrum":
        entries = [SpectrumEntry(e.value, e.multiplicity, f) for e, f in zip(self.entries, flags)]
        return Spectrum(entries, self.order, self.tol)

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "entries": [
                {"value": e.value, "multiplicity": e.multiplicity, "main": e.main}
                for e in self.entries
            ],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "Spectrum":
        entries = [
            SpectrumEntry(float(e["value"]), int(e["multiplicity"]), e.get("main", UNCLASSIFIED))
            for e in data["entries"]
        ]
        for e in entries:
            if e.main not in (MAIN, NONMAIN, UNCLASSIFIED):
                raise ValueError(f"bad main flag {e.main!r}")
        return cls(entries, int(data["order"]))

    @classmethod
    def from_json(cls, text: str) -> "Spectrum":
        return cls.from_dict(json.loads(text))


class _Class(NamedTuple):
    value: float
    count: int
    lo: float
    hi: float
    members: np.ndarray  # positions in the sorted input


def group_values(values, tol, counts=None) -> list:
    """Gap grouping: sort, open a new class whenever the gap to the previous
    value exceeds ``tol``; class value is the (weighted) mean."""
    values = np.asarray(values, dtype=float)
    counts = np.ones(len(values), dtype=np.int64) if counts is None else np.asarray(counts, dtype=np.int64)
    order = np.argsort(values, kind="stable")
    v, c = values[order], counts[order]
    if len(v) == 0:
        return []
    breaks = np.flatnonzero(np.diff(v) > tol) + 1
    classes = []
    for idx in np.split(np.arange(len(v)), breaks):
        w = c[idx]
        mean = float(np.dot(v[idx], w) / w.sum())
        classes.append(_Class(mean, int(w.sum()), float(v[idx[0]]), float(v[idx[-1]]), order[idx]))
    return classes


def spectrum_from_values(values, tol, counts=None, flags=None) -> Spectrum:
    classes = group_values(values, tol, counts)
    flags = flags or [UNCLASSIFIED] * len(classes)
    entries = [SpectrumEntry(c.value, c.count, f) for c, f in zip(classes, flags)]
    return Spectrum(entries, sum(c.count for c in classes), tol)


def _as_symmetric(M) -> np.ndarray:
    A = M.adjacency if isinstance(M, Graph) else np.asarray(M)
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    return A


def _eigh(A, what="matrix"):
    try:
        return np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"symmetric eigensolver failed on {what} of order {len(A)}: {exc}") from exc


def eigen_classes(M, cfg: GroupingConfig = DEFAULT_CONFIG, start=None):
    """Eigen-decompose a symmetric matrix and group its eigenvalues.

    Returns ``(classes, V, norms, tol)`` where ``norms[i]`` is the length of
    the orthogonal projection of ``start`` (all-ones by default) onto the
    eigenspace of class ``i``.
    """
    A = _as_symmetric(M)
    w, V = _eigh(A)
    radius = float(np.abs(w).max()) if len(w) else 0.0
    tol = cfg.group(radius)
    classes = group_values(w, tol)
    v = np.ones(len(A)) if start is None else np.asarray(start, dtype=float)
    coords = V.T @ v
    norms = np.array([np.linalg.norm(coords[c.members]) for c in classes])
    return classes, V, norms, tol


def eigen_sym(G, cfg: GroupingConfig = DEFAULT_CONFIG) -> Spectrum:
    """Spectrum of a graph (or symmetric matrix), main flags unclassified."""
    A = _as_symmetric(G)
    w = _eigh(A, "adjacency" if isinstance(G, Graph) else "matrix")[0]
    radius = float(np.abs(w).max()) if len(w) else 0.0
    return spectrum_from_values(w, cfg.group(radius))


def classify_main(G, spec: Spectrum, cfg: GroupingConfig = DEFAULT_CONFIG) -> Spectrum:
    """Flag each class main iff the all-ones vector has a nonzero projection
    onto its eigenspace (projection norm above ``main_tol``)."""
    A = _as_symmetric(G)
    if spec.order != len(A):
        raise ValueError(f"spectrum order {spec.order} does not match graph order {len(A)}")
    w, V = _eigh(A)
    radius = float(np.abs(w).max()) if len(w) else 0.0
    classes = group_values(w, spec.tol or cfg.group(radius))
    if [c.count for c in classes] != spec.multiplicities or not np.allclose(
        [c.value for c in classes], spec.values, rtol=0, atol=max(spec.tol, 1e-12)
    ):
        raise ValueError("spectrum does not match the graph's eigenvalues")
    proj = V.T @ np.ones(len(A))
    tol = cfg.main(len(A))
    flags = [MAIN if np.linalg.norm(proj[c.members]) > tol else NONMAIN for c in classes]
    return spec.with_flags(flags)


def main_spectrum(G, cfg: GroupingConfig = DEFAULT_CONFIG) -> Spectrum:
    return classify_main(G, eigen_sym(G, cfg), cfg)


class Nullity(NamedTuple):
    eta: int
    zero_main: bool | None  # None when 0 is not an eigenvalue
    basis: np.ndarray  # orthonormal basis of the 0-eigenspace, shape (p, eta)


def nullity(H, cfg: GroupingConfig = DEFAULT_CONFIG) -> Nullity:
    """Multiplicity of 0 as an eigenvalue and whether 0 is main."""
    classes, V, norms, tol = eigen_classes(H, cfg)
    p = len(V)
    for c, nrm in zip(classes, norms):
        if c.lo - tol <= 0.0 <= c.hi + tol:
            if c.hi - c.lo > tol / 2:
                raise NumericalError(
                    f"eigenvalue class containing 0 has width {c.hi - c.lo:.3g} > group_tol/2; "
                    "nullity is ambiguous"
                )
            return Nullity(c.count, bool(nrm > cfg.main(p)), V[:, c.members])
    return Nullity(0, None, np.zeros((p, 0)))


def eigen_general(M, cfg: GroupingConfig = DEFAULT_CONFIG) -> Spectrum:
    """Spectrum of a general real square matrix known to have a real spectrum."""
    A = np.asarray(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    try:
        w = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed on {A.shape[0]}x{A.shape[0]} matrix: {exc}") from exc
    radius = float(np.abs(w).max()) if len(w) else 0.0
    itol = cfg.imag(radius)
    worst = float(np.abs(w.imag).max()) if len(w) else 0.0
    if worst > itol:
        raise NumericalError(
            f"associated matrix produced non-real eigenvalue (|imag| = {worst:.3g} > {itol:.3g})"
        )
    return spectrum_from_values(w.real, cfg.group(radius))


def _integer_matrix(M) -> np.ndarray:
    A = np.asarray(M)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    if A.dtype == object or np.issubdtype(A.dtype, np.integer):
        return np.array([[int(x) for x in row] for row in A.tolist()], dtype=object).reshape(A.shape)
    rounded = np.rint(A)
    if np.abs(A - rounded).max(initial=0.0) > 1e-6:
        raise NumericalError("char_poly needs an integral matrix; rounding residual above 1e-6")
    return np.array([[int(x) for x in row] for row in rounded.tolist()], dtype=object).reshape(A.shape)


def char_poly(M) -> list:
    """det(xI - M) as exact ascending integer coefficients (Faddeev-LeVerrier).

    For an integer matrix every intermediate matrix is integral and each
    division by k is exact; a nonzero remainder therefore signals bad input.
    """
    A = _integer_matrix(M)
    n = A.shape[0]
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    if n == 0:
        return coeffs
    eye = np.zeros((n, n), dtype=object)
    for i in range(n):
        eye[i, i] = 1
    Mk = np.zeros((n, n), dtype=object)
    for k in range(1, n + 1):
        Mk = A.dot(Mk) + coeffs[n - k + 1] * eye
        tr = int((A * Mk.T).sum())  # tr(A Mk)
        q, r = divmod(-tr, k)
        if r:
            raise TheoryViolation(f"Faddeev-LeVerrier step {k} not exact: trace {tr}")
        coeffs[n - k] = q
    return coeffs

