"""Lexicographic powers G^k = G[G^(k-1)] without the n^k x n^k matrix.

Two routes produce sigma(G^k) level by level:

``walk``
    Exact integer Krylov vectors of A(G^j) built with the matrix-free
    operator give m_{G^j} and the walk totals; the associated matrix W~(G^j)
    is assembled and eigensolved.  Main flags come from the roots of the next
    main polynomial.  Walk counts grow like rho^s, so this route stops being
    usable in floating point after a few levels.

``angles``
    Each level keeps only the main eigenvalues and the norms of the
    projections of 1 onto their eigenspaces; the next level's W~ is replaced
    by the similar symmetric matrix from :func:`lexspec.lexjoin.symmetric_associated`.
    Work per level is a dense symmetric eigensolve of order n * s(j).

``auto`` uses ``walk`` while the order and the walk counts stay small and
falls back to ``angles`` otherwise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import poly
from .errors import NumericalError, SizeCapError, TheoryViolation
from .graph import Graph, edge_count
from .lexjoin import (
    MainPart,
    assemble_associated,
    carried_counts,
    main_part,
    main_roots,
    product_main_part,
    union_spectrum,
)
from .spectral import (
    DEFAULT_CONFIG,
    MAIN,
    GroupingConfig,
    Spectrum,
    char_poly,
    eigen_classes,
    eigen_general,
    main_spectrum,
)
from .walkmatrix import MainPolynomial, WalkMatrix, krylov_walk, main_poly, walk_row

VECTOR_CAP = 1 << 24
POLY_DEGREE_CAP = 1 << 16
WALK_ROUTE_MAX_ORDER = 729
WALK_ROUTE_MAX_ENTRY = 10**6
ANGLES_RTOL = 1e-12


@dataclass(frozen=True)
class LexOperator:
    """A(G^k) = sum over levels l of I^(l-1) (x) A(G) (x) J^(k-l)."""

    base: Graph
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("power must be >= 1")

    @property
    def n(self) -> int:
        return self.base.order

    @property
    def dim(self) -> int:
        return self.n ** self.k

    def matvec(self, x):
        return lex_matvec(self, x)


def lex_matvec(op: LexOperator, x, cap: int = VECTOR_CAP) -> np.ndarray:
    """y = A(G^k) x.  Exact for integer or object-dtype input."""
    n, k = op.n, op.k
    dim = n ** k
    if dim > cap:
        raise SizeCapError(f"vector length {n}^{k} = {dim} exceeds cap {cap}")
    x = np.asarray(x)
    if x.shape != (dim,):
        raise ValueError(f"expected a vector of length {dim}, got shape {x.shape}")
    A = op.base.adjacency
    if x.dtype == object:
        A = A.astype(object)
    elif not np.issubdtype(x.dtype, np.floating):
        x = x.astype(np.int64)
    y = np.zeros_like(x)
    for level in range(k):
        outer, inner = n ** level, n ** (k - level - 1)
        sums = x.reshape(outer, n, inner).sum(axis=2)
        mixed = sums @ A.T
        y.reshape(outer, n, inner)[...] += mixed[:, :, None]
    return y


def power_walk_matrix(G: Graph, k: int, max_entry=None) -> WalkMatrix:
    op = LexOperator(G, k)
    if op.dim > VECTOR_CAP:
        raise SizeCapError(f"vector length {op.dim} exceeds cap {VECTOR_CAP}")
    return krylov_walk(op.matvec, op.dim, max_entry=max_entry)


def power_main_poly(G: Graph, k: int) -> MainPolynomial:
    return main_poly(power_walk_matrix(G, k))


@dataclass
class Level:
    j: int
    s: int
    spectrum: Spectrum
    main_poly: MainPolynomial | None = None
    main_values: np.ndarray | None = None

    def to_dict(self):
        return {
            "j": self.j,
            "s": self.s,
            "main_poly": self.main_poly.ascending() if self.main_poly else None,
            "spectrum": self.spectrum.to_dict()["entries"],
        }


@dataclass
class PowerSpectrum:
    k: int
    spectrum: Spectrum
    levels: list
    method: str
    provenance: list = field(default_factory=list)  # per class: carried vs W~ counts
    checks: dict = field(default_factory=dict)

    @property
    def main_polys(self):
        return [lv.main_poly for lv in self.levels]

    def to_dict(self):
        return {"k": self.k, "method": self.method, "levels": [lv.to_dict() for lv in self.levels]}

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def _provenance(classes, n_carried):
    out = []
    for c in classes:
        carried = int(sum(1 for m in c.members if m < n_carried))
        out.append({"value": c.value, "carried_classes": carried, "multiplicity": c.count})
    return out


def _count_main(spec: Spectrum) -> int:
    return sum(e.main == MAIN for e in spec.entries)


def _walk_route(G, k, cfg):
    n = G.order
    if n ** k > WALK_ROUTE_MAX_ORDER:
        raise SizeCapError(f"order {n ** k} above walk-route limit {WALK_ROUTE_MAX_ORDER}")
    # W~(G^j) for j < k is eigensolved in floating point; m_{G^k} only feeds
    # the companion root solve for the final main flags.
    walks = [power_walk_matrix(G, j, max_entry=WALK_ROUTE_MAX_ENTRY) for j in range(1, k)]
    walks.append(power_walk_matrix(G, k, max_entry=WALK_ROUTE_MAX_ENTRY ** 2))
    mps = [main_poly(W) for W in walks]
    spec = main_spectrum(G, cfg)
    if _count_main(spec) != mps[0].s:
        raise NumericalError("level 1: main classes disagree with the walk-matrix rank")
    levels = [Level(1, mps[0].s, spec, mps[0], spec.main_values())]
    classes = None
    for j in range(1, k):
        Wt = assemble_associated(G, mps[j - 1], walk_row(walks[j - 1]))
        sigma_W = eigen_general(Wt.as_float(), cfg)
        carried = carried_counts(spec, n)
        roots = main_roots(mps[j], cfg)
        spec, classes = union_spectrum(carried, sigma_W.flat(), cfg, n ** (j + 1), roots, return_classes=True)
        if _count_main(spec) != mps[j].s:
            raise NumericalError(
                f"level {j + 1}: {_count_main(spec)} classes matched roots of a degree-{mps[j].s} main polynomial"
            )
        levels.append(Level(j + 1, mps[j].s, spec, mps[j], roots))
    prov = _provenance(classes, len(carried)) if classes is not None else []
    return levels, prov


def _split_level_one(G, tol, cfg):
    """Eigenvalues of G outside the main subspace, and G's main part."""
    classes, V, norms, _ = eigen_classes(G, GroupingConfig(group_tol=tol, main_tol=cfg.main_tol))
    is_main = norms > cfg.main(G.order)
    rest = [(c.value, c.count - int(m)) for c, m in zip(classes, is_main) if c.count - int(m)]
    values = np.array([c.value for c in classes])
    return rest, MainPart(values[is_main], norms[is_main])


def _angles_route(G, k, cfg):
    """Carry (a) the eigenvalues outside the main subspace and (b) the main
    part.  Level j+1 gets n copies of (a), plus the eigenvalues of S split
    into main and non-main.  S classes are grouped at eigensolver precision
    so distinct but close main eigenvalues are never merged."""
    n = G.order
    radius = float(np.abs(np.linalg.eigvalsh(G.adjacency.astype(float))).max())
    rest, part = _split_level_one(G, ANGLES_RTOL * (1 + radius), cfg)
    spec, _ = _angles_spectrum(rest, part, cfg, n)
    levels = [Level(1, part.s, spec, None, part.values)]
    classes = None
    for j in range(1, k):
        S_radius = float(np.abs(part.values).max()) + n * float(np.dot(part.weights, part.weights))
        values, counts, is_main, part = product_main_part(G, part, cfg, group_tol=ANGLES_RTOL * (1 + S_radius))
        nonmain = counts - is_main.astype(np.int64)
        rest = [(v, n * c) for v, c in rest] + [(v, int(c)) for v, c in zip(values, nonmain) if c]
        spec, classes = _angles_spectrum(rest, part, cfg, n ** (j + 1))
        levels.append(Level(j + 1, part.s, spec, None, part.values))
    prov = []
    if classes is not None:
        prov = [{"value": c.value, "multiplicity": c.count,
                 "main_part": int(sum(1 for m in c.members if m >= len(rest)))} for c in classes]
    return levels, prov, part


def _angles_spectrum(rest, part, cfg, order):
    return union_spectrum(rest, part.values, cfg, order, part.values, return_classes=True)


def _walk_totals(G, k, r_max=2):
    """1^T A(G^k)^r 1 for r = 0..r_max via the matrix-free operator (floats)."""
    op = LexOperator(G, k)
    v = np.ones(op.dim)
    out = [float(op.dim)]
    for _ in range(r_max):
        v = lex_matvec(op, v)
        out.append(float(v.sum()))
    return out


def power_edge_count(G: Graph, k: int) -> int:
    """|E(G^k)| from |E(G[X])| = n|E(X)| + |E(G)| |X|^2."""
    n, m = G.order, edge_count(G)
    e, order = m, n
    for _ in range(k - 1):
        e, order = n * e + m * order ** 2, order * n
    return e


def power_spectrum(G: Graph, k: int, cfg: GroupingConfig = DEFAULT_CONFIG, method: str = "auto",
                   check: bool = True) -> PowerSpectrum:
    """sigma(G^k) with main flags, built level by level.

    With ``check`` the result is validated against quantities computed
    independently: the trace (0) and the second moment (2|E(G^k)|) of the
    spectrum and, on the angles route, the walk totals 1^T A^r 1 (r = 1, 2)
    obtained from the matrix-free operator.
    """
    if k < 1:
        raise ValueError("power must be >= 1")
    if method not in ("auto", "walk", "angles"):
        raise ValueError(f"unknown method {method!r}")
    used = method
    if method in ("auto", "walk"):
        try:
            levels, prov = _walk_route(G, k, cfg)
            used = "walk"
        except (SizeCapError, NumericalError):
            if method == "walk":
                raise
            used = "angles"
    if used == "angles":
        levels, prov, last = _angles_route(G, k, cfg)
    result = PowerSpectrum(k, levels[-1].spectrum, levels, used, prov)

    if check:
        spec = result.spectrum
        N = spec.order
        flat = spec.flat()
        radius = float(np.abs(flat).max()) if N else 0.0
        trace = float(flat.sum())
        moment2 = float(np.dot(flat, flat))
        edges2 = 2 * power_edge_count(G, k)
        result.checks = {"trace": trace, "moment2": moment2, "twice_edges": edges2}
        if abs(trace) > 1e-8 * N * (1 + radius):
            raise TheoryViolation(f"level {k}: trace of spectrum is {trace:.3g}, expected 0")
        if abs(moment2 - edges2) > 1e-8 * (edges2 + N):
            raise TheoryViolation(f"level {k}: second moment {moment2:.6g} != 2|E| = {edges2}")
        if used == "angles" and G.order ** k <= VECTOR_CAP:
            totals = _walk_totals(G, k)
            w2 = last.weights ** 2
            for r in (1, 2):
                got = float(np.dot(w2, last.values ** r))
                if abs(got - totals[r]) > 1e-8 * abs(totals[r]) + 1e-9:
                    raise TheoryViolation(
                        f"level {k}: main part gives 1^T A^{r} 1 = {got:.10g}, operator gives {totals[r]:.10g}"
                    )
            result.checks["walk_totals"] = totals
    return result


def power_char_poly(G: Graph, k: int) -> list:
    """phi(G^k) exactly: phi(G^(j+1)) = (phi(G^j) / m_{G^j})^n * phi(W~(G^j))."""
    n = G.order
    if n ** k > POLY_DEGREE_CAP:
        raise SizeCapError(f"polynomial degree {n ** k} exceeds cap {POLY_DEGREE_CAP}")
    phi = char_poly(G.adjacency)
    for j in range(1, k):
        W = power_walk_matrix(G, j)
        mp = main_poly(W)
        rest = poly.exact_div(phi, mp.ascending())
        phi_W = char_poly(assemble_associated(G, mp, walk_row(W)).data)
        phi = poly.mul(poly.power(rest, n), phi_W)
    return phi


@dataclass
class FactorReport:
    j: int
    divides: bool
    cofactor: list
    remainder: list

    def to_dict(self):
        return {"j": self.j, "divides": self.divides, "cofactor": self.cofactor, "remainder": self.remainder}


def factor_check(G: Graph, j: int) -> FactorReport:
    """Does m_{G^(j+1)} divide phi(W~(G^j))?  Diagnostic only."""
    W = power_walk_matrix(G, j)
    mp = main_poly(W)
    phi_W = char_poly(assemble_associated(G, mp, walk_row(W)).data)
    nxt = power_main_poly(G, j + 1)
    q, r = poly.divmod_monic(phi_W, nxt.ascending())
    return FactorReport(j, r == [0], q, r)
