"""Spectrum and characteristic polynomial of the lexicographic product H[G].

sigma(H[G]) is assembled from three parts:

* each main eigenvalue of G with multiplicity m repeated p*(m - 1) times,
* each non-main eigenvalue of G with multiplicity m repeated p*m times,
* the ps eigenvalues of the associated matrix W~, whose diagonal blocks are
  the companion matrix C(m_G) and whose (i, j) block is delta_ij(H) * M,
  with M carrying the walk totals 1^T W_G in its first row.

W~ is the matrix of A(H[G]) restricted to span{e_i (x) A(G)^j 1} in the
walk basis.  Re-expressing the same subspace in an orthonormal basis of
G's main eigenvectors gives the symmetric matrix

    S = I_p (x) diag(mu) + A(H) (x) beta beta^T

where mu are the main eigenvalues of G and beta_i is the length of the
projection of 1 onto the eigenspace of mu_i.  S is similar to W~; it is used
to classify main eigenvalues of H[G] and, in :mod:`lexspec.lexpower`, to
reach powers whose walk counts no longer fit in floating point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import poly
from .errors import NumericalError, SizeCapError, TheoryViolation
from .graph import Graph, edge_count, is_regular
from .spectral import (
    DEFAULT_CONFIG,
    MAIN,
    NONMAIN,
    UNCLASSIFIED,
    GroupingConfig,
    Spectrum,
    SpectrumEntry,
    char_poly,
    eigen_classes,
    eigen_general,
    group_values,
    main_spectrum,
    nullity,
)
from .walkmatrix import MainPolynomial, main_poly, walk_matrix, walk_row

POLY_DEGREE_CAP = 1 << 16


def _int_array(rows) -> np.ndarray:
    arr = np.array(rows, dtype=object)
    try:
        if all(abs(int(x)) < 2**62 for x in arr.flat):
            return arr.astype(np.int64)
    except OverflowError:
        pass
    return arr


def companion(mp: MainPolynomial) -> np.ndarray:
    """Frobenius companion matrix: ones on the subdiagonal, last column c."""
    s = mp.s
    C = np.zeros((s, s), dtype=object)
    C[:, :] = 0
    for j in range(s - 1):
        C[j + 1, j] = 1
    for j, c in enumerate(mp.coeffs):
        C[j, s - 1] = int(c)
    return _int_array(C.tolist())


def main_roots(mp: MainPolynomial, cfg: GroupingConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Roots of m (the main eigenvalues), via the companion eigensolve."""
    return eigen_general(np.asarray(companion(mp), dtype=float), cfg).values


@dataclass(frozen=True)
class AssociatedMatrix:
    p: int
    s: int
    data: np.ndarray  # ps x ps, exact integers

    def block(self, i, j) -> np.ndarray:
        s = self.s
        return self.data[i * s:(i + 1) * s, j * s:(j + 1) * s]

    def as_float(self) -> np.ndarray:
        return np.asarray(self.data, dtype=float)

    def to_list(self) -> list:
        return [[int(x) for x in row] for row in self.data.tolist()]


def assemble_associated(H: Graph, mp: MainPolynomial, row) -> AssociatedMatrix:
    """Block matrix with C(m_G) on the diagonal and delta_ij(H) * M elsewhere."""
    row = [int(r) for r in row]
    if len(row) != mp.s:
        raise ValueError(f"walk row has length {len(row)}, main polynomial degree is {mp.s}")
    p, s = H.order, mp.s
    C = companion(mp)
    M = np.zeros((s, s), dtype=object)
    M[:, :] = 0
    M[0, :] = row
    data = np.zeros((p * s, p * s), dtype=object)
    data[:, :] = 0
    adj = H.adjacency
    for i in range(p):
        data[i * s:(i + 1) * s, i * s:(i + 1) * s] = C
        for j in range(p):
            if adj[i, j]:
                data[i * s:(i + 1) * s, j * s:(j + 1) * s] = M
    return AssociatedMatrix(p, s, _int_array(data.tolist()))


def associated_for(H: Graph, G: Graph) -> AssociatedMatrix:
    W = walk_matrix(G)
    return assemble_associated(H, main_poly(W), walk_row(W))


# -- main part in an orthonormal basis ---------------------------------------

@dataclass(frozen=True)
class MainPart:
    """Main eigenvalues and the norms of the projections of 1 onto their
    eigenspaces (sum of squared weights equals the graph order)."""

    values: np.ndarray
    weights: np.ndarray

    @property
    def s(self) -> int:
        return len(self.values)


def main_part(G, cfg: GroupingConfig = DEFAULT_CONFIG) -> MainPart:
    classes, V, norms, _ = eigen_classes(G, cfg)
    n = len(V)
    keep = norms > cfg.main(n)
    return MainPart(np.array([c.value for c in classes])[keep], norms[keep])


def symmetric_associated(H: Graph, part: MainPart) -> np.ndarray:
    """I_p (x) diag(mu) + A(H) (x) beta beta^T, similar to W~."""
    p = H.order
    return np.kron(np.eye(p), np.diag(part.values)) + np.kron(
        H.adjacency.astype(float), np.outer(part.weights, part.weights)
    )


def product_main_part(H: Graph, part: MainPart, cfg: GroupingConfig = DEFAULT_CONFIG, group_tol=None):
    """Eigen-decompose S for H[G] given G's main part.

    Returns ``(values, counts, is_main, new_part)``: the eigenvalue classes of
    S, their multiplicities, which of them are main for H[G], and the main
    part of H[G].  ``group_tol`` overrides the grouping tolerance of ``cfg``.
    """
    S = symmetric_associated(H, part)
    start = np.kron(np.ones(H.order), part.weights)
    if group_tol is not None:
        cfg = GroupingConfig(group_tol=group_tol, imag_tol=cfg.imag_tol, main_tol=cfg.main_tol)
    classes, V, norms, _ = eigen_classes(S, cfg, start=start)
    order = float(np.dot(start, start))
    is_main = norms > cfg.main(max(int(round(order)), 1))
    values = np.array([c.value for c in classes])
    counts = np.array([c.count for c in classes], dtype=np.int64)
    return values, counts, is_main, MainPart(values[is_main], norms[is_main])


# -- spectra -----------------------------------------------------------------

def carried_counts(spec: Spectrum, p: int):
    """(value, count) pairs contributed by G's own eigenvalues: p(m-1) for
    main classes, p*m for non-main ones; zero counts dropped."""
    out = []
    for e in spec.entries:
        if e.main == UNCLASSIFIED:
            raise ValueError("carried multiplicities need main/non-main flags")
        count = p * (e.multiplicity - 1) if e.main == MAIN else p * e.multiplicity
        if count:
            out.append((e.value, count))
    return out


def union_spectrum(carried, extra, cfg: GroupingConfig, order: int, main_values=None,
                   return_classes=False, extra_counts=None):
    """Multiset union of carried (value, count) pairs and a flat list of
    extra eigenvalues, regrouped under ``cfg``.

    Classes containing one of ``main_values`` are flagged main, the others
    non-main; without ``main_values`` flags stay unclassified.
    """
    vals = np.concatenate([np.array([v for v, _ in carried], dtype=float), np.asarray(extra, dtype=float)])
    extra_counts = np.ones(len(extra), dtype=np.int64) if extra_counts is None else extra_counts
    counts = np.concatenate([np.array([c for _, c in carried], dtype=np.int64),
                             np.asarray(extra_counts, dtype=np.int64)])
    total = int(counts.sum())
    if total != order:
        raise TheoryViolation(f"multiset union has {total} eigenvalues, expected {order}")
    radius = float(np.abs(vals).max()) if len(vals) else 0.0
    tol = cfg.group(radius)
    classes = group_values(vals, tol, counts)
    if main_values is None:
        flags = [UNCLASSIFIED] * len(classes)
    else:
        mv = np.asarray(main_values, dtype=float)
        flags = [
            MAIN if len(mv) and np.any((mv >= c.lo - tol) & (mv <= c.hi + tol)) else NONMAIN
            for c in classes
        ]
    spec = Spectrum([SpectrumEntry(c.value, c.count, f) for c, f in zip(classes, flags)], order, tol)
    if return_classes:
        return spec, classes
    return spec


def lex_spectrum(H: Graph, G: Graph, cfg: GroupingConfig = DEFAULT_CONFIG, classify=True) -> Spectrum:
    """sigma(H[G]) from sigma(G), m_G and the associated matrix W~."""
    p, n = H.order, G.order
    spec_G = main_spectrum(G, cfg)
    W = walk_matrix(G)
    mp = main_poly(W)
    n_main = sum(e.main == MAIN for e in spec_G.entries)
    if n_main != mp.s:
        raise NumericalError(
            f"{n_main} main eigenvalue classes found numerically but the walk matrix has rank {mp.s}"
        )
    Wt = assemble_associated(H, mp, walk_row(W))
    sigma_W = eigen_general(Wt.as_float(), cfg)
    main_values = None
    if classify:
        main_values = product_main_part(H, main_part(G, cfg), cfg)[3].values
    return union_spectrum(carried_counts(spec_G, p), sigma_W.flat(), cfg, p * n, main_values)


def lex_spectrum_regular(H: Graph, G: Graph, cfg: GroupingConfig = DEFAULT_CONFIG) -> Spectrum:
    """Shortcut for k-regular G: p copies of sigma(G) minus one k, plus
    n*lambda + k for every eigenvalue lambda of H."""
    k = is_regular(G)
    if k is None:
        raise ValueError("lex_spectrum_regular needs a regular graph G")
    p, n = H.order, G.order
    spec_G = main_spectrum(G, cfg)
    carried = []
    for e in spec_G.entries:
        count = p * (e.multiplicity - 1) if abs(e.value - k) <= spec_G.tol else p * e.multiplicity
        if count:
            carried.append((e.value, count))
    spec_H = main_spectrum(H, cfg)
    shifted = n * spec_H.flat() + k
    main_values = [n * e.value + k for e in spec_H.entries if e.main == MAIN]
    return union_spectrum(carried, shifted, cfg, p * n, main_values)


# -- corollary checker -------------------------------------------------------

@dataclass
class MainReport:
    mu: float
    mult_in_W: int
    max_residual: float
    v_dot_ones: float
    v_dot_start: float
    nonmain_in_W: bool

    def to_dict(self):
        return {
            "mu": self.mu,
            "mult_in_W": self.mult_in_W,
            "max_residual": self.max_residual,
            "v_dot_ones": self.v_dot_ones,
            "v_dot_start": self.v_dot_start,
            "nonmain_in_W": self.nonmain_in_W,
        }


@dataclass
class CorollaryReport:
    eta: int
    zero_main: bool | None
    mains: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self):
        return {
            "eta": self.eta,
            "zero_main": bool(self.zero_main) if self.zero_main is not None else False,
            "mains": [m.to_dict() for m in self.mains],
            "passed": self.passed,
            "failures": list(self.failures),
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def corollary_check(H: Graph, G: Graph, cfg: GroupingConfig = DEFAULT_CONFIG,
                    residual_tol: float = 1e-8) -> CorollaryReport:
    """Check the left-eigenvector construction and the main/non-main
    biconditional for every main eigenvalue of G.

    For each basis vector gamma of ker A(H) and each main mu of G, the row
    vector v = (gamma_1 u, ..., gamma_p u) with u = (1, mu, ..., mu^(s-1))
    must satisfy v W~ = mu v.  The start vector of the walk basis is
    1_p (x) e_0 (the coordinates of the all-ones vector of H[G]), and
    v . start = sum(gamma), so mu is non-main for W~ exactly when every
    basis vector sums to zero.  ``v_dot_ones`` records v against the
    all-ones vector of length ps as well.
    """
    null = nullity(H, cfg)
    report = CorollaryReport(null.eta, null.zero_main)
    W = walk_matrix(G)
    mp = main_poly(W)
    Wt = assemble_associated(H, mp, walk_row(W)).as_float()
    sigma_W = eigen_general(Wt, cfg)
    spec_G = main_spectrum(G, cfg)
    norm_W = float(np.linalg.norm(Wt, 2))
    p, s = H.order, mp.s
    start = np.kron(np.ones(p), np.eye(s)[0])
    ones = np.ones(p * s)
    dot_tol = cfg.main(p)
    for mu in spec_G.main_values():
        mult = sigma_W.multiplicity_of(mu, tol=max(sigma_W.tol, 1e-6 * (1 + abs(mu))))
        u = mu ** np.arange(s)
        worst, dots_ones, dots_start = 0.0, [], []
        for gamma in null.basis.T:
            v = np.kron(gamma, u)
            res = np.linalg.norm(v @ Wt - mu * v) / (max(norm_W, 1.0) * np.linalg.norm(v))
            worst = max(worst, float(res))
            dots_ones.append(float(v @ ones))
            dots_start.append(float(v @ start))
        nonmain = all(abs(d) <= dot_tol for d in dots_start)
        entry = MainReport(
            float(mu), mult, worst,
            max(dots_ones, key=abs, default=0.0),
            max(dots_start, key=abs, default=0.0),
            nonmain,
        )
        report.mains.append(entry)
        if worst > residual_tol:
            report.failures.append(f"mu={mu:.6g}: left-eigenvector residual {worst:.3g} > {residual_tol}")
        if mult < null.eta:
            report.failures.append(f"mu={mu:.6g}: multiplicity {mult} in W~ below nullity {null.eta}")
        if null.eta > 0 and nonmain != (not null.zero_main):
            report.failures.append(
                f"mu={mu:.6g}: non-main in W~ is {nonmain} but 0 is "
                f"{'main' if null.zero_main else 'non-main'} in H"
            )
    return report


# -- characteristic polynomial -----------------------------------------------

def lex_char_poly(H: Graph, G: Graph) -> list:
    """phi(H[G]) = (phi(G) / m_G)^p * phi(W~), exact ascending coefficients."""
    p, n = H.order, G.order
    if p * n > POLY_DEGREE_CAP:
        raise SizeCapError(f"polynomial degree {p * n} exceeds cap {POLY_DEGREE_CAP}")
    W = walk_matrix(G)
    mp = main_poly(W)
    phi_G = char_poly(G.adjacency)
    rest = poly.exact_div(phi_G, mp.ascending())
    phi_W = char_poly(assemble_associated(H, mp, walk_row(W)).data)
    out = poly.mul(poly.power(rest, p), phi_W)
    if len(out) - 1 != p * n:
        raise TheoryViolation(f"phi(H[G]) has degree {len(out) - 1}, expected {p * n}")
    return out


def expected_edges(H: Graph, G: Graph) -> int:
    return H.order * edge_count(G) + edge_count(H) * G.order ** 2
