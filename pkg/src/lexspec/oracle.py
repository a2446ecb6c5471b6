"""Brute-force ground truth: explicit products, dense eigensolves and
multiset comparison."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, lex_power_explicit, lex_product_explicit
from .spectral import DEFAULT_CONFIG, GroupingConfig, Spectrum, eigen_sym, main_spectrum


def oracle_spectrum(H: Graph, G: Graph, cfg: GroupingConfig = DEFAULT_CONFIG, cap=None,
                    classify=False) -> Spectrum:
    """eigen_sym of the explicitly constructed H[G]."""
    P = lex_product_explicit(H, G, cap=cap)
    return main_spectrum(P, cfg) if classify else eigen_sym(P, cfg)


def oracle_power_spectrum(G: Graph, k: int, cfg: GroupingConfig = DEFAULT_CONFIG, cap=None,
                          classify=False) -> Spectrum:
    P = lex_power_explicit(G, k, cap=cap)
    return main_spectrum(P, cfg) if classify else eigen_sym(P, cfg)


@dataclass
class MultisetDiff:
    matched: list = field(default_factory=list)  # (a, b, |a - b|)
    unmatched_left: list = field(default_factory=list)
    unmatched_right: list = field(default_factory=list)
    max_gap: float = 0.0
    tol: float = 0.0
    close_classes: bool = False  # some classes closer than 2*tol: pairing may be ambiguous

    @property
    def passed(self) -> bool:
        return not self.unmatched_left and not self.unmatched_right and self.max_gap <= self.tol

    def to_dict(self, with_pairs=False) -> dict:
        out = {
            "pass": self.passed,
            "max_gap": self.max_gap,
            "tol": self.tol,
            "matched": len(self.matched),
            "unmatched_left": list(self.unmatched_left),
            "unmatched_right": list(self.unmatched_right),
            "close_classes": self.close_classes,
        }
        if with_pairs:
            out["pairs"] = [list(p) for p in self.matched]
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _flat(x):
    if isinstance(x, Spectrum):
        return x.flat()
    return np.sort(np.asarray(x, dtype=float))


def compare_multisets(a, b, tol: float) -> MultisetDiff:
    """Pair the sorted expansions of ``a`` and ``b`` in order.

    Passes iff both have the same size and every pair is within ``tol``.
    """
    fa, fb = _flat(a), _flat(b)
    m = min(len(fa), len(fb))
    gaps = np.abs(fa[:m] - fb[:m])
    diff = MultisetDiff(
        matched=[(float(x), float(y), float(g)) for x, y, g in zip(fa[:m], fb[:m], gaps)],
        unmatched_left=[float(x) for x in fa[m:]],
        unmatched_right=[float(y) for y in fb[m:]],
        max_gap=float(gaps.max()) if m else 0.0,
        tol=tol,
    )
    for f in (fa, fb):
        d = np.diff(np.unique(f))
        if len(d) and d.min() < 2 * tol:
            diff.close_classes = True
    if diff.close_classes:
        warnings.warn("eigenvalue classes closer than 2*tol; sorted pairing may be ambiguous", stacklevel=2)
    return diff
