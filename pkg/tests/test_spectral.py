import math

import numpy as np
import pytest

from lexspec import GroupingConfig, Spectrum, char_poly, eigen_general, eigen_sym, generate, main_spectrum, nullity
from lexspec.errors import NumericalError, TheoryViolation
from lexspec.graph import random_graph
from lexspec.spectral import MAIN, NONMAIN, SpectrumEntry, group_values

SQ2 = math.sqrt(2)


def test_star_spectrum_and_flags(star):
    spec = main_spectrum(star)
    assert np.allclose(spec.values, [-SQ2, 0, SQ2], atol=1e-12)
    assert [e.main for e in spec.entries] == [MAIN, NONMAIN, MAIN]


def test_single_vertex():
    spec = main_spectrum(generate("complete", 1))
    assert spec.multiplicities == [1] and spec.values[0] == 0 and spec.entries[0].main == MAIN


def test_cycle_four():
    spec = main_spectrum(generate("cycle", 4))
    assert np.allclose(spec.values, [-2, 0, 2], atol=1e-12)
    assert spec.multiplicities == [1, 2, 1]
    assert [e.main for e in spec.entries] == [NONMAIN, NONMAIN, MAIN]


def test_regular_graph_has_single_main_eigenvalue(rng):
    spec = main_spectrum(generate("circulant", 7, 1, 3))
    assert len(spec.main_values()) == 1 and abs(spec.main_values()[0] - 4) < 1e-12


def test_invariants(rng):
    for _ in range(30):
        G = random_graph(int(rng.integers(1, 9)), rng)
        spec = eigen_sym(G)
        flat = spec.flat()
        assert sum(spec.multiplicities) == G.order
        assert abs(flat.sum()) < 1e-9
        assert abs(np.dot(flat, flat) - G.adjacency.sum()) < 1e-8


def test_grouping_merges_within_tol():
    classes = group_values([1.0, 1.0 + 1e-9, 2.0], 1e-7)
    assert [c.count for c in classes] == [2, 1]


def test_spectrum_validates_total():
    with pytest.raises(TheoryViolation):
        Spectrum([SpectrumEntry(0.0, 2)], 3)


def test_spectrum_json_round_trip(star):
    spec = main_spectrum(star)
    back = Spectrum.from_json(spec.to_json())
    assert back == spec


def test_nullity():
    nl = nullity(generate("complete_bipartite", 2, 2))
    assert nl.eta == 2 and nl.zero_main is False
    nl = nullity(generate("complete", 3))
    assert nl.eta == 0 and nl.zero_main is None
    nl = nullity(generate("empty", 2))
    assert nl.eta == 2 and nl.zero_main is True


def test_eigen_general_rejects_complex():
    with pytest.raises(NumericalError, match="non-real"):
        eigen_general([[0, -1], [1, 0]])


def test_tolerance_validation():
    with pytest.raises(ValueError):
        GroupingConfig(group_tol=-1)


def test_char_poly_small():
    assert char_poly(generate("star", 2).adjacency) == [0, -2, 0, 1]
    assert char_poly([[2]]) == [-2, 1]
    assert char_poly(np.zeros((0, 0))) == [1]


def test_char_poly_matches_numpy(rng):
    for _ in range(20):
        G = random_graph(int(rng.integers(1, 9)), rng)
        got = char_poly(G.adjacency)
        ref = np.poly(G.adjacency.astype(float))[::-1]
        assert np.allclose(got, ref, atol=1e-6)


def test_char_poly_rejects_non_integral():
    with pytest.raises(NumericalError):
        char_poly([[0.5]])
