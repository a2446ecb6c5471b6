import numpy as np
import pytest
from reference import M_STAR_SQUARED, PHI_STAR_SQUARED, STAR_SQUARED_WALK_ROW, W_STAR_SQUARED, DEG8

from lexspec import (LexOperator, PowerSpectrum, char_poly, compare_multisets, eigen_sym, factor_check,
                     generate, lex_matvec, lex_power_explicit, main_spectrum, power_char_poly,
                     power_main_poly, power_spectrum, power_walk_matrix, walk_row)
from lexspec.errors import SizeCapError
from lexspec.graph import random_graph
from lexspec.spectral import MAIN


def test_matvec_matches_dense(rng):
    for _ in range(10):
        G = random_graph(int(rng.integers(1, 4)), rng)
        k = int(rng.integers(1, 4))
        A = lex_power_explicit(G, k).adjacency
        x = rng.standard_normal(G.order ** k)
        assert np.allclose(lex_matvec(LexOperator(G, k), x), A @ x)
        xi = rng.integers(-5, 5, G.order ** k)
        assert np.array_equal(lex_matvec(LexOperator(G, k), xi), A @ xi)


def test_matvec_exact_objects(star):
    x = np.array([10 ** 30] * 9, dtype=object)
    y = lex_matvec(LexOperator(star, 2), x)
    assert y[0] == 8 * 10 ** 30


def test_matvec_cap(star):
    with pytest.raises(SizeCapError):
        lex_matvec(LexOperator(star, 3), np.ones(27), cap=20)


def test_square_walk_matrix(star):
    W = power_walk_matrix(star, 2)
    assert W.to_list() == W_STAR_SQUARED
    assert walk_row(W) == STAR_SQUARED_WALK_ROW
    assert power_main_poly(star, 2).ascending() == M_STAR_SQUARED


def test_cube_main_poly(star):
    assert power_main_poly(star, 3).ascending() == DEG8


def test_char_poly_square(star):
    assert power_char_poly(star, 2) == PHI_STAR_SQUARED


def test_char_poly_against_explicit(rng):
    for _ in range(5):
        G = random_graph(3, rng)
        assert power_char_poly(G, 2) == char_poly(lex_power_explicit(G, 2).adjacency)


@pytest.mark.parametrize("method", ["walk", "angles"])
def test_power_spectrum_routes(star, method):
    for k in (1, 2, 3):
        got = power_spectrum(star, k, method=method)
        ref = main_spectrum(lex_power_explicit(star, k))
        assert compare_multisets(got.spectrum, ref, 1e-7).passed
        assert got.spectrum.multiplicities == ref.multiplicities
        assert [e.main for e in got.spectrum.entries] == [e.main for e in ref.entries]
        assert [lv.s for lv in got.levels] == [2 ** j for j in range(1, k + 1)]


def test_auto_falls_back_to_angles(star):
    res = power_spectrum(star, 5)
    assert res.method == "angles"
    ref = eigen_sym(lex_power_explicit(star, 5))
    assert compare_multisets(res.spectrum, ref, 1e-7).passed


def test_power_one_is_graph_spectrum(rng):
    G = random_graph(5, rng)
    assert compare_multisets(power_spectrum(G, 1).spectrum, eigen_sym(G), 1e-9).passed


def test_regular_power(rng):
    C4 = generate("cycle", 4)
    res = power_spectrum(C4, 3)
    assert all(lv.s == 1 for lv in res.levels)
    assert compare_multisets(res.spectrum, eigen_sym(lex_power_explicit(C4, 3)), 1e-7).passed
    assert res.spectrum.main_values() == pytest.approx([2 + 4 * 2 + 16 * 2])


def test_checks_recorded(star):
    res = power_spectrum(star, 6)
    assert res.checks["twice_edges"] == pytest.approx(res.checks["moment2"], rel=1e-10)
    assert "walk_totals" in res.checks


def test_json_shape(star):
    data = power_spectrum(star, 2, method="walk").to_dict()
    assert data["k"] == 2 and [lv["j"] for lv in data["levels"]] == [1, 2]
    assert data["levels"][1]["main_poly"] == M_STAR_SQUARED
    assert sum(e["multiplicity"] for e in data["levels"][1]["spectrum"]) == 9
    assert isinstance(power_spectrum(star, 2), PowerSpectrum)


def test_factor_check(star):
    rep = factor_check(star, 2)
    assert rep.divides and rep.cofactor == M_STAR_SQUARED
    rep = factor_check(star, 1)
    assert rep.divides and rep.cofactor == [-2, 0, 1]


def test_main_count_from_flags(star):
    res = power_spectrum(star, 4)
    assert sum(e.main == MAIN for e in res.spectrum.entries) == 16


def test_bad_arguments(star):
    with pytest.raises(ValueError):
        power_spectrum(star, 0)
    with pytest.raises(ValueError):
        power_spectrum(star, 2, method="magic")
