"""Tests for the f/g cycle-sum identity and its affine instantiation."""

from fractions import Fraction

import pytest

from bkpnpoint.affine import validate_b
from bkpnpoint.lemma import (
    SeriesPairSpec,
    VarRef,
    check_lemma,
    eval_f,
    eval_g,
    first_lemma_difference,
    instantiate_from_affine,
    lemma_side,
    validate_pair_spec,
)
from bkpnpoint.npoint import compare_formulas, cycle_orders
from bkpnpoint.sampling import random_affine_b, random_series_pair_spec
from bkpnpoint.series import Series, series_equal_on, uniform_window

F = Fraction
W6 = uniform_window(4, -6, 6)


def _spec(s=None, t=None):
    return validate_pair_spec(s or {}, t or {})


def test_pair_spec_folds_onto_upper_triangle():
    spec = validate_pair_spec({(3, 1): F(2)}, {2: F(1, 3)})
    assert spec.s_entries == {(1, 3): F(-2)}
    assert spec.t_entries == {2: F(1, 3)}
    assert spec.max_index == 3
    assert not spec.is_zero()
    assert _spec().is_zero()


def test_pair_spec_consistent_duplicates_allowed():
    spec = validate_pair_spec({(1, 2): F(5), (2, 1): F(-5)}, {})
    assert spec.s_entries == {(1, 2): F(5)}


def test_pair_spec_rejects_bad_input():
    with pytest.raises(ValueError):
        validate_pair_spec({(1, 2): F(1), (2, 1): F(1)}, {})
    with pytest.raises(ValueError):
        validate_pair_spec({(2, 2): F(1)}, {})
    with pytest.raises(ValueError):
        validate_pair_spec({(0, 2): F(1)}, {})
    with pytest.raises(ValueError):
        validate_pair_spec({}, {0: F(1)})
    with pytest.raises(ValueError):
        validate_pair_spec({}, {True: F(1)})
    # zero diagonal and zero values are dropped silently
    spec = validate_pair_spec({(2, 2): F(0), (1, 2): F(0)}, {1: F(0)})
    assert spec.is_zero()


def test_var_ref_positions():
    assert VarRef(1, "x").position == 0
    assert VarRef(1, "y").position == 1
    assert VarRef(3, "x").position == 4
    with pytest.raises(ValueError):
        VarRef(0, "x")
    with pytest.raises(ValueError):
        VarRef(1, "z")


def test_ratio_piece_frozen():
    # s = 0, t = 0: f(y_1, x_2) is the directional (y-x)/(y+x) expansion
    # 1 + 2 sum_{n>=0} (-y_1)^{-n-1} x_2^{n+1}.
    f = eval_f(_spec(), VarRef(1, "y"), VarRef(2, "x"), W6)
    expect = {(0, 0, 0, 0): F(1)}
    for p in range(1, 7):
        expect[(0, -p, p, 0)] = F(2 * (-1) ** p)
    assert f.coeffs == expect
    # dominance marker: positions 1 (y_1) and 2 (x_2), smaller index wins
    assert f.markers == {(1, 2): 1}


def test_equal_index_kernel_piece_vanishes():
    # wrap-around factor of k = 1: only the s and t parts survive
    spec = _spec(t={1: F(3)})
    win = uniform_window(2, -6, 6)
    f = eval_f(spec, VarRef(1, "y"), VarRef(1, "x"), win)
    assert f.coeffs == {(0, -1): F(6), (-1, 0): F(-6)}
    assert f.markers == {}


def test_f_antisymmetry_and_g_split():
    args = [
        (VarRef(1, "y"), VarRef(2, "x")),
        (VarRef(2, "x"), VarRef(1, "y")),
        (VarRef(1, "y"), VarRef(1, "x")),
        (VarRef(2, "y"), VarRef(1, "x")),
        (VarRef(3, "x"), VarRef(2, "y")),
    ]
    win = uniform_window(6, -6, 6)
    for seed in range(5):
        spec = random_series_pair_spec(seed)
        for a, b in args:
            fab = eval_f(spec, a, b, win)
            assert fab == eval_f(spec, b, a, win).neg()
            assert fab == eval_g(spec, a, b, win).sub(
                eval_g(spec, b, a, win))


def test_k1_sides_frozen():
    spec = _spec(s={(1, 2): F(1, 2)}, t={1: F(2), 3: F(-1, 3)})
    win = uniform_window(2, -6, 6)
    y1, x1 = VarRef(1, "y"), VarRef(1, "x")
    lhs = lemma_side("LHS", 1, spec, 6)
    rhs = lemma_side("RHS", 1, spec, 6)
    assert lhs == eval_f(spec, y1, x1, win).scale(2)
    assert rhs == eval_g(spec, y1, x1, win).sub(
        eval_g(spec, x1, y1, win)).scale(2)
    assert lhs == rhs


def test_zero_spec_identity():
    # pure kernel identity, no s or t
    for k in (1, 2, 3):
        assert check_lemma(k, _spec(), 6)


def test_identity_on_random_specs():
    for k in (1, 2, 3):
        for seed in range(6):
            spec = random_series_pair_spec(seed)
            assert first_lemma_difference(k, spec, 6) is None


def test_identity_k4_small_spec():
    spec = _spec(s={(1, 2): F(1, 2)}, t={1: F(-2, 3)})
    assert check_lemma(4, spec, 6)


def test_halved_enumeration_matches_full_sum():
    # independent reference: all 2^k sign vectors, Series products
    def reference(which, k, spec, window):
        from itertools import product as iproduct

        win = uniform_window(2 * k, -window, window)
        evaluate = eval_f if which == "LHS" else eval_g
        total = Series.zero(2 * k, win)
        for order in cycle_orders(k):
            for eps in iproduct((1, -1), repeat=k):
                sign = 1
                for e in eps:
                    sign *= e
                term = None
                for i in range(k):
                    j1, j2 = order[i], order[(i + 1) % k]
                    a = VarRef(j1 + 1, "y" if eps[j1] == 1 else "x")
                    b = VarRef(j2 + 1, "x" if eps[j2] == 1 else "y")
                    fac = evaluate(spec, a, b, win)
                    term = fac if term is None else term.mul(fac)
                total = total.add(term.scale(sign))
        return total.scale(2 ** k) if which == "RHS" else total

    for seed in (0, 3):
        spec = random_series_pair_spec(seed)
        for k in (1, 2):
            for which in ("LHS", "RHS"):
                assert lemma_side(which, k, spec, 4) == \
                    reference(which, k, spec, 4)


def test_window_restriction_consistency():
    # coefficients inside a smaller box do not depend on the window
    spec = random_series_pair_spec(7)
    for k in (1, 2):
        wide = lemma_side("LHS", k, spec, 6)
        narrow = lemma_side("LHS", k, spec, 3)
        assert series_equal_on(wide, narrow, uniform_window(2 * k, -3, 3))


def test_flavor_swap_symmetry():
    # swapping every x_j with y_j negates odd-k sides, fixes even-k sides
    spec = random_series_pair_spec(2)
    for k, flip in ((1, -1), (2, 1)):
        side = lemma_side("LHS", k, spec, 5)
        swapped = {
            tuple(e[p ^ 1] for p in range(2 * k)): c
            for e, c in side.coeffs.items()
        }
        assert swapped == {e: flip * c for e, c in side.coeffs.items()}


def test_side_argument_validation():
    spec = _spec()
    with pytest.raises(ValueError):
        lemma_side("MID", 1, spec, 6)
    with pytest.raises(ValueError):
        lemma_side("LHS", 0, spec, 6)
    with pytest.raises(ValueError):
        lemma_side("LHS", 5, spec, 6)
    with pytest.raises(ValueError):
        lemma_side("LHS", 1, spec, -1)


def test_instantiate_from_affine_frozen():
    assert instantiate_from_affine(validate_b([])).is_zero()
    spec = instantiate_from_affine(validate_b([(1, 0, F(1))]))
    assert spec.s_entries == {}
    assert spec.t_entries == {1: F(1)}
    # the m,n >= 1 double sum folds with a factor 2 on the m < n triangle
    spec = instantiate_from_affine(validate_b([(2, 1, F(1)), (3, 0, F(5))]))
    assert spec.s_entries == {(1, 2): F(-2)}
    assert spec.t_entries == {3: F(5)}


def test_instantiated_lemma_and_formulas_agree():
    for seed in (0, 4):
        b = random_affine_b(seed, max_index=3)
        assert check_lemma(2, instantiate_from_affine(b), 6)
        assert compare_formulas(b, 2, 5).tables_agree
