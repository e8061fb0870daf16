from __future__ import annotations

import pytest

from cybe_forge.grading import (DoubleWindow, GradingError, WindowEscapeError, alpha_grading, computed_perp,
                                delta_alpha, is_closed, order_model, order_model_perp, quotient_iso_sigma,
                                sigma_lift)
from cybe_forge.linalg import is_isotropic

from conftest import algebra

VERTICES = [(k, n, a) for k, n in [("A", 1), ("A", 2), ("B", 2), ("A", 3), ("C", 3)] for a in range(1, n + 1)]


def test_o5_graded_dimensions():
    L = algebra("B", 2)
    V1, V2 = alpha_grading(L, 1), alpha_grading(L, 2)
    assert V1.k == 2 and V1.dims() == (1, 2, 4, 2, 1)
    assert V1.n_la == 6 and delta_alpha(V1).dim == 8
    assert V2.k == 1 and delta_alpha(V2).dim == 10


def test_bad_vertex_index(sl3):
    with pytest.raises(GradingError):
        alpha_grading(sl3, 3)


@pytest.mark.parametrize("kind,rank,alpha", VERTICES)
def test_delta_alpha_is_lagrangian_subalgebra(kind, rank, alpha):
    V = alpha_grading(algebra(kind, rank), alpha)
    D = delta_alpha(V)
    assert 2 * D.dim == V.n_la + V.n
    assert is_isotropic(D, V.q_prime_gram)
    assert is_closed(D, V.bracket)


@pytest.mark.parametrize("kind,rank,alpha", VERTICES)
def test_closed_form_perp(kind, rank, alpha):
    L = algebra(kind, rank)
    V = alpha_grading(L, alpha)
    W = DoubleWindow(L)
    assert computed_perp(order_model(V, W), W) == order_model_perp(V, W)


@pytest.mark.parametrize("alpha", [1, 2])
def test_sigma_lift_inverts_sigma(o5, alpha):
    V = alpha_grading(o5, alpha)
    W = DoubleWindow(o5)
    D = delta_alpha(V)
    for y in D.basis[:6]:
        x = sigma_lift(V, W, y)
        assert order_model(V, W).contains(x)
        assert quotient_iso_sigma(V, W, x) == y


def test_window_shape_and_escape(sl2):
    W = DoubleWindow(sl2)
    assert W.dim == 5 * sl2.dim
    e = sl2.root_index[(1,)]
    f = sl2.root_index[(-1,)]
    top_e = W.element({1: sl2.unit(e)})
    top_f = W.element({1: sl2.unit(f)})
    with pytest.raises(WindowEscapeError):
        W.bracket(top_e, top_f)
    # u^-2 g lies in the radical of the truncated form
    low = W.low_subspace(-2)
    assert all(W.gram[i][j] == 0 for v in low.basis for i, x in enumerate(v) if x for j in range(W.dim))


def test_window_bracket_drops_low_degrees(sl2):
    W = DoubleWindow(sl2)
    e = sl2.root_index[(1,)]
    f = sl2.root_index[(-1,)]
    x = W.element({-2: sl2.unit(e)})
    y = W.element({-1: sl2.unit(f)})
    assert not any(W.bracket(x, y))
