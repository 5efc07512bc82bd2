"""Exact radical arithmetic, rational square roots, and hull helpers."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from orthogeo import (
    SqrtSum,
    convex_hull,
    cross,
    frac_sqrt,
    sqrt_reduce,
    squarefree_split,
    upper_right_chain,
)

F = Fraction


def test_squarefree_split_small():
    assert squarefree_split(1) == (1, 1)
    assert squarefree_split(2) == (1, 2)
    assert squarefree_split(4) == (2, 1)
    assert squarefree_split(12) == (2, 3)
    assert squarefree_split(360) == (6, 10)
    s, c = squarefree_split(145)
    assert (s, c) == (1, 145)


def test_sqrt_reduce():
    assert sqrt_reduce(F(0)) == (F(0), 1)
    assert sqrt_reduce(F(9, 4)) == (F(3, 2), 1)
    assert sqrt_reduce(F(8)) == (F(2), 2)
    assert sqrt_reduce(F(5, 4)) == (F(1, 2), 5)
    coeff, core = sqrt_reduce(F(481, 100))
    assert coeff * coeff * core == F(481, 100)


def test_frac_sqrt_perfect_squares_exact():
    assert frac_sqrt(F(9, 4)) == F(3, 2)
    assert frac_sqrt(F(0)) == 0
    assert frac_sqrt(F(1)) == 1
    assert frac_sqrt(F(25, 16)) == F(5, 4)


def test_frac_sqrt_floor_property():
    for f in (F(2), F(1, 2), F(481, 100), F(145)):
        r = frac_sqrt(f, digits=30)
        assert r * r <= f
        step = F(1, 10**30)
        assert (r + step) * (r + step) > f


@given(st.fractions(min_value=0, max_value=1000))
def test_frac_sqrt_matches_float(f):
    r = frac_sqrt(f)
    assert math.isclose(float(r), math.sqrt(float(f)), rel_tol=1e-12, abs_tol=1e-15)


def test_sqrtsum_canonicalizes():
    assert SqrtSum.sqrt(F(8)) == SqrtSum(0, {2: F(2)})
    assert SqrtSum.sqrt(F(9)) == SqrtSum(3)
    assert SqrtSum.sqrt(F(50)) == SqrtSum.sqrt(F(2)).scale(5)


def test_sqrtsum_arithmetic():
    a = SqrtSum.sqrt(F(2))
    b = SqrtSum.sqrt(F(3))
    s = a + b
    assert s - b == a
    assert (a + a) == a.scale(2)
    assert (a - a).is_zero()
    assert -(a - b) == b - a
    assert SqrtSum(F(1, 2)) + F(1, 2) == SqrtSum(1)


def test_sqrtsum_ordering():
    assert SqrtSum.sqrt(F(2)) < SqrtSum(F(3, 2))
    assert SqrtSum(F(3, 2)) < SqrtSum.sqrt(F(3))
    assert SqrtSum.sqrt(F(2)) + SqrtSum.sqrt(F(3)) > SqrtSum(3)
    assert SqrtSum.sqrt(F(2)) + SqrtSum.sqrt(F(3)) < SqrtSum(F(315, 100))
    assert SqrtSum(0).sign() == 0
    assert (SqrtSum.sqrt(F(2)) - SqrtSum.sqrt(F(2))).sign() == 0


def test_sqrtsum_sign_close_values():
    # 99/70 is a convergent of sqrt(2); the difference is ~1e-4 yet exact.
    close = SqrtSum(F(99, 70)) - SqrtSum.sqrt(F(2))
    assert close.sign() == 1
    tiny = SqrtSum(F(665857, 470832)) - SqrtSum.sqrt(F(2))
    assert tiny.sign() == 1
    assert (-tiny).sign() == -1


def test_sqrtsum_repr_roundtrip_readable():
    s = SqrtSum(F(241, 100)) + SqrtSum.sqrt(F(29, 5)).scale(1)
    text = repr(s)
    assert "241/100" in text and "sqrt" in text


@given(
    st.fractions(min_value=0, max_value=50),
    st.fractions(min_value=0, max_value=50),
)
def test_sqrtsum_float_agrees(a, b):
    s = SqrtSum.sqrt(a) + SqrtSum.sqrt(b)
    expect = math.sqrt(float(a)) + math.sqrt(float(b))
    assert math.isclose(float(s), expect, rel_tol=1e-12, abs_tol=1e-12)


@given(
    st.fractions(min_value=0, max_value=20),
    st.fractions(min_value=0, max_value=20),
)
def test_sqrtsum_sign_agrees_with_float(a, b):
    d = SqrtSum.sqrt(a) - SqrtSum.sqrt(b)
    if a == b:
        assert d.sign() == 0
    else:
        assert d.sign() == (1 if a > b else -1)


def test_convex_hull_square_with_interior():
    pts = [
        (F(0), F(0)),
        (F(1), F(0)),
        (F(1), F(1)),
        (F(0), F(1)),
        (F(1, 2), F(1, 2)),
        (F(1, 2), F(0)),
    ]
    hull = convex_hull(pts)
    assert set(hull) == {(F(0), F(0)), (F(1), F(0)), (F(1), F(1)), (F(0), F(1))}


def test_convex_hull_collinear_and_dupes():
    pts = [(F(0), F(0)), (F(1), F(1)), (F(2), F(2)), (F(1), F(1))]
    hull = convex_hull(pts)
    assert set(hull) == {(F(0), F(0)), (F(2), F(2))}


def test_upper_right_chain_staircase():
    pts = [
        (F(0), F(0)),
        (F(4), F(0)),
        (F(0), F(3)),
        (F(3), F(2)),
        (F(1), F(1)),  # dominated: inside the hull
        (F(2), F(1)),  # dominated
    ]
    chain = upper_right_chain(pts)
    assert chain == [(F(4), F(0)), (F(3), F(2)), (F(0), F(3))]
    xs = [p[0] for p in chain]
    ys = [p[1] for p in chain]
    assert xs == sorted(xs, reverse=True)
    assert ys == sorted(ys)


@given(
    st.lists(
        st.tuples(
            st.fractions(min_value=0, max_value=8),
            st.fractions(min_value=0, max_value=8),
        ),
        min_size=1,
        max_size=12,
    )
)
def test_upper_right_chain_walks_hull_boundary(pts):
    chain = upper_right_chain(pts)
    assert chain, "chain never empty for nonempty input"
    assert set(chain) <= set(pts)
    assert chain[0] == max(pts, key=lambda p: (p[0], p[1]))
    assert chain[-1] == max(pts, key=lambda p: (p[1], p[0]))
    xs = [p[0] for p in chain]
    ys = [p[1] for p in chain]
    assert xs == sorted(xs, reverse=True) and len(set(xs)) == len(xs)
    assert ys == sorted(ys) and len(set(ys)) == len(ys)
    # each directed chain edge keeps every input point weakly to its left
    for a, b in zip(chain, chain[1:]):
        assert all(cross(a, b, p) >= 0 for p in pts)
