"""Piecewise polynomial-times-exponential density algebra."""

import math

import numpy as np
import pytest

import fourierdim as fd
from fourierdim.density import (
    DensityPiece,
    cut_mass,
    decompose_density,
    evaluate_density,
    piece_transform,
    poly_exp_integral,
    window_poly,
    window_value,
)


def _simpson(y, x):
    n = len(x) - 1
    assert n % 2 == 0
    h = (x[-1] - x[0]) / n
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return np.sum(w * y) * h / 3.0


def test_poly_exp_integral_against_simpson():
    poly = (1.0, -0.5, 0.25, 0.0, 0.125)
    t = np.linspace(-0.75, 1.25, 400001)
    vals_poly = sum(c * t ** r for r, c in enumerate(poly))
    for g in (0.0, 0.3, -2.0, 7.5, -40.0, 123.0):
        want = _simpson(vals_poly * np.exp(2j * np.pi * g * t), t)
        got = poly_exp_integral(poly, g, -0.75, 1.25)
        assert abs(got - want) < 5e-11, g


def test_poly_exp_integral_symmetric_interval():
    # even polynomial on [-a, a]: odd moments vanish exactly; the series
    # branch must not stop at the first zero term
    poly = (1.0, 0.0, -0.08, 0.0, 0.0016)
    t = np.linspace(-0.5, 0.5, 400001)
    vals = (1.0 - 0.08 * t ** 2 + 0.0016 * t ** 4)
    for g in (-3.25, 1.0, 4.9):
        want = _simpson(vals * np.exp(2j * np.pi * g * t), t)
        got = poly_exp_integral(poly, g, -0.5, 0.5)
        assert abs(got - want) < 5e-11


def test_poly_exp_integral_vectorised():
    poly = (1.0, 2.0)
    gs = np.array([0.0, 0.5, -3.0, 50.0])
    out = poly_exp_integral(poly, gs, 0.0, 1.0)
    assert out.shape == gs.shape
    for g, v in zip(gs, out):
        assert abs(v - poly_exp_integral(poly, float(g), 0.0, 1.0)) < 1e-14


def test_piece_evaluate_and_map_affine():
    p = DensityPiece(0.0, 1.0, 0.5, (1.0, 0.0, -1.0), 2.0, 3.0)
    x = np.linspace(0.0, 1.0, 11)
    direct = 2.0 * (1.0 - (x - 0.5) ** 2) * np.exp(2j * np.pi * 3.0 * (x - 0.5))
    assert np.allclose(p.evaluate(x), direct, atol=1e-14)

    q = p.map_affine(2.0, 0.5)  # x -> 2x + 0.5 pushforward
    y = 2.0 * x + 0.5
    assert np.allclose(q.evaluate(y), p.evaluate(x) / 2.0, atol=1e-14)


def test_piece_multiply_matches_pointwise():
    p = DensityPiece(0.0, 1.0, 0.0, (1.0, 1.0), 1.0, 2.0)
    q = DensityPiece(0.25, 1.5, 1.0, (0.5, 0.0, 1.0), 3.0, -1.0)
    r = p.multiply(q)
    x = np.linspace(0.25, 1.0, 101)
    assert np.allclose(r.evaluate(x), p.evaluate(x) * q.evaluate(x), atol=1e-12)


def test_piece_multiply_disjoint_returns_none():
    p = DensityPiece(0.0, 0.5, 0.0, (1.0,), 1.0, 0.0)
    q = DensityPiece(0.6, 1.0, 0.0, (1.0,), 1.0, 0.0)
    assert p.multiply(q) is None


def test_window_poly_peaks_at_one():
    coeffs = window_poly(0.8, 3)
    val = sum(c * 0.0 ** r for r, c in enumerate(coeffs))
    assert val == 1.0
    assert window_value(0.5, 0.8, 3, 0.5) == 1.0
    assert window_value(0.5, 0.8, 3, 1.3) == 0.0
    # matches the closed form everywhere inside
    for x in (0.1, 0.5, 0.9, 1.2):
        t = x - 0.5
        want = max(0.0, 1.0 - (t / 0.8) ** 2) ** 3
        assert window_value(0.5, 0.8, 3, x) == pytest.approx(want, abs=1e-15)


def test_decompose_uniform_normalises():
    m = fd.UniformOnIntervals(((0.0, 0.25), (0.5, 1.0)))
    pieces = decompose_density(m)
    total = sum(piece_transform(p, 0.0) for p in pieces)
    assert abs(total - 1.0) < 1e-14


def test_decompose_digit_product_density():
    m = fd.DigitProduct(5, (fd.DigitBlock(1, 2, "10"),))
    pieces = decompose_density(m)
    xs = np.linspace(0.001, 0.999, 997)
    dens = evaluate_density(pieces, xs)
    # density is 0 or the normalised cylinder height
    height = 16.0 / 12.0
    assert set(np.round(np.unique(dens), 10)) <= {0.0, round(height, 10)}
    total = sum(piece_transform(p, 0.0) for p in pieces)
    assert abs(total - 1.0) < 1e-14


def test_decompose_digit_product_enumeration_cap():
    blocks = (fd.DigitBlock(0, 1, "0"),)
    big = fd.DigitProduct(40, blocks)
    with pytest.raises(fd.MeasureError):
        decompose_density(big)


def test_decompose_rejects_atoms():
    with pytest.raises(fd.MeasureError):
        decompose_density(fd.Atomic(((0.5, 1.0),)))


def test_decompose_trig_rejects_huge_frequency():
    m = fd.TrigDensity(((0.5, 2 ** 60),))
    with pytest.raises(fd.MeasureError):
        decompose_density(m)


def test_smooth_cut_density_pieces_match_product():
    leb = fd.UniformOnIntervals(((0.0, 1.0),))
    cut = fd.SmoothCutDensity(leb, 0.3, 0.5, 3)
    pieces = decompose_density(cut)
    xs = np.linspace(0.0, 0.79, 101)
    got = evaluate_density(pieces, xs)
    want = np.array([window_value(0.3, 0.5, 3, x) for x in xs])
    assert np.allclose(got, want, atol=1e-12)
    assert cut_mass(cut) == pytest.approx(float(np.trapezoid(
        [window_value(0.3, 0.5, 3, x) for x in np.linspace(0, 0.8, 200001)],
        np.linspace(0, 0.8, 200001))), abs=1e-8)


def test_smooth_cut_disjoint_window_raises():
    leb = fd.UniformOnIntervals(((0.0, 1.0),))
    with pytest.raises(fd.MeasureError):
        decompose_density(fd.SmoothCutDensity(leb, 5.0, 0.5, 2))
