from fractions import Fraction

import pytest

from polyinj.localfields import (
    DerivativeVanishesError,
    HenselInapplicableError,
    NoCollisionFoundError,
    padic_collision,
    real_collision,
)
from polyinj.parser import parse_poly


def bisect_oracle(fn, lo, hi, iters=200):
    """Independent 1-D root finder: plain sign-change bisection."""
    flo = fn(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fmid = fn(mid)
        if (flo < 0) != (fmid < 0):
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def test_real_linear_exact():
    r = real_collision(parse_poly("x + y"), 0, 0, 0.0)
    assert r.residual == 0.0
    assert r.x == 1 / 1024 and r.y == -1 / 1024


def test_real_linear_delta_one():
    r = real_collision(parse_poly("x + y"), 0, 0, 0.0, delta=Fraction(1))
    assert (r.x, r.y) == (1.0, -1.0)


def test_real_parabola_exact():
    r = real_collision(parse_poly("x^2 + y"), 0, 0, 0.0, delta=Fraction(1))
    assert (r.x, r.y) == (1.0, -1.0)
    assert r.residual == 0.0


def test_real_zagier_example():
    f = parse_poly("x^7 + 3*y^7")
    r = real_collision(f, 1, 1, 1e-12)
    assert r.residual <= 1e-12
    assert abs(r.x - (1 + 1 / 1024)) == 0.0
    assert abs(r.x - 1.0) >= (1 / 1024) / 2  # moved by at least |delta|/2 in x
    # Independent oracle for the x1 = 0 variant: 3 y^7 = 4.
    r0 = real_collision(f, 1, 1, 1e-12, delta=Fraction(-1))
    y_star = bisect_oracle(lambda y: 3 * y**7 - 4, 0.0, 2.0)
    assert abs(r0.y - y_star) < 1e-9
    assert abs(r0.y - (4 / 3) ** (1 / 7)) < 1e-9


def test_real_derivative_vanishes():
    with pytest.raises(DerivativeVanishesError):
        real_collision(parse_poly("x^2 + y^2"), 0, 0, 1e-9)  # df/dy = 2y = 0 at base
    with pytest.raises(DerivativeVanishesError):
        real_collision(parse_poly("x^2"), 1, 1, 1e-9)  # f ignores y entirely


def test_real_no_root_after_big_jump():
    # Base point is fine, but a huge delta pushes the level set out of reach:
    # (x0+100)^2 + y^2 = 1 has no real solution.
    with pytest.raises(NoCollisionFoundError):
        real_collision(parse_poly("x^2 + y^2"), 0, 1, 1e-9, delta=Fraction(100))


def test_real_rejects_constant_and_bad_tol():
    with pytest.raises(ValueError):
        real_collision(parse_poly("5"), 0, 0, 1e-9)
    with pytest.raises(ValueError):
        real_collision(parse_poly("x + y"), 0, 0, -1.0)
    with pytest.raises(ValueError):
        real_collision(parse_poly("x + y"), 0, 0, 1e-9, delta=Fraction(0))


def test_padic_linear_exact():
    r = padic_collision(parse_poly("x + y"), 5, 3, (0, 0), 1)
    assert r.x == 1
    assert r.y % 125 == 124  # y = -1 mod 5^3
    assert r.residual_valuation is None  # exactly zero residual
    assert r.valuation_trace[-1] >= 3


def test_padic_taxicab_lift():
    f = parse_poly("x^3 + y^3")
    r = padic_collision(f, 5, 8, (1, 1), 5)
    assert r.p == 5 and r.precision == 8
    assert r.x == 6
    assert r.y % 5 == 1  # seed residue: -214 = 1 mod 5
    # Residual valuation certified >= 8, trace nondecreasing.
    assert r.residual_valuation is None or r.residual_valuation >= 8
    assert list(r.valuation_trace) == sorted(r.valuation_trace)
    # Exact recheck of the certificate.
    c = f.eval_xy(1, 1)
    val = f.eval_xy(6, r.y) - c
    assert val.numerator % 5**8 == 0
    # Distinctness mod p^k.
    assert (6 - 1) % 5**8 != 0


def test_padic_quadratic_convergence_shape():
    r = padic_collision(parse_poly("x^3 + y^3"), 5, 8, (1, 1), 5)
    tr = list(r.valuation_trace)
    assert tr[0] >= 1
    for prev, cur in zip(tr, tr[1:]):
        assert cur >= min(8, 2 * prev) or cur >= 8


def test_padic_inapplicable_no_y():
    with pytest.raises(HenselInapplicableError):
        padic_collision(parse_poly("x^2"), 5, 4, (1, 1), 5)


def test_padic_inapplicable_no_simple_root():
    # f(x1, y) - c = y^5 - 1 mod 5 has derivative 5 y^4 = 0 mod 5 everywhere.
    with pytest.raises(HenselInapplicableError):
        padic_collision(parse_poly("x + y^5"), 5, 4, (0, 1), 5)


def test_padic_validation():
    with pytest.raises(ValueError):
        padic_collision(parse_poly("x + y"), 6, 3, (0, 0), 1)  # 6 not prime
    with pytest.raises(ValueError):
        padic_collision(parse_poly("x + y"), 5, 0, (0, 0), 1)
    with pytest.raises(ValueError):
        padic_collision(parse_poly("x + y"), 5, 2, (0, 0), 25)  # delta = 0 mod p^k
    with pytest.raises(ValueError):
        padic_collision(parse_poly("1/5*x + y"), 5, 3, (0, 0), 1)  # not 5-integral


def test_padic_default_delta_is_p():
    r = padic_collision(parse_poly("x + y"), 7, 3, (0, 0))
    assert r.x == 7


def test_json_shapes():
    rp = real_collision(parse_poly("x + y"), 0, 0, 0.0)
    assert set(rp.to_json_dict()) == {"x", "y", "residual"}
    pa = padic_collision(parse_poly("x + y"), 5, 3, (0, 0), 1)
    d = pa.to_json_dict()
    assert d["residual_valuation"] == "inf"
    assert d["valuation_trace"][-1] >= 3
