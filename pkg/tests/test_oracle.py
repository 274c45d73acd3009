import math

import mpmath
import numpy as np
import pytest

from bsharp import (
    DomainError,
    SignedLogReal,
    co_infinity,
    co_p_sample,
    convergence_rows,
    gamma,
    gamma_p,
    hausdorff_distance,
    holder_sum,
    intermediate_point_p,
    intermediate_sequence,
    nary_boxplus,
    sample_hull,
    vec_nary_boxplus,
)
from bsharp.oracle import _bridge, _gamma_p_many

X, Y = (4, 2), (-2, -3)


def mp_gamma_p(x, y, t, p, dps=60):
    # direct high-precision evaluation, no factoring tricks
    with mpmath.workdps(dps):
        e = 2 * p + 1
        t = mpmath.mpf(t)
        d = (1 + t ** e) ** (mpmath.mpf(1) / e)
        out = []
        for a, b in zip(x, y):
            s = mpmath.mpf(a) ** e + (t * b) ** e
            r = 0 if s == 0 else mpmath.sign(s) * abs(s) ** (mpmath.mpf(1) / e)
            out.append(float(r / d))
        return tuple(out)


def test_signed_log_real():
    a = SignedLogReal.from_float(-3.0)
    b = SignedLogReal.from_float(0.5)
    assert (a * b).to_float() == pytest.approx(-1.5)
    assert (a / b).to_float() == pytest.approx(-6.0)
    assert SignedLogReal.from_float(0.0).to_float() == 0.0
    assert SignedLogReal.from_float(-8.0).odd_root(3).to_float() == pytest.approx(-2.0)


def test_holder_examples():
    for p in (0, 3, 50, 400):
        assert holder_sum((2.5, -2.5), None, p) == 0.0
        assert holder_sum((3.0, 3.0), None, p) == pytest.approx(3.0 * 2 ** (1 / (2 * p + 1)))
    assert abs(holder_sum((1.0, 0.5), None, 200) - 1.0) < 1e-50
    assert holder_sum((1, 2, 3), None, 0) == pytest.approx(6.0)
    with pytest.raises(DomainError):
        holder_sum((1, 2), [], 3)
    with pytest.raises(DomainError):
        holder_sum((1, 2), None, 501)
    with pytest.raises(DomainError):
        holder_sum((1, 2), None, -1)


def test_holder_no_overflow():
    assert holder_sum((1e300, -5e299), None, 300) == pytest.approx(1e300, rel=1e-12)


def test_holder_matches_mpmath():
    rng = np.random.default_rng(0)
    for _ in range(50):
        x = rng.uniform(-10, 10, 6)
        p = int(rng.integers(0, 60))
        with mpmath.workdps(60):
            e = 2 * p + 1
            s = mpmath.fsum(mpmath.mpf(float(v)) ** e for v in x)
            want = float(mpmath.sign(s) * abs(s) ** (mpmath.mpf(1) / e))
        assert holder_sum(x, None, p) == pytest.approx(want, rel=1e-12)


def test_holder_error_bound():
    rng = np.random.default_rng(1)
    for _ in range(200):
        n = int(rng.integers(2, 9))
        x = rng.uniform(0.1, 10, n) * rng.choice([-1, 1], n)
        mags = np.sort(np.abs(x))[::-1]
        r = mags[1] / mags[0]
        err = abs(holder_sum(x, None, 300) - nary_boxplus(x))
        assert err <= mags[0] * n * r ** 601 + 1e-12


def test_perturbed_family_limit():
    rng = np.random.default_rng(2)
    for _ in range(30):
        x = rng.uniform(0.1, 5, 4) * rng.choice([-1, 1])
        for p in (50, 200, 400):
            xp = x + 1.0 / p
            assert holder_sum(xp, None, p) == pytest.approx(
                nary_boxplus(x), abs=2 * np.max(np.abs(x)) * (math.log(4) / (2 * p + 1)) + 2 / p)


def test_gamma_p_endpoints_and_domain():
    assert gamma_p(X, Y, 0, 7) == X
    assert gamma_p(X, Y, math.inf, 7) == Y
    with pytest.raises(DomainError):
        gamma_p(X, Y, -0.5, 3)


def test_gamma_p_p0_is_segment():
    for t in (0.1, 0.5, 1, 3):
        lam = t / (1 + t)
        want = (1 - lam) * np.array(X) + lam * np.array(Y)
        assert np.allclose(gamma_p(X, Y, t, 0), want)


def test_gamma_p_matches_mpmath():
    rng = np.random.default_rng(3)
    for _ in range(60):
        x, y = rng.uniform(-5, 5, (2, 3))
        t = float(rng.exponential(2))
        p = int(rng.integers(0, 200))
        assert np.allclose(gamma_p(x, y, t, p), mp_gamma_p(x, y, t, p), rtol=1e-11, atol=1e-12)
        assert np.allclose(_gamma_p_many(tuple(x), tuple(y), np.array([t]), 2 * p + 1)[0],
                           gamma_p(x, y, t, p), rtol=1e-13, atol=1e-14)


def test_gamma_p_converges_and_copositive():
    rng = np.random.default_rng(4)
    checked = 0
    while checked < 100:
        x, y = rng.uniform(-5, 5, (2, 3))
        t = float(rng.uniform(0.05, 20))
        # keep away from t = 1 and from magnitude ties of x_j against t·y_j
        if abs(t - 1) < 0.2 or np.min(np.abs(np.abs(x) - t * np.abs(y))) < 0.2:
            continue
        checked += 1
        g = np.array(gamma(x, y, t))
        gp = np.array(gamma_p(x, y, t, 300))
        assert np.allclose(gp, g, atol=1e-6)
        for p in (1, 10, 100):
            assert np.all(np.array(gamma_p(x, y, t, p)) * g >= 0)


def test_intermediate_point_p():
    for p in (0, 5, 50, 300):
        pt = intermediate_point_p(X, Y, 0, p)
        assert pt[0] == 0.0
        assert np.allclose(pt, gamma_p(X, Y, 2, p), atol=1e-12)
    assert np.allclose(intermediate_point_p(X, Y, 0, 300), (0, -3), atol=1e-6)
    with pytest.raises(DomainError):
        intermediate_point_p((1, 2), (3, -1), 0, 5)


def test_intermediate_point_p_converges_to_limit():
    rng = np.random.default_rng(5)
    for _ in range(40):
        x, y = rng.uniform(-5, 5, (2, 3))
        for bp in intermediate_sequence(x, y).interior:
            i = bp.sources[0]
            assert intermediate_point_p(x, y, i, 0)[i] == 0.0
            err = np.abs(np.array(intermediate_point_p(x, y, i, 400)) - bp.point).max()
            assert err < 0.02 * max(np.abs(x).max(), np.abs(y).max())


def test_hausdorff_examples():
    A = [(0, 0), (1, 1)]
    assert hausdorff_distance(A, A) == 0
    assert hausdorff_distance([(0, 0)], [(3, 4)]) == 5
    rng = np.random.default_rng(6)
    P, Q = rng.normal(size=(30, 3)), rng.normal(size=(40, 3))
    assert hausdorff_distance(P, Q) == hausdorff_distance(Q, P)
    with pytest.raises(DomainError):
        hausdorff_distance([], [(1, 2)])


def test_co_p_sample_basics():
    S = co_p_sample(X, Y, 20, 300, seed=1)
    assert len(S) == 300 and S[0] == X and S[-1] == Y
    assert S == co_p_sample(X, Y, 20, 300, seed=1)
    flat = co_p_sample(X, Y, 0, 50)
    for z in flat:
        # p = 0 keeps every sample on the straight segment
        u, w = np.subtract(Y, X), np.subtract(z, X)
        assert abs(u[0] * w[1] - u[1] * w[0]) < 1e-9
    assert co_p_sample(X, X, 5, 4) == [X] * 4


def mp_curve_near(x, y, ratio, p, rel, k):
    # points at t*(1 + d) for tiny relative offsets d; t* = ratio exactly.
    # coordinate k (the one vanishing at t*) uses x_k^e (1 - (1 + d)^e),
    # which keeps its digits even when 1 + d rounds to 1
    out = []
    with mpmath.workdps(80):
        e = 2 * p + 1
        star = mpmath.mpf(ratio[0]) / ratio[1]
        for d in rel:
            d = mpmath.mpf(d)
            t = star * (1 + d)
            pt = list(mp_gamma_p(x, y, t, p, dps=80))
            f = -mpmath.expm1(e * mpmath.log1p(d))
            D = (1 + t ** e) ** (mpmath.mpf(1) / e)
            pt[k] = float(mpmath.sign(f) * abs(f) ** (mpmath.mpf(1) / e) * x[k] / D)
            out.append(pt)
    return np.array(out)


def test_co_p_sample_lies_on_curve():
    S = np.array(co_p_sample(X, Y, 100, 2000))
    ts = np.geomspace(1e-6, 1e6, 200000)
    P = [_gamma_p_many(X, Y, ts, 201)]
    # offsets d with (201 d)^(1/201) evenly spaced, so the vanishing
    # coordinate is evenly covered; it only reaches 1e-3 near d = 1e-600
    c = np.linspace(5e-4, 0.999, 1500)
    exps = -(201 * np.log10(c) - np.log10(201))
    offsets = [sg * mpmath.mpf(10) ** (-k) for k in exps for sg in (-1, 1)]
    for ratio, k in (((2, 3), 1), ((2, 1), 0)):
        P.append(mp_curve_near(X, Y, ratio, 100, offsets, k))
    P = np.vstack(P)
    res = np.linalg.norm(np.diff(S, axis=0), axis=1).max()
    assert hausdorff_distance(S, P) < 2 * res + 1e-3


def test_bridge_is_straight_under_high_precision():
    # inside t*(1 ± 1e-12) the true curve stays on the two bridge lines
    e = 201
    for ratio, k in (((2, 3), 1), ((2, 1), 0)):
        star = ratio[0] / ratio[1]
        q = _bridge(X, Y, star, [k], e)
        ends = mp_curve_near(X, Y, ratio, 100, [-1e-12, 1e-12], k)
        assert np.allclose(q[[0, 2]], ends, rtol=1e-12, atol=1e-13)
        rel = np.concatenate([-np.geomspace(1e-40, 1e-12, 60), np.geomspace(1e-40, 1e-12, 60)])
        pts = mp_curve_near(X, Y, ratio, 100, rel, k)
        for z in pts:
            d = min(_dist_to_segment(z, q[0], q[1]), _dist_to_segment(z, q[1], q[2]))
            assert d < 1e-8


def _dist_to_segment(z, a, b):
    ab = b - a
    lam = np.clip(np.dot(z - a, ab) / np.dot(ab, ab), 0, 1)
    return np.linalg.norm(z - (a + lam * ab))


def test_convergence_monotone_and_small():
    rows = convergence_rows(X, Y, [5, 20, 100, 300], samples=1500)
    vals = [r["value"] for r in rows]
    assert [r["p"] for r in rows] == [5, 20, 100, 300]
    res = np.linalg.norm(np.diff(sample_hull(co_infinity(X, Y), 1500), axis=0), axis=1).max()
    assert all(b <= a + 2 * res for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-2


def test_piecewise_union_of_order_p_pieces():
    # Co^p(x, y) is the union of Co^p between consecutive order-p intermediate points
    rng = np.random.default_rng(7)
    p = 20
    x, y = rng.uniform(-5, 5, (2, 2))
    while len(intermediate_sequence(x, y).interior) != 2:
        x, y = rng.uniform(-5, 5, (2, 2))
    i1, i2 = (b.sources[0] for b in intermediate_sequence(x, y).interior)
    knots = [tuple(x), intermediate_point_p(x, y, i1, p), intermediate_point_p(x, y, i2, p), tuple(y)]
    pieces = []
    for a, b in zip(knots, knots[1:]):
        pieces += co_p_sample(a, b, p, 800)
    whole = co_p_sample(x, y, p, 2400)
    res = np.linalg.norm(np.diff(np.array(whole), axis=0), axis=1).max()
    assert hausdorff_distance(pieces, whole) <= 4 * res + 1e-3


def test_one_orthant_fold_limit():
    rng = np.random.default_rng(8)
    xs = [tuple(rng.uniform(0, 3, 3)) for _ in range(4)]
    lim = vec_nary_boxplus(xs)
    for k in range(3):
        got = holder_sum([v[k] for v in xs], None, 400)
        assert got == pytest.approx(lim[k], rel=math.log(4) / 801 + 1e-12)
