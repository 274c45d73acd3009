"""Two-point limit hulls Co^∞(x, y).

The hull of a pair is traced by ``γ(x, y, t) = (x ⊞ t·y) / max(1, t)`` for
``t`` in ``[0, ∞]``.  Each coordinate where ``x`` and ``y`` disagree in sign
vanishes at one value ``t* = |x_i / y_i|``; the points at those values split
the hull into a chain of B-segments between copositive endpoints.

A B-segment ``ℬ[u, v]`` between copositive ``u`` and ``v`` is the set of
``t·u ⊞ s·v`` with ``max(t, s) = 1``.  After flipping into the positive
orthant it is the monotone staircase ``u → u ∨ v → v``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError
from .scalar import EXACT, Tolerance, _fold, boxplus
from .vector import (
    Vec,
    as_vec,
    is_copositive,
    orthant_of,
    psi_K,
    vec_boxplus,
    vec_nary_boxplus,
)

__all__ = [
    "gamma",
    "sign_conflict_set",
    "BreakPoint",
    "IntermediateSequence",
    "PiecewiseHull",
    "intermediate_sequence",
    "co_infinity",
    "segment_membership",
    "hull_membership",
    "four_term_witness",
    "four_term_membership",
    "combination_set_sample",
    "path_eval",
    "segment_polyline",
    "sample_hull",
    "ProbeResult",
    "closure_probe",
]


def _pair(x, y):
    x, y = as_vec(x), as_vec(y)
    if len(x) != len(y):
        raise DomainError(f"dimension mismatch: {len(x)} vs {len(y)}")
    return x, y


def _check_t(t) -> float:
    t = float(t)
    if math.isnan(t) or t < 0.0:
        raise DomainError(f"t must lie in [0, inf], got {t!r}")
    return t


def _atol(tol: Tolerance, *vecs) -> float:
    scale = max((abs(c) for v in vecs for c in v), default=0.0)
    return tol.tie_eps + 1e-12 * scale


def gamma(x: Sequence[float], y: Sequence[float], t: float, tol: Tolerance = EXACT) -> Vec:
    """``(x ⊞ t·y) / max(1, t)``, with ``γ(x, y, inf) = y``.

    >>> gamma((4, 2), (-2, -3), 2)
    (0.0, -3.0)
    """
    x, y = _pair(x, y)
    t = _check_t(t)
    if math.isinf(t):
        return y
    m = max(1.0, t)
    return tuple(boxplus(a, t * b, tol) / m for a, b in zip(x, y))


def sign_conflict_set(x: Sequence[float], y: Sequence[float]) -> frozenset:
    """0-based coordinates where ``x_i · y_i < 0``."""
    x, y = _pair(x, y)
    return frozenset(i for i, (a, b) in enumerate(zip(x, y)) if a * b < 0.0)


@dataclass(frozen=True)
class BreakPoint:
    t_star: float
    sources: tuple
    point: Vec

    @property
    def source_index(self):
        return self.sources[0] if self.sources else None


@dataclass(frozen=True)
class IntermediateSequence:
    x: Vec
    y: Vec
    breakpoints: tuple

    @property
    def points(self) -> tuple:
        return tuple(b.point for b in self.breakpoints)

    @property
    def ts(self) -> tuple:
        return tuple(b.t_star for b in self.breakpoints)

    @property
    def interior(self) -> tuple:
        return self.breakpoints[1:-1]


def _intermediate_point(x: Vec, y: Vec, group: tuple, tol: Tolerance) -> Vec:
    # weights |y_i|, |x_i| scaled by their max reproduce γ at t* = |x_i/y_i|
    # without ever forming the ratio, so coordinate i cancels exactly
    i = group[0]
    ax, ay = abs(x[i]), abs(y[i])
    m = max(ax, ay)
    a, b = ay / m, ax / m
    pt = [boxplus(a * u, b * v, tol) for u, v in zip(x, y)]
    for k in group:
        pt[k] = 0.0
    return tuple(pt)


def intermediate_sequence(x: Sequence[float], y: Sequence[float],
                          tol: Tolerance = EXACT) -> IntermediateSequence:
    """Breakpoints of ``t ↦ γ(x, y, t)`` from ``t = 0`` to ``t = inf``.

    Coordinates vanishing at the same ``t*`` (within ``tol``) share one
    breakpoint.  Consecutive points are copositive.
    """
    x, y = _pair(x, y)
    conflicts = sorted(sign_conflict_set(x, y), key=lambda i: (abs(x[i] / y[i]), i))
    groups = []
    for i in conflicts:
        t = abs(x[i] / y[i])
        if groups and tol.eq(groups[-1][0], t):
            groups[-1][1].append(i)
        else:
            groups.append((t, [i]))
    bps = [BreakPoint(0.0, (), x)]
    for t, idx in groups:
        bps.append(BreakPoint(t, tuple(idx), _intermediate_point(x, y, tuple(idx), tol)))
    bps.append(BreakPoint(math.inf, (), y))
    return IntermediateSequence(x, y, tuple(bps))


def segment_polyline(u: Sequence[float], v: Sequence[float]) -> list:
    """Vertices of the staircase ``ℬ[u, v]`` for a copositive pair."""
    u, v = _pair(u, v)
    if not is_copositive(u, v):
        raise DomainError("segment endpoints must be copositive")
    K = orthant_of(u, v)
    up, vp = psi_K(u, K), psi_K(v, K)
    betas = sorted({a / b for a, b in zip(up, vp) if b > 0 and 0 < a / b < 1})
    alphas = sorted({b / a for a, b in zip(up, vp) if a > 0 and 0 < b / a < 1}, reverse=True)
    verts = [up]
    verts += [tuple(max(a, be * b) for a, b in zip(up, vp)) for be in betas]
    verts.append(tuple(max(a, b) for a, b in zip(up, vp)))
    verts += [tuple(max(al * a, b) for a, b in zip(up, vp)) for al in alphas]
    verts.append(vp)
    out = []
    for w in verts:
        w = psi_K(w, K)
        if not out or out[-1] != w:
            out.append(w)
    return out


@dataclass(frozen=True)
class PiecewiseHull:
    """Co^∞(x, y) as a chain of B-segments between consecutive breakpoints."""

    x: Vec
    y: Vec
    sequence: IntermediateSequence
    segments: tuple

    @property
    def points(self) -> tuple:
        return self.sequence.points

    def segment_endpoints(self):
        pts = self.points
        return [(pts[i], pts[j]) for i, j in self.segments]

    def polyline(self) -> list:
        out = []
        for u, v in self.segment_endpoints():
            for w in segment_polyline(u, v):
                if not out or out[-1] != w:
                    out.append(w)
        return out

    def to_json_dict(self) -> dict:
        return {
            "x": list(self.x),
            "y": list(self.y),
            "breakpoints": [
                {"t": "inf" if math.isinf(b.t_star) else b.t_star, "point": list(b.point)}
                for b in self.sequence.breakpoints
            ],
            "segments": [list(s) for s in self.segments],
        }


def co_infinity(x: Sequence[float], y: Sequence[float], tol: Tolerance = EXACT) -> PiecewiseHull:
    x, y = _pair(x, y)
    if x == y:
        seq = IntermediateSequence(x, y, (BreakPoint(0.0, (), x),))
        return PiecewiseHull(x, y, seq, ((0, 0),))
    seq = intermediate_sequence(x, y, tol)
    segs = tuple((k, k + 1) for k in range(len(seq.breakpoints) - 1))
    return PiecewiseHull(x, y, seq, segs)


def _staircase_hit(lo: Vec, hi: Vec, z: Vec, atol: float) -> bool:
    # is z = lo ∨ (c·hi) for some c in [0, 1]?  all vectors nonnegative
    cands = {0.0, 1.0}
    for a, b in zip(lo, hi):
        if b > 0.0:
            cands.add(min(1.0, max(0.0, a / b)))
    for zk, a, b in zip(z, lo, hi):
        if b > 0.0 and zk > a + atol:
            cands.add(min(1.0, max(0.0, zk / b)))
    for c in cands:
        if all(abs(max(a, c * b) - zk) <= atol for zk, a, b in zip(z, lo, hi)):
            return True
    return False


def segment_membership(z: Sequence[float], u: Sequence[float], v: Sequence[float],
                       tol: Tolerance = EXACT) -> bool:
    """Is ``z = t·u ⊞ s·v`` for some ``t, s`` in ``[0, 1]`` with ``max(t, s) = 1``?"""
    u, v = _pair(u, v)
    z, _ = _pair(z, u)
    if not is_copositive(u, v):
        raise DomainError("segment endpoints must be copositive")
    K = orthant_of(u, v)
    up, vp, zp = psi_K(u, K), psi_K(v, K), psi_K(z, K)
    atol = _atol(tol, u, v, z)
    if any(c < -atol for c in zp):
        return False
    return _staircase_hit(up, vp, zp, atol) or _staircase_hit(vp, up, zp, atol)


def hull_membership(z: Sequence[float], hull: PiecewiseHull, tol: Tolerance = EXACT) -> bool:
    return any(segment_membership(z, u, v, tol) for u, v in hull.segment_endpoints())


def _fold4(z, x, y, t, r, s, w, atol) -> bool:
    eps = Tolerance(atol)
    idx = (0, 1, 2, 3)
    for a, b, c in zip(x, y, z):
        if abs(_fold((t * a, r * a, s * b, w * b), idx, eps) - c) > atol:
            return False
    return True


def four_term_witness(z: Sequence[float], x: Sequence[float], y: Sequence[float],
                      tol: Tolerance = EXACT):
    """Find ``(t, r, s, w)`` with max 1 and ``z = t·x ⊞ r·x ⊞ s·y ⊞ w·y``.

    Returns the witness tuple or ``None``.  The search is exact: with
    ``t ≥ r`` and ``s ≥ w`` the extra pair only matters on coordinates where
    ``t·x_k`` and ``s·y_k`` cancel, and there it contributes a common
    multiple ``q·t·x_k`` with ``q`` in ``[-1, 1]``.  Every candidate found is
    checked by evaluating the 4-fold.
    """
    x, y = _pair(x, y)
    z, _ = _pair(z, x)
    atol = _atol(tol, x, y, z)
    n = len(x)

    # two-term part with t = 1: z = x ⊞ s·y
    cands = {0.0, 1.0}
    for k in range(n):
        if y[k] != 0.0:
            cands.add(z[k] / y[k])
            cands.add(abs(x[k] / y[k]))
    for s in sorted(cands):
        if 0.0 <= s <= 1.0 and _fold4(z, x, y, 1.0, 0.0, s, 0.0, atol):
            return (1.0, 0.0, s, 0.0)
    # s = 1: z = t·x ⊞ y
    cands = {0.0, 1.0}
    for k in range(n):
        if x[k] != 0.0:
            cands.add(z[k] / x[k])
            cands.add(abs(y[k] / x[k]))
    for t in sorted(cands):
        if 0.0 <= t <= 1.0 and _fold4(z, x, y, t, 0.0, 1.0, 0.0, atol):
            return (t, 0.0, 1.0, 0.0)

    # cancellation groups: s/t equals a breakpoint, residual pair free
    for bp in intermediate_sequence(x, y, tol).interior:
        ts = bp.t_star
        t, s = (1.0, ts) if ts <= 1.0 else (1.0 / ts, 1.0)
        k0 = bp.sources[0]
        q = min(1.0, max(-1.0, z[k0] / (t * x[k0])))
        r, w = (q * t, 0.0) if q >= 0.0 else (0.0, -q * s)
        if _fold4(z, x, y, t, r, s, w, atol):
            return (t, r, s, w)
    return None


def four_term_membership(z: Sequence[float], x: Sequence[float], y: Sequence[float],
                         tol: Tolerance = EXACT) -> bool:
    return four_term_witness(z, x, y, tol) is not None


def combination_set_sample(xs: Sequence[Sequence[float]], count: int, seed: int = 0,
                           tol: Tolerance = EXACT) -> list:
    """Seeded points ``⊞_i t_i·x_i`` with ``max_i t_i = 1``."""
    vs = [as_vec(x) for x in xs]
    if not vs:
        raise DomainError("need at least one generator")
    if count <= 0:
        return []
    rng = np.random.default_rng(seed)
    T = rng.uniform(size=(count, len(vs)))
    T /= T.max(axis=1, keepdims=True)
    out = []
    for row in T:
        out.append(vec_nary_boxplus(
            [tuple(float(c) * a for a in v) for c, v in zip(row, vs)], tol))
    return out


def path_eval(x: Sequence[float], y: Sequence[float], s: float, tol: Tolerance = EXACT,
              hull: PiecewiseHull | None = None) -> Vec:
    """Continuous map of ``[0, 1]`` onto Co^∞(x, y), from ``x`` to ``y``.

    ``[0, 1]`` is cut into one equal piece per B-segment; on piece ``m`` the
    local parameter ``σ`` runs ``γ(u_m, u_{m+1}, σ/(1-σ))``.
    """
    s = float(s)
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"path parameter must lie in [0, 1], got {s!r}")
    if hull is None:
        hull = co_infinity(x, y, tol)
    ends = hull.segment_endpoints()
    N = len(ends)
    if s == 1.0:
        return ends[-1][1]
    m = min(int(s * N), N - 1)
    sigma = s * N - m
    u, v = ends[m]
    if sigma >= 1.0:
        return v
    return gamma(u, v, sigma / (1.0 - sigma), tol)


def sample_hull(hull: PiecewiseHull, count: int) -> np.ndarray:
    """``count`` points spread uniformly by arc length along the hull."""
    verts = np.array(hull.polyline(), dtype=float)
    if count <= 0:
        return np.empty((0, verts.shape[1]))
    if len(verts) == 1:
        return np.repeat(verts, count, axis=0)
    seg = np.linalg.norm(np.diff(verts, axis=0), axis=1)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    targets = np.linspace(0.0, cum[-1], count)
    out = np.empty((count, verts.shape[1]))
    for d in range(verts.shape[1]):
        out[:, d] = np.interp(targets, cum, verts[:, d])
    return out


class ProbeResult(NamedTuple):
    trials: int
    violations: int
    example: tuple | None


def closure_probe(x: Sequence[float], y: Sequence[float], trials: int = 50, seed: int = 0,
                  per_pair: int = 20, tol: Tolerance = EXACT) -> ProbeResult:
    """Experimental check that Co^∞ of two hull points stays in the hull.

    No claim is made either way; the probe reports what it finds.
    """
    hull = co_infinity(x, y, tol)
    rng = np.random.default_rng(seed)
    violations = 0
    example = None
    for _ in range(trials):
        a, b = (path_eval(x, y, float(s), tol, hull) for s in rng.uniform(size=2))
        inner = co_infinity(a, b, tol)
        for s in rng.uniform(size=per_pair):
            z = path_eval(a, b, float(s), tol, inner)
            if not hull_membership(z, hull, Tolerance(max(tol.tie_eps, 1e-9))):
                violations += 1
                if example is None:
                    example = (a, b, z)
                break
    return ProbeResult(trials, violations, example)
