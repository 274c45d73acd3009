"""Finite-p counterparts of the limit objects.

For ``p ≥ 0`` let ``e = 2p + 1``.  The odd power ``λ ↦ λ^e`` is a bijection of
R, and transporting ordinary addition through it gives ``a +_p b =
(a^e + b^e)^(1/e)``.  As ``p → ∞`` these sums tend to ⊞.  Raw powers are never
formed: the largest magnitude is factored out first, so every summand has
magnitude at most one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainError
from .hull import co_infinity, sample_hull, sign_conflict_set
from .scalar import EXACT, _entries, _indices, _residual
from .vector import Vec, as_vec

__all__ = [
    "P_MAX",
    "SignedLogReal",
    "exponent",
    "holder_sum",
    "gamma_p",
    "intermediate_point_p",
    "co_p_sample",
    "hausdorff_distance",
    "convergence_rows",
]

P_MAX = 500


def exponent(p: int) -> int:
    if isinstance(p, bool) or int(p) != p or p < 0:
        raise DomainError(f"p must be a nonnegative integer, got {p!r}")
    if p > P_MAX:
        raise DomainError(f"p={p} exceeds the supported maximum {P_MAX}")
    return 2 * int(p) + 1


@dataclass(frozen=True)
class SignedLogReal:
    """A real stored as ``sign · exp(log_mag)``; ``sign = 0`` means exactly 0."""

    sign: int
    log_mag: float = 0.0

    @classmethod
    def from_float(cls, v: float) -> "SignedLogReal":
        if v == 0.0:
            return cls(0)
        return cls(1 if v > 0 else -1, math.log(abs(v)))

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_mag)

    def __mul__(self, other: "SignedLogReal") -> "SignedLogReal":
        if self.sign == 0 or other.sign == 0:
            return SignedLogReal(0)
        return SignedLogReal(self.sign * other.sign, self.log_mag + other.log_mag)

    def __truediv__(self, other: "SignedLogReal") -> "SignedLogReal":
        if other.sign == 0:
            raise ZeroDivisionError("division by a signed-log zero")
        if self.sign == 0:
            return SignedLogReal(0)
        return SignedLogReal(self.sign * other.sign, self.log_mag - other.log_mag)

    def odd_root(self, e: int) -> "SignedLogReal":
        if self.sign == 0:
            return self
        return SignedLogReal(self.sign, self.log_mag / e)


def _odd_power_sum(vals: Sequence[float], e: int) -> SignedLogReal:
    # (Σ v^e)^(1/e) with the largest magnitude factored out
    m = max((abs(v) for v in vals), default=0.0)
    if m == 0.0:
        return SignedLogReal(0)
    s = math.fsum((v / m) ** e for v in vals)
    if s == 0.0:
        return SignedLogReal(0)
    return SignedLogReal(1 if s > 0 else -1, math.log(m) + math.log(abs(s)) / e)


def holder_sum(x: Sequence[float], I: Iterable[int] | None, p: int) -> float:
    """``(Σ_{i in I} x_i^(2p+1))^(1/(2p+1))``.

    Symmetric pairs are removed combinatorially first, so exact cancellation
    gives exactly 0.
    """
    e = exponent(p)
    vals = _entries(x)
    idx = _indices(len(vals), I)
    if not idx:
        raise DomainError("holder_sum needs a nonempty index set")
    J = _residual(vals, idx, EXACT)
    return _odd_power_sum([vals[j] for j in J], e).to_float()


def _check_t(t) -> float:
    t = float(t)
    if math.isnan(t) or t < 0.0:
        raise DomainError(f"t must lie in [0, inf], got {t!r}")
    return t


def _pair(x, y):
    x, y = as_vec(x), as_vec(y)
    if len(x) != len(y):
        raise DomainError(f"dimension mismatch: {len(x)} vs {len(y)}")
    return x, y


def gamma_p(x: Sequence[float], y: Sequence[float], t: float, p: int) -> Vec:
    """``(x +_p t·y) / (1 +_p t)`` coordinatewise; ``t = inf`` gives ``y``."""
    x, y = _pair(x, y)
    t = _check_t(t)
    e = exponent(p)
    if t == 0.0:
        return x
    if math.isinf(t):
        return y
    # (1 +_p t) = max(1, t) · (1 + ρ^e)^(1/e) with ρ = min(t, 1/t)
    rho = min(t, 1.0 / t)
    denom = SignedLogReal(1, math.log(max(1.0, t)) + math.log1p(rho ** e) / e)
    out = []
    for a, b in zip(x, y):
        num = _odd_power_sum((a, t * b), e)
        out.append((num / denom).to_float())
    return tuple(out)


def intermediate_point_p(x: Sequence[float], y: Sequence[float], i: int, p: int) -> Vec:
    """``γ^(p)`` at ``t = |x_i / y_i|``, written with weights so coordinate ``i`` is 0.

    The weights are ``|y_i| / D`` on ``x`` and ``|x_i| / D`` on ``y`` with
    ``D = |x_i| +_p |y_i|``; the two products in coordinate ``i`` are exact
    negatives of each other.
    """
    x, y = _pair(x, y)
    e = exponent(p)
    if i not in sign_conflict_set(x, y):
        raise DomainError(f"coordinate {i} does not change sign between x and y")
    ax, ay = abs(x[i]), abs(y[i])
    D = _odd_power_sum((ax, ay), e)
    out = []
    for a, b in zip(x, y):
        num = _odd_power_sum((ay * a, ax * b), e)
        out.append((num / D).to_float())
    return tuple(out)


def _gamma_p_many(x: Vec, y: Vec, ts: np.ndarray, e: int) -> np.ndarray:
    # vectorized gamma_p over an array of t values, inf mapped to y
    ts = np.asarray(ts, dtype=float)
    out = np.empty((len(ts), len(x)))
    fin = np.isfinite(ts)
    out[~fin] = y
    t = ts[fin]
    with np.errstate(divide="ignore", invalid="ignore", under="ignore"):
        rho = np.where(t > 1.0, 1.0 / t, t)
        denom = np.maximum(1.0, t) * np.exp(np.log1p(rho ** e) / e)
        for j, (a, b) in enumerate(zip(x, y)):
            bt = t * b
            m = np.maximum(abs(a), np.abs(bt))
            safe = np.where(m > 0.0, m, 1.0)
            sm = (a / safe) ** e + (bt / safe) ** e
            val = np.sign(sm) * m * np.abs(sm) ** (1.0 / e)
            out[fin, j] = np.where(m > 0.0, val, 0.0) / denom
    return out


_ETA = 1e-12


def _bridge(x: Vec, y: Vec, st: float, group, e: int) -> np.ndarray:
    # curve points at t*(1 - η), t*, t*(1 + η); the middle one has the group zeroed
    q = _gamma_p_many(x, y, np.array([st * (1 - _ETA), st, st * (1 + _ETA)]), e)
    q[1, list(group)] = 0.0
    # at t*(1 + d) the group sums are x_k^e (1 - (1 + d)^e); evaluating that
    # directly keeps the digits a rounded t would lose
    for row, d in ((0, -_ETA), (2, _ETA)):
        t = st * (1 + d)
        rho = min(t, 1.0 / t)
        denom = max(1.0, t) * math.exp(math.log1p(rho ** e) / e)
        f = -math.expm1(e * math.log1p(d))
        mag = abs(f) ** (1.0 / e) / denom
        for k in group:
            q[row, k] = math.copysign(mag, f) * x[k]
    return q


def co_p_sample(x: Sequence[float], y: Sequence[float], p: int, count: int, seed: int = 0) -> list:
    """Seeded sample of ``count`` points along the curve ``t ↦ γ^(p)(x, y, t)``.

    Seeds come from a uniform grid in ``u = t/(1+t)``, seeded jitter,
    geometric offsets around each sign change and every kink.  Edges are bisected until shorter than a
    resolution tied to ``count``; then points are spread uniformly by arc
    length, always keeping ``x`` first and ``y`` last.

    Near a sign change at ``t*`` the curve sweeps most of the way to its zero
    inside a relative window narrower than one ulp.  Inside
    ``t*(1 ± 1e-12)`` the coordinates involved move in proportion, so that
    stretch is drawn as two straight bridges through the order-p
    intermediate point.
    """
    x, y = _pair(x, y)
    e = exponent(p)
    if count < 2:
        raise DomainError("co_p_sample needs count >= 2")
    if x == y:
        return [x] * count
    rng = np.random.default_rng(seed)

    conflicts = sorted(sign_conflict_set(x, y), key=lambda i: abs(x[i] / y[i]))
    stars = []
    for i in conflicts:
        ts = abs(x[i] / y[i])
        if stars and ts == stars[-1][0]:
            stars[-1][1].append(i)
        else:
            stars.append((ts, [i]))
    windows = [(ts * (1 - _ETA), ts * (1 + _ETA)) for ts, _ in stars]

    def inside(t):
        return any(lo < t < hi for lo, hi in windows)

    grid = np.concatenate([np.linspace(0.0, 1.0, count)[:-1], rng.uniform(size=max(8, count // 4))])
    ts = set((grid / (1.0 - grid)).tolist())
    ts.add(1.0)
    for a, b in zip(x, y):
        if a != 0.0 and b != 0.0:
            ts.add(abs(a / b))
    for st, _ in stars:
        for k in np.arange(1.0, 12.5, 0.5):
            ts.add(st * (1 - 10.0 ** -k))
            ts.add(st * (1 + 10.0 ** -k))
    ts = sorted(t for t in ts if t >= 0.0 and math.isfinite(t) and not inside(t))

    T = np.array(ts + [math.inf])
    P = _gamma_p_many(x, y, T, e)
    F = np.ones(len(T), dtype=bool)
    # bridge nodes: the edges Q- -> P* -> Q+ are straight and never refined
    extra_t, extra_p, extra_f = [], [], []
    for (lo, hi), (st, group) in zip(windows, stars):
        q = _bridge(x, y, st, group, e)
        extra_t += [lo, st, hi]
        extra_p.append(q)
        extra_f += [False, False, True]
    if extra_t:
        T = np.concatenate([T, extra_t])
        P = np.vstack([P] + extra_p)
        F = np.concatenate([F, extra_f])
    order = np.argsort(T, kind="stable")
    T, P, F = T[order], P[order], F[order]

    length = float(np.linalg.norm(np.diff(P, axis=0), axis=1).sum())
    h = max(length / (4.0 * count), 1e-15)
    for _ in range(60):
        gaps = np.linalg.norm(np.diff(P, axis=0), axis=1)
        lo, hi = T[:-1], T[1:]
        with np.errstate(invalid="ignore"):
            tm = np.where(np.isinf(hi), 2.0 * lo + 1.0, 0.5 * (lo + hi))
        pick = F[:-1] & (gaps > h) & (tm > lo) & (tm < hi)
        if not pick.any():
            break
        tm = tm[pick]
        T = np.concatenate([T, tm])
        P = np.vstack([P, _gamma_p_many(x, y, tm, e)])
        F = np.concatenate([F, np.ones(len(tm), dtype=bool)])
        order = np.argsort(T, kind="stable")
        T, P, F = T[order], P[order], F[order]

    pts = P
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    targets = np.linspace(0.0, cum[-1], count)
    out = np.empty((count, len(x)))
    for d in range(len(x)):
        out[:, d] = np.interp(targets, cum, pts[:, d])
    out[0], out[-1] = x, y
    return [tuple(float(c) for c in row) for row in out]


def hausdorff_distance(A, B) -> float:
    """Euclidean Hausdorff distance between two finite point sets."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.size == 0 or B.size == 0:
        raise DomainError("Hausdorff distance needs two nonempty sets")
    A = A.reshape(len(A), -1)
    B = B.reshape(len(B), -1)
    if A.shape[1] != B.shape[1]:
        raise DomainError("point sets differ in dimension")
    ab = cKDTree(B).query(A)[0].max()
    ba = cKDTree(A).query(B)[0].max()
    return float(max(ab, ba))


def convergence_rows(x: Sequence[float], y: Sequence[float], p_list: Sequence[int],
                     samples: int = 1000, seed: int = 0) -> list:
    """Hausdorff distance from sampled Co^p to sampled Co^∞ for each ``p``."""
    ref = sample_hull(co_infinity(x, y), samples)
    rows = []
    for p in sorted(p_list):
        A = co_p_sample(x, y, p, samples, seed)
        rows.append({"p": int(p), "metric": "hausdorff", "value": hausdorff_distance(A, ref)})
    return rows
