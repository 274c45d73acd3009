"""B-forms and separation of copositive finitely generated sets.

A B-form with coefficients ``a`` maps a point of an orthant to
``a_1 x_1 ⌣ ... ⌣ a_n x_n`` (after flipping the orthant onto the positive
one).  It never exceeds ``⟨a, x⟩_∞`` and agrees with it except where the
products ``a_i x_i`` tie in magnitude with opposite signs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, InvariantViolation
from .hull import combination_set_sample
from .scalar import EXACT, Tolerance, _fold, smile_fold
from .vector import Vec, as_vec, inner_product_infty, psi_K

__all__ = [
    "BForm",
    "GeneratedBSet",
    "bform_eval",
    "sublevel_check",
    "regularization_gap",
    "SeparationReport",
    "verify_separator",
    "search_separator",
]


def _signs(K, n):
    K = tuple(int(e) for e in K) if K is not None else (1,) * n
    if len(K) != n or any(e not in (1, -1) for e in K):
        raise DomainError(f"bad orthant signs {K} for dimension {n}")
    return K


@dataclass(frozen=True)
class BForm:
    a: Vec
    K: tuple = None

    def __post_init__(self):
        a = as_vec(self.a)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "K", _signs(self.K, len(a)))

    def __call__(self, x, tol: Tolerance = EXACT) -> float:
        return bform_eval(self, x, tol)


@dataclass(frozen=True)
class GeneratedBSet:
    """The B-hull of finitely many generators lying in one orthant ``K``."""

    generators: tuple
    K: tuple = None

    def __post_init__(self):
        gens = tuple(as_vec(g) for g in self.generators)
        if not gens:
            raise DomainError("a generated set needs at least one generator")
        n = len(gens[0])
        if any(len(g) != n for g in gens):
            raise DomainError("generators differ in dimension")
        if self.K is None:
            K = []
            for k in range(n):
                K.append(-1 if any(g[k] < 0 for g in gens) else 1)
        else:
            K = self.K
        K = _signs(K, n)
        for g in gens:
            if any(c < 0 for c in psi_K(g, K)):
                raise DomainError(f"generator {g} lies outside orthant {K}")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "K", K)


def _products(f: BForm, x) -> tuple:
    x = as_vec(x)
    if len(x) != len(f.a):
        raise DomainError(f"dimension mismatch: {len(x)} vs {len(f.a)}")
    xp = psi_K(x, f.K)
    if any(c < 0 for c in xp):
        raise DomainError(f"point {x} lies outside orthant {f.K}")
    return tuple(a * c for a, c in zip(f.a, xp))


def bform_eval(f: BForm, x: Sequence[float], tol: Tolerance = EXACT) -> float:
    """``a_1 x_1 ⌣ ... ⌣ a_n x_n`` on the orthant of ``f``.

    >>> bform_eval(BForm((1, -1)), (2, 3))
    -3.0
    """
    return smile_fold(_products(f, x), tol)


def sublevel_check(f: BForm, x: Sequence[float], c: float, tol: Tolerance = EXACT) -> bool:
    """``f(x) <= c``, cross-checked against the max-inequality form.

    With ``P`` the largest positive product and ``N`` the largest magnitude
    of a negative one (both 0 when absent): for ``c >= 0`` the test is
    ``P <= max(N, c)``, for ``c <= 0`` it is ``max(P, -c) <= N``.
    """
    u = _products(f, x)
    c = float(c)
    direct = smile_fold(u, tol) <= c
    P = max((v for v in u if v > 0), default=0.0)
    N = max((-v for v in u if v < 0), default=0.0)
    if c >= 0:
        lhs, rhs = P, max(N, c)
    else:
        lhs, rhs = max(P, -c), N
    other = lhs <= rhs
    if direct != other and abs(lhs - rhs) > tol.tie_eps:
        raise InvariantViolation(
            f"sublevel forms disagree at a={f.a}, x={x}, c={c}: direct={direct}")
    return direct


def regularization_gap(a: Sequence[float], x: Sequence[float], tol: Tolerance = EXACT) -> float:
    """``⟨a, x⟩_∞ - f(x)`` for the B-form ``f`` with coefficients ``a``; never negative."""
    f = BForm(a)
    return inner_product_infty(f.a, x, tol) - bform_eval(f, x, tol)


def _fold_rows(U: np.ndarray, tol: Tolerance) -> np.ndarray:
    # rowwise n-ary ⊞; rows whose top magnitude carries one sign are direct
    n = U.shape[1]
    idx = tuple(range(n))
    if tol.tie_eps > 0.0:
        return np.array([_fold(tuple(map(float, r)), idx, tol) for r in U])
    top = np.abs(U).max(axis=1)
    pos = (U == top[:, None]).any(axis=1)
    neg = (U == -top[:, None]).any(axis=1)
    out = np.where(neg & ~pos, -top, top)
    for i in np.nonzero(pos & neg & (top > 0))[0]:
        out[i] = _fold(tuple(map(float, U[i])), idx, tol)
    return out


class SeparationReport(NamedTuple):
    separated: bool
    gap: float
    sup_c1: float
    inf_c2: float


def _sample_points(C: GeneratedBSet, samples: int, seed: int, tol: Tolerance) -> np.ndarray:
    pts = list(C.generators) + combination_set_sample(C.generators, samples, seed, tol)
    return np.array(pts, dtype=float)


def _check_pair(C1: GeneratedBSet, C2: GeneratedBSet):
    if len(C1.K) != len(C2.K):
        raise DomainError("sets differ in dimension")
    if C1.K != C2.K:
        raise DomainError(f"sets lie in different orthants {C1.K} and {C2.K}")


def _report(a: Vec, S1: np.ndarray, S2: np.ndarray, tol: Tolerance) -> SeparationReport:
    A = np.asarray(a, dtype=float)
    sup1 = float(_fold_rows(S1 * A, tol).max())
    inf2 = float(_fold_rows(S2 * A, tol).min())
    return SeparationReport(sup1 < inf2 - tol.tie_eps, inf2 - sup1, sup1, inf2)


def verify_separator(a: Sequence[float], C1: GeneratedBSet, C2: GeneratedBSet,
                     samples: int = 1000, seed: int = 0,
                     tol: Tolerance = EXACT) -> SeparationReport:
    """Estimate ``sup_{C1} ⟨a,·⟩_∞`` and ``inf_{C2} ⟨a,·⟩_∞`` from samples and generators."""
    _check_pair(C1, C2)
    a = as_vec(a)
    if len(a) != len(C1.K):
        raise DomainError("coefficient vector has the wrong dimension")
    S1 = _sample_points(C1, samples, seed, tol)
    S2 = _sample_points(C2, samples, seed + 1, tol)
    return _report(a, S1, S2, tol)


def _candidates(n: int, rng: np.random.Generator):
    levels = [0.0] + [s * 2.0 ** k for s in (1.0, -1.0) for k in range(-2, 3)]
    for a in itertools.product(levels, repeat=n):
        if any(a):
            yield a
    while True:
        yield tuple(float(v) for v in rng.standard_normal(n))


def search_separator(C1: GeneratedBSet, C2: GeneratedBSet, budget: int = 1000, seed: int = 0,
                     tol: Tolerance = EXACT, samples: int = 1000):
    """First candidate ``a`` (grid of ``±2^k`` levels, then random directions)
    that separates the samples, or ``None`` once ``budget`` runs out."""
    _check_pair(C1, C2)
    S1 = _sample_points(C1, samples, seed, tol)
    S2 = _sample_points(C2, samples, seed + 1, tol)
    rng = np.random.default_rng(seed)
    for a in itertools.islice(_candidates(len(C1.K), rng), budget):
        if _report(a, S1, S2, tol).separated:
            return tuple(a)
    return None
