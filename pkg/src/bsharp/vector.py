"""Componentwise ⊞ on R^n together with orthant bookkeeping.

Vectors are plain tuples of floats.  Every public function accepts any
sequence of reals and validates it through :func:`as_vec`.
"""

from __future__ import annotations

from typing import Sequence

from .errors import DomainError
from .scalar import EXACT, Tolerance, _finite, _fold, boxplus

Vec = tuple

__all__ = [
    "Vec",
    "as_vec",
    "vec_boxplus",
    "vec_nary_boxplus",
    "boxdot",
    "is_copositive",
    "orthant_of",
    "psi_K",
    "semilattice_leq",
    "inner_product_infty",
    "scale",
    "sup_norm",
]


def as_vec(x: Sequence[float]) -> Vec:
    v = tuple(_finite(c, "coordinate") for c in x)
    if not v:
        raise DomainError("vectors need at least one coordinate")
    return v


def _pair(x, y):
    x, y = as_vec(x), as_vec(y)
    if len(x) != len(y):
        raise DomainError(f"dimension mismatch: {len(x)} vs {len(y)}")
    return x, y


def vec_boxplus(x: Sequence[float], y: Sequence[float], tol: Tolerance = EXACT) -> Vec:
    x, y = _pair(x, y)
    return tuple(boxplus(a, b, tol) for a, b in zip(x, y))


def vec_nary_boxplus(xs: Sequence[Sequence[float]], tol: Tolerance = EXACT) -> Vec:
    """Coordinatewise n-ary ⊞ of a list of vectors."""
    vs = [as_vec(x) for x in xs]
    if not vs:
        raise DomainError("need at least one vector")
    n = len(vs[0])
    if any(len(v) != n for v in vs):
        raise DomainError("dimension mismatch in vector list")
    idx = tuple(range(len(vs)))
    return tuple(_fold(tuple(v[k] for v in vs), idx, tol) for k in range(n))


def boxdot(x: Sequence[float], y: Sequence[float]) -> Vec:
    x, y = _pair(x, y)
    return tuple(a * b for a, b in zip(x, y))


def is_copositive(x: Sequence[float], y: Sequence[float]) -> bool:
    x, y = _pair(x, y)
    return all(a * b >= 0.0 for a, b in zip(x, y))


def orthant_of(x: Sequence[float], y: Sequence[float] | None = None) -> Vec:
    """Sign vector of an orthant containing ``x`` (and ``y`` if copositive).

    Zero coordinates of ``x`` take the sign of ``y``, and +1 if that is zero
    too.
    """
    x = as_vec(x)
    if y is None:
        y = (0.0,) * len(x)
    x, y = _pair(x, y)
    out = []
    for a, b in zip(x, y):
        if a != 0.0:
            out.append(1 if a > 0 else -1)
        elif b != 0.0:
            out.append(1 if b > 0 else -1)
        else:
            out.append(1)
    return tuple(out)


def psi_K(x: Sequence[float], K: Sequence[int]) -> Vec:
    """Flip the signs of ``x`` by the orthant signs ``K``; an involution."""
    x = as_vec(x)
    K = tuple(int(e) for e in K)
    if len(K) != len(x):
        raise DomainError(f"dimension mismatch: {len(x)} vs {len(K)}")
    if any(e not in (1, -1) for e in K):
        raise DomainError(f"orthant signs must be +1 or -1, got {K}")
    return tuple(e * a for e, a in zip(K, x))


def semilattice_leq(x: Sequence[float], y: Sequence[float]) -> bool:
    x, y = _pair(x, y)
    return all(abs(a) <= abs(b) for a, b in zip(x, y))


def inner_product_infty(x: Sequence[float], y: Sequence[float], tol: Tolerance = EXACT) -> float:
    """``⊞_i x_i y_i``.

    >>> inner_product_infty((1, -2), (3, 1))
    3.0
    """
    return _fold(boxdot(x, y), tuple(range(len(as_vec(x)))), tol)


def scale(alpha: float, x: Sequence[float]) -> Vec:
    alpha = _finite(alpha, "scalar")
    return tuple(alpha * a for a in as_vec(x))


def sup_norm(x: Sequence[float]) -> float:
    return max(abs(a) for a in as_vec(x))
