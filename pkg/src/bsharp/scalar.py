"""The idempotent magma (R, ⊞), its n-ary fold and the ⌣ semilattice.

``x ⊞ y`` keeps the operand of larger magnitude and averages on a magnitude
tie, so that ``x ⊞ x = x`` and ``x ⊞ (-x) = 0``.  The operation is commutative
but not associative; the n-ary fold :func:`nary_boxplus` is therefore defined
combinatorially, by cancelling symmetric occurrences before taking the
dominant survivor.

Indices are 0-based throughout the library.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError, InvariantViolation

__all__ = [
    "Tolerance",
    "EXACT",
    "boxplus",
    "xi",
    "residual_index_set",
    "nary_boxplus",
    "lambda_map",
    "smile",
    "smile_fold",
]


@dataclass(frozen=True)
class Tolerance:
    """Magnitude threshold under which two reals count as equal.

    ``tie_eps = 0`` (the default) means bit-exact comparison.
    """

    tie_eps: float = 0.0

    def __post_init__(self):
        if not (self.tie_eps >= 0.0 and math.isfinite(self.tie_eps)):
            raise DomainError(f"tie_eps must be finite and >= 0, got {self.tie_eps!r}")

    def eq(self, a: float, b: float) -> bool:
        if self.tie_eps == 0.0:
            return a == b
        return abs(a - b) <= self.tie_eps


EXACT = Tolerance()


def _finite(v, what="value") -> float:
    v = float(v)
    if not math.isfinite(v):
        raise DomainError(f"{what} must be finite, got {v!r}")
    return v


def _entries(x: Sequence[float]) -> tuple:
    vals = tuple(_finite(v, "entry") for v in x)
    return vals


def _indices(n: int, I: Iterable[int] | None) -> tuple:
    if I is None:
        return tuple(range(n))
    idx = tuple(sorted(set(int(i) for i in I)))
    if idx and (idx[0] < 0 or idx[-1] >= n):
        raise DomainError(f"index set {idx} not contained in range({n})")
    return idx


def boxplus(x: float, y: float, tol: Tolerance = EXACT) -> float:
    """Binary ⊞: the larger-magnitude operand, or the mean on a tie.

    >>> boxplus(4, -3), boxplus(2, -3), boxplus(1, -1)
    (4.0, -3.0, 0.0)
    """
    x = _finite(x, "x")
    y = _finite(y, "y")
    ax, ay = abs(x), abs(y)
    eps = tol.tie_eps
    if ax > ay + eps:
        return x
    if ay > ax + eps:
        return y
    return (x + y) / 2.0


def xi(x: Sequence[float], I: Iterable[int] | None, alpha: float, tol: Tolerance = EXACT) -> int:
    """Occurrences of ``alpha`` minus occurrences of ``-alpha`` among ``x[I]``."""
    vals = _entries(x)
    alpha = _finite(alpha, "alpha")
    pos = neg = 0
    for i in _indices(len(vals), I):
        v = vals[i]
        if tol.eq(v, alpha):
            pos += 1
        if tol.eq(v, -alpha):
            neg += 1
    return pos - neg


def _residual(vals: tuple, idx: tuple, tol: Tolerance) -> tuple:
    if tol.tie_eps == 0.0:
        cnt = Counter(vals[i] for i in idx)
        return tuple(j for j in idx if cnt[vals[j]] != cnt[-vals[j]])
    eps = tol.tie_eps
    sub = [vals[i] for i in idx]
    out = []
    for j in idx:
        a = vals[j]
        s = 0
        for v in sub:
            s += (abs(v - a) <= eps) - (abs(v + a) <= eps)
        if s != 0:
            out.append(j)
    return tuple(out)


def residual_index_set(x: Sequence[float], I: Iterable[int] | None = None,
                       tol: Tolerance = EXACT) -> frozenset:
    """Indices of ``I`` that survive symmetric cancellation.

    ``j`` is dropped when ``x_j`` occurs in ``x[I]`` exactly as often as
    ``-x_j`` does (zeros are always dropped).
    """
    vals = _entries(x)
    return frozenset(_residual(vals, _indices(len(vals), I), tol))


def _fold(vals: tuple, idx: tuple, tol: Tolerance) -> float:
    J = _residual(vals, idx, tol)
    if not J:
        return 0.0
    top = max(abs(vals[j]) for j in J)
    eps = tol.tie_eps
    s = 0
    for i in idx:
        v = vals[i]
        s += (abs(v - top) <= eps) - (abs(v + top) <= eps)
    if s > 0:
        return max(vals[j] for j in J)
    if s < 0:
        return min(vals[j] for j in J)
    if tol.tie_eps == 0.0:
        raise InvariantViolation(f"nonempty residual set {J} with zero symmetry count")
    # non-transitive approximate equality can leave a balanced survivor
    return 0.0


def nary_boxplus(x: Sequence[float], I: Iterable[int] | None = None,
                 tol: Tolerance = EXACT) -> float:
    """n-ary ⊞ over the entries of ``x`` indexed by ``I`` (all when ``None``).

    Symmetric occurrences cancel; among the survivors the dominant magnitude
    decides, with its sign given by which of ``±max`` occurs more often.

    >>> nary_boxplus([2, 3, -2, -3, 1.5, -3, 3, -0.5])
    1.5
    """
    vals = _entries(x)
    idx = _indices(len(vals), I)
    if not idx:
        raise DomainError("n-ary boxplus needs a nonempty index set")
    return _fold(vals, idx, tol)


def lambda_map(x: Sequence[float], tol: Tolerance = EXACT) -> tuple:
    """``x_i ⊞ (⊞ of the other entries)`` for every ``i``.

    The fold over an empty complement is taken as 0, so a 1-vector maps to
    itself.  Every component is either 0 or the full fold of ``x``.
    """
    vals = _entries(x)
    n = len(vals)
    if n == 0:
        raise DomainError("lambda_map needs n >= 1")
    out = []
    for i in range(n):
        rest = tuple(j for j in range(n) if j != i)
        others = _fold(vals, rest, tol) if rest else 0.0
        out.append(boxplus(vals[i], others, tol))
    return tuple(out)


def smile(u: float, v: float, tol: Tolerance = EXACT) -> float:
    """⌣: the larger-magnitude operand, ties resolved to the minimum."""
    u = _finite(u, "u")
    v = _finite(v, "v")
    au, av = abs(u), abs(v)
    if au > av + tol.tie_eps:
        return u
    if av > au + tol.tie_eps:
        return v
    return min(u, v)


def smile_fold(u: Sequence[float], tol: Tolerance = EXACT) -> float:
    """``u_1 ⌣ ... ⌣ u_m``; zero entries are ignored, all zeros give 0."""
    vals = _entries(u)
    if not vals:
        raise DomainError("smile_fold needs at least one entry")
    pos = [v for v in vals if v > 0]
    neg = [v for v in vals if v < 0]
    if not pos and not neg:
        return 0.0
    if not neg:
        return max(pos)
    if not pos:
        return min(neg)
    top_pos, low_neg = max(pos), min(neg)
    if top_pos > -low_neg + tol.tie_eps:
        return top_pos
    return low_neg
