"""Complex univariate polynomials: evaluation, roots, resultants, interpolation.

Coefficients are stored in ascending order of powers (``coeffs[k]`` multiplies
``x**k``).
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .errors import DegreeZero, LengthMismatch, NonConvergence

__all__ = [
    "CPoly",
    "eval_with_derivative",
    "roots",
    "resultant_product",
    "sylvester_resultant",
    "interpolate_at_roots_of_unity",
]

DROP_RTOL = 1e-12
_EPS = np.finfo(float).eps


class CPoly:
    """Immutable complex polynomial.

    ``drop_tol`` is relative to the largest coefficient magnitude; trailing
    coefficients at or below it are removed. The default only strips exact
    zeros, because monic compositions routinely carry a leading 1 next to
    constant terms many orders of magnitude larger.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[complex], drop_tol: float = 0.0):
        c = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                     dtype=complex).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        scale = float(np.max(np.abs(c)))
        cut = drop_tol * scale
        n = c.size
        while n > 1 and abs(c[n - 1]) <= cut:
            n -= 1
        c = c[:n].copy()
        c.setflags(write=False)
        self._c = c

    @classmethod
    def from_roots(cls, rts: Iterable[complex], lead: complex = 1.0) -> "CPoly":
        c = np.array([lead], dtype=complex)
        for r in rts:
            c = np.convolve(c, np.array([-r, 1.0], dtype=complex))
        return cls(c)

    @classmethod
    def monomial(cls, k: int, coef: complex = 1.0) -> "CPoly":
        c = np.zeros(k + 1, dtype=complex)
        c[k] = coef
        return cls(c)

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        return self._c.size - 1

    @property
    def lead(self) -> complex:
        return complex(self._c[-1])

    def is_zero(self) -> bool:
        return self._c.size == 1 and self._c[0] == 0

    def norm1(self) -> float:
        return float(np.sum(np.abs(self._c)))

    def __call__(self, x):
        return _horner(self._c, x)

    def derivative(self) -> "CPoly":
        if self.degree == 0:
            return CPoly([0.0])
        k = np.arange(1, self._c.size)
        return CPoly(self._c[1:] * k)

    def __add__(self, other: "CPoly") -> "CPoly":
        a, b = self._c, _as_coeffs(other)
        n = max(a.size, b.size)
        out = np.zeros(n, dtype=complex)
        out[: a.size] += a
        out[: b.size] += b
        return CPoly(out)

    def __sub__(self, other: "CPoly") -> "CPoly":
        return self + (-1.0) * CPoly(_as_coeffs(other))

    def __mul__(self, other) -> "CPoly":
        if isinstance(other, CPoly):
            return CPoly(np.convolve(self._c, other._c))
        return CPoly(self._c * complex(other))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, CPoly) and np.array_equal(self._c, other._c)

    __hash__ = None  # type: ignore[assignment]

    def compose(self, inner: "CPoly") -> "CPoly":
        """Return ``self(inner(x))`` by Horner's scheme on polynomials."""
        acc = CPoly([self._c[-1]])
        for a in self._c[-2::-1]:
            acc = acc * inner + CPoly([a])
        return acc

    def __repr__(self) -> str:
        return f"CPoly({[complex(x) for x in self._c]})"


def _as_coeffs(p) -> np.ndarray:
    if isinstance(p, CPoly):
        return p.coeffs
    return np.atleast_1d(np.asarray(p, dtype=complex))


def _horner(c: np.ndarray, x):
    acc = np.zeros_like(np.asarray(x, dtype=complex)) + c[-1]
    for a in c[-2::-1]:
        acc = acc * x + a
    return acc if np.ndim(acc) else complex(acc)


def _horner2(c: np.ndarray, x):
    """Value and derivative in one pass."""
    p = np.zeros_like(np.asarray(x, dtype=complex)) + c[-1]
    dp = np.zeros_like(p)
    for a in c[-2::-1]:
        dp = dp * x + p
        p = p * x + a
    return p, dp


def eval_with_derivative(p: CPoly, x: complex) -> tuple[complex, complex]:
    """Horner evaluation of ``p`` and ``p'`` at ``x``."""
    v, dv = _horner2(p.coeffs, x)
    return complex(v), complex(dv)


def _fujiwara_bound(monic: np.ndarray) -> float:
    n = monic.size - 1
    terms = [abs(monic[n - k]) ** (1.0 / k) for k in range(1, n)]
    terms.append(abs(monic[0] / 2.0) ** (1.0 / n))
    return 2.0 * max(terms)


def roots(p: CPoly, tol: float = 1e-12, max_iter: int = 500) -> list[complex]:
    """All roots of ``p`` with multiplicity, by Aberth-Ehrlich iteration.

    A root ``r`` is accepted once ``|p(r)| <= tol * max(1, sum |a_k| |r|^k)``,
    the backward-error form of the coefficient-norm residual test (the two
    coincide for roots in the closed unit disk). Near-multiple roots are
    returned individually; a root of multiplicity ``k`` lands within roughly
    ``tol**(1/k)`` of the true value.
    """
    c = p.coeffs
    if p.degree < 1:
        raise DegreeZero("root finding needs degree >= 1")
    nz = 0
    while c[nz] == 0:
        nz += 1
    zero_roots = [0j] * nz
    c = c[nz:]
    n = c.size - 1
    if n == 0:
        return zero_roots
    monic = c / c[-1]
    if n == 1:
        return zero_roots + [complex(-monic[0])]

    absc = np.abs(monic)
    radius = _fujiwara_bound(monic)
    k = np.arange(n)
    z = radius * (1.0 + 0.01 * k / n) * np.exp(1j * (2 * np.pi * k / n + 0.4))

    done = np.zeros(n, dtype=bool)
    for _ in range(max_iter):
        v, dv = _horner2(monic, z)
        scale = np.maximum(1.0, _horner(absc, np.abs(z)).real)
        done = np.abs(v) <= tol * scale
        if done.all():
            break
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = v / dv
            step = ratio / (1.0 - ratio * s)
        bad = ~np.isfinite(step)
        step[bad] = 1e-3 * (1.0 + np.abs(z[bad]))
        step[done] = 0.0
        stalled = np.abs(step) <= 4 * _EPS * np.abs(z)
        z = z - step
        if (done | stalled).all():
            break
    else:
        raise NonConvergence(max_iter, best=list(z) + zero_roots)

    z = _polish(monic, absc, z)
    return zero_roots + [complex(r) for r in z]


def _polish(monic: np.ndarray, absc: np.ndarray, z: np.ndarray) -> np.ndarray:
    """One Newton step per root, kept only where the residual shrinks."""
    v, dv = _horner2(monic, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        cand = z - v / dv
    ok = np.isfinite(cand)
    cand = np.where(ok, cand, z)
    better = np.abs(_horner(monic, cand)) < np.abs(v)
    return np.where(better, cand, z)


def resultant_product(f: CPoly, g: CPoly, tol: float = 1e-12, max_iter: int = 500) -> complex:
    """``lc(f)**deg(g) * prod g(alpha)`` over the roots ``alpha`` of ``f``.

    With this normalization the value equals the Sylvester determinant with
    the rows of ``f`` placed first (normalization constant 1).
    """
    if f.degree < 1:
        raise DegreeZero("resultant_product needs deg f >= 1")
    rts = roots(f, tol=tol, max_iter=max_iter)
    prod = complex(f.lead) ** g.degree
    for a in rts:
        prod *= g(a)
    return complex(prod)


def sylvester_matrix(f: CPoly, g: CPoly) -> np.ndarray:
    m, n = f.degree, g.degree
    size = m + n
    mat = np.zeros((size, size), dtype=complex)
    fd, gd = f.coeffs[::-1], g.coeffs[::-1]
    for i in range(n):
        mat[i, i : i + m + 1] = fd
    for i in range(m):
        mat[n + i, i : i + n + 1] = gd
    return mat


def sylvester_resultant(f: CPoly, g: CPoly) -> complex:
    """Determinant of the Sylvester matrix (``f`` rows first).

    Gaussian elimination with partial pivoting; a zero pivot column yields 0.
    """
    a = sylvester_matrix(f, g)
    size = a.shape[0]
    det = 1.0 + 0j
    for col in range(size):
        piv = col + int(np.argmax(np.abs(a[col:, col])))
        if a[piv, col] == 0:
            return 0j
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            det = -det
        det *= a[col, col]
        factors = a[col + 1 :, col] / a[col, col]
        a[col + 1 :, col:] -= np.outer(factors, a[col, col:])
    return complex(det)


def interpolate_at_roots_of_unity(samples: Sequence[complex], N: int) -> CPoly:
    """Recover a polynomial of degree < N from its values at ``exp(2 pi i k / N)``."""
    if N < 1 or N & (N - 1):
        raise LengthMismatch(f"N must be a power of two, got {N}")
    s = np.asarray(samples, dtype=complex)
    if s.size != N:
        raise LengthMismatch(f"expected {N} samples, found {s.size}")
    coeffs = np.fft.fft(s) / N
    smax = float(np.max(np.abs(s))) if s.size else 0.0
    n = N
    while n > 1 and abs(coeffs[n - 1]) <= 1e-9 * smax:
        n -= 1
    return CPoly(coeffs[:n], drop_tol=DROP_RTOL)


def next_pow2(n: int) -> int:
    return 1 << max(0, math.ceil(math.log2(max(n, 1))))
