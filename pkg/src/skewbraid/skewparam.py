"""The parameter space of degree-d skew-products over z -> z^d.

A parameter is stored row by row: row ``j`` (``j = 0..d-2``) holds the
``d-j+1`` entries ``a_{j,0..d-j}``, and the fiber polynomial is

    q_z(w) = w^d + sum_j A_j(z) w^j,   A_j(z) = sum_k a_{j,k}^(d-j) z^k.

The flat ordering is row 0 first, then row 1, and so on; the named presets
use it, e.g. ``(0,0,0,-2,0,0,0)`` for ``q = w^3 - 8 z^3``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cpoly import CPoly, interpolate_at_roots_of_unity, next_pow2, resultant_product, roots
from .errors import (
    BadDegree,
    Degenerate,
    LengthMismatch,
    Overflow,
    ParameterFormatError,
    SizeGuard,
)

MAX_TREE_SIZE = 64


def dimension(d: int) -> int:
    """Number of complex entries of a degree-d parameter."""
    if int(d) != d or d < 2:
        raise BadDegree(f"degree must be an integer >= 2, got {d}")
    return (d - 1) * (d + 4) // 2


def row_lengths(d: int) -> list[int]:
    dimension(d)
    return [d - j + 1 for j in range(d - 1)]


@dataclass(frozen=True)
class SkewParam:
    d: int
    rows: tuple[tuple[complex, ...], ...]

    def __post_init__(self):
        expected = row_lengths(self.d)
        if len(self.rows) != len(expected):
            raise LengthMismatch(f"expected {len(expected)} rows, found {len(self.rows)}")
        fixed = []
        for j, (row, n) in enumerate(zip(self.rows, expected)):
            if len(row) != n:
                raise LengthMismatch(f"row {j}: expected {n} entries, found {len(row)}")
            fixed.append(tuple(complex(x) for x in row))
        object.__setattr__(self, "rows", tuple(fixed))

    @classmethod
    def from_flat(cls, d: int, flat: Sequence[complex]) -> "SkewParam":
        n = dimension(d)
        flat = list(flat)
        if len(flat) != n:
            raise LengthMismatch(f"degree {d} needs {n} entries, found {len(flat)}")
        rows, i = [], 0
        for length in row_lengths(d):
            rows.append(tuple(flat[i : i + length]))
            i += length
        return cls(d, tuple(rows))

    @classmethod
    def quadratic(cls, a: complex, b: complex, c: complex) -> "SkewParam":
        """The map (z^2, w^2 + a^2 z^2 + b^2 z + c^2)."""
        return cls(2, ((c, b, a),))

    @classmethod
    def zero(cls, d: int) -> "SkewParam":
        return cls.from_flat(d, [0] * dimension(d))

    @property
    def flat(self) -> np.ndarray:
        return np.array([x for row in self.rows for x in row], dtype=complex)

    def scaled(self, t: complex) -> "SkewParam":
        return SkewParam(self.d, tuple(tuple(t * x for x in row) for row in self.rows))

    def is_zero(self) -> bool:
        return not np.any(self.flat)

    def coefficient_table(self) -> list[np.ndarray]:
        """``A_j`` as ascending z-coefficient arrays, one per row."""
        d = self.d
        return [np.array(row, dtype=complex) ** (d - j) for j, row in enumerate(self.rows)]

    def to_json_obj(self) -> dict:
        return {
            "d": self.d,
            "a": [[[x.real, x.imag] for x in row] for row in self.rows],
        }

    @classmethod
    def from_json_obj(cls, obj) -> "SkewParam":
        if not isinstance(obj, dict) or "d" not in obj or "a" not in obj:
            raise ParameterFormatError('parameter object needs keys "d" and "a"')
        d = obj["d"]
        if not isinstance(d, int):
            raise ParameterFormatError(f'"d" must be an integer, got {d!r}')
        expected = row_lengths(d)
        rows = obj["a"]
        if not isinstance(rows, list) or len(rows) != len(expected):
            found = len(rows) if isinstance(rows, list) else "non-list"
            raise ParameterFormatError(f"expected {len(expected)} rows, found {found}")
        parsed = []
        for j, (row, n) in enumerate(zip(rows, expected)):
            if not isinstance(row, list) or len(row) != n:
                found = len(row) if isinstance(row, list) else "non-list"
                raise ParameterFormatError(f"row {j}: expected {n} entries, found {found}")
            entries = []
            for k, pair in enumerate(row):
                if not (isinstance(pair, list) and len(pair) == 2):
                    raise ParameterFormatError(f"entry ({j},{k}) must be a [re, im] pair")
                try:
                    entries.append(complex(float(pair[0]), float(pair[1])))
                except (TypeError, ValueError) as exc:
                    raise ParameterFormatError(f"entry ({j},{k}) is not numeric") from exc
            parsed.append(tuple(entries))
        return cls(d, tuple(parsed))

    @classmethod
    def load(cls, path) -> "SkewParam":
        with open(path, encoding="utf-8") as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ParameterFormatError(f"invalid JSON: {exc}") from exc
        return cls.from_json_obj(obj)


@dataclass(frozen=True)
class FiberPoly:
    z: complex
    poly: CPoly


def fiber_coeffs(lam: SkewParam, z) -> np.ndarray:
    """Ascending w-coefficients of ``q_z``; vectorized over an array of z.

    For array input the result has shape ``z.shape + (d+1,)``.
    """
    d = lam.d
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape + (d + 1,), dtype=complex)
    for j, A in enumerate(lam.coefficient_table()):
        acc = np.zeros_like(z) + A[-1]
        for a in A[-2::-1]:
            acc = acc * z + a
        out[..., j] = acc
    out[..., d] = 1.0
    return out


def fiber_poly(lam: SkewParam, z: complex) -> FiberPoly:
    return FiberPoly(complex(z), CPoly(fiber_coeffs(lam, complex(z))))


def eval_fiber(lam: SkewParam, z, w):
    """``q_z(w)`` for broadcastable arrays z, w."""
    c = fiber_coeffs(lam, z)
    w = np.asarray(w, dtype=complex)
    acc = np.ones(np.broadcast(c[..., 0], w).shape, dtype=complex)
    for j in range(lam.d - 1, -1, -1):
        acc = acc * w + c[..., j]
    return acc


def iterate_Q(lam: SkewParam, z: complex, w: complex, n: int) -> complex:
    """``Q^n_z(w)``, the n-fold non-autonomous iterate along z, z^d, z^(d^2), ..."""
    if n < 0:
        raise ValueError("n must be >= 0")
    zk, val = complex(z), complex(w)
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(1, n + 1):
            try:
                val = complex(eval_fiber(lam, zk, val))
            except OverflowError as exc:
                raise Overflow(step) from exc
            if not np.isfinite(val):
                raise Overflow(step)
            zk = zk**lam.d
    return val


def escape_norm(lam: SkewParam, base=None) -> float:
    """The escape norm R of the parameter for base z^d (constant on the unit circle)."""
    if base is not None:
        raise NotImplementedError("only the base z^d is supported")
    d = lam.d
    total = 0.0
    for j, row in enumerate(lam.rows):
        e = d - j
        total += float(np.sum(np.abs(np.array(row)) ** e)) ** (1.0 / e)
    return total


def derivative_coeffs(lam: SkewParam, z) -> np.ndarray:
    c = fiber_coeffs(lam, z)
    k = np.arange(1, lam.d + 1)
    return c[..., 1:] * k


def critical_points(lam: SkewParam, z: complex, tol: float = 1e-12) -> list[complex]:
    """The d-1 roots of the w-derivative of q_z, with multiplicity."""
    dq = CPoly(derivative_coeffs(lam, complex(z)))
    if dq.degree == 0:
        return []
    return roots(dq, tol=tol)


def critical_values(lam: SkewParam, z: complex) -> list[complex]:
    return [complex(eval_fiber(lam, z, c)) for c in critical_points(lam, z)]


def critical_value_product(lam: SkewParam, z: complex, with_scale: bool = False):
    """``prod q_z(c)`` over the critical points c of q_z.

    With ``with_scale`` also returns ``prod sum_j |coeff_j| |c|^j``, the size
    against which rounding in the product is measured.
    """
    c = fiber_coeffs(lam, complex(z))
    absc = np.abs(c)
    out, scale = 1.0 + 0j, 1.0
    for cp in critical_points(lam, z):
        out *= np.polyval(c[::-1], cp)
        scale *= float(np.polyval(absc[::-1], abs(cp)))
    return (complex(out), scale) if with_scale else complex(out)


def discriminant_in_z(lam: SkewParam) -> CPoly:
    """The critical-value product as a polynomial in z.

    Sampled at N roots of unity with N the next power of two above
    ``d(d-1)d + 1`` and recovered by FFT interpolation.
    """
    d = lam.d
    N = next_pow2(d * (d - 1) * d + 2)
    zs = np.exp(2j * np.pi * np.arange(N) / N)
    pairs = [critical_value_product(lam, z, with_scale=True) for z in zs]
    samples = np.array([v for v, _ in pairs])
    scales = np.array([s for _, s in pairs])
    if np.all(np.abs(samples) <= 1e-8 * scales):
        raise Degenerate("critical-value product vanishes identically in z")
    p = interpolate_at_roots_of_unity(samples, N)
    c = p.coeffs.copy()
    c[np.abs(c) <= 1e-12 * np.max(np.abs(c))] = 0
    return CPoly(c)


def e_membership(lam: SkewParam, tol: float = 1e-6) -> tuple[bool, list[complex]]:
    """Whether some zero of the discriminant polynomial lies on the unit circle."""
    P = discriminant_in_z(lam)
    if P.degree < 1:
        return False, []
    hits = [r for r in roots(P) if abs(abs(r) - 1.0) <= tol]
    return bool(hits), hits


def compose_iterate(lam: SkewParam, z: complex, n: int) -> CPoly:
    """``Q^n_z`` expanded as a polynomial in w."""
    Q = CPoly([0, 1])
    zk = complex(z)
    for _ in range(n):
        Q = fiber_poly(lam, zk).poly.compose(Q)
        zk = zk**lam.d
    return Q


def per_resultant(lam: SkewParam, z: complex, n: int) -> complex:
    """``prod (Q^n_z(c) - c)`` over the critical points c of q_z.

    This is the resultant of ``q_z'`` and ``Q^n_z(w) - w`` divided by the
    leading-coefficient power ``d^(d^n)``.
    """
    d = lam.d
    if n < 1:
        raise SizeGuard("n must be >= 1; Q^0(w) - w vanishes identically")
    if d**n > MAX_TREE_SIZE:
        raise SizeGuard(f"d^n = {d ** n} exceeds the guard {MAX_TREE_SIZE}")
    g = compose_iterate(lam, z, n) - CPoly([0, 1])
    f = CPoly(derivative_coeffs(lam, complex(z)))
    return resultant_product(f, g) / complex(f.lead) ** g.degree
