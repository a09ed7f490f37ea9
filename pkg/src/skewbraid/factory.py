"""Named parameters, cycle-type witnesses, and the quadratic count s."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .cpoly import CPoly, roots
from .errors import AllZero, BoundaryRoot, NormalizationFailed, NotAdmissible, SpecInvalid, UnknownPreset
from .escape import EscapeConfig, admissibility_certificate
from .skewparam import SkewParam

# bivariate polynomials are 2D arrays B[k, j] = coefficient of z^k w^j


def _bimul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    out = np.zeros((A.shape[0] + B.shape[0] - 1, A.shape[1] + B.shape[1] - 1), dtype=complex)
    for k, j in zip(*np.nonzero(A)):
        out[k : k + B.shape[0], j : j + B.shape[1]] += A[k, j] * B
    return out


def _biadd(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    out = np.zeros((max(A.shape[0], B.shape[0]), max(A.shape[1], B.shape[1])), dtype=complex)
    out[: A.shape[0], : A.shape[1]] += A
    out[: B.shape[0], : B.shape[1]] += B
    return out


def _binomial_factor(wdeg: int, zdeg: int, const: complex) -> np.ndarray:
    """``w^wdeg - const * z^zdeg``."""
    B = np.zeros((zdeg + 1, wdeg + 1), dtype=complex)
    B[0, wdeg] += 1.0
    B[zdeg, 0] -= const
    return B


@dataclass(frozen=True)
class CycleSpec:
    d: int
    fixed_count: int
    cycle_lengths: tuple[int, ...]
    radii: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "cycle_lengths", tuple(int(c) for c in self.cycle_lengths))
        radii = tuple(float(r) for r in self.radii) or default_radii(self.factor_count)
        object.__setattr__(self, "radii", radii)
        self.validate()

    @property
    def factor_count(self) -> int:
        return (1 if self.fixed_count > 0 else 0) + len(self.cycle_lengths)

    def validate(self) -> None:
        if self.d < 2:
            raise SpecInvalid(f"degree must be >= 2, got {self.d}")
        if self.fixed_count < 0:
            raise SpecInvalid("fixed count must be >= 0")
        if any(c < 2 for c in self.cycle_lengths):
            raise SpecInvalid(f"cycle lengths must be >= 2, got {self.cycle_lengths}")
        if self.fixed_count + sum(self.cycle_lengths) != self.d:
            raise SpecInvalid(
                f"fixed count {self.fixed_count} plus cycles {self.cycle_lengths} does not sum to {self.d}")
        if len(self.radii) != self.factor_count:
            raise SpecInvalid(f"expected {self.factor_count} radii, found {len(self.radii)}")
        if any(r <= 0 for r in self.radii) or any(a >= b for a, b in zip(self.radii, self.radii[1:])):
            raise SpecInvalid(f"radii must be positive and strictly increasing, got {self.radii}")

    @property
    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted(list(self.cycle_lengths) + [1] * self.fixed_count, reverse=True))

    def to_dict(self) -> dict:
        return {"d": self.d, "fixed": self.fixed_count, "cycles": list(self.cycle_lengths),
                "radii": list(self.radii)}


def default_radii(n: int) -> tuple[float, ...]:
    return tuple(2.0 + j for j in range(n))


def product_expansion(spec: CycleSpec) -> np.ndarray:
    """``(w^delta - R_0^delta z^delta) prod_j (w^{d_j} - R_j^{d_j} z)`` as a 2D array."""
    P = np.ones((1, 1), dtype=complex)
    radii = list(spec.radii)
    if spec.fixed_count > 0:
        R0 = radii.pop(0)
        P = _bimul(P, _binomial_factor(spec.fixed_count, spec.fixed_count, R0**spec.fixed_count))
    for dj, Rj in zip(spec.cycle_lengths, radii):
        P = _bimul(P, _binomial_factor(dj, 1, Rj**dj))
    return P


def _shift_trace(P: np.ndarray, d: int) -> np.ndarray:
    """Substitute ``w = u - c(z)/d`` where c is the coefficient of w^(d-1)."""
    c = P[:, d - 1].copy()
    if not np.any(c):
        return P
    lin = np.zeros((c.size, 2), dtype=complex)
    lin[:, 0] = -c / d
    lin[0, 1] = 1.0
    out = np.zeros((1, 1), dtype=complex)
    power = np.ones((1, 1), dtype=complex)
    for j in range(P.shape[1]):
        col = P[:, j : j + 1]
        if j > 0:
            power = _bimul(power, lin)
        if np.any(col):
            out = _biadd(out, _bimul(col, power))
    return out


def cycle_type_params(spec: CycleSpec, scale: float = 1.0) -> SkewParam:
    """Parameter whose monodromy permutation has the cycle type of ``spec``."""
    if scale < 1:
        raise SpecInvalid(f"scale must be >= 1, got {scale}")
    d = spec.d
    P = product_expansion(spec)
    if spec.fixed_count == 1:
        P = _shift_trace(P, d)
    tol = 1e-12 * max(1.0, float(np.abs(P).max()))
    if P.shape[1] != d + 1 or abs(P[0, d] - 1) > tol or np.any(np.abs(P[1:, d]) > tol):
        raise NormalizationFailed("expansion is not monic of degree d in w")
    if np.any(np.abs(P[:, d - 1]) > tol):
        raise NormalizationFailed("w^(d-1) coefficient does not vanish")
    rows = []
    for j in range(d - 1):
        col = P[:, j]
        if np.any(np.abs(col[d - j + 1 :]) > tol):
            raise NormalizationFailed(f"A_{j} has z-degree above {d - j}")
        A = np.zeros(d - j + 1, dtype=complex)
        A[: min(col.size, d - j + 1)] = col[: d - j + 1]
        A[np.abs(A) <= tol] = 0
        entries = A.astype(complex) ** (1.0 / (d - j))
        rows.append(tuple(complex(scale * e) for e in entries))
    return SkewParam(d, tuple(rows))


def expansion_value(spec: CycleSpec, z: complex, u: complex) -> complex:
    """Direct evaluation of the product form at ``w = u - c(z)/d``.

    Only the one-fixed-point case has a nonzero ``c(z) = -R_0 z``.
    """
    R = list(spec.radii)
    w = u
    out = 1.0 + 0j
    if spec.fixed_count > 0:
        R0 = R.pop(0)
        if spec.fixed_count == 1:
            w = u + R0 * z / spec.d
        out *= w**spec.fixed_count - (R0 * z) ** spec.fixed_count
    for dj, Rj in zip(spec.cycle_lengths, R):
        out *= w**dj - Rj**dj * z
    return complex(out)


def smallest_admissible_scale(spec: CycleSpec, cfg: EscapeConfig = EscapeConfig(),
                              max_power: int = 20) -> tuple[float, SkewParam]:
    """Smallest ``2^k`` (k >= 0) for which the scaled witness is certified admissible."""
    for k in range(max_power + 1):
        t = float(2**k)
        lam = cycle_type_params(spec, t)
        if admissibility_certificate(lam, cfg)[0]:
            return t, lam
    raise NotAdmissible(f"no admissible scale up to 2^{max_power}")


def partitions_into_parts_at_least(n: int, low: int = 2, cap: Optional[int] = None) -> list[tuple[int, ...]]:
    cap = n if cap is None else cap
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, cap), low - 1, -1):
        for rest in partitions_into_parts_at_least(n - first, low, first):
            out.append((first,) + rest)
    return out


def all_cycle_specs(d: int) -> list[CycleSpec]:
    """One witness spec per conjugacy class of permutations of d letters."""
    specs = []
    for delta in range(d, -1, -1):
        for cycles in partitions_into_parts_at_least(d - delta):
            specs.append(CycleSpec(d, delta, tuple(sorted(cycles))))
    return specs


def quad_s(a: complex, b: complex, c: complex, boundary_tol: float = 1e-9) -> int:
    """Number of zeros of ``a^2 z^2 + b^2 z + c^2`` in the open unit disk."""
    if a == 0 and b == 0 and c == 0:
        raise AllZero("a, b and c are all zero")
    p = CPoly([c * c, b * b, a * a])
    if p.degree == 0:
        return 0
    count = 0
    for r in roots(p, tol=1e-14):
        if abs(abs(r) - 1.0) <= boundary_tol:
            raise BoundaryRoot(f"root {r} lies on the unit circle")
        count += abs(r) < 1.0
    return int(count)


@dataclass(frozen=True)
class Preset:
    name: str
    param: SkewParam
    scale: float
    description: str
    diagram_word: Optional[str] = None


def _q(a, b, c) -> SkewParam:
    return SkewParam.quadratic(a, b, c)


_BASE = {
    "d3-ex1": (SkewParam.from_flat(3, [0, 0, 0, -2, 0, 0, 0]), "q = w^3 - 8 z^3", "e"),
    "d3-ex2": (SkewParam.from_flat(3, [0, -2, 0, 0, 0, 0, 0]), "q = w^3 - 8 z", "s2 s1"),
    "d3-ex3": (SkewParam.from_flat(3, [0, 0, 0, 0, 0, 4j, 0]), "q = w^3 - 16 z w", "s2"),
    "d2-s0": (_q(0, 0, 1), "q = w^2 + 1 (s = 0)", "e"),
    "d2-s1": (_q(0, 1, 0), "q = w^2 + z (s = 1)", "s1"),
    "d2-s2": (_q(1, 0, 0), "q = w^2 + z^2 (s = 2)", "s1 s1"),
}

ADMISSIBLE_SCALE = {"d3-ex1": 2.0, "d3-ex2": 2.0, "d3-ex3": 2.0, "d2-s0": 8.0, "d2-s1": 8.0, "d2-s2": 8.0}


def _catalog() -> dict[str, Preset]:
    out = {}
    for name, (lam, desc, word) in _BASE.items():
        out[name] = Preset(name, lam, 1.0, desc, word)
        t = ADMISSIBLE_SCALE[name]
        out[name + "-adm"] = Preset(name + "-adm", lam.scaled(t), t, f"{desc}, scaled by {t:g}", word)
    return out


PRESETS = _catalog()


def preset(name: str) -> SkewParam:
    return preset_info(name).param


def preset_info(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise UnknownPreset(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}") from None
