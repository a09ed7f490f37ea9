"""Vertical Green function estimates, shift-locus sampling and the
admissibility certificate that gates the monodromy pipeline."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import Degenerate, InvalidConfig
from .skewparam import SkewParam, critical_points, e_membership, escape_norm, fiber_coeffs


@dataclass(frozen=True)
class EscapeConfig:
    alpha: float = 1.5
    max_iter: int = 200
    z_samples: int = 256
    margin: float = 1.25
    trials: int = 1000
    seed: int = 0

    def check(self, d: int) -> None:
        if not 1.0 < self.alpha < d:
            raise InvalidConfig(f"alpha must lie strictly between 1 and {d}, got {self.alpha}")
        if self.max_iter < 1 or self.z_samples < 1 or self.trials < 1:
            raise InvalidConfig("max_iter, z_samples and trials must be positive")
        if self.margin < 1.0:
            raise InvalidConfig(f"margin must be >= 1, got {self.margin}")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class GreenEstimate:
    value: float
    certified_positive: bool
    escape_step: Optional[int] = None


def escape_threshold(lam: SkewParam, cfg: EscapeConfig) -> float:
    """``R^alpha``, floored at 2 so that the doubling test is meaningful for small R."""
    return max(escape_norm(lam) ** cfg.alpha, 2.0)


def _orbits(lam: SkewParam, z: np.ndarray, w: np.ndarray, steps: int) -> np.ndarray:
    """Orbit matrix of shape (steps+1, N); escaped entries saturate at inf."""
    d = lam.d
    out = np.empty((steps + 1, z.size), dtype=complex)
    out[0] = w
    zk = z.copy()
    cur = w.copy()
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, steps + 1):
            c = fiber_coeffs(lam, zk)
            acc = np.ones_like(cur)
            for j in range(d - 1, -1, -1):
                acc = acc * cur + c[:, j]
            bad = ~np.isfinite(acc) | ~np.isfinite(cur)
            acc[bad] = np.inf
            out[k] = acc
            cur = acc
            zk = zk**d
            if np.all(bad):
                out[k + 1 :] = np.inf
                break
    return out


def _estimate_from_orbit(absq: np.ndarray, d: int, thresh: float) -> GreenEstimate:
    steps = absq.size - 1
    for n in range(steps - 1):
        a0 = absq[n]
        if not np.isfinite(a0):
            break
        if a0 < thresh:
            continue
        a1, a2 = absq[n + 1], absq[n + 2]
        if a1 >= 2 * a0 and a2 >= 2 * a1:
            k = n + 2
            while not np.isfinite(absq[k]):
                k -= 1
            return GreenEstimate(float(np.log(absq[k]) / float(d) ** k), True, n)
    k = steps
    while not np.isfinite(absq[k]):
        k -= 1
    last = absq[k]
    value = float(max(0.0, np.log(last)) / float(d) ** k) if last > 0 else 0.0
    return GreenEstimate(value, False, None)


def green_estimates(lam: SkewParam, z, w, cfg: EscapeConfig) -> list[GreenEstimate]:
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    z, w = np.broadcast_arrays(z, w)
    orb = _orbits(lam, z.ravel().copy(), w.ravel().copy(), cfg.max_iter + 2)
    absq = np.abs(orb)
    thresh = escape_threshold(lam, cfg)
    return [_estimate_from_orbit(absq[:, i], lam.d, thresh) for i in range(absq.shape[1])]


def green_estimate(lam: SkewParam, z: complex, w: complex, cfg: EscapeConfig = EscapeConfig()) -> GreenEstimate:
    """Escape-rate estimate ``lim d^-n log+ |Q^n_z(w)|``.

    The orbit counts as escaping at the first step n where
    ``|Q^n| >= max(R^alpha, 2)`` and the next two iterates each at least
    double; the value is then read off two steps later. Otherwise the
    estimate at the end of the horizon is returned uncertified.
    """
    return green_estimates(lam, z, w, cfg)[0]


def escape_doubling_check(lam: SkewParam, cfg: EscapeConfig = EscapeConfig(), trials: Optional[int] = None,
                          rng: Optional[np.random.Generator] = None) -> bool:
    """Random test of ``|q_z(w)| >= 2|w|`` on the circle ``|w| = R^alpha``."""
    R = escape_norm(lam)
    if R <= 1.0:
        return False
    n = cfg.trials if trials is None else trials
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    z = np.exp(2j * np.pi * rng.random(n))
    w = R**cfg.alpha * np.exp(2j * np.pi * rng.random(n))
    c = fiber_coeffs(lam, z)
    acc = np.ones_like(w)
    for j in range(lam.d - 1, -1, -1):
        acc = acc * w + c[:, j]
    return bool(np.all(np.abs(acc) >= 2 * np.abs(w)))


@dataclass
class Verdict:
    kind: str  # "InD", "NotInD" or "Undecided"
    witnesses: list = field(default_factory=list)
    grid: int = 0

    def __str__(self) -> str:
        return self.kind


def _cycles(orbit: np.ndarray, thresh: float, window: int = 60, rtol: float = 1e-6) -> bool:
    tail = orbit[-window:]
    if not np.all(np.isfinite(tail)) or np.any(np.abs(tail) >= thresh):
        return False
    last = tail[-1]
    earlier = tail[:-1]
    return bool(np.any(np.abs(earlier - last) <= rtol * (1.0 + abs(last))))


def _grid(n: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


def shift_locus_test(lam: SkewParam, cfg: EscapeConfig = EscapeConfig()) -> Verdict:
    """Sampled test that every critical orbit escapes over the unit circle.

    InD is a certificate on the sampled grid only. A non-escaping critical
    orbit that visibly recurs gives NotInD; anything else is Undecided.
    """
    zs, cs = [], []
    for z in _grid(cfg.z_samples):
        for c in critical_points(lam, z):
            zs.append(z)
            cs.append(c)
    if not zs:
        return Verdict("InD", [], cfg.z_samples)
    zs, cs = np.array(zs), np.array(cs)
    orb = _orbits(lam, zs.copy(), cs.copy(), cfg.max_iter + 2)
    absq = np.abs(orb)
    thresh = escape_threshold(lam, cfg)
    undecided = []
    for i in range(zs.size):
        est = _estimate_from_orbit(absq[:, i], lam.d, thresh)
        if est.certified_positive:
            continue
        if _cycles(orb[:, i], thresh):
            return Verdict("NotInD", [(complex(zs[i]), complex(cs[i]))], cfg.z_samples)
        undecided.append((complex(zs[i]), complex(cs[i])))
    if undecided:
        return Verdict("Undecided", undecided, cfg.z_samples)
    return Verdict("InD", [], cfg.z_samples)


@dataclass
class AdmissibilityReport:
    admissible: bool
    escape_norm: float
    alpha: float
    in_E: Optional[bool]
    circle_roots: list
    doubling_ok: bool
    min_critical_value: Optional[float]
    bound: float
    binding_z: Optional[complex]
    binding_c: Optional[complex]
    reason: str

    @property
    def slack(self) -> Optional[float]:
        if self.min_critical_value is None or self.bound == 0:
            return None
        return self.min_critical_value / self.bound


def admissibility_certificate(lam: SkewParam, cfg: EscapeConfig = EscapeConfig()) -> tuple[bool, AdmissibilityReport]:
    """Certify that ``lam`` is safe to feed into root tracking.

    The discriminant must have no zero on the unit circle. On the sampled
    circle the doubling test must hold at ``|w| = R^alpha`` while every
    critical value has modulus at least ``margin * 2 * R^alpha``.
    """
    cfg.check(lam.d)
    R = escape_norm(lam)
    bound = cfg.margin * 2.0 * R**cfg.alpha
    report = AdmissibilityReport(False, R, cfg.alpha, None, [], False, None, bound, None, None, "")
    try:
        in_E, hits = e_membership(lam)
    except Degenerate:
        report.reason = "critical-value product vanishes identically"
        return False, report
    report.in_E, report.circle_roots = in_E, hits
    if in_E:
        report.reason = "discriminant has a zero on the unit circle"
        return False, report
    report.doubling_ok = escape_doubling_check(lam, cfg)
    best = (np.inf, None, None)
    for z in _grid(cfg.z_samples):
        cps = critical_points(lam, z)
        if not cps:
            continue
        c = fiber_coeffs(lam, z)
        for cp in cps:
            v = np.polyval(c[::-1], cp)
            if abs(v) < best[0]:
                best = (abs(v), complex(z), complex(cp))
    report.min_critical_value, report.binding_z, report.binding_c = float(best[0]), best[1], best[2]
    if not report.doubling_ok:
        report.reason = "doubling test failed on |w| = R^alpha"
        return False, report
    if best[0] < bound:
        report.reason = "critical values too small"
        return False, report
    report.admissible = True
    report.reason = "ok"
    return True, report
