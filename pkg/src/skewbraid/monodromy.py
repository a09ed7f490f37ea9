"""Root continuation over circle paths.

``track_circle`` follows the roots of ``Q^n_z(w) = q_{z^(d^(n-1))} o ... o q_z(w)``
while ``z = exp(2 pi i m t)`` runs over ``t in [0, 1]``. The endpoint
permutation at level 1 with one turn is the monodromy permutation S.
``code_level_n`` labels the roots of ``q_1`` composed n times by words through
numerically continued inverse branches, and ``level_monodromy_check`` compares
tracked tree monodromy with the letterwise recurrence in S.
"""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .cpoly import roots
from .errors import (
    BranchCollision,
    LetterOutOfRange,
    NonConvergence,
    NotAdmissible,
    SeparationLoss,
    SizeGuard,
    StrandCollision,
)
from .escape import EscapeConfig, admissibility_certificate
from .julia import Perm, perm_order
from .skewparam import MAX_TREE_SIZE, SkewParam, compose_iterate, fiber_coeffs

UNIT = 4096  # sub-steps per base step; positions are integers in these units
MAX_HALVINGS = 12
NEWTON_ITERS = 12


@lru_cache(maxsize=256)
def _certified(lam: SkewParam, cfg: EscapeConfig) -> bool:
    return admissibility_certificate(lam, cfg)[0]


def require_admissible(lam: SkewParam, cfg: EscapeConfig = EscapeConfig()) -> None:
    if not _certified(lam, cfg):
        ok, rep = admissibility_certificate(lam, cfg)
        raise NotAdmissible(f"parameter is not certified admissible: {rep.reason}")


def label_key(w: complex) -> tuple[float, float]:
    """Sort key for root labels: argument in [0, 2 pi), then modulus, at 1e-9."""
    a = round(float(np.angle(w)) % (2 * np.pi), 9)
    if a >= round(2 * np.pi, 9):
        a = 0.0
    return a, round(abs(w), 9)


def sort_roots(rts) -> np.ndarray:
    return np.array(sorted((complex(r) for r in rts), key=label_key), dtype=complex)


def nearest_distances(W: np.ndarray) -> np.ndarray:
    if W.size < 2:
        return np.full(W.shape, np.inf)
    diff = np.abs(W[:, None] - W[None, :])
    np.fill_diagonal(diff, np.inf)
    return diff.min(axis=1)


Evaluator = Callable[[int, int, np.ndarray], tuple[np.ndarray, np.ndarray]]


def _newton(func: Evaluator, pos: int, total: int, W: np.ndarray, near: np.ndarray, tol: float):
    X = W.copy()
    with np.errstate(all="ignore"):
        for _ in range(NEWTON_ITERS):
            val, der = func(pos, total, X)
            step = val / der
            if not np.all(np.isfinite(step)):
                return None
            X = X - step
            if np.any(np.abs(X - W) > 0.25 * near):
                return None
            if np.all(np.abs(step) <= tol * (1.0 + np.abs(X))):
                return X
    return None


def continue_roots(func: Evaluator, W0: np.ndarray, steps: int, tol: float,
                   collision=StrandCollision) -> tuple[np.ndarray, np.ndarray]:
    """Adaptive predictor-corrector continuation of simple roots over [0, 1].

    The predictor is the previous root; the corrector is Newton. A step is
    rejected if Newton fails or moves any root by more than a quarter of its
    distance to the nearest other root, and is then halved (at most 12 times
    below the base step). Returns the sample times and a (T, N) array of roots.
    """
    total = steps * UNIT
    h_min = UNIT >> MAX_HALVINGS
    pos, h = 0, UNIT
    W = np.asarray(W0, dtype=complex).copy()
    ts, Ws = [0.0], [W.copy()]
    while pos < total:
        near = nearest_distances(W)
        if near.min() < 10 * tol:
            raise collision(pos / total, float(near.min()))
        h = min(h, total - pos)
        X = _newton(func, pos + h, total, W, near, tol)
        if X is None:
            if h <= h_min:
                raise NonConvergence(NEWTON_ITERS, best=W,
                                     message=f"continuation stalled at t={pos / total:.6g}")
            h //= 2
            continue
        pos += h
        W = X
        ts.append(pos / total)
        Ws.append(W.copy())
        h = min(2 * h, UNIT)
    near = nearest_distances(W)
    if near.min() < 10 * tol:
        raise collision(1.0, float(near.min()))
    return np.array(ts), np.array(Ws)


def _circle_evaluator(lam: SkewParam, n: int, m: int) -> Evaluator:
    d = lam.d
    mults = [m * d**k for k in range(n)]

    def func(pos: int, total: int, X: np.ndarray):
        val = X.copy()
        der = np.ones_like(X)
        for mult in mults:
            frac = (mult * pos) % total
            zk = 1.0 + 0j if frac == 0 else np.exp(2j * np.pi * frac / total)
            c = fiber_coeffs(lam, zk)
            p = np.ones_like(val)
            dp = np.zeros_like(val)
            for j in range(d - 1, -1, -1):
                dp = dp * val + p
                p = p * val + c[j]
            der = der * dp
            val = p
        return val, der

    return func


def _polish(func: Evaluator, W: np.ndarray, tol: float, iters: int = 6) -> np.ndarray:
    with np.errstate(all="ignore"):
        for _ in range(iters):
            val, der = func(0, 1, W)
            step = val / der
            if not np.all(np.isfinite(step)):
                break
            W = W - step
            if np.all(np.abs(step) <= 1e-3 * tol * (1 + np.abs(W))):
                break
    return W


def base_roots(lam: SkewParam, n: int, tol: float = 1e-10) -> np.ndarray:
    """Roots of ``Q^n_1`` (q_1 composed n times), sorted by the label convention."""
    Q = compose_iterate(lam, 1.0, n)
    W = np.array(roots(Q, tol=min(tol, 1e-12)), dtype=complex)
    W = _polish(_circle_evaluator(lam, n, 0), W, tol)
    return sort_roots(W)


@dataclass(frozen=True)
class Strand:
    t: np.ndarray
    w: np.ndarray
    start_index: int
    end_index: int

    @property
    def samples(self) -> list[tuple[float, complex]]:
        return list(zip(self.t.tolist(), self.w.tolist()))


@dataclass
class BraidGeometry:
    """Tracked strands; column i of ``W`` starts at the root labeled i+1."""

    t: np.ndarray
    W: np.ndarray
    labels: np.ndarray
    turns: int
    level: int
    permutation: Perm
    d: int
    tol: float

    @property
    def strand_count(self) -> int:
        return self.W.shape[1]

    @property
    def strands(self) -> list[Strand]:
        return [Strand(self.t, self.W[:, i], i + 1, self.permutation(i + 1))
                for i in range(self.strand_count)]

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            wr = csv.writer(fh)
            wr.writerow(["strand_id", "t", "re_w", "im_w"])
            for i in range(self.strand_count):
                for t, w in zip(self.t, self.W[:, i]):
                    wr.writerow([i + 1, f"{t:.12g}", f"{w.real:.12g}", f"{w.imag:.12g}"])


def match_endpoints(end: np.ndarray, labels: np.ndarray) -> Perm:
    """Permutation sending start label a to the label nearest the end of strand a."""
    sep = nearest_distances(labels).min() if labels.size > 1 else np.inf
    images = []
    for w in end:
        dist = np.abs(labels - w)
        j = int(np.argmin(dist))
        if dist[j] >= 0.1 * sep:
            raise SeparationLoss(f"strand end {w} is {dist[j]:.3g} from every root")
        images.append(j + 1)
    if len(set(images)) != len(images):
        raise SeparationLoss("two strands end at the same root")
    return Perm(tuple(images))


def track_circle(lam: SkewParam, n: int = 1, m: int = 1, steps: int = 1024, tol: float = 1e-10,
                 certify: bool = True, cfg: EscapeConfig = EscapeConfig()) -> BraidGeometry:
    """Follow the roots of ``Q^n_z`` while z runs m times around the unit circle."""
    if n < 1:
        raise SizeGuard("level must be >= 1")
    if lam.d**n > MAX_TREE_SIZE:
        raise SizeGuard(f"d^n = {lam.d ** n} exceeds the guard {MAX_TREE_SIZE}")
    if certify:
        require_admissible(lam, cfg)
    labels = base_roots(lam, n, tol)
    if m == 0:
        W = labels[None, :]
        return BraidGeometry(np.array([0.0]), W, labels, 0, n, Perm.identity(labels.size), lam.d, tol)
    func = _circle_evaluator(lam, n, m)
    ts, Ws = continue_roots(func, labels, steps * abs(m), tol)
    perm = match_endpoints(Ws[-1], labels)
    return BraidGeometry(ts, Ws, labels, m, n, perm, lam.d, tol)


def endpoint_residuals(g: BraidGeometry, lam: SkewParam) -> np.ndarray:
    """Newton step sizes at the final samples (a scale-free residual)."""
    func = _circle_evaluator(lam, g.level, g.turns)
    val, der = func(1, 1, g.W[-1])
    return np.abs(val / der)


# coding of the preimage tree


def inverse_branches(lam: SkewParam, targets: np.ndarray, x: np.ndarray, steps: int, tol: float) -> np.ndarray:
    """``g_j(v)`` for every target v: column j-1 holds the preimage continued from x_j.

    The d roots of ``q_1(w) - s v`` are followed together as s goes from 0 to 1.
    """
    c = fiber_coeffs(lam, 1.0)
    d = lam.d
    out = np.empty((targets.size, d), dtype=complex)
    for i, v in enumerate(targets):
        if v == 0:
            out[i] = x
            continue

        def func(pos, total, X, v=v):
            p = np.ones_like(X)
            dp = np.zeros_like(X)
            for j in range(d - 1, -1, -1):
                dp = dp * X + p
                p = p * X + c[j]
            return p - (pos / total) * v, dp

        _, Ws = continue_roots(func, x, steps, tol, collision=BranchCollision)
        out[i] = Ws[-1]
    return out


@dataclass
class Coding:
    """Words ``(a_n, ..., a_1)`` in lexicographic order with their roots."""

    words: list[tuple[int, ...]]
    roots: np.ndarray

    def root_of(self, word) -> complex:
        return complex(self.roots[self.words.index(tuple(word))])


def code_level_n(lam: SkewParam, n: int, tol: float = 1e-10, steps: int = 64,
                 certify: bool = True, cfg: EscapeConfig = EscapeConfig()) -> Coding:
    """Bijection between words of length n and roots of q_1 composed n times.

    ``L(empty) = 0`` and ``L(a_n ... a_1) = g_{a_1}(L(a_n ... a_2))``, where
    g_j is the inverse branch of q_1 with ``g_j(0) = x_j``.
    """
    if n < 1:
        raise SizeGuard("level must be >= 1")
    if lam.d**n > MAX_TREE_SIZE:
        raise SizeGuard(f"d^n = {lam.d ** n} exceeds the guard {MAX_TREE_SIZE}")
    if certify:
        require_admissible(lam, cfg)
    d = lam.d
    x = base_roots(lam, 1, tol)
    words: list[tuple[int, ...]] = [()]
    vals = np.zeros(1, dtype=complex)
    for _ in range(n):
        branches = inverse_branches(lam, vals, x, steps, tol)
        new_words, new_vals = [], []
        for i, w in enumerate(words):
            for j in range(d):
                new_words.append(w + (j + 1,))
                new_vals.append(branches[i, j])
        words, vals = new_words, np.array(new_vals)
    order = sorted(range(len(words)), key=lambda i: words[i])
    return Coding([words[i] for i in order], vals[order])


def img_action(word, m: int, S: Perm, d: int) -> tuple[int, ...]:
    """Position i from the right maps ``a_i`` to ``S^(d^(i-1) m)(a_i)``."""
    word = tuple(word)
    for a in word:
        if not 1 <= a <= S.n:
            raise LetterOutOfRange(f"letter {a} outside 1..{S.n}")
    order = perm_order(S)
    n = len(word)
    out = []
    for pos, a in enumerate(word):
        i = n - pos
        e = (pow(d, i - 1, order) * m) % order
        out.append(S.power(e)(a))
    return tuple(out)


def words_of_length(d: int, n: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(1, d + 1), repeat=n))


@dataclass
class LevelCheck:
    match: bool
    numeric: Perm
    formula: Perm
    S: Perm
    words: list[tuple[int, ...]]


def level_monodromy_check(lam: SkewParam, n: int, m: int = 1, steps: int = 1024, tol: float = 1e-10,
                          certify: bool = True, cfg: EscapeConfig = EscapeConfig()) -> LevelCheck:
    """Tracked tree monodromy on coded words against the recurrence in S.

    Both permutations act on word indices (lexicographic order, 1-based).
    """
    if lam.d**n > 32:
        raise SizeGuard(f"d^n = {lam.d ** n} exceeds the guard 32")
    if certify:
        require_admissible(lam, cfg)
    geom = track_circle(lam, n, m, steps, tol, certify=False)
    coding = code_level_n(lam, n, tol, certify=False)
    word_to_label = match_endpoints(coding.roots, geom.labels)
    label_to_word = word_to_label.inverse()
    numeric = word_to_label.then(geom.permutation).then(label_to_word)
    S = track_circle(lam, 1, 1, steps, tol, certify=False).permutation
    index = {w: i + 1 for i, w in enumerate(coding.words)}
    formula = Perm(tuple(index[img_action(w, m, S, lam.d)] for w in coding.words))
    return LevelCheck(numeric == formula, numeric, formula, S, coding.words)
