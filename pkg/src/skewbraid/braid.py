"""Braid words and conjugacy invariants of tracked closed braids.

Crossings are read off a projection ``Re(exp(i theta) w)``. Positions are
numbered from the smallest projection (position 1) upward and ``s_k`` swaps
positions k and k+1. A crossing is positive when the difference of the two
strands turns counterclockwise, so the braid of ``w^2 = b^2 z`` is ``s1``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
import numpy as np

from .errors import DegenerateProjection, ParameterFormatError, SeparationLoss
from .julia import Perm
from .monodromy import BraidGeometry

GOLDEN = (1 + 5**0.5) / 2
MAX_RETRIES = 32


@dataclass(frozen=True)
class BraidWord:
    letters: tuple[tuple[int, int], ...]
    strand_count: int

    def __post_init__(self):
        letters = tuple((int(i), int(s)) for i, s in self.letters)
        for i, s in letters:
            if not 1 <= i < self.strand_count:
                raise ParameterFormatError(f"generator s{i} outside B_{self.strand_count}")
            if s not in (1, -1):
                raise ParameterFormatError(f"letter sign must be +1 or -1, got {s}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def parse(cls, text: str, strand_count: int) -> "BraidWord":
        """ASCII form such as ``"s2 s1"`` or ``"s1^-1 s2"``; ``"e"`` is the empty word."""
        letters = []
        for tok in text.split():
            if tok == "e":
                continue
            base, _, exp = tok.partition("^")
            if not base.startswith("s") or not base[1:].isdigit():
                raise ParameterFormatError(f"bad braid letter {tok!r}")
            try:
                e = int(exp) if exp else 1
            except ValueError as exc:
                raise ParameterFormatError(f"bad exponent in {tok!r}") from exc
            letters.extend([(int(base[1:]), 1 if e > 0 else -1)] * abs(e))
        return cls(tuple(letters), strand_count)

    def reduce(self) -> "BraidWord":
        stack: list[tuple[int, int]] = []
        for i, s in self.letters:
            if stack and stack[-1] == (i, -s):
                stack.pop()
            else:
                stack.append((i, s))
        return BraidWord(tuple(stack), self.strand_count)

    @property
    def exponent_sum(self) -> int:
        return sum(s for _, s in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "e"
        return " ".join(f"s{i}" if s > 0 else f"s{i}^-1" for i, s in self.letters)


@dataclass(frozen=True)
class Crossing:
    t: float
    position: int
    strands: tuple[int, int]  # 1-based labels, lower projection first (before the swap)
    sign: int


@dataclass
class Extraction:
    word: BraidWord
    crossings: list[Crossing]
    angle: float
    start_order: tuple[int, ...]  # strand label at each position at t = 0
    retries: int = 0


def _extract_once(P: np.ndarray, Y: np.ndarray, t: np.ndarray, tol: float) -> tuple[list[Crossing], tuple[int, ...]]:
    T, N = P.shape
    order = list(np.argsort(P[0], kind="stable"))
    start = tuple(int(i) + 1 for i in order)
    scale = 1.0 + np.abs(P).max()
    if N > 1 and np.min(np.diff(np.sort(P[0]))) <= tol * scale:
        raise DegenerateProjection("coincident projections at t = 0")
    crossings: list[Crossing] = []
    for k in range(T - 1):
        a, b = P[k], P[k + 1]
        da = a[:, None] - a[None, :]
        db = b[:, None] - b[None, :]
        if np.any((db == 0) & ~np.eye(N, dtype=bool)):
            raise DegenerateProjection(f"exact coincidence at t={t[k + 1]:.6g}")
        ii, jj = np.nonzero(np.triu(np.sign(da) != np.sign(db), 1))
        if ii.size == 0:
            continue
        events = []
        for i, j in zip(ii, jj):
            s = da[i, j] / (da[i, j] - db[i, j])
            events.append((s, int(i), int(j)))
        events.sort()
        for s, i, j in events:
            pi, pj = order.index(i), order.index(j)
            if abs(pi - pj) != 1:
                raise DegenerateProjection(f"non-adjacent swap near t={t[k]:.6g}")
            lo, hi = (i, j) if pi < pj else (j, i)
            pos = min(pi, pj)
            # third projection at the same place and time
            val = a[i] + s * (b[i] - a[i])
            others = a + s * (b - a)
            mask = np.ones(N, dtype=bool)
            mask[[i, j]] = False
            if mask.any() and np.min(np.abs(others[mask] - val)) <= tol * scale:
                raise DegenerateProjection(f"triple point near t={t[k]:.6g}")
            # height difference of lower minus upper strand at the crossing
            dy = Y[k, lo] - Y[k, hi] + s * ((Y[k + 1, lo] - Y[k + 1, hi]) - (Y[k, lo] - Y[k, hi]))
            if dy == 0:
                raise DegenerateProjection(f"strands meet near t={t[k]:.6g}")
            sign = 1 if dy < 0 else -1
            order[pi], order[pj] = order[pj], order[pi]
            tc = t[k] + s * (t[k + 1] - t[k])
            crossings.append(Crossing(float(tc), pos + 1, (lo + 1, hi + 1), sign))
    final = list(np.argsort(P[-1], kind="stable"))
    if final != order:
        raise DegenerateProjection("final order does not match the tracked swaps")
    return crossings, start


def extract(g: BraidGeometry, projection_angle: float = 0.0, tol: float = 1e-9) -> Extraction:
    """Crossings of the projection, with deterministic retries on degeneracy.

    Each retry turns the projection direction by golden-ratio times pi and
    applies the shear ``x -> x + kappa y^2`` of the rotated plane. The shear
    is an orientation-preserving diffeomorphism, so the braid is unchanged,
    but it separates collinear triples (such as 0 and a symmetric pair
    +-w) that project to a single point in every linear direction.
    """
    theta = float(projection_angle)
    size = float(np.abs(g.W).max()) or 1.0
    last = None
    for attempt in range(MAX_RETRIES + 1):
        U = np.exp(1j * theta) * g.W
        kappa = 0.0 if attempt == 0 else 0.25 * ((attempt * GOLDEN) % 1.0) / size
        X = U.real + kappa * U.imag**2
        try:
            crossings, start = _extract_once(X, U.imag, g.t, tol)
        except DegenerateProjection as exc:
            last = exc
            theta = (theta + GOLDEN * math.pi) % (2 * math.pi)
            continue
        word = BraidWord(tuple((c.position, c.sign) for c in crossings), g.strand_count)
        return Extraction(word, crossings, theta, start, attempt)
    raise DegenerateProjection(f"no generic projection after {MAX_RETRIES} retries: {last}")


def extract_word(g: BraidGeometry, projection_angle: float = 0.0) -> BraidWord:
    return extract(g, projection_angle).word


@dataclass
class Linking:
    pair_half_turns: np.ndarray  # float, per strand pair
    components: list[tuple[int, ...]]
    component_half_turns: np.ndarray  # int; diagonal counts pairs inside a component
    total: int


def pairwise_linking(g: BraidGeometry) -> Linking:
    """Accumulated ``arg(w_i - w_j) / pi`` over the tracked interval.

    Per strand pair the count is an integer only when both strands close up
    by themselves. Sums over pairs of components are integers, as is the
    grand total, which equals the exponent sum of the braid.
    """
    W = g.W
    N = W.shape[1]
    H = np.zeros((N, N))
    for i, j in itertools.combinations(range(N), 2):
        diff = W[:, i] - W[:, j]
        if np.any(diff == 0):
            raise SeparationLoss(f"strands {i + 1} and {j + 1} meet")
        step = np.angle(diff[1:] / diff[:-1])
        if np.any(np.abs(step) > math.pi / 2):
            raise SeparationLoss(f"strands {i + 1} and {j + 1} are undersampled")
        H[i, j] = H[j, i] = step.sum() / math.pi
    comps = g.permutation.cycles()
    K = len(comps)
    C = np.zeros((K, K), dtype=int)
    for a in range(K):
        for b in range(a, K):
            if a == b:
                s = sum(H[i - 1, j - 1] for i, j in itertools.combinations(comps[a], 2))
            else:
                s = sum(H[i - 1, j - 1] for i in comps[a] for j in comps[b])
            C[a, b] = C[b, a] = int(round(s))
    total = int(round(np.triu(H, 1).sum()))
    return Linking(H, comps, C, total)


@dataclass(frozen=True)
class BraidInvariants:
    permutation_cycle_type: tuple[int, ...]
    exponent_sum: int
    component_count: int
    windings: tuple[int, ...]
    linking_matrix: tuple[tuple[int, ...], ...]
    component_windings: tuple[int, ...] = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {
            "cycle_type": list(self.permutation_cycle_type),
            "exponent_sum": self.exponent_sum,
            "component_count": self.component_count,
            "windings": list(self.windings),
            "linking_matrix": [list(r) for r in self.linking_matrix],
        }


def _build_invariants(perm: Perm, comps, diag, off, exponent_sum) -> BraidInvariants:
    K = len(comps)
    L = [[0] * K for _ in range(K)]
    for a in range(K):
        L[a][a] = int(diag[a])
        for b in range(K):
            if a != b:
                L[a][b] = int(off[a][b])
    cw = tuple(len(c) for c in comps)
    return BraidInvariants(
        perm.cycle_type(), int(exponent_sum), K, tuple(sorted(cw, reverse=True)),
        tuple(tuple(r) for r in L), cw,
    )


def invariants(g: BraidGeometry) -> BraidInvariants:
    """Components are the cycles of the endpoint permutation; the linking
    matrix holds pairwise linking numbers off the diagonal and the crossing
    count inside each component on the diagonal."""
    lk = pairwise_linking(g)
    K = len(lk.components)
    C = lk.component_half_turns
    off = [[0] * K for _ in range(K)]
    for a in range(K):
        for b in range(K):
            if a != b:
                if C[a, b] % 2:
                    raise SeparationLoss("odd half-turn count between components")
                off[a][b] = C[a, b] // 2
    return _build_invariants(g.permutation, lk.components, np.diag(C), off, lk.total)


def word_permutation(w: BraidWord) -> Perm:
    """Position permutation: images[p-1] is where the strand starting at p ends."""
    cur = list(range(1, w.strand_count + 1))
    for i, _ in w.letters:
        cur[i - 1], cur[i] = cur[i], cur[i - 1]
    images = [0] * w.strand_count
    for q, p in enumerate(cur, start=1):
        images[p - 1] = q
    return Perm(tuple(images))


def word_invariants(w: BraidWord) -> tuple[Perm, int, BraidWord]:
    return word_permutation(w), w.exponent_sum, w.reduce()


def fingerprint_from_word(w: BraidWord) -> BraidInvariants:
    perm = word_permutation(w)
    comps = perm.cycles()
    comp_of = {p: a for a, c in enumerate(comps) for p in c}
    K = len(comps)
    diag = [0] * K
    off = [[0] * K for _ in range(K)]
    cur = list(range(1, w.strand_count + 1))
    for i, s in w.letters:
        a, b = comp_of[cur[i - 1]], comp_of[cur[i]]
        if a == b:
            diag[a] += s
        else:
            off[a][b] += s
            off[b][a] += s
        cur[i - 1], cur[i] = cur[i], cur[i - 1]
    for a in range(K):
        for b in range(K):
            off[a][b] //= 2
    return _build_invariants(perm, comps, diag, off, w.exponent_sum)


def fingerprint_equal(a: BraidInvariants, b: BraidInvariants) -> bool:
    """Equal scalar invariants plus equal linking matrices up to relabeling
    components of equal winding."""
    if (a.permutation_cycle_type, a.exponent_sum, a.component_count, a.windings) != (
        b.permutation_cycle_type, b.exponent_sum, b.component_count, b.windings
    ):
        return False
    A, B = np.array(a.linking_matrix), np.array(b.linking_matrix)
    wa = a.component_windings or tuple([0] * a.component_count)
    wb = b.component_windings or tuple([0] * b.component_count)
    K = a.component_count
    if K > 8:
        key = lambda M, w: sorted((w[i], M[i, i], tuple(sorted(M[i]))) for i in range(K))
        return key(A, wa) == key(B, wb)
    for p in itertools.permutations(range(K)):
        if any(wa[i] != wb[p[i]] for i in range(K)):
            continue
        if np.array_equal(A, B[np.ix_(p, p)]):
            return True
    return False


def position_permutation(ex: Extraction, g: BraidGeometry) -> Perm:
    """Translate ``g.permutation`` (on labels) to positions at t = 0."""
    pos_of = {lab: p for p, lab in enumerate(ex.start_order, start=1)}
    return Perm(tuple(pos_of[g.permutation(lab)] for lab in ex.start_order))


def to_svg(word: BraidWord, width_per_crossing: int = 40, track_gap: int = 30) -> str:
    """Braid diagram: horizontal tracks, crossings left to right in t-order.

    In a positive crossing the strand rising from track k to track k+1 passes over.
    """
    n = word.strand_count
    slots = max(1, len(word))
    W = 20 + width_per_crossing * slots + 20
    H = 20 + track_gap * (n - 1) + 20
    y = lambda p: 20 + track_gap * (n - p)  # position 1 at the bottom
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
             f'viewBox="0 0 {W} {H}">',
             '<g stroke="black" stroke-width="2" fill="none">']
    x0 = 20
    for p in range(1, n + 1):
        parts.append(f'<line x1="0" y1="{y(p)}" x2="{x0}" y2="{y(p)}"/>')
    for idx, (k, s) in enumerate(word.letters):
        xa, xb = x0 + idx * width_per_crossing, x0 + (idx + 1) * width_per_crossing
        for p in range(1, n + 1):
            if p not in (k, k + 1):
                parts.append(f'<line x1="{xa}" y1="{y(p)}" x2="{xb}" y2="{y(p)}"/>')
        rising = (xa, y(k), xb, y(k + 1))
        falling = (xa, y(k + 1), xb, y(k))
        over, under = (rising, falling) if s > 0 else (falling, rising)
        mx, my = (xa + xb) / 2, (y(k) + y(k + 1)) / 2
        gap = 0.22
        ux1, uy1, ux2, uy2 = under
        parts.append(f'<line x1="{ux1}" y1="{uy1}" x2="{ux1 + (mx - ux1) * (1 - gap):.1f}" '
                     f'y2="{uy1 + (my - uy1) * (1 - gap):.1f}"/>')
        parts.append(f'<line x1="{ux2 + (mx - ux2) * (1 - gap):.1f}" '
                     f'y1="{uy2 + (my - uy2) * (1 - gap):.1f}" x2="{ux2}" y2="{uy2}"/>')
        parts.append(f'<line x1="{over[0]}" y1="{over[1]}" x2="{over[2]}" y2="{over[3]}"/>')
    xe = x0 + slots * width_per_crossing
    if not word.letters:
        for p in range(1, n + 1):
            parts.append(f'<line x1="{x0}" y1="{y(p)}" x2="{xe}" y2="{y(p)}"/>')
    for p in range(1, n + 1):
        parts.append(f'<line x1="{xe}" y1="{y(p)}" x2="{W}" y2="{y(p)}"/>')
    parts.append("</g>")
    parts.append(f'<text x="4" y="{H - 4}" font-size="10" font-family="monospace">{word}</text>')
    parts.append("</svg>")
    return "\n".join(p for p in parts if p) + "\n"
