"""Combinatorial model of the Julia set built from the permutation S and
the code homeomorphism h it induces.

Codes are eventually periodic words ``a_1 a_2 a_3 ...`` over ``{1..d}``; the
text form ``"2:1,3"`` means ``2, 1, 3, 1, 3, ...``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

from .errors import LetterOutOfRange, ParameterFormatError, PreconditionError


@dataclass(frozen=True)
class Perm:
    """Bijection of ``{1..n}``; ``images[a-1]`` is the image of ``a``."""

    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(x) for x in self.images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ParameterFormatError(f"not a permutation of 1..{len(imgs)}: {imgs}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Perm":
        img = list(range(1, n + 1))
        for cyc in cycles:
            for i, a in enumerate(cyc):
                img[a - 1] = cyc[(i + 1) % len(cyc)]
        return cls(tuple(img))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Perm":
        """Cycle notation such as ``"(1 2 3)(4)"`` or ``"(2,3)"``."""
        text = text.strip()
        if text in ("", "()", "Id", "id"):
            if n is None:
                raise ParameterFormatError("identity needs an explicit size")
            return cls.identity(n)
        if not re.fullmatch(r"(\(\s*\d+(?:[\s,]+\d+)*\s*\)\s*)+", text):
            raise ParameterFormatError(f"bad cycle notation: {text!r}")
        cycles = [[int(x) for x in re.split(r"[\s,]+", body.strip())]
                  for body in re.findall(r"\(([^)]*)\)", text)]
        flat = [a for c in cycles for a in c]
        if len(flat) != len(set(flat)):
            raise ParameterFormatError(f"repeated letter in {text!r}")
        size = max(flat) if n is None else n
        if max(flat) > size or min(flat) < 1:
            raise ParameterFormatError(f"letters of {text!r} outside 1..{size}")
        return cls.from_cycles(size, cycles)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, a: int) -> int:
        return self.images[a - 1]

    def then(self, other: "Perm") -> "Perm":
        """Apply ``self`` first, then ``other``."""
        return Perm(tuple(other(self(a)) for a in range(1, self.n + 1)))

    def inverse(self) -> "Perm":
        inv = [0] * self.n
        for a, b in enumerate(self.images, start=1):
            inv[b - 1] = a
        return Perm(tuple(inv))

    def power(self, k: int) -> "Perm":
        base = self if k >= 0 else self.inverse()
        out = Perm.identity(self.n)
        for _ in range(abs(k) % max(1, perm_order(self))):
            out = out.then(base)
        return out

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for a in range(1, self.n + 1):
            if a in seen:
                continue
            cyc = [a]
            seen.add(a)
            b = self(a)
            while b != a:
                cyc.append(b)
                seen.add(b)
                b = self(b)
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def is_identity(self) -> bool:
        return all(a == b for a, b in enumerate(self.images, start=1))

    def __str__(self) -> str:
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles())


def perm_order(S: Perm) -> int:
    """Least n >= 1 with S^n = Id (lcm of the cycle lengths)."""
    return reduce(math.lcm, (len(c) for c in S.cycles()), 1)


def _primitive(word: tuple[int, ...]) -> tuple[int, ...]:
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word[:p] * (n // p) == word:
            return word[:p]
    return word


@dataclass(frozen=True)
class Code:
    """Eventually periodic word, kept with primitive period and minimal preperiod."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        pre = tuple(int(x) for x in self.preperiod)
        per = tuple(int(x) for x in self.period)
        if not per:
            raise ParameterFormatError("period must be nonempty")
        per = _primitive(per)
        while pre and pre[-1] == per[-1]:
            per = (pre[-1],) + per[:-1]
            pre = pre[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def constant(cls, j: int) -> "Code":
        return cls((), (j,))

    @classmethod
    def parse(cls, text: str) -> "Code":
        text = text.strip()
        pre_txt, _, per_txt = text.rpartition(":")

        def letters(s: str) -> tuple[int, ...]:
            s = s.strip()
            if not s:
                return ()
            try:
                return tuple(int(x) for x in s.split(","))
            except ValueError as exc:
                raise ParameterFormatError(f"bad code {text!r}") from exc

        return cls(letters(pre_txt), letters(per_txt))

    def letter(self, n: int) -> int:
        """The n-th letter, 1-based."""
        if n <= len(self.preperiod):
            return self.preperiod[n - 1]
        return self.period[(n - len(self.preperiod) - 1) % len(self.period)]

    def check(self, d: int) -> None:
        for a in self.preperiod + self.period:
            if not 1 <= a <= d:
                raise LetterOutOfRange(f"letter {a} outside 1..{d}")

    def __str__(self) -> str:
        pre = ",".join(map(str, self.preperiod))
        return f"{pre}:{','.join(map(str, self.period))}"


def _exponent_cycle(d: int, m: int) -> tuple[int, int]:
    """Preperiod and period of ``n -> d^(n-1) mod m`` for n = 1, 2, ..."""
    seen = {}
    x, n = 1 % m, 1
    while x not in seen:
        seen[x] = n
        x = (x * d) % m
        n += 1
    start = seen[x]
    return start - 1, n - start


def h_apply(S: Perm, d: int, c: Code, k: int = 1) -> Code:
    """``h^k``: the n-th letter a_n goes to ``S^(k d^(n-1))(a_n)``."""
    c.check(S.n)
    m = perm_order(S)
    if m == 1 or k % m == 0:
        return c
    e_pre, e_per = _exponent_cycle(d, m)
    L = max(len(c.preperiod), e_pre)
    P = math.lcm(len(c.period), e_per)
    powers = {}
    out = []
    for n in range(1, L + P + 1):
        e = (k * pow(d, n - 1, m)) % m
        if e not in powers:
            powers[e] = S.power(e)
        out.append(powers[e](c.letter(n)))
    return Code(tuple(out[:L]), tuple(out[L:]))


def component_orbit(S: Perm, d: int, c: Code) -> tuple[list[Code], int]:
    """Orbit of ``c`` under h and its size, the winding of its component."""
    orbit = [c]
    nxt = h_apply(S, d, c, 1)
    while nxt != c:
        orbit.append(nxt)
        nxt = h_apply(S, d, nxt, 1)
    return orbit, len(orbit)


@dataclass(frozen=True)
class Component:
    members: tuple[int, ...]
    winding: int


def fixed_point_components(S: Perm) -> list[Component]:
    """Fixed points grouped by S-cycle; the winding is the cycle length."""
    return [Component(tuple(sorted(c)), len(c)) for c in S.cycles()]


def suspension_eq(S: Perm, d: int, p1: tuple[float, Code], p2: tuple[float, Code]) -> bool:
    """Equality in the mapping torus where (0, x) is glued to (1, h(x))."""
    (t1, c1), (t2, c2) = p1, p2
    for t in (t1, t2):
        if not 0.0 <= t <= 1.0:
            raise PreconditionError(f"suspension time {t} outside [0, 1]")
    if t1 == t2:
        return c1 == c2
    if (t1, t2) == (0.0, 1.0):
        return h_apply(S, d, c1) == c2
    if (t1, t2) == (1.0, 0.0):
        return h_apply(S, d, c2) == c1
    return False
