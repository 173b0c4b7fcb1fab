"""Scaling factors stored as strictly increasing exponent sequences.

A scaling factor here is always a divergent sequence of powers of two.  We
never materialize the values 2**s_n; everything that conceptually compares
value ratios (thinness, residue absorption) reduces to exact integer
arithmetic on the exponents s_n.  The cone operator shifts sequence indices
by s_n directly.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

DEFAULT_BASE = 4

_KINDS = ("default", "factorial", "custom")


@dataclass(frozen=True)
class ScalingSet:
    """Strictly increasing exponents s_n, representing the values 2**s_n.

    ``kind`` is one of "default" (s_n = 4**(n+c)), "factorial"
    (s_n = (n+1)!) or "custom" (an explicit finite prefix).  Closed-form
    kinds are unbounded; custom sets cap every sampling horizon at their
    length.
    """

    kind: str
    c: int | None = None
    exponents: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown scaling kind {self.kind!r}")
        if self.kind == "default":
            if self.c is None or self.c < 2:
                raise ValueError("default schedule requires c >= 2")
        if self.kind == "custom":
            exps = self.exponents
            if exps is None:
                raise ValueError("custom scaling requires an exponent prefix")
            for a, b in zip(exps, exps[1:]):
                if b <= a:
                    raise ValueError("exponents must be strictly increasing")

    # -- basic access -----------------------------------------------------

    @property
    def length(self) -> int | None:
        """Number of stored exponents, or None for closed-form schedules."""
        return len(self.exponents) if self.kind == "custom" else None

    def exponent(self, n: int) -> int:
        if n < 0:
            raise IndexError(n)
        if self.kind == "default":
            return DEFAULT_BASE ** (n + self.c)
        if self.kind == "factorial":
            out = 1
            for j in range(2, n + 2):
                out *= j
            return out
        exps = self.exponents
        if n >= len(exps):
            raise IndexError(f"custom scaling has only {len(exps)} exponents")
        return exps[n]

    def cap_horizon(self, horizon: int) -> int:
        """Largest usable sample index: min(horizon, length - 1)."""
        if self.length is None:
            return horizon
        if self.length == 0:
            raise ValueError("empty scaling set cannot be sampled")
        return min(horizon, self.length - 1)

    def gap(self, n: int) -> int:
        return self.exponent(n + 1) - self.exponent(n)

    def prefix(self, count: int) -> tuple[int, ...]:
        return tuple(self.exponent(n) for n in range(count))

    # -- invariants -------------------------------------------------------

    def depth_bound(self) -> int:
        """Steps of n -> (largest m with s_m <= n) before no index remains.

        Measured from a magnitude large enough to cover any horizon this
        artifact samples.  This is the recursion budget for radius-n
        patchings; families with wider radii compute their own budget.
        """
        m = self.exponent(self.cap_horizon(4096)) * 2
        count = 0
        while True:
            idx = self._largest_index_leq(m)
            if idx is None:
                return count
            nxt = idx
            if nxt >= m:
                # no shrink: malformed schedule
                raise ValueError("exponent schedule does not shrink under delegation")
            m = nxt
            count += 1

    def _largest_index_leq(self, value: int) -> int | None:
        if value < self.exponent(0):
            return None
        if self.kind == "custom":
            return bisect.bisect_right(self.exponents, value) - 1
        n = 0
        while True:
            top = self.cap_horizon(n + 32)
            if self.exponent(top) > value:
                break
            n = top
            if self.length is not None and top == self.length - 1:
                return top
        lo, hi = 0, top
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.exponent(mid) <= value:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def intervals_disjoint(self, horizon: int) -> bool:
        """Are the radius-n intervals [s_n - n, s_n + n] disjoint and positive?"""
        eff = self.cap_horizon(horizon)
        if self.exponent(0) - 0 < 1:
            return False
        for n in range(eff):
            if self.exponent(n) + n >= self.exponent(n + 1) - (n + 1):
                return False
        return True


def default_schedule(c: int) -> ScalingSet:
    """The concrete growth schedule s_n = 4**(n+c) used by the constructions.

    Exponent gaps 3 * 4**(n+c) diverge, so the value ratios 2**gap blow up
    (the value set is thin), and the variable intervals around s_n stay
    disjoint for every radius rule the constructions use.
    """
    if c < 2:
        raise ValueError("c must be at least 2")
    return ScalingSet(kind="default", c=c)


def factorial_schedule(terms: int | None = None) -> ScalingSet:
    """Exponents 1!, 2!, 3!, ...  The classic thin example, kept closed-form."""
    if terms is None:
        return ScalingSet(kind="factorial")
    exps = []
    out = 1
    for j in range(terms):
        out *= j + 1
        exps.append(out)
    return ScalingSet(kind="custom", exponents=tuple(exps))


def custom_schedule(exponents) -> ScalingSet:
    return ScalingSet(kind="custom", exponents=tuple(exponents))


def thin_check(s: ScalingSet, horizon: int, bound: int) -> bool:
    """Do the value ratios 2**gap exceed ``bound`` from some n0 <= horizon/2 on?

    Works purely on exponents: 2**g > bound iff g >= bound.bit_length().
    """
    if horizon < 2:
        raise ValueError("horizon must be at least 2")
    if bound < 1:
        raise ValueError("bound must be positive")
    last = s.cap_horizon(horizon) - 1
    if last < 0:
        return False
    need = bound.bit_length()
    n0 = last + 1
    for n in range(last, -1, -1):
        if s.gap(n) >= need:
            n0 = n
        else:
            break
    return 2 * n0 <= horizon and n0 <= last
