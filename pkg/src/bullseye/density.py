"""Asymptotic density: exact closed forms where they exist, exact window
averages otherwise.

All averages are exact rationals; there is no floating point anywhere in
this module.  The limsup behind the density is reported exactly when a
closed form exists and as a monotone table of window averages when it does
not; it is never numerically extrapolated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .sequences import (BitSequence, Constant, DivisibleBy, FamilyMember,
                        Patched, Periodic, Rich, SingleOnes, Sturmian,
                        evaluate)


class NotClosedForm(Exception):
    """No exact density is known; fall back to adn_estimate."""


def adn_exact(seq: BitSequence) -> Fraction:
    """Exact asymptotic density of a structured descriptor.

    Patched descriptors with a finite interval list keep the density of
    their base (a finite modification never moves a limsup); family members
    keep their base density because the family's variable parts are thin.
    """
    if isinstance(seq, Constant):
        return Fraction(seq.value)
    if isinstance(seq, Periodic):
        return Fraction(sum(seq.pattern), len(seq.pattern))
    if isinstance(seq, Sturmian):
        return seq.slope
    if isinstance(seq, DivisibleBy):
        return Fraction(1, seq.d)
    if isinstance(seq, SingleOnes):
        return Fraction(0)
    if isinstance(seq, Patched):
        return adn_exact(seq.base)
    if isinstance(seq, FamilyMember):
        return seq.family.member_density(seq.index)
    if isinstance(seq, Rich):
        raise NotClosedForm("the rich sequence has no closed-form density")
    raise NotClosedForm(f"no closed form for {type(seq).__name__}")


def window_sum(seq: BitSequence, lo: int, hi: int) -> int:
    return sum(evaluate(seq, k) for k in range(lo, hi + 1))


def adn_estimate(seq: BitSequence, n: int) -> Fraction:
    """Symmetric window average over [-n, n], exact."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return Fraction(window_sum(seq, -n, n), 2 * n + 1)


def shift_bound_check(seq: BitSequence, shift: int, n: int) -> bool:
    """Window averages of a sequence and its shift differ by <= |shift|/(2n+1).

    The difference of the two window sums telescopes to two boundary blocks
    of |shift| terms each with opposite signs, so the bound holds for every
    sequence; this is the assertable form of shift invariance of density.
    """
    if n <= abs(shift):
        raise ValueError("n must exceed |shift|")
    base = Fraction(window_sum(seq, -n, n), 2 * n + 1)
    moved = Fraction(window_sum(seq, -n + shift, n + shift), 2 * n + 1)
    return abs(base - moved) <= Fraction(abs(shift), 2 * n + 1)


def coherence_bound(seq: BitSequence, n: int) -> Fraction | None:
    """Class constant bound on |window average - exact density|, if known."""
    if isinstance(seq, Constant):
        return Fraction(0)
    if isinstance(seq, (Periodic, DivisibleBy)):
        period = len(seq.pattern) if isinstance(seq, Periodic) else seq.d
        return Fraction(period, 2 * n + 1)
    if isinstance(seq, Sturmian):
        return Fraction(2, 2 * n + 1)
    return None


@dataclass(frozen=True)
class DensityReport:
    exact: Fraction | None
    window_averages: tuple[tuple[int, Fraction], ...]
    bound: Fraction | None

    def __post_init__(self):
        for _, avg in self.window_averages:
            if not 0 <= avg <= 1:
                raise ValueError("window averages must lie in [0, 1]")


def density_report(seq: BitSequence, windows=(10, 100, 1000)) -> DensityReport:
    try:
        exact = adn_exact(seq)
    except NotClosedForm:
        exact = None
    averages = tuple((n, adn_estimate(seq, n)) for n in windows)
    bound = coherence_bound(seq, max(windows)) if windows else None
    return DensityReport(exact=exact, window_averages=averages, bound=bound)
