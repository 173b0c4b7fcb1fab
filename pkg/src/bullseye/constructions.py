"""Recursive sequence families and the cone classifier.

Each family fixes bases with pairwise distinct exact densities and patches
them on variable intervals around the scaling exponents so that the cone of
member i is member i+1 (or i+1 mod m, or a pinned target in the transfinite
tower).  The variable interval around s_n has radius 2**n: the radii grow
fast enough that a window of width w is absorbed from sample index
ceil(log2 w) on (so the cone certificates stabilize early), yet stay thin
relative to the centers 4**(n+c), which is what keeps every member's density
equal to its base's.

Evaluation of a member at index k walks the delegation chain iteratively:
locate the interval containing k, shift to the next member, repeat.  Each
hop shrinks the index magnitude at least to the interval radius, so the
chain length is bounded by the family's precomputed budget.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .cone import ConeResult, UnstableAt
from .limits import StabilizedLimit, Unstable, filter_limit
from .scaling import ScalingSet, custom_schedule
from .sequences import (BitSequence, DisjointnessViolation, DivisibleBy,
                        FamilyMember, RecursionBudgetExceeded, SingleOnes,
                        evaluate, materialize, shortlex_word)


class DepthExceeded(Exception):
    """The schedule cannot certify termination of patch delegation."""


class SearchExhausted(Exception):
    """No occurrence of the target window within the search limit."""


class SchemeViolation(Exception):
    """The nested-interval inequalities fail for the chosen parameters."""


DEFAULT_SEARCH_LIMIT = 1 << 20


# ---------------------------------------------------------------------------
# common family machinery


class SequenceFamily:
    """Shared delegation logic; subclasses fix centers, radii and bases."""

    def center(self, n: int) -> int:
        raise NotImplementedError

    def radius(self, n: int) -> int:
        return 1 << n

    def max_interval_index(self) -> int | None:
        """Last interval index for finite schedules, None if unbounded."""
        return None

    def base_bit(self, i: int, k: int) -> int:
        raise NotImplementedError

    def next_index(self, i: int) -> int:
        raise NotImplementedError

    def patch_active(self, i: int) -> bool:
        return True

    def pinned_bit(self, i: int, k: int) -> int | None:
        return None

    def member(self, i: int) -> FamilyMember:
        return FamilyMember(self, self.normalize_index(i))

    def normalize_index(self, i: int) -> int:
        return i

    def iterate_index(self, depth: int) -> int:
        """Member index reached by ``depth`` cone applications from member 0."""
        return self.normalize_index(depth)

    def cone_successor(self, i: int) -> FamilyMember:
        return self.member(self.next_index(i))

    def locate(self, k: int) -> int | None:
        """Index n of the variable interval containing k, if any."""
        if k < self.center(0) - self.radius(0):
            return None
        top = self.max_interval_index()
        hi = 1
        while (top is None or hi < top) and self.center(hi) - self.radius(hi) <= k:
            hi *= 2
        if top is not None:
            hi = min(hi, top)
        lo = 0
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.center(mid) - self.radius(mid) <= k:
                lo = mid
            else:
                hi = mid - 1
        if abs(k - self.center(lo)) <= self.radius(lo):
            return lo
        return None

    def member_bit(self, i: int, k: int, budget: int) -> int:
        while True:
            pinned = self.pinned_bit(i, k)
            if pinned is not None:
                return pinned
            if k > 0 and self.patch_active(i):
                n = self.locate(k)
                if n is not None:
                    if budget <= 0:
                        raise RecursionBudgetExceeded(
                            "family delegation exhausted its budget")
                    i = self.next_index(i)
                    k -= self.center(n)
                    budget -= 1
                    continue
            return self.base_bit(i, k)

    def delegation_budget(self) -> int:
        return self._budget

    def _compute_budget(self, guard_index: int = 2048) -> int:
        """Length of the magnitude-shrink chain from any reachable index."""
        top = self.max_interval_index()
        start = guard_index if top is None else min(guard_index, top)
        m = self.center(start) * 2
        count = 0
        while True:
            n = self._largest_left_leq(m)
            if n is None:
                return count
            nxt = self.radius(n)
            if nxt >= m:
                raise DepthExceeded(
                    "interval radii do not shrink the index magnitude")
            m = nxt
            count += 1

    def _largest_left_leq(self, value: int) -> int | None:
        if value < self.center(0) - self.radius(0):
            return None
        top = self.max_interval_index()
        hi = 1
        while (top is None or hi < top) and self.center(hi) - self.radius(hi) <= value:
            hi *= 2
        if top is not None:
            hi = min(hi, top)
        lo = 0
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.center(mid) - self.radius(mid) <= value:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def _validate(self, check_intervals: int = 96) -> None:
        if self.center(0) - self.radius(0) < 1:
            raise DisjointnessViolation(
                "first variable interval leaves the positive range")
        top = self.max_interval_index()
        last = check_intervals if top is None else min(check_intervals, top)
        for n in range(last):
            if self.center(n) + self.radius(n) >= self.center(n + 1) - self.radius(n + 1):
                raise DisjointnessViolation(
                    f"variable intervals {n} and {n + 1} overlap")
        object.__setattr__(self, "_budget", self._compute_budget())


def _sturmian_bit(num: int, den: int, k: int) -> int:
    return ((k + 1) * num) // den - (k * num) // den


# ---------------------------------------------------------------------------
# concrete families


@dataclass(frozen=True, eq=False)
class _ScalingBackedFamily(SequenceFamily):
    scaling: ScalingSet

    def center(self, n):
        return self.scaling.exponent(n)

    def max_interval_index(self):
        return None if self.scaling.length is None else self.scaling.length - 1

    def locate(self, k):
        # closed-form candidate for the default schedule 4**(n+c)
        if self.scaling.kind != "default":
            return super().locate(k)
        c = self.scaling.c
        if k < (4 ** c) - 1:
            return None
        n0 = max(0, (k.bit_length() - 1) // 2 - c)
        for n in (n0 - 1, n0, n0 + 1):
            if n >= 0 and abs(k - 4 ** (n + c)) <= self.radius(n):
                return n
        return None


@dataclass(frozen=True)
class InfmanyFamily(_ScalingBackedFamily):
    """Members with densities 1/(i+1) and cone(member i) = member i+1."""

    levels: int

    kind = "infmany"

    def __post_init__(self):
        if self.levels < 2:
            raise ValueError("levels must be at least 2")
        self._validate()

    def normalize_index(self, i):
        return min(i, self.levels)

    def base_bit(self, i, k):
        return _sturmian_bit(1, i + 1, k)

    def next_index(self, i):
        return i + 1

    def patch_active(self, i):
        return i < self.levels

    def member_density(self, i):
        return Fraction(1, i + 1)


@dataclass(frozen=True)
class PeriodicFamily(_ScalingBackedFamily):
    """m structurally distinct members; the cone cycles them mod m."""

    period: int

    kind = "periodic"

    def __post_init__(self):
        if self.period < 1:
            raise ValueError("period must be at least 1")
        self._validate()

    def normalize_index(self, i):
        return i % self.period

    def base_bit(self, i, k):
        return _sturmian_bit(1, i + 2, k)

    def next_index(self, i):
        return (i + 1) % self.period

    def member_density(self, i):
        return Fraction(1, self.normalize_index(i) + 2)


@dataclass(frozen=True)
class TransfiniteFamily(_ScalingBackedFamily):
    """Infmany tower level whose members are pinned to a target near 0.

    Member i agrees with the level's target on [-i, i]; the pinned windows
    grow with the member index, so the omega-limit of the iteration chain
    reproduces the target on any window while the finite iterates keep
    their distinct base densities.  Members beyond ``levels`` drop the
    variable patching but keep the pinning, which is what lets the
    omega-limit certify at any iteration horizon.
    """

    levels: int
    target: BitSequence
    level: int

    kind = "transfinite"

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be at least 1")
        self._validate()

    def normalize_index(self, i):
        return min(i, self.levels)

    def pinned_bit(self, i, k):
        if abs(k) <= i:
            return evaluate(self.target, k)
        return None

    def base_bit(self, i, k):
        return _sturmian_bit(1, i + 1, k)

    def next_index(self, i):
        return i + 1

    def patch_active(self, i):
        return i < self.levels

    def member_density(self, i):
        return Fraction(1, i + 1)

    @property
    def omega_target(self) -> BitSequence:
        return self.target


_VARYING_FIRST_GAP_AT = 9


@dataclass(frozen=True)
class VaryingFamily(SequenceFamily):
    """Rich sequences with embedded closed-form densities.

    Member v lays every binary word (shortlex order) as a block in the
    positive part, separated by gaps of background bits that grow by a
    logarithmic factor, over a Sturmian background of slope 1/(v+2).  The
    word blocks make the member rich; their relative mass vanishes, so the
    density stays exactly 1/(v+2).
    """

    _layout: list = field(default_factory=list, compare=False, repr=False)

    kind = "varying"

    def __post_init__(self):
        object.__setattr__(self, "_budget", 0)

    def _extend_layout(self, upto: int) -> None:
        layout = self._layout
        cursor = layout[-1][1] + 1 if layout else _VARYING_FIRST_GAP_AT
        m = len(layout)
        while cursor <= upto:
            word = shortlex_word(m)
            gap = len(word) * (m + 3).bit_length()
            start = cursor + gap
            end = start + len(word) - 1
            layout.append((start, end, m))
            cursor = end + 1
            m += 1

    def member_bit(self, i, k, budget):
        if k >= _VARYING_FIRST_GAP_AT:
            self._extend_layout(k)
            layout = self._layout
            lo, hi = 0, len(layout) - 1
            while lo < hi:
                mid = (lo + hi + 1) // 2
                if layout[mid][0] <= k:
                    lo = mid
                else:
                    hi = mid - 1
            start, end, m = layout[lo]
            if start <= k <= end:
                return shortlex_word(m)[k - start]
        return _sturmian_bit(1, i + 2, k)

    def member_density(self, i):
        return Fraction(1, i + 2)


_ONLYCOUNT_BASE = 64


@dataclass(frozen=True)
class NestedIntervalScheme:
    """Centers alpha(n) = 64**(n+2) with radii 8 * 64**n.

    Chosen so that whenever a shifted interval reaches into another one it
    sits strictly inside it with margin n; both implications of that
    statement are machine-checked, and the nesting depth function counts how
    many intervals an index sits inside after iterated recentering.
    """

    def alpha(self, n: int) -> int:
        return _ONLYCOUNT_BASE ** (n + 2)

    def interval_radius(self, n: int) -> int:
        return 8 * _ONLYCOUNT_BASE ** n

    def implication_failures(self, n_max: int) -> list[tuple[str, int, int]]:
        bad = []
        for n in range(n_max + 1):
            rn = self.interval_radius(n)
            for m in range(n_max + 1):
                lo = self.alpha(m) - self.interval_radius(m)
                hi = self.alpha(m) + self.interval_radius(m)
                if lo <= rn and not hi <= rn - n:
                    bad.append(("reaches-inside", n, m))
                if hi >= rn and not lo >= rn + n:
                    bad.append(("stays-outside", n, m))
        return bad

    def check_implications(self, n_max: int) -> bool:
        return not self.implication_failures(n_max)

    def locate(self, k: int) -> int | None:
        if k < self.alpha(0) - self.interval_radius(0):
            return None
        n0 = max(0, (k.bit_length() - 1) // 6 - 2)
        for n in (n0 - 1, n0, n0 + 1):
            if n >= 0 and abs(k - self.alpha(n)) <= self.interval_radius(n):
                return n
        return None

    def depth(self, k: int) -> int:
        """Maximal nesting count of index k under iterated recentering."""
        t = 0
        while True:
            n = self.locate(k)
            if n is None:
                return t
            t += 1
            k -= self.alpha(n)


@dataclass(frozen=True)
class OnlycountFamily(SequenceFamily):
    """Divisibility bases patched along the nested-interval scheme."""

    levels: int
    scheme: NestedIntervalScheme = field(default_factory=NestedIntervalScheme)

    kind = "onlycount"
    scaling = None

    def __post_init__(self):
        if self.levels < 1:
            raise ValueError("levels must be at least 1")
        self._validate()

    def center(self, n):
        return self.scheme.alpha(n)

    def radius(self, n):
        return self.scheme.interval_radius(n)

    def locate(self, k):
        return self.scheme.locate(k)

    def normalize_index(self, i):
        return min(i, self.levels)

    def base_bit(self, i, k):
        return 1 if k % (i + 2) == 0 else 0

    def next_index(self, i):
        return i + 1

    def patch_active(self, i):
        return i < self.levels

    def member_density(self, i):
        return Fraction(1, i + 2)


# ---------------------------------------------------------------------------
# builders


def build_infmany(s: ScalingSet, levels: int) -> InfmanyFamily:
    """Family with adn(member i) = 1/(i+1) whose cone steps members forward."""
    return InfmanyFamily(scaling=s, levels=levels)


def build_periodic(m: int, s: ScalingSet) -> PeriodicFamily:
    """Cone-periodic family: member i = member i+m structurally."""
    return PeriodicFamily(scaling=s, period=m)


def build_transfinite(k: int, s: ScalingSet, levels: int = 48,
                      target: BitSequence | None = None) -> TransfiniteFamily:
    """Tower of k pinned levels; level j's omega-limit is level j-1's member 0."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if target is None:
        target = DivisibleBy(3)
    family = TransfiniteFamily(scaling=s, levels=levels, target=target, level=1)
    for j in range(2, k + 1):
        family = TransfiniteFamily(scaling=s, levels=levels,
                                   target=family.member(0), level=j)
    return family


def build_onlycount(levels: int = 72) -> tuple[OnlycountFamily, NestedIntervalScheme]:
    scheme = NestedIntervalScheme()
    failures = scheme.implication_failures(16)
    if failures:
        raise SchemeViolation(f"nested-interval inequalities fail: {failures[:3]}")
    return OnlycountFamily(levels=levels, scheme=scheme), scheme


# ---------------------------------------------------------------------------
# scaling search over rich sequences


def find_scaling_for_density(source: BitSequence, target: BitSequence,
                             terms: int, search_limit: int = DEFAULT_SEARCH_LIMIT) -> ScalingSet:
    """Exponents i_1 < ... < i_terms where ``source`` reproduces ``target``.

    Scans the positive part of the (rich) source for occurrences of the
    target's full window [-terms, terms]; every returned exponent matches at
    full width, so the cone along the result stabilizes immediately at every
    window index.  Searching full-width windows for every n subsumes the
    per-n radii the exponents are required to satisfy.
    """
    if terms < 0:
        raise ValueError("terms must be non-negative")
    if terms == 0:
        return custom_schedule(())
    needle = materialize(target, -terms, terms)
    buf = bytearray()
    grown = min(search_limit, 1 << 14)
    buf.extend(materialize(source, 1, grown))
    centres = []
    search_from = 0
    for _ in range(terms):
        while True:
            pos = buf.find(needle, search_from)
            if pos >= 0:
                break
            if grown >= search_limit:
                raise SearchExhausted(
                    f"no occurrence within the first {search_limit} positions")
            new_grown = min(search_limit, grown * 2)
            buf.extend(materialize(source, grown + 1, new_grown))
            grown = new_grown
        centres.append(pos + 1 + terms)
        search_from = pos + 1
    return custom_schedule(centres)


def build_varying(assignment, window: int = 5,
                  search_limit: int = 2 * DEFAULT_SEARCH_LIMIT) -> tuple[VaryingFamily, list[ScalingSet]]:
    """Rich members for an assignment plus the per-step scaling sets.

    Step i's scaling is found by searching member a_{i-1} (rich) for the
    window of member a_i, so the step-i cone of the step-(i-1) sequence
    reproduces member a_i on [-window, window].  Members are equal exactly
    when assignment values are equal and their densities 1/(v+2) differ
    otherwise.
    """
    assignment = list(assignment)
    if not assignment:
        raise ValueError("assignment must be non-empty")
    family = VaryingFamily()
    scalings = []
    for prev, cur in zip(assignment, assignment[1:]):
        scalings.append(find_scaling_for_density(
            family.member(prev), family.member(cur), terms=window,
            search_limit=search_limit))
    return family, scalings


# ---------------------------------------------------------------------------
# omega iteration


def cone_omega(family: SequenceFamily, s: ScalingSet, window: int,
               iteration_horizon: int | None = None) -> ConeResult:
    """Certified limit of the iteration chain member 0, cone, cone(cone), ...

    Samples the identified iterate at each depth; for pinned (transfinite)
    families the chain agrees with the level target from depth |k| on, so
    every window index certifies.
    """
    if window < 1:
        raise ValueError("window must be at least 1")
    if iteration_horizon is None:
        iteration_horizon = max(48, 2 * window + 8)
    if iteration_horizon < 2 * window:
        raise ValueError("iteration horizon must be at least twice the window")

    def chain_sample(k):
        return lambda i: evaluate(family.member(family.iterate_index(i)), k)

    values: dict[int, int] = {}
    certs: dict[int, StabilizedLimit] = {}
    for k in range(-window, window + 1):
        res = filter_limit(chain_sample(k), iteration_horizon)
        if isinstance(res, Unstable):
            raise UnstableAt(k, res.trace)
        values[k] = res.value
        certs[k] = res
    candidate = getattr(family, "omega_target", None)
    identified = candidate is not None and all(
        evaluate(candidate, k) == values[k] for k in values)
    if identified:
        sequence = candidate
    else:
        sequence = SingleOnes(frozenset(k for k, v in values.items() if v))
    # omega certificates sample the iteration chain, not a shifted source
    return ConeResult(source=family.member(0), scaling=s, window=window,
                      values=values, certificates=certs, sequence=sequence,
                      identified=identified, sampler=chain_sample)


# ---------------------------------------------------------------------------
# classification of onlycount cones


@dataclass(frozen=True)
class Class1:
    """At most two ones in the window."""


@dataclass(frozen=True)
class Class2:
    """Divisibility word i+2 before the cut, i+3 from the cut on."""

    divisor_index: int
    cut: int


@dataclass(frozen=True)
class Unclassified:
    pass


def classify_cone(result: ConeResult, family: OnlycountFamily,
                  scheme: NestedIntervalScheme, window: int | None = None):
    """Sort a stabilized cone window of the onlycount family into its class.

    Searches all shift-aligned decompositions into an initial divisibility
    word and a (possibly empty) final one with the next divisor, returning
    the decomposition with the longest initial part.
    """
    if window is None:
        window = result.window
    bits = {k: result.values[k] for k in range(-window, window + 1)}
    if sum(bits.values()) <= 2:
        return Class1()

    best = None
    max_divisor_index = min(family.levels, 2 * window)
    for i in range(max_divisor_index + 1):
        d1, d2 = i + 2, i + 3
        prefix_best = None
        for r1 in range(d1):
            cut = window + 1
            for k in range(-window, window + 1):
                if bits[k] != (1 if (k + r1) % d1 == 0 else 0):
                    cut = k
                    break
            if prefix_best is None or cut > prefix_best:
                prefix_best = cut
        if prefix_best <= -window:
            continue  # initial part would be empty
        suffix_best = None
        for r2 in range(d2):
            start = -window
            for k in range(window, -window - 1, -1):
                if bits[k] != (1 if (k + r2) % d2 == 0 else 0):
                    start = k + 1
                    break
            if suffix_best is None or start < suffix_best:
                suffix_best = start
        # the longest initial part wins; the final part may be empty
        cut = min(prefix_best, window + 1)
        if suffix_best <= cut and cut >= -window + 1:
            if best is None or cut > best.cut:
                best = Class2(divisor_index=i, cut=cut)
    return best if best is not None else Unclassified()


def sample_classification_scalings(count: int, seed: int, horizon: int,
                                   scheme: NestedIntervalScheme,
                                   levels: int) -> list[ScalingSet]:
    """Seeded corpus of scaling sets whose onlycount cones all stabilize.

    Three kinds, dealt round-robin: chains of growing nesting depth (the
    diverging-depth regime, landing in Class1), fixed-depth interiors (pure
    divisibility windows) and interval-edge straddles (genuine two-piece
    windows).
    """
    if horizon + 1 > levels:
        raise ValueError("family levels must exceed the sampling horizon")
    rng = random.Random(seed)
    alpha, rad = scheme.alpha, scheme.interval_radius
    out = []
    for idx in range(count):
        kind = idx % 3
        if kind == 0:
            u = rng.randint(-8, 8)
            exps = [sum(alpha(2 * (n + 1) + 2 - 2 * t) for t in range(n + 1)) + u
                    for n in range(horizon + 1)]
        elif kind == 1:
            depth = 1 + rng.randrange(3)
            u = rng.randint(-40, 40)
            inner = sum(alpha(2 * (depth - 1 - t)) for t in range(depth - 1))
            exps = [alpha(n + 2 * (depth - 1) + 2) + inner + u
                    for n in range(horizon + 1)]
        else:
            c = rng.randint(-10, 10)
            exps = [alpha(n + 4) - rad(n + 4) + c for n in range(horizon + 1)]
        out.append(custom_schedule(exps))
    return out
