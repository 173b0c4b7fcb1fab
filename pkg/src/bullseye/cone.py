"""The asymptotic-cone operator at sequence level.

The cone of a sequence along a scaling set is the sequence of certified
shifted limits b_k = lim_n a(s_n + k).  Each window index gets its own
stabilization certificate; when any index fails to stabilize within the
horizon the whole cone is refused with UnstableAt rather than guessing an
ultrafilter-dependent value.

When the cone window provably coincides with a full descriptor (the next
member of a recursive family, a rotated periodic word, a caller-supplied
candidate) the result carries that descriptor, which is what makes repeated
coning and exact density claims about cones possible.  Otherwise the result
carries only the window materialization and says so.
"""

from __future__ import annotations

from dataclasses import dataclass

from .limits import StabilizedLimit, Unstable, UnstableTable, filter_limit
from .scaling import ScalingSet
from .sequences import (BitSequence, Constant, DivisibleBy, FamilyMember,
                        Patched, Periodic, SingleOnes, evaluate)


class UnstableAt(Exception):
    """Some window index has no stabilization certificate within the horizon."""

    def __init__(self, index: int, trace: tuple):
        super().__init__(f"cone does not stabilize at index {index}")
        self.index = index
        self.trace = trace


class UnidentifiedCone(Exception):
    """An intermediate cone could not be matched to a full descriptor."""


@dataclass
class ConeResult:
    source: BitSequence
    scaling: ScalingSet | None
    window: int
    values: dict[int, int]
    certificates: dict[int, StabilizedLimit]
    sequence: BitSequence
    identified: bool
    sampler: object = None

    def sample_function(self, k: int):
        """The sample behind certificate k, for re-checking and sub-sampling."""
        if self.sampler is not None:
            return self.sampler(k)
        src, sc = self.source, self.scaling
        return lambda n: evaluate(src, sc.exponent(n) + k)


def default_horizon(window: int) -> int:
    return max(64, 2 * window + 16)


def _window_sequence(values: dict[int, int]) -> BitSequence:
    return SingleOnes(frozenset(k for k, v in values.items() if v))


def _eventual_residue(s: ScalingSet, period: int, horizon: int) -> int | None:
    res = filter_limit(lambda n: s.exponent(n) % period, horizon)
    if isinstance(res, Unstable):
        return None
    return res.value


def derive_candidate(a: BitSequence, s: ScalingSet, horizon: int) -> BitSequence | None:
    """Predict the cone of ``a`` along ``s`` as a full descriptor, if possible.

    The prediction is only ever used after being checked pointwise against
    the certified window values, so a wrong guess degrades to an
    unidentified cone, never to a wrong answer.
    """
    if isinstance(a, Constant):
        return a
    if isinstance(a, SingleOnes):
        # the shifts s_n + k eventually escape any finite support
        return Constant(0)
    if isinstance(a, (Periodic, DivisibleBy)):
        period = len(a.pattern) if isinstance(a, Periodic) else a.d
        r = _eventual_residue(s, period, horizon)
        if r is None:
            return None
        if isinstance(a, Periodic):
            # b_k = a(k + r) is the same word rotated
            return Periodic(a.pattern, a.offset - r)
        pattern = tuple(1 if (j + r) % a.d == 0 else 0 for j in range(a.d))
        return Periodic(pattern, 0)
    if isinstance(a, Patched):
        # finite patch lists are eventually escaped by the shifts
        top = a.patches.max_right
        if top is None:
            return derive_candidate(a.base, s, horizon)
        probe = filter_limit(lambda n: s.exponent(n) > top, horizon)
        if isinstance(probe, Unstable) or probe.value is not True:
            return None
        return derive_candidate(a.base, s, horizon)
    if isinstance(a, FamilyMember):
        fam = a.family
        succ = getattr(fam, "cone_successor", None)
        if succ is not None and getattr(fam, "scaling", None) == s:
            return succ(a.index)
    return None


def cone(a: BitSequence, s: ScalingSet, window: int,
         horizon: int | None = None, candidate: BitSequence | None = None) -> ConeResult:
    """Certified cone window of ``a`` along ``s``.

    Finite custom scalings cap the sample horizon at their length; the
    stored certificates report the effective horizon actually sampled.
    """
    if window < 1:
        raise ValueError("window must be at least 1")
    if horizon is None:
        horizon = default_horizon(window)
    if horizon < 2 * window:
        raise ValueError("horizon must be at least twice the window")
    eff = s.cap_horizon(horizon)
    values: dict[int, int] = {}
    certs: dict[int, StabilizedLimit] = {}
    for k in range(-window, window + 1):
        res = filter_limit(lambda n, k=k: evaluate(a, s.exponent(n) + k), eff)
        if isinstance(res, Unstable):
            raise UnstableAt(k, res.trace)
        values[k] = res.value
        certs[k] = res
    if candidate is None:
        candidate = derive_candidate(a, s, eff)
    identified = candidate is not None and all(
        evaluate(candidate, k) == values[k] for k in range(-window, window + 1))
    sequence = candidate if identified else _window_sequence(values)
    return ConeResult(source=a, scaling=s, window=window, values=values,
                      certificates=certs, sequence=sequence, identified=identified)


def restrict(a: BitSequence, window: int, horizon: int | None = None,
             scaling: ScalingSet | None = None) -> ConeResult:
    """Depth-zero iteration: the sequence itself on the window, trivially certified."""
    if horizon is None:
        horizon = default_horizon(window)
    values = {k: evaluate(a, k) for k in range(-window, window + 1)}
    certs = {k: StabilizedLimit(v, 0, horizon) for k, v in values.items()}
    return ConeResult(source=a, scaling=scaling, window=window, values=values,
                      certificates=certs, sequence=a, identified=True,
                      sampler=lambda k: (lambda n: evaluate(a, k)))


def iterate_cone(a: BitSequence, s: ScalingSet, depth: int, window: int,
                 horizon: int | None = None) -> ConeResult:
    """``depth``-fold application of the cone operator.

    Each step must identify its result with a full descriptor (verified
    pointwise on the window against the step's certificates); the next step
    then cones that descriptor.  An unidentified intermediate cone cannot
    honestly be coned again, so it raises UnidentifiedCone.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if depth == 0:
        return restrict(a, window, horizon, scaling=s)
    current = a
    result = None
    for step in range(depth):
        result = cone(current, s, window, horizon)
        if not result.identified:
            raise UnidentifiedCone(f"cone at step {step + 1} matched no full descriptor")
        current = result.sequence
    return result


def composition_check(a: BitSequence, s: ScalingSet, s2: ScalingSet, window: int,
                      horizon: int | None = None, table_horizon: int | None = None) -> bool:
    """Double cone versus the product scheme with exponent sums.

    The left side applies the cone operator twice.  The right side computes,
    for each window index, the iterated stabilized limit of the table
    (m, n) -> a(s2_m + s_n + k), i.e. the cone along the product scheme whose
    exponents are the sums s2_m + s_n.  Inner rows get horizons that grow
    with the row index because the absorbing interval for a shifted sample
    sits deeper the larger the outer shift is.
    """
    first = cone(a, s, window, horizon)
    if not first.identified:
        raise UnidentifiedCone("inner cone matched no full descriptor")
    second = cone(first.sequence, s2, window, horizon)

    if table_horizon is None:
        table_horizon = 64
    outer_h = s2.cap_horizon(table_horizon)
    for k in range(-window, window + 1):
        row_values = []
        for m in range(outer_h + 1):
            shift = s2.exponent(m) + k
            inner_h = s.cap_horizon(max(32, 4 * m + 16))
            inner = filter_limit(
                lambda n, shift=shift: evaluate(a, s.exponent(n) + shift), inner_h)
            if isinstance(inner, Unstable):
                raise UnstableTable(f"product-scheme row {m} unstable at index {k}")
            row_values.append(inner.value)
        outer = filter_limit(lambda m: row_values[m], outer_h)
        if isinstance(outer, Unstable):
            raise UnstableTable(f"product-scheme outer limit unstable at index {k}")
        if outer.value != second.values[k]:
            return False
    return True
