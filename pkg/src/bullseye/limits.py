"""Certified limits of eventually constant sequences.

Non-principal ultrafilters are non-constructive, so limits are never taken
against a materialized ultrafilter.  Instead a limit claim is backed by a
stabilization certificate: an index after which every sample up to the
tested horizon is constant.  Such a certificate forces the value of the
limit under every non-principal ultrafilter at once, which is exactly the
ultrafilter-independence the constructions need.
"""

from __future__ import annotations

from dataclasses import dataclass


class UnstableTable(Exception):
    """A row, the outer sequence, or the diagonal failed to stabilize."""


@dataclass(frozen=True)
class StabilizedLimit:
    """A limit value plus the finite witness that the tail is constant."""

    value: object
    stable_from: int
    horizon: int

    def __post_init__(self):
        if not 0 <= self.stable_from <= self.horizon:
            raise ValueError("stable_from must lie in [0, horizon]")


@dataclass(frozen=True)
class Unstable:
    """Refusal to assert a limit: the sampled trace kept for diagnosis."""

    trace: tuple


def filter_limit(sample, horizon: int):
    """Certified limit of sample(0..horizon), or Unstable.

    Returns the least stable-from; the certificate is only issued when
    stable-from <= horizon/2, guarding against spurious stabilization at the
    horizon edge.  For eventually constant inputs the value equals the limit
    under every non-principal ultrafilter.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    samples = [sample(n) for n in range(horizon + 1)]
    value = samples[-1]
    stable_from = 0
    for n in range(horizon, -1, -1):
        if samples[n] != value:
            stable_from = n + 1
            break
    if 2 * stable_from <= horizon:
        return StabilizedLimit(value, stable_from, horizon)
    return Unstable(tuple(samples))


def certificate_consistent(sample, cert: StabilizedLimit) -> bool:
    """Re-sample the certified tail and compare against the stored value."""
    return all(sample(n) == cert.value
               for n in range(cert.stable_from, cert.horizon + 1))


def subsample_consistent(sample, cert: StabilizedLimit, strides=(2, 3)) -> bool:
    """Certified value survives along arithmetic subsequences of the tail.

    Any infinite subsequence of sample indices beyond stable-from must give
    the same limit; strided re-sampling is the finite check of that.
    """
    for stride in strides:
        for offset in range(stride):
            n = cert.stable_from + offset
            while n <= cert.horizon:
                if sample(n) != cert.value:
                    return False
                n += stride
    return True


def product_limit_check(table, horizon: int) -> bool:
    """Iterated limit (outer over i of inner over j) vs the diagonal limit.

    For tables that are eventually constant along the iterated scheme the
    two agree, mirroring the identity between the iterated limit and the
    limit along the product of the two ultrafilters.  Rows get their inner
    horizon widened with the row index so that triangular tables (stable
    only from j ~ i on) still certify.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    row_values = []
    for i in range(horizon + 1):
        inner = filter_limit(lambda j, i=i: table(i, j), max(horizon, 2 * i + 16))
        if isinstance(inner, Unstable):
            raise UnstableTable(f"inner limit of row {i} does not stabilize")
        row_values.append(inner.value)
    outer = filter_limit(lambda i: row_values[i], horizon)
    if isinstance(outer, Unstable):
        raise UnstableTable("outer limit over row values does not stabilize")
    diagonal = filter_limit(lambda t: table(t, t), horizon)
    if isinstance(diagonal, Unstable):
        raise UnstableTable("diagonal enumeration does not stabilize")
    return outer.value == diagonal.value
