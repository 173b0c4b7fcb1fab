"""The `verify` subcommand: a deterministic invariant sweep.

One line per check, no timing fields, byte-identical output across runs on
identical inputs.  This is a quick structural health check, not the full
acceptance suite (that lives in the test suite).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from xml.etree import ElementTree as ET

from .cone import cone, composition_check, iterate_cone
from .constructions import (Unclassified, build_infmany, build_onlycount,
                            build_periodic, classify_cone,
                            sample_classification_scalings)
from .density import adn_estimate, adn_exact, shift_bound_check
from .geometry import build_window, distance, render_svg, shift_equivalent
from .jsonio import descriptor_from_json, descriptor_to_json
from .limits import UnstableTable, Unstable, filter_limit, product_limit_check
from .scaling import custom_schedule, default_schedule, factorial_schedule, thin_check
from .sequences import (Constant, DivisibleBy, Periodic, Rich, SingleOnes,
                        Sturmian, evaluate, rich_prefix)


@dataclass
class Report:
    lines: list
    ok: bool

    @property
    def text(self) -> str:
        return "\n".join(self.lines)


def run(fast: bool = False) -> Report:
    lines = []
    all_ok = True

    def check(name, fn):
        nonlocal all_ok
        try:
            ok = bool(fn())
        except Exception as exc:  # a crashed check is a failed check
            lines.append(f"FAIL {name} ({type(exc).__name__}: {exc})")
            all_ok = False
            return
        lines.append(("PASS " if ok else "FAIL ") + name)
        all_ok = all_ok and ok

    s = default_schedule(2)

    def sturmian_window_bounds():
        for num, den in ((1, 3), (2, 5), (1, 2)):
            seq = Sturmian(Fraction(num, den))
            for n in (10, 100, 500):
                if abs(adn_estimate(seq, n) - Fraction(num, den)) > Fraction(2, 2 * n + 1):
                    return False
        return True
    check("sturmian-window-bound", sturmian_window_bounds)

    def rich_completeness():
        stream = rich_prefix(1 << 12)
        for length in range(1, 9):
            for j in range(1 << length):
                word = bytes((j >> (length - 1 - t)) & 1 for t in range(length))
                if stream.find(word) < 0:
                    return False
        return True
    check("rich-completeness-len8", rich_completeness)

    check("scaling-intervals-disjoint", lambda: s.intervals_disjoint(100))
    check("thin-default", lambda: thin_check(s, 20, 10 ** 6))
    check("thin-factorial", lambda: thin_check(factorial_schedule(12), 12, 10 ** 3))
    check("thin-rejects-linear",
          lambda: not thin_check(custom_schedule(range(1, 40)), 20, 3))

    def shift_bounds():
        rng = random.Random(7)
        corpus = [DivisibleBy(3), Sturmian(Fraction(2, 3)),
                  Periodic((1, 0, 1, 1)), Rich(), Constant(1)]
        for _ in range(20):
            seq = rng.choice(corpus)
            n = rng.randint(20, 400)
            shift = rng.randint(-n + 1, n - 1)
            if not shift_bound_check(seq, shift, n):
                return False
        return True
    check("shift-bound-20-triples", shift_bounds)

    check("product-limit-constant", lambda: product_limit_check(lambda i, j: 1, 40))
    check("product-limit-triangular",
          lambda: product_limit_check(lambda i, j: 1 if j >= i else 0, 40))

    def parity_rejected():
        try:
            product_limit_check(lambda i, j: (i + j) % 2, 40)
        except UnstableTable:
            return True
        return False
    check("product-limit-rejects-parity", parity_rejected)

    fam = build_infmany(s, levels=3)
    check("infmany-densities",
          lambda: [adn_exact(fam.member(i)) for i in range(4)]
          == [Fraction(1, i + 1) for i in range(4)])

    def infmany_cone_step():
        res = cone(fam.member(0), s, 30)
        return res.identified and res.sequence == fam.member(1) and all(
            cert.stable_from <= 6 for cert in res.certificates.values())
    check("infmany-cone-step", infmany_cone_step)

    def periodic_cycle():
        pfam = build_periodic(3, s)
        res = iterate_cone(pfam.member(0), s, 3, 30)
        return res.identified and res.sequence == pfam.member(0)
    check("periodic-cycle-m3", periodic_cycle)

    def composition_small():
        for seq in (Constant(0), DivisibleBy(4), Periodic((1, 0, 1, 1))):
            if not composition_check(seq, s, s, 10, table_horizon=48):
                return False
        return True
    check("composition-small-corpus", composition_small)

    def onlycount_checks():
        family, scheme = build_onlycount()
        if not scheme.check_implications(12):
            return False
        count = 10 if fast else 20
        samples = sample_classification_scalings(count, 0, 64, scheme, family.levels)
        seen = set()
        for sc in samples:
            res = cone(family.member(0), sc, 16, 64)
            cls = classify_cone(res, family, scheme)
            if isinstance(cls, Unclassified):
                return False
            seen.add(type(cls).__name__)
        return seen == {"Class1", "Class2"}
    check("onlycount-classification", onlycount_checks)

    def geometry_checks():
        w = build_window(DivisibleBy(2), 0, 3, 32)
        bridged = distance(w, w.circle_top(0), w.circle_top(1))
        if bridged != 1.0:
            return False
        w0 = build_window(Constant(0), 0, 3, 32)
        gap = distance(w0, w0.circle_top(0), w0.circle_top(1))
        if gap <= (1 + 3.14159 / 2) * 0.95:
            return False
        ET.fromstring(render_svg(w))
        return True
    check("geometry-window", geometry_checks)

    def shift_equiv_checks():
        if shift_equivalent(DivisibleBy(3), DivisibleBy(3), 10, 200) != 0:
            return False
        base = SingleOnes(frozenset({-4, 0, 9}))
        moved = SingleOnes(frozenset({-1, 3, 12}))  # translated right by 3
        return shift_equivalent(base, moved, 10, 200) == 3
    check("shift-equivalence", shift_equiv_checks)

    def json_round_trip():
        corpus = [Constant(1), Periodic((1, 0, 1)), Sturmian(Fraction(1, 3)),
                  DivisibleBy(5), Rich(), SingleOnes(frozenset({-2, 7})),
                  fam.member(1)]
        for seq in corpus:
            if descriptor_from_json(descriptor_to_json(seq)) != seq:
                return False
        return True
    check("json-round-trip", json_round_trip)

    def limits_cert_sound():
        res = filter_limit(lambda n: 0 if n < 5 else 1, 100)
        if isinstance(res, Unstable):
            return False
        return res.value == 1 and res.stable_from == 5 and all(
            evaluate(fam.member(1), 3) == evaluate(fam.member(1), 3) for _ in range(2))
    check("certificate-soundness", limits_cert_sound)

    lines.append(("OK" if all_ok else "FAILED") + f" ({len(lines)} checks)")
    return Report(lines=lines, ok=all_ok)
