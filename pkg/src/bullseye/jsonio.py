"""JSON interchange for descriptors, scaling sets, families and cone results.

Round-trip is part of the contract: anything this module emits is accepted
back unchanged.  Rationals travel as {"num": int, "den": int}.
"""

from __future__ import annotations

from fractions import Fraction

from .constructions import (InfmanyFamily, OnlycountFamily, PeriodicFamily,
                            TransfiniteFamily, VaryingFamily)
from .cone import ConeResult
from .geometry import MetricWindow
from .scaling import ScalingSet, custom_schedule, default_schedule
from .sequences import (BitSequence, Constant, DivisibleBy, FamilyMember,
                        Patched, PatchFamily, PatchInterval, Periodic, Rich,
                        SingleOnes, Sturmian)


def fraction_to_json(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


def fraction_from_json(obj) -> Fraction:
    return Fraction(obj["num"], obj["den"])


# ---------------------------------------------------------------------------
# scaling sets


def scaling_to_json(s: ScalingSet) -> dict:
    if s.kind == "default":
        return {"schedule": "default", "c": s.c}
    if s.kind == "custom":
        return {"schedule": "custom", "exponents": list(s.exponents)}
    # closed-form factorial serializes as itself
    return {"schedule": "factorial"}


def scaling_from_json(obj) -> ScalingSet:
    schedule = obj["schedule"]
    if schedule == "default":
        return default_schedule(obj["c"])
    if schedule == "custom":
        return custom_schedule(obj["exponents"])
    if schedule == "factorial":
        return ScalingSet(kind="factorial")
    raise ValueError(f"unknown schedule {schedule!r}")


# ---------------------------------------------------------------------------
# families


def family_to_json(family) -> dict:
    if isinstance(family, InfmanyFamily):
        return {"kind": "infmany", "scaling": scaling_to_json(family.scaling),
                "levels": family.levels}
    if isinstance(family, PeriodicFamily):
        return {"kind": "periodic", "scaling": scaling_to_json(family.scaling),
                "m": family.period}
    if isinstance(family, TransfiniteFamily):
        return {"kind": "transfinite", "scaling": scaling_to_json(family.scaling),
                "levels": family.levels, "level": family.level,
                "target": descriptor_to_json(family.target)}
    if isinstance(family, VaryingFamily):
        return {"kind": "varying"}
    if isinstance(family, OnlycountFamily):
        return {"kind": "onlycount", "levels": family.levels}
    raise ValueError(f"unknown family {type(family).__name__}")


def family_from_json(obj):
    kind = obj["kind"]
    if kind == "infmany":
        return InfmanyFamily(scaling=scaling_from_json(obj["scaling"]),
                             levels=obj["levels"])
    if kind == "periodic":
        return PeriodicFamily(scaling=scaling_from_json(obj["scaling"]),
                              period=obj["m"])
    if kind == "transfinite":
        return TransfiniteFamily(scaling=scaling_from_json(obj["scaling"]),
                                 levels=obj["levels"], level=obj["level"],
                                 target=descriptor_from_json(obj["target"]))
    if kind == "varying":
        return VaryingFamily()
    if kind == "onlycount":
        return OnlycountFamily(levels=obj["levels"])
    raise ValueError(f"unknown family kind {kind!r}")


# ---------------------------------------------------------------------------
# descriptors


def descriptor_to_json(seq: BitSequence) -> dict:
    if isinstance(seq, Constant):
        return {"type": "constant", "bit": seq.value}
    if isinstance(seq, Periodic):
        return {"type": "periodic", "pattern": list(seq.pattern), "offset": seq.offset}
    if isinstance(seq, Sturmian):
        return {"type": "sturmian", "t": fraction_to_json(seq.slope)}
    if isinstance(seq, DivisibleBy):
        return {"type": "divisible", "d": seq.d}
    if isinstance(seq, Rich):
        return {"type": "rich"}
    if isinstance(seq, SingleOnes):
        return {"type": "single_ones", "positions": sorted(seq.positions)}
    if isinstance(seq, Patched):
        return {"type": "patched", "base": descriptor_to_json(seq.base),
                "patches": [{"center": iv.center, "radius": iv.radius,
                             "source": descriptor_to_json(iv.source),
                             "source_offset": iv.source_offset}
                            for iv in seq.patches.intervals]}
    if isinstance(seq, FamilyMember):
        return {"type": "family", "family": family_to_json(seq.family),
                "i": seq.index}
    raise ValueError(f"unknown descriptor {type(seq).__name__}")


def descriptor_from_json(obj) -> BitSequence:
    kind = obj["type"]
    if kind == "constant":
        return Constant(obj["bit"])
    if kind == "periodic":
        return Periodic(tuple(obj["pattern"]), obj.get("offset", 0))
    if kind == "sturmian":
        return Sturmian(fraction_from_json(obj["t"]))
    if kind == "divisible":
        return DivisibleBy(obj["d"])
    if kind == "rich":
        return Rich()
    if kind == "single_ones":
        return SingleOnes(frozenset(obj["positions"]))
    if kind == "patched":
        intervals = tuple(PatchInterval(center=p["center"], radius=p["radius"],
                                        source=descriptor_from_json(p["source"]),
                                        source_offset=p.get("source_offset", 0))
                          for p in obj["patches"])
        return Patched(base=descriptor_from_json(obj["base"]),
                       patches=PatchFamily(intervals))
    if kind == "family":
        family = family_from_json(obj["family"])
        return family.member(obj["i"])
    raise ValueError(f"unknown descriptor type {kind!r}")


# ---------------------------------------------------------------------------
# results


def certificate_to_json(cert) -> dict:
    return {"value": cert.value, "stable_from": cert.stable_from,
            "horizon": cert.horizon}


def cone_result_to_json(res: ConeResult) -> dict:
    out = {
        "window": res.window,
        "values": {str(k): res.values[k] for k in sorted(res.values)},
        "certificates": {str(k): certificate_to_json(res.certificates[k])
                         for k in sorted(res.certificates)},
        "identified": res.identified,
    }
    try:
        out["sequence"] = descriptor_to_json(res.sequence)
    except ValueError:
        pass
    return out


def metric_window_to_json(w: MetricWindow) -> dict:
    return {
        "window": [w.k_min, w.k_max],
        "resolution": w.resolution,
        "vertices": [{"label": list(map(str, label)), "x": x, "y": y}
                     for label, (x, y) in sorted(w.positions.items(), key=lambda p: str(p[0]))],
        "edges": [{"u": list(map(str, u)), "v": list(map(str, v)), "length": length}
                  for u, v, length in w.edges],
    }
