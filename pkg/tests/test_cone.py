from fractions import Fraction

import pytest

from bullseye.cone import (UnidentifiedCone, UnstableAt, composition_check,
                           cone, iterate_cone, restrict)
from bullseye.constructions import build_infmany
from bullseye.limits import certificate_consistent, subsample_consistent
from bullseye.scaling import custom_schedule, default_schedule
from bullseye.sequences import (Constant, DivisibleBy, Patched, PatchFamily,
                                PatchInterval, Periodic, SingleOnes, Sturmian,
                                evaluate)

S = default_schedule(2)


def test_cone_of_constant():
    res = cone(Constant(1), S, 10)
    assert all(v == 1 for v in res.values.values())
    assert res.identified and res.sequence == Constant(1)


def test_cone_escapes_finite_support():
    res = cone(SingleOnes(frozenset({0})), S, 10)
    assert all(v == 0 for v in res.values.values())
    assert res.identified and res.sequence == Constant(0)


def test_cone_of_infmany_member_is_next_member():
    fam = build_infmany(S, levels=4)
    res = cone(fam.member(0), S, 50)
    target = fam.member(1)
    # oracle: evaluate both descriptors pointwise
    for k in range(-50, 51):
        assert res.values[k] == evaluate(target, k)
    assert res.identified and res.sequence == target


def test_cone_pre_conditions():
    with pytest.raises(ValueError):
        cone(Constant(0), S, 0)
    with pytest.raises(ValueError):
        cone(Constant(0), S, 10, horizon=19)


def test_cone_unstable_at_reports_index():
    # 4**(n+2) mod 5 alternates 1, 4, so a period-5 word cannot stabilize
    wobble = Periodic((1, 0, 0, 0, 0))
    with pytest.raises(UnstableAt) as err:
        cone(wobble, S, 5)
    assert -5 <= err.value.index <= 5
    assert len(err.value.trace) >= 2


def test_cone_periodic_absorption():
    # every exponent is 4 mod 6 from the start, so the cone is the 4-shift
    word = Periodic((1, 1, 0, 0, 1, 0))
    res = cone(word, S, 20)
    assert res.identified
    for k in range(-20, 21):
        assert res.values[k] == evaluate(word, k + 4)


def test_cone_divisible_by_four_fixed():
    # 4 divides every 4**(n+2), so shifts preserve residues mod 4
    res = cone(DivisibleBy(4), S, 20)
    assert res.identified
    for k in range(-20, 21):
        assert res.values[k] == evaluate(DivisibleBy(4), k)


def test_cone_patched_escapes_finite_patches():
    patched = Patched(base=DivisibleBy(2),
                      patches=PatchFamily((PatchInterval(9, 2, Constant(1)),)))
    res = cone(patched, S, 10)
    assert res.identified
    for k in range(-10, 11):
        assert res.values[k] == evaluate(DivisibleBy(2), k)


def test_certificates_sound_and_subsample_independent():
    fam = build_infmany(S, levels=3)
    res = cone(fam.member(1), S, 20)
    for k in range(-20, 21):
        sample = res.sample_function(k)
        assert certificate_consistent(sample, res.certificates[k])
        assert subsample_consistent(sample, res.certificates[k])


def test_restrict_is_depth_zero():
    seq = Sturmian(Fraction(1, 3))
    res = iterate_cone(seq, S, 0, 15)
    assert res.sequence == seq
    for k in range(-15, 16):
        assert res.values[k] == evaluate(seq, k)


def test_iterate_cone_two_steps_infmany():
    fam = build_infmany(S, levels=5)
    res = iterate_cone(fam.member(0), S, 2, 30)
    target = fam.member(2)
    assert res.identified and res.sequence == target
    for k in range(-30, 31):
        assert res.values[k] == evaluate(target, k)


def test_iterate_unidentified_raises():
    # a sturmian word does not stabilize along the power schedule
    with pytest.raises((UnidentifiedCone, UnstableAt)):
        iterate_cone(Sturmian(Fraction(1, 3)), S, 2, 10)


def test_cone_custom_scaling_effective_horizon():
    # matching exponents found by hand: all-ones target in a constant word
    sc = custom_schedule([10, 20, 30, 40])
    res = cone(Constant(1), sc, 2, horizon=64)
    assert all(v == 1 for v in res.values.values())
    assert all(c.horizon == 3 for c in res.certificates.values())


def test_composition_constant():
    assert composition_check(Constant(0), S, S, 10)


def test_composition_divisible_four():
    # both sides stay DivisibleBy(4) because 4 divides every exponent sum
    assert composition_check(DivisibleBy(4), S, S, 15)


def test_composition_infmany_double_step():
    fam = build_infmany(S, levels=4)
    assert composition_check(fam.member(0), S, S, 20)


def test_cone_candidate_rejected_when_wrong():
    res = cone(DivisibleBy(4), S, 10, candidate=Constant(1))
    assert not res.identified
    assert isinstance(res.sequence, SingleOnes)
