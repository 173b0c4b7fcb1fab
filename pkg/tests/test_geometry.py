import math
import random
from xml.etree import ElementTree as ET

import pytest

from bullseye.constructions import build_infmany
from bullseye.geometry import (Disconnected, NotEquivalentUpTo,
                               build_window, distance,
                               graphs_isomorphic_scaled, render_svg,
                               shift_equivalent)
from bullseye.scaling import default_schedule
from bullseye.sequences import (Constant, DivisibleBy, Periodic, SingleOnes,
                                evaluate)


def bridge_edges(w):
    tops = {(w.circle_top(k), w.circle_top(k + 1)) for k in range(w.k_min, w.k_max)}
    return [(u, v, l) for u, v, l in w.edges if (u, v) in tops or (v, u) in tops]


def test_constant_zero_has_no_bridges():
    w = build_window(Constant(0), 0, 2, 16)
    assert bridge_edges(w) == []


def test_constant_one_bridge_lengths():
    w = build_window(Constant(1), 0, 2, 16)
    lengths = sorted(l for _, _, l in bridge_edges(w))
    assert lengths == [1.0, 2.0]


def test_vertex_count_scales_linearly():
    small = build_window(Constant(0), 0, 3, 16)
    big = build_window(Constant(0), 0, 3, 32)
    assert len(big.positions) > len(small.positions)
    wide = build_window(Constant(0), 0, 5, 16)
    assert len(wide.positions) > len(small.positions)


def test_circle_perimeter_tolerance():
    w = build_window(Constant(0), 0, 2, 64)
    for k in range(0, 3):
        perim = sum(l for u, v, l in w.edges
                    if u[0] == "circle" and v[0] == "circle" and u[1] == k == v[1])
        assert abs(perim - 2 * math.pi * 2 ** k) / (2 * math.pi * 2 ** k) <= 1 / 64


def test_resolution_validation():
    with pytest.raises(ValueError):
        build_window(Constant(0), 0, 2, 4)
    with pytest.raises(ValueError):
        build_window(Constant(0), 2, 2, 16)


def test_distance_from_basepoint_to_circle():
    w = build_window(Constant(0), 0, 3, 32)
    for k in range(0, 4):
        # equality at the ray crossing, oracle is the shortest path itself
        assert distance(w, w.basepoint, w.crossing("+", k)) == pytest.approx(2.0 ** k)
        assert distance(w, w.basepoint, w.circle_top(k)) >= 2.0 ** k * 0.999


def test_bridge_distance_exact():
    w = build_window(Constant(1), 0, 4, 64)
    for k in range(0, 4):
        assert distance(w, w.circle_top(k), w.circle_top(k + 1)) == 2.0 ** k


def test_no_bridge_distance_lower_bound():
    w = build_window(Constant(0), 0, 4, 64)
    for k in range(0, 4):
        d = distance(w, w.circle_top(k), w.circle_top(k + 1))
        assert d > 2.0 ** k * (1 + math.pi / 2) * 0.95


def test_bridge_toggle_strictly_decreases_distance():
    rng = random.Random(3)
    for _ in range(10):
        bits = [rng.randint(0, 1) for _ in range(5)]
        k = rng.randrange(4)
        with_bit = list(bits)
        with_bit[k] = 1
        without_bit = list(bits)
        without_bit[k] = 0
        w1 = build_window(Periodic(tuple(with_bit)), 0, 5, 32)
        w0 = build_window(Periodic(tuple(without_bit)), 0, 5, 32)
        d1 = distance(w1, w1.circle_top(k), w1.circle_top(k + 1))
        d0 = distance(w0, w0.circle_top(k), w0.circle_top(k + 1))
        assert d1 < d0


def test_scale_self_similarity():
    rng = random.Random(9)
    for _ in range(5):
        pattern = tuple(rng.randint(0, 1) for _ in range(rng.randint(3, 8)))
        seq = Periodic(pattern, offset=rng.randint(-5, 5))
        shifted = Periodic(pattern, offset=seq.offset - 1)  # shifted(k) = seq(k+1)
        upper = build_window(seq, 1, 5, 32)
        lower = build_window(shifted, 0, 4, 32)
        assert graphs_isomorphic_scaled(upper, lower, factor=2.0, shift=1)


def test_self_similarity_fails_on_wrong_shift():
    seq = DivisibleBy(2)
    upper = build_window(seq, 1, 5, 32)
    lower = build_window(seq, 0, 4, 32)  # not shifted: bridges land differently
    assert not graphs_isomorphic_scaled(upper, lower, factor=2.0, shift=1)


def test_connectivity():
    w = build_window(DivisibleBy(3), -2, 3, 16)
    far = w.circle_top(3)
    assert distance(w, w.basepoint, far) < math.inf


def test_shift_equivalent_reflexive():
    assert shift_equivalent(DivisibleBy(5), DivisibleBy(5), 20, 500) == 0


def test_shift_equivalent_constructed_shift():
    base = SingleOnes(frozenset({-7, 0, 11}))
    moved = SingleOnes(frozenset({-4, 3, 14}))  # translated right by 3
    assert shift_equivalent(base, moved, 20, 500) == 3


def test_shift_equivalent_symmetry():
    base = SingleOnes(frozenset({-7, 0, 11}))
    moved = SingleOnes(frozenset({-4, 3, 14}))
    forward = shift_equivalent(base, moved, 20, 500)
    backward = shift_equivalent(moved, base, 20, 500)
    assert forward == -backward


def test_shift_inequivalent_infmany_members():
    s = default_schedule(2)
    fam = build_infmany(s, levels=3)
    verdict = shift_equivalent(fam.member(0), fam.member(1), 100, 500)
    assert isinstance(verdict, NotEquivalentUpTo)
    # oracle: exhaustive shift scan
    for shift in range(-100, 101):
        assert any(evaluate(fam.member(0), k) != evaluate(fam.member(1), k + shift)
                   for k in range(-500, 501))


def test_svg_no_bridges():
    svg = render_svg(build_window(Constant(0), 0, 3, 16))
    root = ET.fromstring(svg)
    circles = root.findall("{http://www.w3.org/2000/svg}circle")
    # 4 window circles + decorations + basepoint marker
    assert len([c for c in circles if c.get("stroke") == "black"]) == 4
    lines = root.findall("{http://www.w3.org/2000/svg}line")
    assert len([l for l in lines if l.get("stroke") == "red"]) == 0


def test_svg_bridges_at_even_indices():
    svg = render_svg(build_window(DivisibleBy(2), 0, 5, 16))
    root = ET.fromstring(svg)
    bridges = [l for l in root.findall("{http://www.w3.org/2000/svg}line")
               if l.get("stroke") == "red"]
    assert len(bridges) == 3  # k = 0, 2, 4


def test_svg_well_formed_for_varied_descriptors():
    for seq in (Constant(1), DivisibleBy(3), Periodic((1, 0, 1))):
        svg = render_svg(build_window(seq, -1, 4, 24))
        ET.fromstring(svg)  # raises on malformed XML
