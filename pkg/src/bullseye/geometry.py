"""Finite windows of bullseye spaces as weighted metric graphs.

A window holds the circles of radii 2**k for k in [k_min, k_max] as regular
polygons, the two decorated axis rays, the basepoint at the origin, and a
bridge segment between consecutive circles wherever the sequence bit is 1.
Distances are shortest paths in the graph; the polygonal circles approximate
arc lengths within a tolerance controlled by the resolution.  Disc and ball
decorations contribute only their boundary attachment to the metric; their
interiors are rendering markers distinguishing the two rays.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from xml.etree import ElementTree as ET

from .sequences import BitSequence, evaluate, materialize


class ResolutionTooCoarse(Exception):
    """Polygonal circle error would exceed the 5% tolerance."""


class Disconnected(Exception):
    """No path between the queried vertices (a construction bug)."""


@dataclass(frozen=True)
class NotEquivalentUpTo:
    """No shift within the tested bound matches up to the horizon."""

    horizon: int


@dataclass
class MetricWindow:
    seq: BitSequence
    k_min: int
    k_max: int
    resolution: int
    positions: dict = field(default_factory=dict)   # label -> (x, y)
    edges: list = field(default_factory=list)       # (u, v, length)
    adjacency: dict = field(default_factory=dict)   # label -> [(label, length)]

    def add_vertex(self, label, x, y):
        if label not in self.positions:
            self.positions[label] = (x, y)
            self.adjacency[label] = []
        return label

    def add_edge(self, u, v, length):
        self.edges.append((u, v, length))
        self.adjacency[u].append((v, length))
        self.adjacency[v].append((u, length))

    # canonical vertices
    @property
    def basepoint(self):
        return ("e",)

    def circle_vertex(self, k, j):
        return ("circle", k, j)

    def circle_top(self, k):
        return ("circle", k, self.resolution // 4)

    def crossing(self, side, k):
        j = 0 if side == "+" else self.resolution // 2
        return ("circle", k, j)

    def has_bridge(self, k):
        return evaluate(self.seq, k) == 1


def _polygon_relative_error(samples: int) -> float:
    return 1.0 - samples * math.sin(math.pi / samples) / math.pi


def build_window(seq: BitSequence, k_min: int, k_max: int, resolution: int) -> MetricWindow:
    """Metric-graph discretization of the window [k_min, k_max].

    Circle k is a regular polygon with ``resolution`` vertices (rounded up
    to a multiple of 4 so the axis crossings and the top land on vertices).
    Bridges join the circle tops on the positive y-axis with exact length
    2**(k+1) - 2**k = 2**k.
    """
    if k_min >= k_max:
        raise ValueError("k_min must be below k_max")
    if resolution < 8:
        raise ValueError("resolution must be at least 8")
    samples = resolution + (-resolution) % 4
    if _polygon_relative_error(samples) > 0.05:
        raise ResolutionTooCoarse(f"{samples} samples per circle exceed 5% error")

    w = MetricWindow(seq=seq, k_min=k_min, k_max=k_max, resolution=samples)
    e = w.add_vertex(("e",), 0.0, 0.0)

    # circles as regular polygons; vertex 0 on +x, samples/2 on -x, samples/4 on top
    for k in range(k_min, k_max + 1):
        r = 2.0 ** k
        chord = 2.0 * r * math.sin(math.pi / samples)
        for j in range(samples):
            angle = 2.0 * math.pi * j / samples
            w.add_vertex(("circle", k, j), r * math.cos(angle), r * math.sin(angle))
        for j in range(samples):
            w.add_edge(("circle", k, j), ("circle", k, (j + 1) % samples), chord)

    # axis rays through the crossings, joined to the basepoint at the origin
    for side in ("+", "-"):
        w.add_edge(e, w.crossing(side, k_min), 2.0 ** k_min)
        for k in range(k_min, k_max):
            w.add_edge(w.crossing(side, k), w.crossing(side, k + 1), 2.0 ** k)

    # bridges on the positive y-axis wherever the bit is set
    for k in range(k_min, k_max):
        if w.has_bridge(k):
            w.add_edge(w.circle_top(k), w.circle_top(k + 1), 2.0 ** k)

    # decorations between consecutive circles: discs on +x, balls on -x;
    # only the boundary polygon through the two ray attachment points counts
    deco_samples = max(8, samples // 4)
    deco_samples += deco_samples % 2
    for k in range(k_min, k_max):
        r = 2.0 ** (k - 1)
        for side, sign, label in (("+", 1.0, "disc"), ("-", -1.0, "ball")):
            cx = sign * 3.0 * 2.0 ** (k - 1)
            inner = w.crossing(side, k)
            outer = w.crossing(side, k + 1)
            chord = 2.0 * r * math.sin(math.pi / deco_samples)
            ring = []
            for j in range(deco_samples):
                angle = 2.0 * math.pi * j / deco_samples
                x, y = cx + r * math.cos(angle), r * math.sin(angle)
                if j == 0:
                    ring.append(outer if sign > 0 else inner)
                elif j == deco_samples // 2:
                    ring.append(inner if sign > 0 else outer)
                else:
                    ring.append(w.add_vertex((label, k, j), x, y))
            for j in range(deco_samples):
                w.add_edge(ring[j], ring[(j + 1) % deco_samples], chord)
    return w


def distance(w: MetricWindow, u, v) -> float:
    """Shortest-path length between two vertices of the window."""
    if u not in w.adjacency or v not in w.adjacency:
        raise KeyError("unknown vertex")
    dist = {u: 0.0}
    heap = [(0.0, 0, u)]
    counter = 1
    done = set()
    while heap:
        d, _, node = heapq.heappop(heap)
        if node in done:
            continue
        if node == v:
            return d
        done.add(node)
        for nbr, length in w.adjacency[node]:
            nd = d + length
            if nd < dist.get(nbr, math.inf):
                dist[nbr] = nd
                heapq.heappush(heap, (nd, counter, nbr))
                counter += 1
    raise Disconnected(f"no path from {u} to {v}")


def graphs_isomorphic_scaled(a: MetricWindow, b: MetricWindow, factor: float,
                             shift: int, rel_tol: float = 1e-9) -> bool:
    """Is ``a`` the window ``b`` with circle indices shifted and lengths scaled?

    Matches vertex labels after shifting every circle index of ``a`` down by
    ``shift`` and compares each edge length against ``factor`` times the
    corresponding edge of ``b``.
    """
    def relabel(label):
        if label[0] in ("circle", "disc", "ball"):
            return (label[0], label[1] - shift) + label[2:]
        return label

    def canon(w, move):
        out = {}
        for u, v, length in w.edges:
            cu, cv = (relabel(u), relabel(v)) if move else (u, v)
            key = (cu, cv) if cu <= cv else (cv, cu)
            out[key] = length
        return out

    ea, eb = canon(a, True), canon(b, False)
    if set(ea) != set(eb):
        return False
    for key, la in ea.items():
        lb = eb[key] * factor
        if not math.isclose(la, lb, rel_tol=rel_tol, abs_tol=0.0):
            return False
    return True


def shift_equivalent(a: BitSequence, b: BitSequence, max_shift: int, horizon: int):
    """Least |N| <= max_shift with a(k) = b(k+N) on [-horizon, horizon].

    This is the homeomorphism invariant at sequence level: bullseye spaces
    are homeomorphic exactly when their sequences agree up to such a shift.
    Returns the shift (ties broken toward the positive one) or
    NotEquivalentUpTo(horizon).
    """
    if max_shift < 0 or horizon < 1:
        raise ValueError("max_shift must be >= 0 and horizon >= 1")
    bits_a = materialize(a, -horizon, horizon)
    bits_b = materialize(b, -horizon - max_shift, horizon + max_shift)
    length = 2 * horizon + 1
    for magnitude in range(max_shift + 1):
        for shift in ((magnitude, -magnitude) if magnitude else (0,)):
            start = shift + max_shift
            if bits_b[start:start + length] == bits_a:
                return shift
    return NotEquivalentUpTo(horizon)


# ---------------------------------------------------------------------------
# rendering

_SVG_NS = "http://www.w3.org/2000/svg"


def render_svg(w: MetricWindow) -> str:
    """SVG 1.1 picture of the window: circles, bridges, decorated rays, basepoint."""
    r_max = 2.0 ** w.k_max
    pad = 0.15 * r_max
    extent = r_max + pad
    root = ET.Element("svg", {
        "xmlns": _SVG_NS,
        "version": "1.1",
        "viewBox": f"{-extent:.4f} {-extent:.4f} {2 * extent:.4f} {2 * extent:.4f}",
        "width": "640",
        "height": "640",
    })
    stroke = max(r_max / 400.0, 1e-6)

    def add(tag, **attrs):
        return ET.SubElement(root, tag, {k: str(v) for k, v in attrs.items()})

    # y grows downward in SVG; flip to keep bridges visually on top
    def flip(y):
        return -y

    for k in range(w.k_min, w.k_max + 1):
        add("circle", cx=0, cy=0, r=2.0 ** k, fill="none",
            stroke="black", **{"stroke-width": stroke})

    add("line", x1=-r_max, y1=flip(0), x2=r_max, y2=flip(0),
        stroke="black", **{"stroke-width": stroke})

    for k in range(w.k_min, w.k_max):
        r = 2.0 ** (k - 1)
        cx = 3.0 * 2.0 ** (k - 1)
        add("circle", cx=cx, cy=flip(0), r=r, fill="none",
            stroke="gray", **{"stroke-width": stroke})
        add("circle", cx=-cx, cy=flip(0), r=r, fill="none",
            stroke="gray", **{"stroke-width": stroke})
        label = add("text", x=-cx, y=flip(0), fill="gray")
        label.set("font-size", str(max(r, stroke * 4)))
        label.set("text-anchor", "middle")
        label.text = "3D"

    for k in range(w.k_min, w.k_max):
        if w.has_bridge(k):
            add("line", x1=0, y1=flip(2.0 ** k), x2=0, y2=flip(2.0 ** (k + 1)),
                stroke="red", **{"stroke-width": 2 * stroke})

    add("circle", cx=0, cy=flip(0), r=2 * stroke, fill="black")
    title = add("text", x=0, y=flip(-r_max - pad / 2), fill="black")
    title.set("font-size", str(max(r_max / 20, stroke * 4)))
    title.set("text-anchor", "middle")
    title.text = "e"
    return ET.tostring(root, encoding="unicode")
