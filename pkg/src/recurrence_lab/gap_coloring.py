"""Two-colorings of a gappy set whose color classes avoid a thick set of differences.

The thick set R is a union of intervals [f(n), f(n) + n], n = 2, 3, ...,
anchored at members of E. When each a in E has at most one earlier
b in E with a - b in R, the conflict graph is a forest and a single greedy
pass two-colors it.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .generators import SetFamily
from .windows import Window, difference_set


class GrowthTooSlow(ValueError):
    pass


class NotTwoColorable(ValueError):
    pass


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi


def build_thick_R(family: SetFamily, f_values, window_hi: int | None = None) -> list[Interval]:
    """Intervals I_n = [f(n), f(n) + n] for n = 2, 3, ... over the given anchors.

    With ``window_hi`` the conflict graph on E ∩ [1, window_hi] is also
    checked for backward-degree at most 1.
    """
    f_values = [int(v) for v in f_values]
    if not f_values:
        raise ValueError("need at least one anchor")
    if any(b <= a for a, b in zip(f_values, f_values[1:])):
        raise ValueError("anchors must be strictly increasing")
    for v in f_values:
        if not family.contains(v):
            raise ValueError(f"anchor {v} is not a member of {family.name}")
    out = [Interval(v, v + n) for n, v in enumerate(f_values, start=2)]
    for a, b in zip(out, out[1:]):
        if b.lo <= a.hi:
            raise GrowthTooSlow(f"growth-too-slow: I=[{a.lo},{a.hi}] meets [{b.lo},{b.hi}]")
    if window_hi is not None:
        e = Window.from_mask(family.mask(window_hi), 1, window_hi)
        cg = conflict_graph(e, out)
        if cg.max_backward_degree > 1:
            raise GrowthTooSlow(
                f"growth-too-slow: {cg.worst_vertex} has {cg.max_backward_degree} earlier conflicts"
            )
    return out


def parse_intervals(text: str) -> list[Interval]:
    """``lo-hi,lo-hi,...``"""
    out = []
    for part in text.split(","):
        lo, _, hi = part.strip().partition("-")
        out.append(Interval(int(lo), int(hi or lo)))
    return out


@dataclass
class ConflictGraph:
    vertices: np.ndarray
    edges: list[tuple[int, int]]
    backward_degree: dict[int, int]
    max_backward_degree: int
    worst_vertex: int | None
    gap_growth: bool
    flags: list[str] = field(default_factory=list)


def _gaps_grow(members: np.ndarray) -> bool:
    if members.size < 4:
        return True
    gaps = np.diff(members)
    half = len(gaps) // 2
    return bool(gaps[half:].min() > gaps[:half].min())


def conflict_graph(e: Window, r: list[Interval]) -> ConflictGraph:
    """Edges (a, b), b < a, both in the window, with a - b in R."""
    bits = e.bits
    span = e.hi - e.lo
    edges = []
    for iv in r:
        for d in range(max(iv.lo, 1), min(iv.hi, span) + 1):
            hit = np.flatnonzero(bits[d:] & bits[:-d])
            edges.extend((int(b) + d + e.lo, int(b) + e.lo) for b in hit)
    edges.sort()
    deg: dict[int, int] = {}
    for a, _ in edges:
        deg[a] = deg.get(a, 0) + 1
    worst = max(deg, key=lambda a: (deg[a], -a)) if deg else None
    mx = deg[worst] if worst is not None else 0
    members = e.members()
    growth = _gaps_grow(members)
    flags = []
    if mx > 1:
        flags.append("backward-degree exceeds 1")
    if not growth:
        flags.append("gaps do not grow across the window")
    return ConflictGraph(members, edges, deg, mx, worst, growth, flags)


@dataclass
class ColoringResult:
    colors: dict[int, int]
    method: str
    hits: dict[int, int]
    graph: ConflictGraph

    @property
    def verified(self) -> bool:
        return all(v == 0 for v in self.hits.values())


def _greedy(graph: ConflictGraph) -> dict[int, int]:
    back = {a: b for a, b in graph.edges}
    colors = {}
    for a in graph.vertices.tolist():
        b = back.get(a)
        colors[a] = 1 if b is None else 3 - colors[b]
    return colors


def bfs_two_color(graph: ConflictGraph, descending: bool = False) -> dict[int, int]:
    adj: dict[int, list[int]] = {}
    for a, b in graph.edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    order = graph.vertices.tolist()
    if descending:
        order.reverse()
    colors: dict[int, int] = {}
    for s in order:
        if s in colors:
            continue
        colors[s] = 1
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj.get(u, ()):
                if v not in colors:
                    colors[v] = 3 - colors[u]
                    queue.append(v)
                elif colors[v] == colors[u]:
                    raise NotTwoColorable(f"not 2-colorable on window: odd cycle through {u}, {v}")
    return colors


def class_hits(e: Window, colors: dict[int, int], r: list[Interval]) -> dict[int, int]:
    """|R ∩ (E_i - E_i)| for each color, recomputed from big-int difference sets."""
    span = e.hi - e.lo
    out = {}
    for c in (1, 2):
        cls = [a for a, k in colors.items() if k == c]
        if len(cls) < 2 or span < 1:
            out[c] = 0
            continue
        w = Window.from_members(sorted(cls), e.lo, e.hi)
        ds = difference_set(w, w, span).window
        out[c] = sum(int(ds.restrict(iv.lo, iv.hi).bits.sum()) for iv in r if iv.lo <= span)
    return out


def greedy_two_color(e: Window, r: list[Interval]) -> ColoringResult:
    graph = conflict_graph(e, r)
    if graph.max_backward_degree <= 1:
        colors, method = _greedy(graph), "greedy"
    else:
        colors, method = bfs_two_color(graph), "bfs"
    for a, b in graph.edges:
        if colors[a] == colors[b]:
            raise AssertionError(f"edge ({a}, {b}) is monochromatic")
    return ColoringResult(colors, method, class_hits(e, colors, r), graph)


def component_partition(graph: ConflictGraph, colors: dict[int, int]) -> set[tuple[frozenset, frozenset]]:
    """Each conflict component split by color, normalised so the order of the halves is irrelevant."""
    comps: dict[int, list[int]] = {}
    adj: dict[int, list[int]] = {}
    for a, b in graph.edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen = set()
    for s in graph.vertices.tolist():
        if s in seen:
            continue
        stack, comp = [s], []
        seen.add(s)
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in adj.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        comps[s] = comp
    out = set()
    for comp in comps.values():
        one = frozenset(v for v in comp if colors[v] == 1)
        two = frozenset(v for v in comp if colors[v] == 2)
        out.add(tuple(sorted((one, two), key=lambda s: min(s) if s else -1)))
    return out
