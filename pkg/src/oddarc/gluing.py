"""State machine for surgeries on glued diagrams.

The multiplication of the arc algebras surgers the middle matching of a
stacked diagram (top closure) t2 (middle b b-bar) t1 (bottom closure).
This module tracks the planar components of that stack while surgeries
replace the symmetric arc/ray pairs of the middle by vertical segments,
classifies every surgery into its case, and reports which tensor
positions each case touches.

Nodes carry sort keys so that components always list in the order of the
torus coordinates: top closure points, then free circles of the upper
tangle, then its bottom points, then the lower tangle's points and free
circles, then the bottom closure points.  The initial component order is
therefore the Kuenneth order of the two factors, and the final order is
the basis order of the target space.
"""

from __future__ import annotations

from .diagrams import FlatTangle, middle_components


def _ray_value(i, weights):
    """Sign s such that a ray at point i pins the coordinate to s*p."""
    shift = weights.indicator(i) if weights is not None else 0
    return -1 if (i + shift) % 2 else 1


class Component:
    __slots__ = ("nodes", "key", "values")

    def __init__(self, nodes, key, values):
        self.nodes = nodes          # frozenset of node ids
        self.key = key              # minimal sort key
        self.values = values        # set of pinned values on the component

    @property
    def is_circle(self):
        return not self.values

    @property
    def is_consistent(self):
        return len(self.values) <= 1


class GluedDiagram:
    """Stack c-bar t2 (b b-bar) t1 a with surgery state on the middle."""

    def __init__(self, top, t2, middle, t1, bottom,
                 top_weights=None, middle_weights=None, bottom_weights=None):
        if t2.m_top != top.n or t2.m_bottom != middle.n:
            raise ValueError("upper tangle boundary mismatch")
        if t1.m_top != middle.n or t1.m_bottom != bottom.n:
            raise ValueError("lower tangle boundary mismatch")
        self.top = top
        self.t2 = t2
        self.middle = middle
        self.t1 = t1
        self.bottom = bottom
        self.static_edges = []
        self.static_constraints = {}
        self.free_nodes = []

        def tnode(i):   # top closure / upper tangle top row
            return ("T", i)

        def mnode_up(i):   # upper tangle bottom row = middle top side
            return ("MU", i)

        def mnode_dn(i):   # lower tangle top row = middle bottom side
            return ("MD", i)

        def bnode(i):   # lower tangle bottom row = bottom closure
            return ("B", i)

        self._keys = {}
        for i in range(1, top.n + 1):
            self._keys[tnode(i)] = (0, i)
        for j in range(1, t2.closed + 1):
            node = ("TF", j)
            self._keys[node] = (1, j)
            self.free_nodes.append(node)
        for i in range(1, middle.n + 1):
            self._keys[mnode_up(i)] = (2, i)
            self._keys[mnode_dn(i)] = (3, i)
        for j in range(1, t1.closed + 1):
            node = ("BF", j)
            self._keys[node] = (4, j)
            self.free_nodes.append(node)
        for i in range(1, bottom.n + 1):
            self._keys[bnode(i)] = (5, i)

        for (i, j) in top.arcs:
            self.static_edges.append((tnode(i), tnode(j)))
        for r in top.rays:
            self.static_constraints.setdefault(tnode(r), set()).add(
                _ray_value(r, top_weights))
        for (i, j) in bottom.arcs:
            self.static_edges.append((bnode(i), bnode(j)))
        for r in bottom.rays:
            self.static_constraints.setdefault(bnode(r), set()).add(
                _ray_value(r, bottom_weights))

        def t2_endpoint(e):
            return tnode(e) if e <= t2.m_top else mnode_up(e - t2.m_top)

        def t1_endpoint(e):
            return mnode_dn(e) if e <= t1.m_top else bnode(e - t1.m_top)

        for (x, y) in t2.pairings:
            self.static_edges.append((t2_endpoint(x), t2_endpoint(y)))
        for (x, y) in t1.pairings:
            self.static_edges.append((t1_endpoint(x), t1_endpoint(y)))

        self._mnode_up = mnode_up
        self._mnode_dn = mnode_dn
        self.middle_weights = middle_weights
        self.pending = middle_components(middle)
        self.done = []

    @classmethod
    def for_matchings(cls, c, b, a, weights=None):
        """The stack for a plain triple product (identity tangles)."""
        idt = FlatTangle.identity(b.n)
        tw = mw = bw = None
        if weights is not None:
            tw, mw, bw = weights
        return cls(c, idt, b, idt, a,
                   top_weights=tw, middle_weights=mw, bottom_weights=bw)

    # -- component computation ------------------------------------------

    def components(self):
        parent = {node: node for node in self._keys}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            parent[find(x)] = find(y)

        for (x, y) in self.static_edges:
            union(x, y)
        constraints = {n: set(v) for n, v in self.static_constraints.items()}
        for kind, pts in self.pending:
            if kind == "arc":
                r, s = pts
                union(self._mnode_up(r), self._mnode_up(s))
                union(self._mnode_dn(r), self._mnode_dn(s))
            else:
                (r,) = pts
                val = _ray_value(r, self.middle_weights)
                constraints.setdefault(self._mnode_up(r), set()).add(val)
                constraints.setdefault(self._mnode_dn(r), set()).add(val)
        for kind, pts in self.done:
            for r in pts:
                union(self._mnode_up(r), self._mnode_dn(r))
        groups = {}
        for node in self._keys:
            groups.setdefault(find(node), set()).add(node)
        comps = []
        for nodes in groups.values():
            vals = set()
            for node in nodes:
                vals |= constraints.get(node, set())
            comps.append(Component(frozenset(nodes),
                                   min(self._keys[n] for n in nodes), vals))
        comps.sort(key=lambda comp: comp.key)
        return comps

    def circles(self, comps=None):
        if comps is None:
            comps = self.components()
        return [comp for comp in comps if comp.is_circle]

    def is_empty(self, comps=None):
        if comps is None:
            comps = self.components()
        return any(not comp.is_consistent for comp in comps)

    # -- surgeries -------------------------------------------------------

    def apply_next_surgery(self):
        """Apply the next pending surgery and describe what happened.

        Returns (component, label, event) where event is None for an
        identity step, the string "zero" when the target space is empty,
        or (elementary, src_positions, dst_positions) with positions
        indexing the circle lists before/after the step.
        """
        kind, pts = comp = self.pending[0]
        affected = set()
        for r in pts:
            affected.add(self._mnode_up(r))
            affected.add(self._mnode_dn(r))
        before = self.components()
        before_circles = self.circles(before)
        self.pending.pop(0)
        self.done.append(comp)
        after = self.components()
        if self.is_empty(after):
            return comp, ("cut-reconnect" if kind == "arc" else "ray-join"), "zero"
        after_circles = self.circles(after)

        def touched(circles):
            return [i for i, c in enumerate(circles) if c.nodes & affected]

        src = touched(before_circles)
        dst = touched(after_circles)
        if kind == "arc":
            if len(src) == 2 and len(dst) == 1:
                return comp, "merge", ("merge", src, dst)
            if len(src) == 1 and len(dst) == 2:
                return comp, "split", ("split", src, dst)
            if len(src) == 0 and len(dst) == 1:
                return comp, "spawn", ("eta_push", src, dst)
            if len(src) == 1 and len(dst) == 0:
                return comp, "retract", ("eta_pull", src, dst)
            if len(src) == 0 and len(dst) == 0:
                return comp, "cut-reconnect", None
            raise AssertionError(f"unexpected arc surgery shape {src}->{dst}")
        else:
            if len(src) == 0 and len(dst) == 1:
                return comp, "ray-close", ("eta_push", src, dst)
            if len(src) == 0 and len(dst) == 0:
                return comp, "ray-join", None
            raise AssertionError(f"unexpected ray surgery shape {src}->{dst}")

    def run_all_surgeries(self):
        """Run every surgery, yielding (component, label) pairs."""
        out = []
        while self.pending:
            comp, label, _event = self.apply_next_surgery()
            out.append((comp, label))
        return out


def closure_components(top, tangle, bottom,
                       top_weights=None, bottom_weights=None):
    """Components of the closed diagram (top-bar tangle bottom).

    Returns (circles, empty) with circles ordered as the tensor factors
    of H^*(T_top x_tangle T_bottom): top closure points first, then the
    tangle's free circles, then bottom closure points.
    """
    if tangle.m_top != top.n or tangle.m_bottom != bottom.n:
        raise ValueError("closure boundary mismatch")
    keys = {}
    for i in range(1, top.n + 1):
        keys[("T", i)] = (0, i)
    for j in range(1, tangle.closed + 1):
        keys[("F", j)] = (1, j)
    for i in range(1, bottom.n + 1):
        keys[("B", i)] = (2, i)
    parent = {node: node for node in keys}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    def endpoint(e):
        return ("T", e) if e <= tangle.m_top else ("B", e - tangle.m_top)

    for (x, y) in tangle.pairings:
        union(endpoint(x), endpoint(y))
    for (i, j) in top.arcs:
        union(("T", i), ("T", j))
    for (i, j) in bottom.arcs:
        union(("B", i), ("B", j))
    constraints = {}
    for r in top.rays:
        constraints.setdefault(("T", r), set()).add(_ray_value(r, top_weights))
    for r in bottom.rays:
        constraints.setdefault(("B", r), set()).add(_ray_value(r, bottom_weights))
    groups = {}
    for node in keys:
        groups.setdefault(find(node), set()).add(node)
    circles = []
    empty = False
    for nodes in groups.values():
        vals = set()
        for node in nodes:
            vals |= constraints.get(node, set())
        if len(vals) > 1:
            empty = True
        elif not vals:
            circles.append((min(keys[n] for n in nodes), frozenset(nodes)))
    circles.sort()
    return [nodes for _key, nodes in circles], empty
