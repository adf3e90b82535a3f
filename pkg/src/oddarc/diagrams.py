"""Planar combinatorics: crossingless matchings, circle diagrams,
weighted matchings, flat tangles, the arrow order, and surgery sequences.

Points on the horizontal line are 1-indexed left to right.  A matching
of type (n-k, k) has k arcs below the line and n-2k vertical rays; a ray
at point i pins the i-th torus coordinate to (-1)^i p.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field


# ---------------------------------------------------------------------------
# crossingless matchings


@dataclass(frozen=True, order=True)
class CrossinglessMatching:
    n: int
    arcs: tuple  # sorted tuple of (i, j) pairs, i < j
    rays: tuple  # sorted tuple of ray points

    def __post_init__(self):
        arcs = tuple(sorted(tuple(sorted(a)) for a in self.arcs))
        rays = tuple(sorted(self.rays))
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "rays", rays)
        used = [i for a in arcs for i in a] + list(rays)
        if sorted(used) != list(range(1, self.n + 1)):
            raise ValueError("arcs and rays must partition the points exactly once")
        for (i, j), (r, s) in itertools.combinations(arcs, 2):
            if i < r < j < s or r < i < s < j:
                raise ValueError(f"arcs ({i},{j}) and ({r},{s}) cross")
        for (i, j) in arcs:
            for r in rays:
                if i < r < j:
                    raise ValueError(f"ray {r} crosses arc ({i},{j})")

    @property
    def k(self):
        return len(self.arcs)

    def arc_through(self, i):
        """The arc containing point i, or None if i carries a ray."""
        for a in self.arcs:
            if i in a:
                return a
        return None

    def arc_index(self, i):
        """Index (0-based, arcs sorted by left endpoint) of the arc at i."""
        for idx, a in enumerate(self.arcs):
            if i in a:
                return idx
        return None

    def to_text(self):
        sym = {}
        for (i, j) in self.arcs:
            sym[i] = "("
            sym[j] = ")"
        for r in self.rays:
            sym[r] = "|"
        return "".join(sym[i] for i in range(1, self.n + 1))

    @classmethod
    def from_text(cls, text):
        stack = []
        arcs = []
        rays = []
        for pos, ch in enumerate(text, start=1):
            if ch == "(":
                stack.append(pos)
            elif ch == ")":
                if not stack:
                    raise ValueError(f"unmatched ')' at position {pos}")
                arcs.append((stack.pop(), pos))
            elif ch == "|":
                if stack:
                    raise ValueError(f"ray at position {pos} sits under an open arc")
                rays.append(pos)
            else:
                raise ValueError(f"invalid character {ch!r}")
        if stack:
            raise ValueError("unmatched '('")
        return cls(len(text), tuple(arcs), tuple(rays))

    def __str__(self):
        return self.to_text()


def enumerate_matchings(n, k):
    """All crossingless matchings of type (n-k, k), lexicographic on arc sets."""
    if n < 0 or k < 0 or 2 * k > n:
        raise ValueError(f"invalid type ({n - k},{k}): need 0 <= k <= n/2")
    results = []

    def build(pos, depth, opens_left, word):
        if pos > n:
            if depth == 0 and opens_left == 0:
                results.append(CrossinglessMatching.from_text("".join(word)))
            return
        remaining = n - pos + 1
        # close an open arc
        if depth > 0:
            word.append(")")
            build(pos + 1, depth - 1, opens_left, word)
            word.pop()
        # open a new arc
        if opens_left > 0 and remaining >= depth + 2:
            word.append("(")
            build(pos + 1, depth + 1, opens_left - 1, word)
            word.pop()
        # a ray is only planar at nesting depth 0
        if depth == 0 and remaining - 1 >= 2 * opens_left:
            word.append("|")
            build(pos + 1, depth, opens_left, word)
            word.pop()

    build(1, 0, k, [])
    return sorted(results, key=lambda m: m.arcs)


# ---------------------------------------------------------------------------
# circle diagrams


@dataclass(frozen=True)
class CircleDiagram:
    bottom: CrossinglessMatching
    top: CrossinglessMatching
    circles: tuple  # ordered tuple of frozensets of points
    has_turnback: bool

    @property
    def n_circles(self):
        return len(self.circles)

    def circle_index(self, point):
        for idx, comp in enumerate(self.circles):
            if point in comp:
                return idx
        return None


def glue(top, bottom):
    """The circle diagram obtained by gluing the mirror of ``top`` onto
    ``bottom``.

    Circles are components with no ray; they are listed by minimal
    point.  ``has_turnback`` records a component whose two ray ends lie
    on the same side, which forces an empty intersection of the
    corresponding torus components.
    """
    if top.n != bottom.n:
        raise ValueError("point counts differ")
    n = top.n
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    for (i, j) in bottom.arcs + top.arcs:
        union(i, j)
    comps = {}
    for i in range(1, n + 1):
        comps.setdefault(find(i), []).append(i)
    circles = []
    turnback = False
    for members in comps.values():
        bot_rays = [i for i in members if i in bottom.rays]
        top_rays = [i for i in members if i in top.rays]
        if not bot_rays and not top_rays:
            circles.append(frozenset(members))
        elif len(bot_rays) == 2 or len(top_rays) == 2:
            turnback = True
    circles.sort(key=min)
    return CircleDiagram(bottom, top, tuple(circles), turnback)


# ---------------------------------------------------------------------------
# arrow relation and total order


def arrow(a, b):
    """True if there is an arrow a -> b (an elementary reconnection that
    moves a nested/outer configuration one step up the cell order)."""
    if a.n != b.n or a.k != b.k or a == b:
        return False
    arcs_a, arcs_b = set(a.arcs), set(b.arcs)
    diff_a = arcs_a - arcs_b
    diff_b = arcs_b - arcs_a
    # quadruple rule: (i,j),(r,s) side by side become (i,s),(j,r) nested
    if len(diff_a) == 2 and a.rays == b.rays:
        (p1, p2) = sorted(diff_a)
        if {p1[0], p1[1], p2[0], p2[1]} == {q for arc in diff_b for q in arc}:
            i, j = p1
            r, s = p2
            if j < r and diff_b == {(i, s), (j, r)}:
                return True
        return False
    # triple rule: ray(i) + arc(j,l) become arc(i,j) + ray(l)
    if len(diff_a) == 1 and len(diff_b) == 1:
        (j, l) = next(iter(diff_a))
        (i, j2) = next(iter(diff_b))
        rays_a = set(a.rays) - set(b.rays)
        rays_b = set(b.rays) - set(a.rays)
        if len(rays_a) == 1 and len(rays_b) == 1:
            ri, rl = next(iter(rays_a)), next(iter(rays_b))
            if ri == i and rl == l and j2 == j and i < j < l:
                return True
    return False


def order(n, k):
    """Total order on matchings: a deterministic linear extension of the
    arrow order, ties broken lexicographically on arc sets."""
    matchings = enumerate_matchings(n, k)
    preds = {m: set() for m in matchings}
    for a in matchings:
        for b in matchings:
            if arrow(a, b):
                preds[b].add(a)  # a comes before b
    placed = []
    remaining = set(matchings)
    while remaining:
        ready = [m for m in remaining if preds[m] <= set(placed)]
        if not ready:
            raise RuntimeError("arrow relation has a cycle")
        ready.sort(key=lambda m: m.arcs)
        m = ready[0]
        placed.append(m)
        remaining.remove(m)
    return placed


# ---------------------------------------------------------------------------
# weighted matchings


@dataclass(frozen=True, order=True)
class WeightSequence:
    word: str  # over 'v' (down) and '^' (up)

    def __post_init__(self):
        if set(self.word) - {"v", "^"}:
            raise ValueError("weight word must be over 'v' and '^'")

    @property
    def n(self):
        return len(self.word)

    @property
    def k(self):
        return self.word.count("v")

    def indicator(self, i):
        """1 if position i carries 'v', else 0 (the i(lambda) exponent)."""
        return 1 if self.word[i - 1] == "v" else 0

    def __str__(self):
        return self.word


@dataclass(frozen=True, order=True)
class WeightedMatching:
    weights: WeightSequence
    matching: CrossinglessMatching

    def __post_init__(self):
        lam = self.weights
        m = self.matching
        if lam.n != m.n:
            raise ValueError("length mismatch")
        for (i, j) in m.arcs:
            if lam.word[i - 1] != "v" or lam.word[j - 1] != "^":
                raise ValueError(f"arc ({i},{j}) is not bounded by v^")

    @property
    def n(self):
        return self.matching.n

    def is_valid(self):
        """No pair of rays labeled v then ^ from left to right."""
        ray_labels = [(r, self.weights.word[r - 1]) for r in self.matching.rays]
        seen_v = False
        for _, lab in ray_labels:
            if lab == "v":
                seen_v = True
            elif seen_v:
                return False
        return True

    def ray_value(self, i):
        """Sign s with coordinate fixed to s*p at ray point i."""
        return -1 if (i + self.weights.indicator(i)) % 2 else 1

    def __str__(self):
        return self.weights.word


def matching_from_weights(weights):
    """The unique matching making the weight sequence valid: repeatedly
    connect adjacent unmatched v^ pairs, then put rays on the rest."""
    if isinstance(weights, str):
        weights = WeightSequence(weights)
    n = weights.n
    free = list(range(1, n + 1))
    arcs = []
    changed = True
    while changed:
        changed = False
        for t in range(len(free) - 1):
            i, j = free[t], free[t + 1]
            if weights.word[i - 1] == "v" and weights.word[j - 1] == "^":
                arcs.append((i, j))
                del free[t:t + 2]
                changed = True
                break
    rays = tuple(free)
    wm = WeightedMatching(weights, CrossinglessMatching(n, tuple(arcs), rays))
    assert wm.is_valid()
    return wm


def enumerate_weighted(n, k):
    """All C(n, k) valid weighted matchings of type (n-k, k), by weight word."""
    if n < 0 or k < 0 or 2 * k > n:
        raise ValueError(f"invalid type ({n - k},{k})")
    out = []
    for positions in itertools.combinations(range(n), k):
        word = "".join("v" if i in positions else "^" for i in range(n))
        out.append(matching_from_weights(word))
    return sorted(out, key=lambda w: w.weights.word)


# ---------------------------------------------------------------------------
# flat tangles


@dataclass(frozen=True)
class FlatTangle:
    """Flat (crossingless) tangle with m_bottom bottom and m_top top points.

    Endpoints are numbered 1..m_top (top row, left to right) then
    m_top+1..m_top+m_bottom (bottom row, left to right).  ``closed``
    counts free circle components.
    """

    m_bottom: int
    m_top: int
    pairings: tuple
    closed: int = 0

    def __post_init__(self):
        pairs = tuple(sorted(tuple(sorted(p)) for p in self.pairings))
        object.__setattr__(self, "pairings", pairs)
        pts = [x for p in pairs for x in p]
        if sorted(pts) != list(range(1, self.m_top + self.m_bottom + 1)):
            raise ValueError("pairings must partition the endpoints")
        if not self._planar():
            raise ValueError("tangle pairing is not planar")

    def _planar(self):
        # walk the strip boundary: top row left to right, bottom row right
        # to left; the pairing must be non-crossing on this circular order
        boundary = list(range(1, self.m_top + 1)) + list(
            range(self.m_top + self.m_bottom, self.m_top, -1))
        pos = {p: i for i, p in enumerate(boundary)}
        for (a, b), (c, d) in itertools.combinations(self.pairings, 2):
            pa, pb = sorted((pos[a], pos[b]))
            pc, pd = sorted((pos[c], pos[d]))
            if pa < pc < pb < pd or pc < pa < pd < pb:
                return False
        return True

    def partner(self, endpoint):
        for (a, b) in self.pairings:
            if a == endpoint:
                return b
            if b == endpoint:
                return a
        raise KeyError(endpoint)

    @classmethod
    def identity(cls, n):
        return cls(n, n, tuple((i, n + i) for i in range(1, n + 1)))

    def to_text(self):
        pairs = ";".join(f"{a}-{b}" for a, b in self.pairings)
        return f"{self.m_bottom}>{self.m_top}:{pairs};o={self.closed}"

    @classmethod
    def from_text(cls, text):
        head, _, body = text.partition(":")
        mb, _, mt = head.partition(">")
        parts = [p for p in body.split(";") if p]
        closed = 0
        pairs = []
        for p in parts:
            if p.startswith("o="):
                closed = int(p[2:])
            else:
                a, _, b = p.partition("-")
                pairs.append((int(a), int(b)))
        return cls(int(mb), int(mt), tuple(pairs), closed)

    def __str__(self):
        return self.to_text()


def compose_tangles(t2, t1):
    """Stack t2 above t1 (t1's top glued to t2's bottom)."""
    if t1.m_top != t2.m_bottom:
        raise ValueError("boundary mismatch: t1 top != t2 bottom")
    mid = t1.m_top
    # composite endpoints: t2 top keeps 1..t2.m_top, t1 bottom shifts
    def t2_label(e):
        return e if e <= t2.m_top else ("mid", e - t2.m_top)

    def t1_label(e):
        return ("mid", e) if e <= t1.m_top else t2.m_top + (e - t1.m_top)

    adj = {}
    for (a, b) in t2.pairings:
        adj.setdefault(t2_label(a), []).append(t2_label(b))
        adj.setdefault(t2_label(b), []).append(t2_label(a))
    for (a, b) in t1.pairings:
        adj.setdefault(t1_label(a), []).append(t1_label(b))
        adj.setdefault(t1_label(b), []).append(t1_label(a))

    new_pairs = []
    new_loops = 0
    seen = set()
    exterior = [e for e in adj if not isinstance(e, tuple)]
    for start in exterior:
        if start in seen:
            continue
        seen.add(start)
        prev, cur = start, adj[start][0]
        while isinstance(cur, tuple):
            seen.add(cur)
            nxt = [x for x in adj[cur] if x != prev]
            if not nxt:  # backtrack on a length-degenerate chain
                nxt = [adj[cur][0]]
            prev, cur = cur, nxt[0]
        seen.add(cur)
        new_pairs.append((start, cur))
    for node in adj:
        if isinstance(node, tuple) and node not in seen:
            # trace the closed loop through the middle boundary
            loop_start = node
            prev, cur = None, node
            while True:
                seen.add(cur)
                nbrs = adj[cur]
                nxt = nbrs[0] if nbrs[0] != prev or len(nbrs) == 1 else nbrs[1]
                prev, cur = cur, nxt
                if cur == loop_start:
                    break
            new_loops += 1
    return FlatTangle(t1.m_bottom, t2.m_top, tuple(new_pairs),
                      t1.closed + t2.closed + new_loops)


# ---------------------------------------------------------------------------
# surgeries


ARC_CASES = ("merge", "split", "spawn", "retract", "cut-reconnect")
RAY_CASES = ("ray-join", "ray-close")


@dataclass(frozen=True)
class Surgery:
    kind: str          # "arc" or "ray"
    points: tuple      # (r, s) for an arc, (r,) for a ray
    case_label: str

    def __str__(self):
        pts = ",".join(map(str, self.points))
        return f"{self.kind}({pts}): {self.case_label}"


def surgery_sequence(c, b, a):
    """Surgery list for the product through middle matching ``b``,
    components ordered by leftmost endpoint, each labeled with its case.

    Requires both glue(c, b) and glue(b, a) to be turnback-free.
    """
    from .gluing import GluedDiagram  # local import: gluing builds on this module

    if glue(c, b).has_turnback or glue(b, a).has_turnback:
        raise ValueError("turnback in the input circle diagrams; product is zero")
    diagram = GluedDiagram.for_matchings(c, b, a)
    out = []
    for comp, label in diagram.run_all_surgeries():
        out.append(Surgery(comp[0], comp[1], label))
    return out


def middle_components(b):
    """Components of a matching, ordered by leftmost endpoint.

    Each entry is ("arc", (i, j)) or ("ray", (i,)).
    """
    comps = [("arc", a) for a in b.arcs] + [("ray", (r,)) for r in b.rays]
    comps.sort(key=lambda c: c[1][0])
    return comps
