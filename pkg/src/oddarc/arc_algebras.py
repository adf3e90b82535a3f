"""Odd arc algebras and their relatives.

The multiplication surgers the middle matching of a stacked diagram and
feeds every surgery to the (odd or even) TQFT: merges pull back along
diagonals, splits push forward, circles spawned from or retracted into
rays go through the pinned-point maps.  A sign ledger carries the one
free global sign per triple that the pushforward orientations leave
open; triples whose surgery sequence only pulls back are canonical and
ignore the ledger.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

from . import intlinalg
from .diagrams import (
    CrossinglessMatching,
    FlatTangle,
    WeightedMatching,
    enumerate_matchings,
    enumerate_weighted,
    glue,
    order,
)
from .gluing import GluedDiagram, closure_components
from .oddcohomology import component_wedge, springer_cohomology
from .tqft import elementary_surgery_maps
from .zgraded import GradedElement, GradedLinearMap, arranged_map

PUSHFORWARD_EVENTS = {"split", "eta_push"}

FLAVORS = ("oh", "ok", "even-h", "even-k")


def _theory(flavor):
    return "odd" if flavor in ("oh", "ok") else "even"


# ---------------------------------------------------------------------------
# sign ledger


class SignLedger:
    """Global sign per multiplication triple, default +1 everywhere.

    Only triples whose surgery sequence contains a pushforward event
    (split, spawn, ray closure) consult the ledger; the others have no
    orientation freedom.
    """

    def __init__(self, entries=None):
        self.entries = dict(entries or {})
        for key, val in self.entries.items():
            if val not in (1, -1):
                raise ValueError(f"ledger sign for {key} must be +1 or -1")

    def sign(self, c, b, a):
        return self.entries.get((str(c), str(b), str(a)), 1)

    def set(self, c, b, a, sign):
        self.entries[(str(c), str(b), str(a))] = sign

    @classmethod
    def from_text(cls, text):
        entries = {}
        for ln in text.strip().splitlines():
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            parts = ln.split()
            if len(parts) != 4:
                raise ValueError(f"ledger line needs 'c b a sign': {ln!r}")
            c, b, a, s = parts
            entries[(c, b, a)] = int(s)
        return cls(entries)


# ---------------------------------------------------------------------------
# the surgery-to-TQFT engine


@lru_cache(maxsize=None)
def _triple_map_cached(top, t2, mid, t1, bottom, weights, theory):
    maps = elementary_surgery_maps(theory)
    signed = theory == "odd"
    diagram = GluedDiagram(top, t2, mid, t1, bottom,
                           top_weights=weights[0] if weights else None,
                           middle_weights=weights[1] if weights else None,
                           bottom_weights=weights[2] if weights else None)
    start = diagram.components()
    if diagram.is_empty(start):
        return None, False
    m = len(diagram.circles(start))
    total = GradedLinearMap.identity(m)
    has_push = False
    cuts = closes = 0
    while diagram.pending:
        _comp, label, event = diagram.apply_next_surgery()
        if event == "zero":
            return None, has_push
        if label == "cut-reconnect":
            cuts += 1
        elif label == "ray-close":
            closes += 1
        if event is None:
            continue
        elem_name, src, dst = event
        if elem_name in PUSHFORWARD_EVENTS:
            has_push = True
        elem = maps[elem_name]
        m_after = m - elem.src + elem.tgt
        step = arranged_map(m, src, elem, m_after, dst, signed=signed)
        total = step.compose(total)
        m = m_after
    # Quantum grading: every circle-touching surgery raises q by one, so
    # the product is graded exactly when reconnections and ray closures
    # balance.  Unbalanced sequences force the convolution class into a
    # vanishing cohomology degree, so those products are zero.
    if cuts != closes:
        return None, has_push
    return total, has_push


def triple_map(top, mid, bottom, theory="odd", weights=None,
               t2=None, t1=None):
    """Composite TQFT map of the full surgery sequence for one triple.

    Returns (map, has_pushforward); the map is None when some
    intermediate space is empty (the product is zero).
    """
    if t2 is None:
        t2 = FlatTangle.identity(mid.n)
    if t1 is None:
        t1 = FlatTangle.identity(mid.n)
    return _triple_map_cached(top, t2, mid, t1, bottom, weights, theory)


# ---------------------------------------------------------------------------
# basis elements and algebras


@dataclass(frozen=True)
class ArcBasisElement:
    top: object        # matching or weighted matching
    bottom: object
    dots: tuple        # sorted circle indices carrying a dot
    n_circles: int
    k: int

    @property
    def q_degree(self):
        return 2 * len(self.dots) + (self.k - self.n_circles)

    @property
    def h_degree(self):
        return len(self.dots)

    def word(self):
        w = [0] * self.n_circles
        for i in self.dots:
            w[i] = 1
        return tuple(w)


def _objects(n, k, flavor):
    if flavor in ("oh", "even-h"):
        return order(n, k)
    return enumerate_weighted(n, k)


def _object_parts(obj):
    """(matching, weight sequence or None) of a basis object."""
    if isinstance(obj, WeightedMatching):
        return obj.matching, obj.weights
    return obj, None


def block_circles(top_obj, bottom_obj):
    """Circle count of a block, or None when the intersection is empty."""
    tm, tw = _object_parts(top_obj)
    bm, bw = _object_parts(bottom_obj)
    circles, empty = closure_components(
        tm, FlatTangle.identity(tm.n), bm, top_weights=tw, bottom_weights=bw)
    return None if empty else len(circles)


class OddAlgebra:
    """A convolution algebra over the components: basis plus structure
    constants, for one of the four flavors."""

    def __init__(self, n, k, flavor, objects, basis, index, constants):
        self.n = n
        self.k = k
        self.flavor = flavor
        self.objects = objects
        self.basis = basis
        self.index = index
        self.constants = constants

    def multiply_indices(self, i, j):
        """Sparse product of two basis elements: {basis index: coeff}."""
        return self.constants.get((i, j), {})

    def multiply_vectors(self, u, v):
        """Product of sparse vectors over the basis."""
        out = {}
        for i, ci in u.items():
            if not ci:
                continue
            for j, cj in v.items():
                if not cj:
                    continue
                for t, c in self.constants.get((i, j), {}).items():
                    out[t] = out.get(t, 0) + ci * cj * c
        return {t: c for t, c in out.items() if c}

    def element_index(self, top, bottom, dots):
        return self.index[(str(top), str(bottom), tuple(sorted(dots)))]

    def to_json(self):
        basis_json = []
        for el in self.basis:
            basis_json.append({
                "top": str(el.top),
                "bottom": str(el.bottom),
                "dots": list(el.dots),
                "qdeg": el.q_degree,
            })
        constants = []
        for (i, j), col in sorted(self.constants.items()):
            for t, c in sorted(col.items()):
                constants.append([i, j, t, c])
        return json.dumps({
            "schema": 1,
            "n": self.n,
            "k": self.k,
            "flavor": self.flavor,
            "basis": basis_json,
            "constants": constants,
        }, indent=None, separators=(",", ":"), sort_keys=True)


def build_algebra(n, k, flavor="oh", ledger=None):
    """Basis and full structure-constant table of one arc algebra."""
    if flavor not in FLAVORS:
        raise ValueError(f"flavor must be one of {FLAVORS}")
    ledger = ledger or SignLedger()
    theory = _theory(flavor)
    objects = _objects(n, k, flavor)
    blocks = {}
    for ti, bi in itertools.product(range(len(objects)), repeat=2):
        r = block_circles(objects[ti], objects[bi])
        if r is not None:
            blocks[(ti, bi)] = r
    basis = []
    index = {}
    block_elements = {}
    for (ti, bi), r in sorted(blocks.items()):
        members = []
        for size in range(r + 1):
            for dots in itertools.combinations(range(r), size):
                el = ArcBasisElement(objects[ti], objects[bi], dots, r, k)
                index[(str(el.top), str(el.bottom), dots)] = len(basis)
                members.append(len(basis))
                basis.append(el)
        block_elements[(ti, bi)] = members

    constants = {}
    for (ci, bi) in blocks:
        for ai in range(len(objects)):
            if (bi, ai) not in blocks:
                continue
            cm, cw = _object_parts(objects[ci])
            bm, bw = _object_parts(objects[bi])
            am, aw = _object_parts(objects[ai])
            weights = None if cw is bw is aw is None else (cw, bw, aw)
            total, has_push = triple_map(cm, bm, am, theory, weights)
            if total is None:
                continue
            sign = ledger.sign(objects[ci], objects[bi], objects[ai]) \
                if has_push else 1
            if sign == -1:
                total = total.scale(-1)
            target_block = blocks.get((ci, ai))
            if target_block is None:
                # every entry must vanish on an empty target
                if any(not col.is_zero() for col in total.columns.values()):
                    raise AssertionError("nonzero product into an empty block")
                continue
            if total.tgt != target_block:
                raise AssertionError("circle bookkeeping mismatch")
            for i in block_elements[(ci, bi)]:
                wi = basis[i].word()
                for j in block_elements[(bi, ai)]:
                    wj = basis[j].word()
                    out = total.apply(GradedElement.basis(wi + wj))
                    if out.is_zero():
                        continue
                    col = {}
                    for word, c in out.coeffs.items():
                        dots = tuple(p for p, x in enumerate(word) if x)
                        t = index[(str(objects[ci]), str(objects[ai]), dots)]
                        col[t] = c
                    constants[(i, j)] = col
    return OddAlgebra(n, k, flavor, objects, basis, index, constants)


def multiply(x, y, ledger=None, flavor="oh"):
    """Product of two basis elements: sparse {ArcBasisElement: coeff}.

    Zero (empty dict) on a middle mismatch or a turnback middle.
    """
    if str(x.bottom) != str(y.top):
        return {}
    ledger = ledger or SignLedger()
    theory = _theory(flavor)
    cm, cw = _object_parts(x.top)
    bm, bw = _object_parts(x.bottom)
    am, aw = _object_parts(y.bottom)
    weights = None if cw is bw is aw is None else (cw, bw, aw)
    total, has_push = triple_map(cm, bm, am, theory, weights)
    if total is None:
        return {}
    sign = ledger.sign(x.top, x.bottom, y.bottom) if has_push else 1
    out = total.apply(GradedElement.basis(x.word() + y.word()))
    result = {}
    for word, c in out.coeffs.items():
        dots = tuple(p for p, x_ in enumerate(word) if x_)
        el = ArcBasisElement(x.top, y.bottom, dots, total.tgt, x.k)
        result[el] = sign * c
    return result


# ---------------------------------------------------------------------------
# odd center


def odd_center(alg):
    """Basis of {z : zx = (-1)^{|z||x|} xz} split by homological degree.

    Returns (vectors, by_degree) where each vector is a sparse dict over
    the algebra basis and ``by_degree[d]`` lists vector positions.
    """
    n_basis = len(alg.basis)
    degrees = sorted({el.h_degree for el in alg.basis})
    vectors = []
    by_degree = {}
    for dz in degrees:
        unknowns = [i for i, el in enumerate(alg.basis) if el.h_degree == dz]
        if not unknowns:
            continue
        rows = []
        row_keys = {}
        columns = {u: {} for u in unknowns}
        for jx, x_el in enumerate(alg.basis):
            sign = -1 if (dz * x_el.h_degree) % 2 else 1
            for u in unknowns:
                contrib = {}
                for t, c in alg.constants.get((u, jx), {}).items():
                    contrib[t] = contrib.get(t, 0) + c
                for t, c in alg.constants.get((jx, u), {}).items():
                    contrib[t] = contrib.get(t, 0) - sign * c
                for t, c in contrib.items():
                    if c:
                        key = (jx, t)
                        if key not in row_keys:
                            row_keys[key] = len(row_keys)
                        columns[u][row_keys[key]] = c
        n_rows = len(row_keys)
        mat = [[0] * len(unknowns) for _ in range(n_rows)]
        for uj, u in enumerate(unknowns):
            for ri, c in columns[u].items():
                mat[ri][uj] = c
        for v in intlinalg.kernel(mat, cols=len(unknowns)):
            vec = {unknowns[t]: c for t, c in enumerate(v) if c}
            by_degree.setdefault(dz, []).append(len(vectors))
            vectors.append(vec)
    return vectors, by_degree


def center_is_diagonal(alg, vectors):
    for vec in vectors:
        for i in vec:
            el = alg.basis[i]
            if str(el.top) != str(el.bottom):
                return False
    return True


def springer_into_diagonal(n, k, alg):
    """Embed the kernel basis of the glued-union cohomology into the
    diagonal blocks of the algebra; returns vectors over the basis."""
    betti, kernel_bases, col_index = springer_cohomology(n, k)
    matchings = order(n, k)
    out = []
    for d, basis_d in enumerate(kernel_bases):
        for v in basis_d:
            vec = {}
            for pos, c in enumerate(v):
                if not c:
                    continue
                mi, bits = col_index[pos]
                dots = tuple(i for i, x in enumerate(bits) if x)
                idx = alg.element_index(matchings[mi], matchings[mi], dots)
                vec[idx] = c
            out.append((d, vec))
    return out


def same_span(vecs_a, vecs_b, dim):
    """Equality of the integer spans of two families of sparse vectors."""

    def dense(vecs):
        rows = []
        for v in vecs:
            row = [0] * dim
            for i, c in v.items():
                row[i] = c
            rows.append(row)
        return rows

    ha = intlinalg.hermite_normal_form(dense(vecs_a), width=dim)
    hb = intlinalg.hermite_normal_form(dense(vecs_b), width=dim)
    return ha == hb


# ---------------------------------------------------------------------------
# geometric bimodules


def all_matchings(m):
    """Every crossingless matching on m points, all arc counts."""
    out = []
    for k in range(m // 2 + 1):
        out.extend(order(m, k))
    return out


class BimoduleSpace:
    """The sum of block cohomologies attached to a flat tangle."""

    def __init__(self, tangle, m_top=None, m_bottom=None):
        self.tangle = tangle
        self.m_top = tangle.m_top if m_top is None else m_top
        self.m_bottom = tangle.m_bottom if m_bottom is None else m_bottom
        self.tops = all_matchings(self.m_top)
        self.bottoms = all_matchings(self.m_bottom)
        self._top_pos = {str(m): i for i, m in enumerate(self.tops)}
        self._bottom_pos = {str(m): i for i, m in enumerate(self.bottoms)}
        self.blocks = {}
        for ti, top in enumerate(self.tops):
            for bi, bottom in enumerate(self.bottoms):
                circles, empty = closure_components(top, tangle, bottom)
                if not empty:
                    self.blocks[(ti, bi)] = len(circles)
        self.basis = []
        self.index = {}
        for (ti, bi), r in sorted(self.blocks.items()):
            for size in range(r + 1):
                for dots in itertools.combinations(range(r), size):
                    key = (ti, bi, dots)
                    self.index[key] = len(self.basis)
                    self.basis.append((ti, bi, dots, r))

    def act_left(self, oh_element, elem, theory="odd"):
        """Left action of an arc-algebra basis element on a bimodule
        basis element; sparse dict over this space's basis."""
        ti, bi, dots, r = elem
        c, b = oh_element.top, oh_element.bottom
        if str(b) != str(self.tops[ti]):
            return {}
        idm = FlatTangle.identity(c.n)
        total, _push = triple_map(c, b, self.bottoms[bi], theory,
                                  t2=idm, t1=self.tangle)
        if total is None:
            return {}
        word = oh_element.word() + _word(dots, r)
        out = total.apply(GradedElement.basis(word))
        return self._collect(out, self._top_pos[str(c)], bi)

    def act_right(self, elem, oh_element, theory="odd"):
        ti, bi, dots, r = elem
        b, a = oh_element.top, oh_element.bottom
        if str(b) != str(self.bottoms[bi]):
            return {}
        idm = FlatTangle.identity(a.n)
        total, _push = triple_map(self.tops[ti], b, a, theory,
                                  t2=self.tangle, t1=idm)
        if total is None:
            return {}
        word = _word(dots, r) + oh_element.word()
        out = total.apply(GradedElement.basis(word))
        return self._collect(out, ti, self._bottom_pos[str(a)])

    def _collect(self, out, ti, bi):
        result = {}
        for word, c in out.coeffs.items():
            dots = tuple(p for p, x in enumerate(word) if x)
            result[self.index[(ti, bi, dots)]] = c
        return result


def _word(dots, r):
    w = [0] * r
    for i in dots:
        w[i] = 1
    return tuple(w)


def surgery_map(t, t_prime, top, bottom, direction="forward", theory="odd"):
    """Block map between the spaces of two tangles differing by a surgery.

    ``forward`` maps the t-block to the t'-block (pullback-flavored when
    circles merge, pushforward-flavored when they split); ``backward``
    is the other direction.  Returns None when either block is empty.
    """
    maps = elementary_surgery_maps(theory)
    signed = theory == "odd"
    circles_t, empty_t = closure_components(top, t, bottom)
    circles_p, empty_p = closure_components(top, t_prime, bottom)
    if direction == "backward":
        return surgery_map(t_prime, t, top, bottom, "forward", theory)
    if empty_t or empty_p:
        return None
    changed_src = [i for i, c in enumerate(circles_t) if c not in circles_p]
    changed_dst = [j for j, c in enumerate(circles_p) if c not in circles_t]
    m, m2 = len(circles_t), len(circles_p)
    if not changed_src and not changed_dst:
        return GradedLinearMap.identity(m)
    if len(changed_src) == 2 and len(changed_dst) == 1:
        elem = maps["merge"]
    elif len(changed_src) == 1 and len(changed_dst) == 2:
        elem = maps["split"]
    elif len(changed_src) == 0 and len(changed_dst) == 1:
        elem = maps["eta_push"]
    elif len(changed_src) == 1 and len(changed_dst) == 0:
        elem = maps["eta_pull"]
    else:
        raise ValueError("tangles do not differ by a single surgery")
    return arranged_map(m, changed_src, elem, m2, changed_dst, signed=signed)
