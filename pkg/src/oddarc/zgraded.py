"""Graded abelian groups A^{(x)m} and Koszul-signed homogeneous maps.

A = Z v+ (+) Z v- with |v+| = 0 and |v-| = 1.  Basis words of A^{(x)m}
are encoded as tuples over {0, 1} (1 standing for v-), so the degree of
a word is its sum and words sort with v+ < v-.
"""

from __future__ import annotations

import itertools

from . import intlinalg


def words(arity):
    """All basis words of A^{(x)arity} in lexicographic order."""
    return list(itertools.product((0, 1), repeat=arity))


def word_degree(word):
    return sum(word)


def sign_pow(exponent):
    return -1 if exponent % 2 else 1


class GradedElement:
    """Integer combination of basis words of a fixed arity."""

    __slots__ = ("arity", "coeffs")

    def __init__(self, arity, coeffs=None):
        self.arity = arity
        self.coeffs = {}
        if coeffs:
            for w, c in coeffs.items():
                if c:
                    if len(w) != arity:
                        raise ValueError("word length does not match arity")
                    self.coeffs[tuple(w)] = self.coeffs.get(tuple(w), 0) + c
            self.coeffs = {w: c for w, c in self.coeffs.items() if c}

    @classmethod
    def basis(cls, word):
        return cls(len(word), {tuple(word): 1})

    @classmethod
    def unit(cls):
        return cls(0, {(): 1})

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        if self.arity != other.arity:
            raise ValueError("arity mismatch")
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, 0) + c
        return GradedElement(self.arity, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return GradedElement(self.arity, {w: c * x for w, x in self.coeffs.items()})

    def __eq__(self, other):
        return (
            isinstance(other, GradedElement)
            and self.arity == other.arity
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.arity, tuple(sorted(self.coeffs.items()))))

    def homogeneous_degree(self):
        """Degree if homogeneous, else None."""
        degs = {word_degree(w) for w in self.coeffs}
        if len(degs) == 1:
            return degs.pop()
        return None if degs else 0

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for w, c in sorted(self.coeffs.items()):
            mono = "v" + ".v".join("+-"[x] for x in w) if w else "1"
            bits.append(f"{c:+d}*{mono}")
        return " ".join(bits)


class GradedLinearMap:
    """Homogeneous Z-linear map A^{(x)src} -> A^{(x)tgt} of fixed degree."""

    __slots__ = ("src", "tgt", "degree", "columns")

    def __init__(self, src, tgt, degree, columns=None):
        self.src = src
        self.tgt = tgt
        self.degree = degree
        self.columns = {}
        if columns:
            for w, elem in columns.items():
                if elem.is_zero():
                    continue
                if len(w) != src or elem.arity != tgt:
                    raise ValueError("column shape mismatch")
                for tw in elem.coeffs:
                    if word_degree(tw) - word_degree(w) != degree:
                        raise ValueError("entry violates homogeneity")
                self.columns[tuple(w)] = elem

    @classmethod
    def from_rules(cls, src, tgt, degree, rules):
        """Build from {source word: {target word: coeff}}."""
        cols = {
            w: GradedElement(tgt, tv) for w, tv in rules.items()
        }
        return cls(src, tgt, degree, cols)

    @classmethod
    def identity(cls, arity):
        return cls(arity, arity, 0, {w: GradedElement.basis(w) for w in words(arity)})

    def apply(self, elem):
        if elem.arity != self.src:
            raise ValueError("arity mismatch")
        out = {}
        for w, c in elem.coeffs.items():
            col = self.columns.get(w)
            if col is None:
                continue
            for tw, tc in col.coeffs.items():
                out[tw] = out.get(tw, 0) + c * tc
        return GradedElement(self.tgt, out)

    def compose(self, inner):
        """self o inner."""
        if inner.tgt != self.src:
            raise ValueError("composition mismatch")
        cols = {w: self.apply(col) for w, col in inner.columns.items()}
        return GradedLinearMap(inner.src, self.tgt, self.degree + inner.degree, cols)

    def __add__(self, other):
        if (self.src, self.tgt, self.degree) != (other.src, other.tgt, other.degree):
            raise ValueError("shape/degree mismatch")
        cols = dict(self.columns)
        for w, col in other.columns.items():
            cols[w] = cols[w] + col if w in cols else col
        return GradedLinearMap(self.src, self.tgt, self.degree, cols)

    def scale(self, c):
        return GradedLinearMap(
            self.src, self.tgt, self.degree,
            {w: col.scale(c) for w, col in self.columns.items()},
        )

    def __eq__(self, other):
        return (
            isinstance(other, GradedLinearMap)
            and (self.src, self.tgt, self.degree) == (other.src, other.tgt, other.degree)
            and {w: col for w, col in self.columns.items() if not col.is_zero()}
            == {w: col for w, col in other.columns.items() if not col.is_zero()}
        )

    def __hash__(self):
        return hash((self.src, self.tgt, self.degree))

    def equal_matrix(self, other):
        """Matrix equality, ignoring the formal degree label."""
        if (self.src, self.tgt) != (other.src, other.tgt):
            return False
        return all(self.apply(GradedElement.basis(w)) == other.apply(GradedElement.basis(w))
                   for w in words(self.src))

    def matrix(self):
        """Dense integer matrix, rows/cols in lexicographic word order."""
        tws = words(self.tgt)
        sws = words(self.src)
        index = {w: i for i, w in enumerate(tws)}
        mat = intlinalg.zeros(len(tws), len(sws))
        for j, w in enumerate(sws):
            col = self.columns.get(w)
            if col is None:
                continue
            for tw, c in col.coeffs.items():
                mat[index[tw]][j] = c
        return mat

    def __repr__(self):
        return f"GradedLinearMap({self.src}->{self.tgt}, deg {self.degree}, {len(self.columns)} cols)"


def koszul_tensor(f, g):
    """Z-graded tensor product: (f(x)g)(m(x)n) = (-1)^{|g||m|} f(m)(x)g(n)."""
    cols = {}
    for wf in words(f.src):
        colf = f.columns.get(wf)
        if colf is None:
            continue
        sign = sign_pow(g.degree * word_degree(wf))
        for wg in words(g.src):
            colg = g.columns.get(wg)
            if colg is None:
                continue
            out = {}
            for twf, cf in colf.coeffs.items():
                for twg, cg in colg.coeffs.items():
                    out[twf + twg] = out.get(twf + twg, 0) + sign * cf * cg
            cols[wf + wg] = GradedElement(f.tgt + g.tgt, out)
    return GradedLinearMap(f.src + g.src, f.tgt + g.tgt, f.degree + g.degree, cols)


def tau(m1, m2):
    """Koszul block swap A^{(x)m1} (x) A^{(x)m2} -> A^{(x)m2} (x) A^{(x)m1}."""
    cols = {}
    for u in words(m1):
        for v in words(m2):
            sign = sign_pow(word_degree(u) * word_degree(v))
            cols[u + v] = GradedElement(m1 + m2, {v + u: sign})
    return GradedLinearMap(m1 + m2, m1 + m2, 0, cols)


def permutation_sign(word, perm):
    """Koszul sign of rearranging ``word`` so letter i lands at perm[i]."""
    sign = 1
    n = len(word)
    for i in range(n):
        if word[i] == 0:
            continue
        for j in range(i + 1, n):
            if word[j] and perm[i] > perm[j]:
                sign = -sign
    return sign


def permute_word(word, perm):
    out = [0] * len(word)
    for i, x in enumerate(word):
        out[perm[i]] = x
    return tuple(out)


def permutation_map(arity, perm, signed=True):
    """Map sending the letter at position i to position perm[i] (0-based)."""
    cols = {}
    for w in words(arity):
        sign = permutation_sign(w, perm) if signed else 1
        cols[w] = GradedElement(arity, {permute_word(w, perm): sign})
    return GradedLinearMap(arity, arity, 0, cols)


def front_permutation(arity, positions):
    """Permutation moving ``positions`` (0-based, ascending) to the front.

    Remaining positions keep their relative order.
    """
    rest = [i for i in range(arity) if i not in positions]
    order = list(positions) + rest
    perm = [0] * arity
    for new, old in enumerate(order):
        perm[old] = new
    return perm


def inverse_permutation(perm):
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return inv


def arranged_map(m_before, src_positions, elementary, m_after, dst_positions,
                 signed=True):
    """Elementary map applied at arbitrary tensor positions.

    Conjugates by (Koszul-signed) permutations: bring ``src_positions``
    to the front, apply ``elementary (x) id``, then send the outputs of
    the elementary map to ``dst_positions``.  This realizes the
    adjacent-transposition-chain semantics of applying a local map on
    non-adjacent factors.
    """
    s, t = elementary.src, elementary.tgt
    if len(src_positions) != s or len(dst_positions) != t:
        raise ValueError("position count does not match elementary map")
    if m_after != m_before - s + t:
        raise ValueError("arity bookkeeping is off")
    p_before = front_permutation(m_before, list(src_positions))
    p_after = front_permutation(m_after, list(dst_positions))
    pre = permutation_map(m_before, p_before, signed=signed)
    rest = GradedLinearMap.identity(m_before - s)
    mid = koszul_tensor(elementary, rest) if signed else plain_tensor(elementary, rest)
    post = permutation_map(m_after, inverse_permutation(p_after), signed=signed)
    return post.compose(mid.compose(pre))


def plain_tensor(f, g):
    """Tensor product without Koszul signs (even/commutative pipelines)."""
    cols = {}
    for wf, colf in f.columns.items():
        for wg, colg in g.columns.items():
            out = {}
            for twf, cf in colf.coeffs.items():
                for twg, cg in colg.coeffs.items():
                    out[twf + twg] = out.get(twf + twg, 0) + cf * cg
            cols[wf + wg] = GradedElement(f.tgt + g.tgt, out)
    return GradedLinearMap(f.src + g.src, f.tgt + g.tgt, f.degree + g.degree, cols)
