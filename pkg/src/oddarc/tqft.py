"""Chronological cobordisms, the odd TQFT, its even counterpart, and the
geometric realization through hypertorus maps.

The odd theory assigns A = Z v+ (+) Z v- to a circle.  Elementary
cobordisms act by the tables below; an event applied at non-adjacent
positions is conjugated through Koszul-signed transposition chains.
Orientations matter: reversing a split or a death flips the sign,
reversing a merge does nothing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .zgraded import (
    GradedElement,
    GradedLinearMap,
    arranged_map,
    koszul_tensor,
    permutation_map,
    plain_tensor,
    tau,
    words,
)

VP, VM = 0, 1  # letters: v+ and v-


def merge_map():
    return GradedLinearMap.from_rules(2, 1, 0, {
        (VP, VP): {(VP,): 1},
        (VP, VM): {(VM,): 1},
        (VM, VP): {(VM,): 1},
        (VM, VM): {},
    })


def split_map(orientation=">"):
    """Split with the default ('>') or reversed ('<') orientation."""
    sign = 1 if orientation == ">" else -1
    return GradedLinearMap.from_rules(1, 2, 1, {
        (VP,): {(VM, VP): sign, (VP, VM): -sign},
        (VM,): {(VM, VM): sign},
    })


def birth_map():
    return GradedLinearMap.from_rules(0, 1, 0, {(): {(VP,): 1}})


def death_map(sign="+"):
    """Death with positive ('+', v- -> -1) or negative ('-') orientation."""
    value = -1 if sign == "+" else 1
    return GradedLinearMap.from_rules(1, 0, -1, {(VM,): {(): value}, (VP,): {}})


def eta_pull_map():
    """Restriction to a pinned point: v+ -> 1, v- -> 0."""
    return GradedLinearMap.from_rules(1, 0, 0, {(VP,): {(): 1}, (VM,): {}})


def eta_push_map():
    """Exceptional pushforward off a pinned point: 1 -> v-."""
    return GradedLinearMap.from_rules(0, 1, 1, {(): {(VM,): 1}})


# even counterparts over Z[X]/(X^2); letter 1 stands for X


def even_merge_map():
    return GradedLinearMap.from_rules(2, 1, 0, {
        (VP, VP): {(VP,): 1},
        (VP, VM): {(VM,): 1},
        (VM, VP): {(VM,): 1},
        (VM, VM): {},
    })


def even_split_map():
    return GradedLinearMap.from_rules(1, 2, 1, {
        (VP,): {(VM, VP): 1, (VP, VM): 1},
        (VM,): {(VM, VM): 1},
    })


def even_birth_map():
    return GradedLinearMap.from_rules(0, 1, 0, {(): {(VP,): 1}})


def even_death_map():
    return GradedLinearMap.from_rules(1, 0, -1, {(VM,): {(): 1}, (VP,): {}})


def even_eta_pull_map():
    return GradedLinearMap.from_rules(1, 0, 0, {(VP,): {(): 1}, (VM,): {}})


def even_eta_push_map():
    return GradedLinearMap.from_rules(0, 1, 1, {(): {(VM,): 1}})


def elementary_surgery_maps(theory):
    """Surgery-event tables for the odd or even pipeline."""
    if theory == "odd":
        return {
            "merge": merge_map(),
            "split": split_map("<"),
            "eta_push": eta_push_map(),
            "eta_pull": eta_pull_map(),
        }
    if theory == "even":
        return {
            "merge": even_merge_map(),
            "split": even_split_map(),
            "eta_push": even_eta_push_map(),
            "eta_pull": even_eta_pull_map(),
        }
    raise ValueError(f"unknown theory {theory!r}")


# ---------------------------------------------------------------------------
# chronological cobordisms


@dataclass(frozen=True)
class Event:
    kind: str       # merge | split | birth | death | twist
    positions: tuple = ()
    tag: str = ""   # split orientation '>'/'<', death sign '+'/'-'


@dataclass(frozen=True)
class ChronCobordism:
    source_circles: int
    events: tuple

    def __post_init__(self):
        m = self.source_circles
        for ev in self.events:
            m = _validate_event(ev, m)
        object.__setattr__(self, "_target", m)

    @property
    def target_circles(self):
        return self._target

    @property
    def degree(self):
        splits = sum(1 for e in self.events if e.kind == "split")
        deaths = sum(1 for e in self.events if e.kind == "death")
        return splits - deaths

    def to_text(self):
        lines = [f"src={self.source_circles}"]
        for e in self.events:
            if e.kind == "merge":
                lines.append(f"m {e.positions[0]} {e.positions[1]}")
            elif e.kind == "split":
                lines.append(f"s {e.positions[0]} {e.tag}")
            elif e.kind == "birth":
                lines.append("b")
            elif e.kind == "death":
                lines.append(f"d{e.tag} {e.positions[0]}")
            elif e.kind == "twist":
                lines.append(f"t {e.positions[0]}")
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text):
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("src="):
            raise ValueError("cobordism text must start with 'src=<count>'")
        src = int(lines[0][4:])
        events = []
        for ln in lines[1:]:
            parts = ln.split()
            if parts[0] == "m":
                events.append(Event("merge", (int(parts[1]), int(parts[2]))))
            elif parts[0] == "s":
                events.append(Event("split", (int(parts[1]),), parts[2]))
            elif parts[0] == "b":
                events.append(Event("birth"))
            elif parts[0] in ("d+", "d-"):
                events.append(Event("death", (int(parts[1]),), parts[0][1]))
            elif parts[0] == "t":
                events.append(Event("twist", (int(parts[1]),)))
            else:
                raise ValueError(f"unknown event line {ln!r}")
        return cls(src, tuple(events))


def _validate_event(ev, m):
    if ev.kind == "merge":
        i, j = ev.positions
        if not (1 <= i < j <= m):
            raise ValueError(f"merge positions {ev.positions} invalid at width {m}")
        return m - 1
    if ev.kind == "split":
        (i,) = ev.positions
        if not (1 <= i <= m):
            raise ValueError(f"split position {i} invalid at width {m}")
        if ev.tag not in (">", "<"):
            raise ValueError("split orientation must be '>' or '<'")
        return m + 1
    if ev.kind == "birth":
        return m + 1
    if ev.kind == "death":
        (i,) = ev.positions
        if not (1 <= i <= m):
            raise ValueError(f"death position {i} invalid at width {m}")
        if ev.tag not in ("+", "-"):
            raise ValueError("death sign must be '+' or '-'")
        return m - 1
    if ev.kind == "twist":
        (i,) = ev.positions
        if not (1 <= i <= m - 1):
            raise ValueError(f"twist position {i} invalid at width {m}")
        return m
    raise ValueError(f"unknown event kind {ev.kind!r}")


def event_map(ev, m, theory="odd"):
    """The linear map of a single event at width m (odd or even theory)."""
    signed = theory == "odd"
    if theory == "odd":
        tables = {
            "merge": merge_map(),
            "split": lambda tag: split_map(tag),
            "birth": birth_map(),
            "death": lambda tag: death_map(tag),
        }
    else:
        tables = {
            "merge": even_merge_map(),
            "split": lambda tag: even_split_map(),
            "birth": even_birth_map(),
            "death": lambda tag: even_death_map(),
        }
    if ev.kind == "merge":
        i, j = ev.positions
        return arranged_map(m, [i - 1, j - 1], tables["merge"], m - 1, [i - 1],
                            signed=signed)
    if ev.kind == "split":
        (i,) = ev.positions
        return arranged_map(m, [i - 1], tables["split"](ev.tag), m + 1,
                            [i - 1, i], signed=signed)
    if ev.kind == "birth":
        return arranged_map(m, [], tables["birth"], m + 1, [m], signed=signed)
    if ev.kind == "death":
        (i,) = ev.positions
        return arranged_map(m, [i - 1], tables["death"](ev.tag), m - 1, [],
                            signed=signed)
    if ev.kind == "twist":
        (i,) = ev.positions
        perm = list(range(m))
        perm[i - 1], perm[i] = perm[i], perm[i - 1]
        return permutation_map(m, perm, signed=signed)
    raise ValueError(ev.kind)


def cobordism_map(cob, theory="odd"):
    """The full linear map of a chronological cobordism."""
    m = cob.source_circles
    total = GradedLinearMap.identity(m)
    for ev in cob.events:
        step = event_map(ev, m, theory)
        total = step.compose(total)
        m = step.tgt
    return total


def of_apply(cob, elem):
    """Apply the odd TQFT of a cobordism to an element of A^{(x)src}."""
    if elem.arity != cob.source_circles:
        raise ValueError("arity mismatch")
    return cobordism_map(cob, "odd").apply(elem)


def even_apply(cob, elem):
    """Apply the even TQFT (Frobenius algebra Z[X]/(X^2)) of a cobordism."""
    if elem.arity != cob.source_circles:
        raise ValueError("arity mismatch")
    return cobordism_map(cob, "even").apply(elem)


# ---------------------------------------------------------------------------
# geometric maps on hypertorus cohomology


def geometric_map(name):
    """Exact matrix of a geometric map under H^*(T^m) = A^{(x)m}."""
    table = {
        "Delta*": merge_map(),
        "Delta!": split_map("<"),
        "eps*": birth_map(),
        "eps!": death_map("-"),
        "eta*": eta_pull_map(),
        "eta!": eta_push_map(),
    }
    if name not in table:
        raise ValueError(f"unknown geometric map {name!r}")
    return table[name]


@dataclass(frozen=True)
class ZigzagStep:
    map_name: str       # Delta | eps | eta | swap
    direction: str      # pullback | pushforward
    orientation_sign: int = 1
    position: int = 1   # leftmost strand the local map acts on (1-based)


@dataclass(frozen=True)
class GeomZigzag:
    source_dim: int
    steps: tuple

    @property
    def target_dim(self):
        m = self.source_dim
        for st in self.steps:
            m += _zigzag_delta(st)
        return m


def _zigzag_delta(st):
    if st.map_name == "swap":
        return 0
    local = {"Delta": 1, "eps": -1, "eta": 1}[st.map_name]
    return local if st.direction == "pushforward" else -local


def theta(cob):
    """The zigzag of hypertorus maps realizing a chronological cobordism.

    merge -> diagonal pullback, split '<' -> diagonal pushforward,
    split '>' -> orientation-reversed diagonal pushforward, birth ->
    projection pullback, death '-' -> projection pushforward, death '+'
    -> orientation-reversed projection pushforward, twist -> coordinate
    swap pullback.
    """
    steps = []
    m = cob.source_circles
    for ev in cob.events:
        if ev.kind == "merge":
            i, j = ev.positions
            # walk j next to i with swaps, then pull back along the diagonal
            for t in range(j - 1, i, -1):
                steps.append(ZigzagStep("swap", "pullback", 1, t))
            steps.append(ZigzagStep("Delta", "pullback", 1, i))
            m -= 1
        elif ev.kind == "split":
            sign = 1 if ev.tag == "<" else -1
            steps.append(ZigzagStep("Delta", "pushforward", sign, ev.positions[0]))
            m += 1
        elif ev.kind == "birth":
            steps.append(ZigzagStep("eps", "pullback", 1, m + 1))
            m += 1
        elif ev.kind == "death":
            sign = 1 if ev.tag == "-" else -1
            steps.append(ZigzagStep("eps", "pushforward", sign, ev.positions[0]))
            m -= 1
        elif ev.kind == "twist":
            steps.append(ZigzagStep("swap", "pullback", 1, ev.positions[0]))
    return GeomZigzag(cob.source_circles, tuple(steps))


def h_star(zigzag):
    """Cohomology of a zigzag: the composite of the step matrices."""
    m = zigzag.source_dim
    total = GradedLinearMap.identity(m)
    for st in zigzag.steps:
        if st.map_name == "swap":
            perm = list(range(m))
            i = st.position - 1
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
            step = permutation_map(m, perm)
            m_next = m
        else:
            if st.map_name == "Delta":
                local = merge_map() if st.direction == "pullback" else split_map("<")
            elif st.map_name == "eps":
                local = birth_map() if st.direction == "pullback" else death_map("-")
            elif st.map_name == "eta":
                local = eta_pull_map() if st.direction == "pullback" else eta_push_map()
            else:
                raise ValueError(st.map_name)
            m_next = m - local.src + local.tgt
            i = st.position - 1
            src_pos = list(range(i, i + local.src))
            dst_pos = list(range(i, i + local.tgt))
            step = arranged_map(m, src_pos, local, m_next, dst_pos)
        if st.orientation_sign == -1:
            step = step.scale(-1)
        total = step.compose(total)
        m = m_next
    return total


# ---------------------------------------------------------------------------
# relation verification


def _single(kind, positions=(), tag="", src=1):
    return ChronCobordism(src, (Event(kind, positions, tag),))


def elementary_generators():
    """The six elementary cobordisms and the twist, as cobordisms."""
    return {
        "merge": _single("merge", (1, 2), src=2),
        "split>": _single("split", (1,), ">", src=1),
        "split<": _single("split", (1,), "<", src=1),
        "birth": _single("birth", src=0),
        "death+": _single("death", (1,), "+", src=1),
        "death-": _single("death", (1,), "-", src=1),
        "twist": _single("twist", (1,), src=2),
    }


def verify_geometric_commutation():
    """Thm-level check: OF equals H* o Theta on every generator."""
    results = {}
    for name, cob in elementary_generators().items():
        lhs = cobordism_map(cob, "odd")
        rhs = h_star(theta(cob))
        results[name] = lhs.equal_matrix(rhs)
    return results


def _enumerate_small_cobordisms(max_events, src_circles):
    """All event sequences with at most max_events on a fixed source."""
    seqs = [[]]
    for _ in range(max_events):
        new = []
        for seq in seqs:
            m = src_circles
            ok = True
            for ev in seq:
                try:
                    m = _validate_event(ev, m)
                except ValueError:
                    ok = False
                    break
            if not ok:
                continue
            options = []
            for i in range(1, m + 1):
                for j in range(i + 1, m + 1):
                    options.append(Event("merge", (i, j)))
            for i in range(1, m + 1):
                options.append(Event("split", (i,), ">"))
                options.append(Event("split", (i,), "<"))
                options.append(Event("death", (i,), "+"))
                options.append(Event("death", (i,), "-"))
            for i in range(1, m):
                options.append(Event("twist", (i,)))
            options.append(Event("birth"))
            for opt in options:
                new.append(seq + [opt])
        seqs.extend(new)
    out = []
    for seq in seqs:
        try:
            out.append(ChronCobordism(src_circles, tuple(seq)))
        except ValueError:
            pass
    return out


def verify_relations(max_events=4, max_circles=3):
    """Check the defining relations of the linearized cobordism category
    under the odd TQFT.  Returns {relation name: bool}.
    """
    report = {}

    mer = merge_map()
    spl = split_map(">")
    spl_op = split_map("<")
    dpos = death_map("+")
    dneg = death_map("-")
    bir = birth_map()
    idA = GradedLinearMap.identity(1)
    swap = tau(1, 1)

    # orientation sign table (linear relations between reversed generators)
    report["merge orientation-invariant"] = mer.compose(swap).equal_matrix(mer)
    report["split reverses sign"] = spl.equal_matrix(spl_op.scale(-1))
    report["death reverses sign"] = dpos.equal_matrix(dneg.scale(-1))
    report["twist flips split orientation"] = swap.compose(spl).equal_matrix(spl_op)

    # birth-then-merge tubes
    report["merge after right birth"] = mer.compose(
        koszul_tensor(idA, bir)).equal_matrix(idA)
    report["merge after left birth"] = mer.compose(
        koszul_tensor(bir, idA)).equal_matrix(idA)
    # split-then-death tubes (signs depend on the orientation pairing)
    report["left death- after split>"] = koszul_tensor(dneg, idA).compose(
        spl).equal_matrix(idA)
    report["right death+ after split>"] = koszul_tensor(idA, dpos).compose(
        spl).equal_matrix(idA)
    report["left death+ after split>"] = koszul_tensor(dpos, idA).compose(
        spl).equal_matrix(idA.scale(-1))
    report["right death- after split>"] = koszul_tensor(idA, dneg).compose(
        spl).equal_matrix(idA.scale(-1))

    # distant commutation with sign (-1)^{deg deg'}
    ok = True
    max_block_events = max_events - 1

    def distinct_maps(src):
        seen = {}
        for cob in _enumerate_small_cobordisms(max_block_events, src):
            if not cob.events:
                continue
            mat = cobordism_map(cob, "odd")
            key = (mat.src, mat.tgt,
                   tuple(sorted((w, tuple(sorted(col.coeffs.items())))
                                for w, col in mat.columns.items())))
            entry = (mat, cob.degree, len(cob.events))
            seen.setdefault(key, entry)
        return list(seen.values())

    blocks = {src: distinct_maps(src) for src in range(max_circles + 1)}
    identities = {m: GradedLinearMap.identity(m) for m in range(2 * max_circles + 3)}
    pad_left = {}
    for p in range(0, max_circles + 1):
        for q in range(0, max_circles + 1 - p):
            for ml, dl, el in blocks[p]:
                t_bottom = koszul_tensor(ml, identities[q])
                t_bottom_r = {}
                for mr, dr, er in blocks[q]:
                    if el + er > max_events:
                        continue
                    key = (id(mr), ml.tgt)
                    if key not in pad_left:
                        pad_left[key] = koszul_tensor(identities[ml.tgt], mr)
                    first_left = pad_left[key].compose(t_bottom)
                    key2 = (id(mr), p, "src")
                    if key2 not in pad_left:
                        pad_left[key2] = koszul_tensor(identities[p], mr)
                    if mr.tgt not in t_bottom_r:
                        t_bottom_r[mr.tgt] = koszul_tensor(ml, identities[mr.tgt])
                    first_right = t_bottom_r[mr.tgt].compose(pad_left[key2])
                    sign = -1 if (dl * dr) % 2 else 1
                    if not first_left.equal_matrix(first_right.scale(sign)):
                        ok = False
    report[f"distant commutation (<= {max_events} events, <= {max_circles} circles)"] = ok

    # the genus-one operator annihilates A
    genus = mer.compose(spl)
    report["genus operator is zero"] = all(
        genus.apply(GradedElement.basis(w)).is_zero() for w in words(1))
    return report
