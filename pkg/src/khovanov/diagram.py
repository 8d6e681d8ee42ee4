"""Oriented planar diagrams of links and (1,1)-tangles.

Conventions
-----------
A crossing is a 4-tuple ``(i, j, k, l)`` of arc labels listed counterclockwise
starting from the incoming under-strand, so the under-strand runs ``i -> k``.
The over-strand runs either ``l -> j`` or ``j -> l``::

        k                      k
        ^                      ^
        |                      |
   l ---|--> j            l <--|--- j
        |                      |
        i                      i

     sign +1 (y-type)        sign -1 (x-type)

``x(D)`` counts crossings of sign -1 and ``y(D)`` counts crossings of sign +1.

The 0-resolution joins ``(i, j)`` and ``(k, l)``; the 1-resolution joins
``(i, l)`` and ``(j, k)``.  At an x-type crossing the 1-resolution is the
oriented smoothing, at a y-type crossing the 0-resolution is.

Crossingless components are stored as a count of free loops.  Wherever an
"arc" argument is accepted, the negative number ``-(t + 1)`` names free loop
``t``; circle identifiers of free loops use the same negative numbers.

A (1,1)-tangle is stored as the diagram of its closure together with a marked
arc, the arc created by joining the two open ends.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    ArcNotFound,
    ArcsNotAdjacent,
    ComponentNotFound,
    CrossingAlreadyResolvedToOne,
    DuplicateArcUse,
    EmptyBraidWithZeroStrands,
    GeneratorOutOfRange,
    InconsistentOrientation,
    MalformedSyntax,
    NotABigon,
    OpenStrandInLinkMode,
)

Crossing = tuple[int, int, int, int]

IN, OUT = 0, 1

# slot pairs joined by each resolution
_ZERO_PAIRS = ((0, 1), (2, 3))
_ONE_PAIRS = ((0, 3), (1, 2))


def slot_roles(sign: int) -> tuple[int, int, int, int]:
    """IN/OUT role of the four slots of a crossing with the given sign."""
    if sign > 0:
        return (IN, OUT, OUT, IN)
    return (IN, IN, OUT, OUT)


@dataclass(frozen=True)
class LinkDiagram:
    """An oriented diagram: PD crossings, their signs and free loops."""

    crossings: tuple[Crossing, ...]
    signs: tuple[int, ...]
    free_loops: int = 0
    marked_arc: int | None = None

    def __post_init__(self):
        if len(self.crossings) != len(self.signs):
            raise ValueError("one sign per crossing is required")

    # -- basic counts -----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def x(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    @property
    def y(self) -> int:
        return sum(1 for s in self.signs if s > 0)

    @property
    def writhe(self) -> int:
        return self.y - self.x

    @property
    def is_tangle(self) -> bool:
        return self.marked_arc is not None

    @property
    def pd(self) -> tuple[Crossing, ...]:
        return self.crossings

    @cached_property
    def arcs(self) -> tuple[int, ...]:
        return tuple(sorted({a for c in self.crossings for a in c}))

    @cached_property
    def occurrences(self) -> dict[int, tuple[tuple[int, int], ...]]:
        occ: dict[int, list[tuple[int, int]]] = {}
        for ci, cr in enumerate(self.crossings):
            for s, a in enumerate(cr):
                occ.setdefault(a, []).append((ci, s))
        return {a: tuple(v) for a, v in occ.items()}

    def role(self, ci: int, slot: int) -> int:
        return slot_roles(self.signs[ci])[slot]

    def tail(self, arc: int) -> tuple[int, int]:
        """The (crossing, slot) where ``arc`` leaves a crossing."""
        for ci, s in self._occ(arc):
            if self.role(ci, s) == OUT:
                return ci, s
        raise InconsistentOrientation(f"arc {arc} has no tail")

    def head(self, arc: int) -> tuple[int, int]:
        """The (crossing, slot) where ``arc`` enters a crossing."""
        for ci, s in self._occ(arc):
            if self.role(ci, s) == IN:
                return ci, s
        raise InconsistentOrientation(f"arc {arc} has no head")

    def _occ(self, arc: int) -> tuple[tuple[int, int], ...]:
        try:
            return self.occurrences[arc]
        except KeyError:
            raise ArcNotFound(arc) from None

    def has_arc(self, arc: int) -> bool:
        if arc < 0:
            return -arc <= self.free_loops
        return arc in self.occurrences

    # -- components ---------------------------------------------------------

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Components as tuples of arc labels in orientation order.

        Components with crossings come first, ordered by their smallest arc
        label; free loops follow as ``(-1,)``, ``(-2,)`` and so on.
        """
        nxt: dict[int, int] = {}
        for ci, cr in enumerate(self.crossings):
            roles = slot_roles(self.signs[ci])
            for a, b in ((0, 2), (1, 3)):
                if roles[a] == IN:
                    nxt[cr[a]] = cr[b]
                else:
                    nxt[cr[b]] = cr[a]
        seen: set[int] = set()
        comps = []
        for start in self.arcs:
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            cur = nxt[start]
            while cur != start:
                cyc.append(cur)
                seen.add(cur)
                cur = nxt[cur]
            comps.append(tuple(cyc))
        comps.extend((-(t + 1),) for t in range(self.free_loops))
        return tuple(comps)

    @property
    def cm(self) -> int:
        return len(self.components)

    def component_of(self, arc: int) -> int:
        for idx, comp in enumerate(self.components):
            if arc in comp:
                return idx
        raise ArcNotFound(arc)

    # -- serialisation --------------------------------------------------------

    def to_json(self) -> dict:
        out: dict = {"crossings": [list(c) for c in self.crossings], "free_loops": self.free_loops}
        if self.signs != _derive_signs(self.crossings):
            out["signs"] = list(self.signs)
        if self.marked_arc is not None:
            out["marked_arc"] = self.marked_arc
        return out

    def to_pd_text(self) -> str:
        body = ",".join("X({},{},{},{})".format(*c) for c in self.crossings)
        return f"PD[{body}]"

    def __repr__(self) -> str:
        extra = f", free_loops={self.free_loops}" if self.free_loops else ""
        mark = f", marked_arc={self.marked_arc}" if self.marked_arc is not None else ""
        return f"LinkDiagram({self.to_pd_text()}, x={self.x}, y={self.y}{extra}{mark})"


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_X_RE = re.compile(r"X\s*[\[(]\s*([^\])]*)[\])]")


def _parse_text_crossings(text: str) -> list[Crossing]:
    body = text.strip()
    m = re.fullmatch(r"PD\s*[\[(](.*)[\])]", body, flags=re.S)
    if not m:
        raise MalformedSyntax(f"expected PD[...], got {text!r}")
    inner = m.group(1).strip()
    if not inner:
        return []
    crossings = []
    pos = 0
    for xm in _X_RE.finditer(inner):
        gap = inner[pos:xm.start()].strip().strip(",").strip()
        if gap:
            raise MalformedSyntax(f"unexpected text {gap!r} in PD code")
        pos = xm.end()
        parts = [p.strip() for p in xm.group(1).split(",")]
        if len(parts) != 4:
            raise MalformedSyntax(f"crossing {xm.group(0)!r} does not have four labels")
        try:
            labels = tuple(int(p) for p in parts)
        except ValueError:
            raise MalformedSyntax(f"non-integer label in {xm.group(0)!r}") from None
        crossings.append(labels)
    if inner[pos:].strip().strip(","):
        raise MalformedSyntax(f"unexpected trailing text {inner[pos:]!r}")
    return crossings


def _check_labels(crossings: Sequence[Crossing]) -> dict[int, int]:
    count: dict[int, int] = {}
    for cr in crossings:
        if len(cr) != 4:
            raise MalformedSyntax(f"crossing {cr!r} does not have four labels")
        for a in cr:
            if not isinstance(a, int) or isinstance(a, bool) or a <= 0:
                raise MalformedSyntax(f"arc labels must be positive integers, got {a!r}")
            count[a] = count.get(a, 0) + 1
    for a, k in count.items():
        if k > 2:
            raise DuplicateArcUse(f"arc {a} occurs {k} times")
    return count


def _propagate_roles(crossings: Sequence[Crossing]) -> list[int]:
    """Determine crossing signs from arc continuity.

    Under-strand roles are fixed by the quadrant convention.  Over-strand roles
    are propagated along arcs; components that never pass under anything are
    oriented so that labels increase along them.
    """
    n = len(crossings)
    role: dict[tuple[int, int], int] = {}
    occ: dict[int, list[tuple[int, int]]] = {}
    for ci, cr in enumerate(crossings):
        for s, a in enumerate(cr):
            occ.setdefault(a, []).append((ci, s))

    def other_end(ci: int, s: int) -> tuple[int, int] | None:
        ends = occ[crossings[ci][s]]
        if len(ends) < 2:
            return None
        return ends[1] if ends[0] == (ci, s) else ends[0]

    stack: list[tuple[int, int]] = []

    def assign(key: tuple[int, int], value: int) -> None:
        old = role.get(key)
        if old is None:
            role[key] = value
            stack.append(key)
        elif old != value:
            raise InconsistentOrientation(
                f"arc {crossings[key[0]][key[1]]} would need two heads or two tails"
            )

    for ci in range(n):
        assign((ci, 0), IN)
        assign((ci, 2), OUT)

    def drain() -> None:
        while stack:
            ci, s = stack.pop()
            r = role[(ci, s)]
            if s in (1, 3):
                assign((ci, 4 - s), 1 - r)
            o = other_end(ci, s)
            if o is not None:
                assign(o, 1 - r)

    drain()
    for ci, (_, j, _, l) in enumerate(crossings):
        if (ci, 1) in role:
            continue
        # label-order convention for over-only components
        positive = (j - l == 1) or (l - j > 1)
        assign((ci, 3), IN if positive else OUT)
        drain()
    return [1 if role[(ci, 3)] == IN else -1 for ci in range(n)]


def _derive_signs(crossings: Sequence[Crossing]) -> tuple[int, ...]:
    try:
        return tuple(_propagate_roles(crossings))
    except InconsistentOrientation:
        return ()


def make_diagram(
    crossings: Iterable[Sequence[int]],
    free_loops: int = 0,
    signs: Sequence[int] | None = None,
    tangle: bool = False,
    marked_arc: int | None = None,
) -> LinkDiagram:
    """Validate crossings and build a :class:`LinkDiagram`.

    With ``tangle=True`` exactly two labels may occur once; they are the open
    ends of the strand and are joined to form the closure, whose joined arc is
    marked.  A crossingless tangle is a marked free loop.
    """
    crossings = [tuple(int(a) if not isinstance(a, int) else a for a in cr) for cr in crossings]
    if free_loops < 0:
        raise MalformedSyntax("free_loops must be non-negative")
    count = _check_labels(crossings)
    singles = sorted(a for a, k in count.items() if k == 1)
    if singles:
        if not tangle:
            raise OpenStrandInLinkMode(f"arcs {singles} occur only once")
        if len(singles) != 2:
            raise OpenStrandInLinkMode(f"a tangle needs exactly two open ends, found {singles}")
        keep, drop = singles
        crossings = [tuple(keep if a == drop else a for a in cr) for cr in crossings]
        marked_arc = keep
    elif tangle and marked_arc is None:
        if crossings:
            raise OpenStrandInLinkMode("tangle mode needs an open strand or an explicit marked arc")
        if free_loops < 1:
            free_loops = 1
        marked_arc = -1
    derived = _propagate_roles(crossings)
    if signs is None:
        signs = derived
    else:
        signs = [int(s) for s in signs]
        if len(signs) != len(crossings) or any(s not in (1, -1) for s in signs):
            raise MalformedSyntax("signs must be one of +1/-1 per crossing")
        _check_sign_consistency(crossings, signs)
    d = LinkDiagram(tuple(crossings), tuple(signs), free_loops, marked_arc)
    if marked_arc is not None and not d.has_arc(marked_arc):
        raise ArcNotFound(marked_arc)
    return d


def _check_sign_consistency(crossings: Sequence[Crossing], signs: Sequence[int]) -> None:
    heads: dict[int, int] = {}
    tails: dict[int, int] = {}
    for ci, cr in enumerate(crossings):
        for s, a in enumerate(cr):
            bucket = heads if slot_roles(signs[ci])[s] == IN else tails
            bucket[a] = bucket.get(a, 0) + 1
    for a in set(heads) | set(tails):
        if heads.get(a, 0) != 1 or tails.get(a, 0) != 1:
            raise InconsistentOrientation(f"arc {a} is not consistently oriented")


def parse_pd(text: str, tangle: bool = False) -> LinkDiagram:
    """Parse ``PD[X(1,4,2,5),...]`` or its JSON mirror.

    >>> d = parse_pd("PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]")
    >>> (d.n, d.x, d.y, d.cm)
    (3, 3, 0, 1)
    """
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise MalformedSyntax(f"bad JSON: {exc}") from None
        return diagram_from_json(data, tangle=tangle)
    if stripped.startswith("["):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise MalformedSyntax(f"bad JSON: {exc}") from None
        return diagram_from_json({"crossings": data}, tangle=tangle)
    return make_diagram(_parse_text_crossings(stripped), tangle=tangle)


def diagram_from_json(data: dict, tangle: bool = False) -> LinkDiagram:
    if isinstance(data, str):
        return parse_pd(data, tangle=tangle)
    if not isinstance(data, dict) or "crossings" not in data:
        raise MalformedSyntax("JSON diagram needs a 'crossings' list")
    crossings = data["crossings"]
    if not isinstance(crossings, list) or any(not isinstance(c, list) for c in crossings):
        raise MalformedSyntax("'crossings' must be a list of 4-element lists")
    for cr in crossings:
        if any(not isinstance(a, int) or isinstance(a, bool) for a in cr):
            raise MalformedSyntax(f"non-integer label in {cr!r}")
    loops = data.get("free_loops", 0)
    if not isinstance(loops, int) or loops < 0:
        raise MalformedSyntax("'free_loops' must be a non-negative integer")
    return make_diagram(
        crossings,
        free_loops=loops,
        signs=data.get("signs"),
        tangle=tangle or bool(data.get("tangle", False)),
        marked_arc=data.get("marked_arc"),
    )


def parse_braid(word: Sequence[int], strands: int) -> LinkDiagram:
    """Diagram of the closure of a braid word.

    Letter ``+i`` crosses strands ``i`` and ``i+1`` with an x-type crossing
    and ``-i`` with a y-type crossing, so ``[1]*k`` on two strands gives the
    T(2,k) diagram with ``(x, y) = (k, 0)``.  Strands untouched by any letter
    become free loops.
    """
    if strands <= 0:
        raise EmptyBraidWithZeroStrands("a braid needs at least one strand")
    next_label = 1
    start = list(range(next_label, next_label + strands))
    next_label += strands
    cur = list(start)
    raw: list[tuple[list[int], int]] = []
    for letter in word:
        letter = int(letter)
        i = abs(letter)
        if letter == 0 or i >= strands:
            raise GeneratorOutOfRange(f"generator {letter} needs |index| < {strands}")
        a, b = cur[i - 1], cur[i]
        a_out, b_out = next_label, next_label + 1
        next_label += 2
        if letter > 0:
            # left strand under, right strand over, x-type
            raw.append(([a, b, a_out, b_out], -1))
        else:
            # right strand under, left strand over, y-type
            raw.append(([b, a_out, b_out, a], 1))
        cur[i - 1], cur[i] = b_out, a_out
    # close up: the last label on each position is identified with its first
    alias = {}
    loops = 0
    for p in range(strands):
        if cur[p] == start[p]:
            loops += 1
        else:
            alias[cur[p]] = start[p]
    crossings = [[alias.get(a, a) for a in cr] for cr, _ in raw]
    signs = [s for _, s in raw]
    return _compact(crossings, signs, loops)


def _compact(crossings, signs, loops, marked_arc=None) -> LinkDiagram:
    """Relabel arcs 1..2n in order of first appearance."""
    mapping: dict[int, int] = {}
    for cr in crossings:
        for a in cr:
            if a not in mapping:
                mapping[a] = len(mapping) + 1
    new = tuple(tuple(mapping[a] for a in cr) for cr in crossings)
    if marked_arc is not None and marked_arc > 0:
        marked_arc = mapping[marked_arc]
    return LinkDiagram(new, tuple(signs), loops, marked_arc)


# ---------------------------------------------------------------------------
# resolutions
# ---------------------------------------------------------------------------


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, items: Iterable[int]):
        self.parent = {a: a for a in items}

    def find(self, a: int) -> int:
        p = self.parent
        root = a
        while p[root] != root:
            root = p[root]
        while p[a] != root:
            p[a], a = root, p[a]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


@dataclass(frozen=True)
class ResolutionState:
    """The resolution D(lambda): its circles and the arc-to-circle lookup."""

    lam: int
    circles: tuple[tuple[int, tuple[int, ...]], ...]
    arc_to_circle: dict[int, int] = field(compare=False, hash=False, repr=False)

    @property
    def circle_ids(self) -> tuple[int, ...]:
        return tuple(cid for cid, _ in self.circles)

    def __len__(self) -> int:
        return len(self.circles)


def resolution_pairs(cr: Crossing, one: bool) -> tuple[tuple[int, int], tuple[int, int]]:
    pairs = _ONE_PAIRS if one else _ZERO_PAIRS
    return tuple((cr[p], cr[q]) for p, q in pairs)  # type: ignore[return-value]


def resolve(d: LinkDiagram, lam: int | Iterable[int]) -> ResolutionState:
    """Trace the circles of D(lambda); ``lam`` is a bitmask or an index set."""
    if not isinstance(lam, int):
        mask = 0
        for a in lam:
            if not 0 <= a < d.n:
                raise IndexError(f"crossing {a} out of range")
            mask |= 1 << a
        lam = mask
    if lam >> d.n:
        raise IndexError("resolution mask has bits beyond the crossing count")
    uf = _UnionFind(d.arcs)
    for ci, cr in enumerate(d.crossings):
        for a, b in resolution_pairs(cr, bool(lam >> ci & 1)):
            uf.union(a, b)
    groups: dict[int, list[int]] = {}
    for a in d.arcs:
        groups.setdefault(uf.find(a), []).append(a)
    circles = [(min(g), tuple(sorted(g))) for g in groups.values()]
    circles.extend((-(t + 1), ()) for t in range(d.free_loops))
    circles.sort()
    lookup = {a: min(g) for g in groups.values() for a in g}
    for t in range(d.free_loops):
        lookup[-(t + 1)] = -(t + 1)
    return ResolutionState(lam, tuple(circles), lookup)


@dataclass(frozen=True)
class EdgeEvent:
    """The saddle between D(lambda) and D(lambda + a)."""

    kind: str  # "merge" or "split"
    crossing: int
    source: tuple[int, ...]  # affected circle ids in D(lambda)
    target: tuple[int, ...]  # affected circle ids in D(lambda + a)
    correspondence: dict[int, int] = field(compare=False, hash=False)


def edge_event(d: LinkDiagram, lam: int, a: int) -> EdgeEvent:
    if lam >> a & 1:
        raise CrossingAlreadyResolvedToOne(f"crossing {a} is already 1-resolved in {lam:b}")
    s0 = resolve(d, lam)
    s1 = resolve(d, lam | 1 << a)
    i, j, k, _ = d.crossings[a]
    p1, p2 = s0.arc_to_circle[i], s0.arc_to_circle[k]
    q1, q2 = s1.arc_to_circle[i], s1.arc_to_circle[j]
    touched0 = {p1, p2}
    corr = {}
    for cid, arcs in s0.circles:
        if cid in touched0:
            continue
        rep = arcs[0] if arcs else cid
        corr[cid] = s1.arc_to_circle[rep]
    if p1 != p2:
        return EdgeEvent("merge", a, tuple(sorted((p1, p2))), (q1,), corr)
    return EdgeEvent("split", a, (p1,), (q1, q2), corr)


# ---------------------------------------------------------------------------
# whole-diagram operations
# ---------------------------------------------------------------------------


def _switched(cr: Crossing, sign: int) -> Crossing:
    i, j, k, l = cr
    return (l, i, j, k) if sign > 0 else (j, k, l, i)


def switch_crossing(d: LinkDiagram, c: int) -> LinkDiagram:
    """Exchange over and under strands at crossing ``c``."""
    crossings = list(d.crossings)
    signs = list(d.signs)
    crossings[c] = _switched(crossings[c], signs[c])
    signs[c] = -signs[c]
    return LinkDiagram(tuple(crossings), tuple(signs), d.free_loops, d.marked_arc)


def mirror(d: LinkDiagram) -> LinkDiagram:
    crossings = tuple(_switched(cr, s) for cr, s in zip(d.crossings, d.signs))
    return LinkDiagram(crossings, tuple(-s for s in d.signs), d.free_loops, d.marked_arc)


def _offset(d: LinkDiagram, k: int) -> tuple[Crossing, ...]:
    return tuple(tuple(a + k for a in cr) for cr in d.crossings)  # type: ignore[misc]


def disjoint_union(d1: LinkDiagram, d2: LinkDiagram) -> LinkDiagram:
    shift = max(d1.arcs, default=0)
    return LinkDiagram(
        d1.crossings + _offset(d2, shift),
        d1.signs + d2.signs,
        d1.free_loops + d2.free_loops,
        d1.marked_arc,
    )


def _swap_heads(d: LinkDiagram, a: int, b: int) -> LinkDiagram:
    """Exchange the head ends of arcs ``a`` and ``b`` (an oriented saddle)."""
    ha, hb = d.head(a), d.head(b)
    crossings = [list(cr) for cr in d.crossings]
    crossings[ha[0]][ha[1]] = b
    crossings[hb[0]][hb[1]] = a
    return LinkDiagram(tuple(tuple(cr) for cr in crossings), d.signs, d.free_loops, d.marked_arc)


def connected_sum(d1: LinkDiagram, d2: LinkDiagram, arc1: int, arc2: int) -> LinkDiagram:
    """Splice ``arc1`` of ``d1`` with ``arc2`` of ``d2``.

    Either arc may name a free loop (negative label), in which case that loop
    is simply absorbed into the other summand.
    """
    if not d1.has_arc(arc1):
        raise ArcNotFound(arc1)
    if not d2.has_arc(arc2):
        raise ArcNotFound(arc2)
    if arc1 < 0:
        reduced = LinkDiagram(d1.crossings, d1.signs, d1.free_loops - 1, None)
        return disjoint_union(reduced, d2)
    if arc2 < 0:
        reduced = LinkDiagram(d2.crossings, d2.signs, d2.free_loops - 1, None)
        return disjoint_union(d1, reduced)
    shift = max(d1.arcs, default=0)
    union = disjoint_union(d1, d2)
    return _swap_heads(union, arc1, arc2 + shift)


def reverse_component(d: LinkDiagram, comp: int) -> tuple[LinkDiagram, int]:
    """Reverse the orientation of component ``comp``.

    Returns the new diagram and ``l``, half the number of mixed x-type
    crossings minus mixed y-type crossings, so that the new diagram has
    ``(x - 2l, y + 2l)``.
    """
    comps = d.components
    if not 0 <= comp < len(comps):
        raise ComponentNotFound(comp)
    arcs = set(comps[comp])
    if not arcs or min(arcs) < 0:
        return d, 0
    crossings = list(d.crossings)
    signs = list(d.signs)
    mixed_x = mixed_y = 0
    for ci, cr in enumerate(d.crossings):
        under_in = cr[0] in arcs
        over_in = cr[1] in arcs
        if under_in == over_in:
            if under_in:
                i, j, k, l = cr
                crossings[ci] = (k, l, i, j)
            continue
        if d.signs[ci] < 0:
            mixed_x += 1
        else:
            mixed_y += 1
        if under_in:
            i, j, k, l = cr
            crossings[ci] = (k, l, i, j)
        signs[ci] = -signs[ci]
    l = (mixed_x - mixed_y) // 2
    return LinkDiagram(tuple(crossings), tuple(signs), d.free_loops, d.marked_arc), l


def smooth_crossing(d: LinkDiagram, c: int, one: bool) -> LinkDiagram:
    """Replace crossing ``c`` by its 0- or 1-resolution.

    The result carries the orientation of ``d`` when the smoothing is the
    oriented one; otherwise orientations are re-derived from the labels.
    """
    pairs = resolution_pairs(d.crossings[c], one)
    return _remove_crossings(d, [c], [pairs], oriented=_is_oriented_smoothing(d, c, one))


def oriented_smoothing(d: LinkDiagram, c: int) -> LinkDiagram:
    return smooth_crossing(d, c, one=d.signs[c] < 0)


def _is_oriented_smoothing(d: LinkDiagram, c: int, one: bool) -> bool:
    return one == (d.signs[c] < 0)


def _remove_crossings(d, cs, pair_lists, oriented=True) -> LinkDiagram:
    uf = _UnionFind(d.arcs)
    for pairs in pair_lists:
        for a, b in pairs:
            uf.union(a, b)
    drop = set(cs)
    kept = [(cr, s) for ci, (cr, s) in enumerate(zip(d.crossings, d.signs)) if ci not in drop]
    remaining = {uf.find(a) for cr, _ in kept for a in cr}
    loops = len({uf.find(a) for a in d.arcs} - remaining)
    crossings = [tuple(uf.find(a) for a in cr) for cr, _ in kept]
    marked = d.marked_arc
    if marked is not None and marked > 0:
        root = uf.find(marked)
        if root in remaining:
            marked = root
        else:
            # the marked strand became crossingless: it is listed first
            marked = -1
    if oriented:
        signs = [s for _, s in kept]
    else:
        signs = _propagate_roles(crossings)
    return LinkDiagram(tuple(crossings), tuple(signs), d.free_loops + loops, marked)


def relabel(d: LinkDiagram) -> LinkDiagram:
    """Relabel arcs 1..2n in order of first appearance."""
    return _compact(d.crossings, d.signs, d.free_loops, d.marked_arc)


def closure(d: LinkDiagram) -> LinkDiagram:
    """The link obtained by forgetting the tangle marking."""
    return LinkDiagram(d.crossings, d.signs, d.free_loops, None)


# ---------------------------------------------------------------------------
# adequacy
# ---------------------------------------------------------------------------


def is_plus_adequate(d: LinkDiagram) -> bool:
    full = (1 << d.n) - 1
    base = len(resolve(d, full))
    return all(len(resolve(d, full & ~(1 << a))) == base - 1 for a in range(d.n))


def is_minus_adequate(d: LinkDiagram) -> bool:
    base = len(resolve(d, 0))
    return all(len(resolve(d, 1 << a)) == base - 1 for a in range(d.n))


# ---------------------------------------------------------------------------
# faces and local moves
# ---------------------------------------------------------------------------


def faces(d: LinkDiagram) -> list[list[tuple[int, bool]]]:
    """Faces as cyclic lists of ``(arc, forward)``, each face on the left.

    ``forward`` tells whether the boundary walk follows the arc's orientation.
    """
    occ = d.occurrences
    seen: set[tuple[int, int]] = set()
    out = []
    for ci in range(d.n):
        for s in range(4):
            if (ci, s) in seen:
                continue
            face = []
            dart = (ci, s)
            while dart not in seen:
                seen.add(dart)
                c0, s0 = dart
                arc = d.crossings[c0][s0]
                forward = d.role(c0, s0) == OUT
                face.append((arc, forward))
                ends = occ[arc]
                far = ends[1] if ends[0] == dart else ends[0]
                dart = (far[0], (far[1] - 1) % 4)
            out.append(face)
    return out


def apply_r1(d: LinkDiagram, arc: int, kind: str) -> LinkDiagram:
    """Insert a curl on ``arc``; ``kind`` is ``"left"`` (y+1) or ``"right"`` (x+1).

    The new crossing is appended last.
    """
    if kind not in ("left", "right"):
        raise ValueError("kind must be 'left' or 'right'")
    top = max(d.arcs, default=0)
    loop_label, out_label = top + 1, top + 2
    crossings = [list(cr) for cr in d.crossings]
    loops = d.free_loops
    marked = d.marked_arc
    if arc < 0:
        if not d.has_arc(arc):
            raise ArcNotFound(arc)
        loops -= 1
        a_in = a_out = out_label
        if marked is not None and marked == arc:
            marked = out_label
        elif marked is not None and marked < arc:
            marked += 1
    else:
        if not d.has_arc(arc):
            raise ArcNotFound(arc)
        hc, hs = d.head(arc)
        crossings[hc][hs] = out_label
        a_in, a_out = arc, out_label
    if kind == "left":
        new, sign = [a_in, a_out, loop_label, loop_label], 1
    else:
        new, sign = [loop_label, a_in, a_out, loop_label], -1
    crossings.append(new)
    return LinkDiagram(tuple(tuple(cr) for cr in crossings), d.signs + (sign,), loops, marked)


def curl_crossing(d: LinkDiagram, c: int, loop: int | None = None) -> tuple[str, int] | None:
    """If crossing ``c`` is a curl return ``(kind, loop_label)``.

    A curl drawn on a crossingless circle has two lobes; ``loop`` picks the
    lobe to treat as the curl.
    """
    cr = d.crossings[c]
    for s in range(4):
        if cr[s] == cr[(s + 1) % 4] and (loop is None or cr[s] == loop):
            kind = "left" if d.signs[c] > 0 else "right"
            return kind, cr[s]
    return None


def remove_r1(d: LinkDiagram, c: int, loop: int | None = None) -> LinkDiagram:
    """Remove the curl at crossing ``c`` (whose lobe is ``loop`` when given)."""
    info = curl_crossing(d, c, loop)
    if info is None:
        raise ValueError(f"crossing {c} is not a curl")
    _, loop = info
    cr = d.crossings[c]
    others = [a for a in cr if a != loop]
    if len(others) == 0:
        raise ValueError("degenerate curl")
    pairs = [(loop, others[0]), (loop, others[-1])]
    return _remove_crossings(d, [c], [pairs])


def bigon_crossings(d: LinkDiagram, p: int, q: int) -> tuple[int, int]:
    """Return the two arcs shared by crossings ``p`` and ``q`` if they bound a bigon."""
    cp, cq = d.crossings[p], d.crossings[q]
    shared = [a for a in set(cp) if a in cq]
    if len(shared) != 2 or len(set(cp)) != 4 or len(set(cq)) != 4:
        raise NotABigon(f"crossings {p} and {q} do not share exactly two arcs")
    under = [a for a in shared if cp.index(a) in (0, 2) and cq.index(a) in (0, 2)]
    over = [a for a in shared if cp.index(a) in (1, 3) and cq.index(a) in (1, 3)]
    if len(under) != 1 or len(over) != 1:
        raise NotABigon(f"crossings {p} and {q} do not have the same strand on top")
    if not any(sorted(a for a, _ in f) == sorted(shared) for f in faces(d)):
        raise NotABigon(f"arcs {shared} do not bound a face")
    return under[0], over[0]


def remove_r2(d: LinkDiagram, p: int, q: int) -> LinkDiagram:
    """Remove the bigon bounded by crossings ``p`` and ``q``."""
    bigon_crossings(d, p, q)
    pairs = []
    for c in (p, q):
        i, j, k, l = d.crossings[c]
        pairs.append(((i, k), (j, l)))
    return _remove_crossings(d, [p, q], pairs)


def common_faces(d: LinkDiagram, a: int, b: int) -> list[int]:
    fs = faces(d)
    return [idx for idx, f in enumerate(fs) if any(x == a for x, _ in f) and any(x == b for x, _ in f)]


def apply_r2(d: LinkDiagram, over: int, under: int, face: int | None = None) -> LinkDiagram:
    """Push arc ``over`` across a face and over arc ``under``, making a bigon.

    The two arcs must lie on a common face.  The two new crossings are
    appended at the end, in the order in which ``over`` meets them.
    """
    if over == under:
        raise ArcsNotAdjacent("a bigon needs two different arcs")
    for a in (over, under):
        if a < 0 or not d.has_arc(a):
            raise ArcNotFound(a)
    fs = faces(d)
    candidates = common_faces(d, over, under)
    if face is None:
        if not candidates:
            raise ArcsNotAdjacent(f"arcs {over} and {under} share no face")
        face = candidates[0]
    elif face not in candidates:
        raise ArcsNotAdjacent(f"face {face} does not contain both arcs")
    fwd = dict(fs[face])
    # local picture: `under` on y=0 with the face above, `over` on y=2
    vb = (1 if fwd[under] else -1, 0)
    a_dir = -1 if fwd[over] else 1
    # the finger of `over` dips through y=0 at x=-1 and x=+1
    if a_dir > 0:
        stops = [((-1, 0), (1, -1)), ((1, 0), (1, 1))]
    else:
        stops = [((1, 0), (-1, -1)), ((-1, 0), (-1, 1))]
    top = max(d.arcs)
    a2, a3, b2, b3 = top + 1, top + 2, top + 3, top + 4
    b_order = sorted([s[0] for s in stops], key=lambda p: p[0] * vb[0])
    crossings = [list(cr) for cr in d.crossings]
    ha, hb = d.head(over), d.head(under)
    crossings[ha[0]][ha[1]] = a3
    crossings[hb[0]][hb[1]] = b3
    new_crossings, new_signs = [], []
    for idx, (pos, va) in enumerate(stops):
        a_in, a_out = (over, a2) if idx == 0 else (a2, a3)
        b_in, b_out = (under, b2) if pos == b_order[0] else (b2, b3)
        half = [
            (_angle((-vb[0], -vb[1])), b_in),
            (_angle(vb), b_out),
            (_angle((-va[0], -va[1])), a_in),
            (_angle(va), a_out),
        ]
        start = half[0][0]
        half.sort(key=lambda h: (h[0] - start) % 360)
        new_crossings.append([lab for _, lab in half])
        cross = va[0] * vb[1] - va[1] * vb[0]
        new_signs.append(1 if cross > 0 else -1)
    crossings.extend(new_crossings)
    out = LinkDiagram(tuple(tuple(cr) for cr in crossings), d.signs + tuple(new_signs), d.free_loops, d.marked_arc)
    _check_sign_consistency(out.crossings, out.signs)
    return out


def _angle(v: tuple[int, int]) -> float:
    import math

    return math.degrees(math.atan2(v[1], v[0])) % 360
