"""Cube of resolutions and the bigraded chain complex built from it.

Basis elements of a vertex ``D(lam)`` are pairs ``(mask, p)``: bit ``t`` of
``mask`` is set when the circle at position ``t`` (circles sorted by id) carries
``X`` rather than ``1``, and ``p`` is the power of ``c``.  The q-degree of a
basis element of ``C(D)`` is

    (#1 - #X) + |lam| - 2 x(D) + y(D) + 2 p

and its homological degree is ``|lam| - x(D)``.  The edge ``(lam, a)`` carries
the sign ``(-1)^{#{b in lam : b < a}}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Hashable, Iterable, Sequence

from .algebra import Ring
from .diagram import LinkDiagram, _UnionFind, resolution_pairs
from .errors import DegreeWindowTooSmall, NotATwistChain, OutOfWindow

Key = Hashable
Column = dict  # target index -> coefficient


# ---------------------------------------------------------------------------
# circle states and saddles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StateInfo:
    """Circles of one resolution, in a form convenient for linear algebra.

    ``ids`` are the sorted circle identifiers (smallest arc label, or the
    negative id of a free loop); ``pos`` maps each arc label and free-loop id
    to the position of its circle; ``reps`` gives one label per position.
    """

    ids: tuple[int, ...]
    pos: dict[int, int] = field(compare=False, hash=False)
    reps: tuple[int, ...] = field(compare=False, hash=False)

    @property
    def k(self) -> int:
        return len(self.ids)


def trace_state(
    arcs: Iterable[int],
    pairs: Iterable[tuple[int, int]],
    free_loops: int = 0,
    extra_loops: Sequence[int] = (),
) -> StateInfo:
    """Union-find the arcs along ``pairs`` and number the circles.

    ``extra_loops`` adds further crossingless circles with the given (negative)
    identifiers, used for circles that live outside the PD code.
    """
    arcs = list(arcs)
    uf = _UnionFind(arcs)
    for a, b in pairs:
        uf.union(a, b)
    groups: dict[int, list[int]] = {}
    for a in arcs:
        groups.setdefault(uf.find(a), []).append(a)
    circles = [(min(g), g) for g in groups.values()]
    loop_ids = [-(t + 1) for t in range(free_loops)] + list(extra_loops)
    circles.extend((lid, [lid]) for lid in loop_ids)
    circles.sort()
    pos: dict[int, int] = {}
    for p, (_, members) in enumerate(circles):
        for a in members:
            pos[a] = p
    return StateInfo(tuple(cid for cid, _ in circles), pos, tuple(cid for cid, _ in circles))


@dataclass(frozen=True)
class SaddleMap:
    """A merge or split between two states, identity on untouched circles.

    ``perm[t]`` is the target position of untouched source circle ``t`` and
    ``-1`` for the affected ones.
    """

    kind: str
    src: tuple[int, ...]
    dst: tuple[int, ...]
    perm: tuple[int, ...]

    def apply(self, mask: int, p: int, zc: bool) -> list[tuple[int, int, int]]:
        rest = 0
        perm = self.perm
        m = mask
        t = 0
        while m:
            if m & 1 and perm[t] >= 0:
                rest |= 1 << perm[t]
            m >>= 1
            t += 1
        if self.kind == "merge":
            b1 = mask >> self.src[0] & 1
            b2 = mask >> self.src[1] & 1
            if b1 and b2:
                return []
            return [(rest | ((b1 | b2) << self.dst[0]), p, 1)]
        q1, q2 = self.dst
        if mask >> self.src[0] & 1:
            return [(rest | 1 << q1 | 1 << q2, p, 1)]
        out = [(rest | 1 << q2, p, 1), (rest | 1 << q1, p, 1)]
        if zc:
            out.append((rest | 1 << q1 | 1 << q2, p + 1, 1))
        return out


def make_saddle(
    src: StateInfo,
    dst: StateInfo,
    src_arcs: tuple[int, int],
    dst_arcs: tuple[int, int],
    label_map: Callable[[int], int | None] | None = None,
) -> SaddleMap:
    """Saddle joining the circles of ``src_arcs`` (in ``src``) into ``dst``.

    ``label_map`` translates source labels to target labels when the two
    states come from different diagrams; untouched circles are matched through
    their representative labels.
    """
    p1, p2 = src.pos[src_arcs[0]], src.pos[src_arcs[1]]
    q1, q2 = dst.pos[dst_arcs[0]], dst.pos[dst_arcs[1]]
    affected = {p1, p2}
    perm = []
    for t in range(src.k):
        if t in affected:
            perm.append(-1)
            continue
        perm.append(_match(src, dst, t, label_map))
    if p1 != p2:
        if q1 != q2:
            raise ValueError("merge saddle must produce a single circle")
        return SaddleMap("merge", (p1, p2), (q1,), tuple(perm))
    if q1 == q2:
        raise ValueError("split saddle must produce two circles")
    return SaddleMap("split", (p1,), (q1, q2), tuple(perm))


def _match(src: StateInfo, dst: StateInfo, t: int, label_map) -> int:
    for label, pos in src.pos.items():
        if pos != t:
            continue
        target = label if label_map is None else label_map(label)
        if target is not None and target in dst.pos:
            return dst.pos[target]
    raise ValueError(f"circle {src.ids[t]} has no counterpart in the target state")


def circle_correspondence(
    src: StateInfo, dst: StateInfo, label_map: Callable[[int], int | None] | None = None, skip=()
) -> tuple[int, ...]:
    """Position map between states with identical circle structure."""
    return tuple(-1 if t in skip else _match(src, dst, t, label_map) for t in range(src.k))


def transport(mask: int, perm: Sequence[int]) -> int:
    out = 0
    t = 0
    while mask:
        if mask & 1:
            out |= 1 << perm[t]
        mask >>= 1
        t += 1
    return out


def popcount(v: int) -> int:
    return bin(v).count("1")


# ---------------------------------------------------------------------------
# the state cube
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SignAssignment:
    """Edge signs ``(-1)^{#{b in lam : b < a}}`` for a fixed crossing order."""

    n: int

    def sign(self, lam: int, a: int) -> int:
        return -1 if popcount(lam & ((1 << a) - 1)) & 1 else 1

    def edges(self) -> dict[tuple[int, int], int]:
        return {
            (lam, a): self.sign(lam, a)
            for lam in range(1 << self.n)
            for a in range(self.n)
            if not lam >> a & 1
        }


def sign_assignment(n: int) -> SignAssignment:
    return SignAssignment(n)


class StateCube:
    """Vertices ``D(lam)`` and merge/split edges over a set of crossings.

    ``active`` lists the crossings that vary along the cube (all of them for
    the ordinary cube).  ``fixed_pairs`` are arc pairs joined in every state
    and ``excluded`` are arcs that are dropped, which is how the twist-chain
    reduction describes its smaller diagrams.
    """

    def __init__(
        self,
        d: LinkDiagram,
        ring: Ring | str = Ring.Z,
        active: Sequence[int] | None = None,
        fixed_pairs: Sequence[tuple[int, int]] = (),
        excluded: Iterable[int] = (),
    ):
        self.d = d
        self.ring = Ring.coerce(ring)
        self.active = tuple(range(d.n)) if active is None else tuple(active)
        self.n = len(self.active)
        self.fixed_pairs = tuple(fixed_pairs)
        excluded = set(excluded)
        self.arcs = tuple(a for a in d.arcs if a not in excluded)
        self.states = [self._trace(lam) for lam in range(1 << self.n)]
        self._edges: dict[tuple[int, int], SaddleMap] = {}
        self.signs = SignAssignment(self.n)

    def _trace(self, lam: int) -> StateInfo:
        pairs = list(self.fixed_pairs)
        for bit, ci in enumerate(self.active):
            pairs.extend(resolution_pairs(self.d.crossings[ci], bool(lam >> bit & 1)))
        return trace_state(self.arcs, pairs, self.d.free_loops)

    def ncirc(self, lam: int) -> int:
        return self.states[lam].k

    def edge(self, lam: int, a: int) -> SaddleMap:
        """The saddle from ``D(lam)`` to ``D(lam + a)``; ``a`` is a cube bit."""
        key = (lam, a)
        sm = self._edges.get(key)
        if sm is None:
            i, j, k, _ = self.d.crossings[self.active[a]]
            sm = make_saddle(self.states[lam], self.states[lam | 1 << a], (i, k), (i, j))
            self._edges[key] = sm
        return sm

    def vertex_basis(self, lam: int) -> list[tuple[int, int]]:
        """Words of ``D(lam)`` as ``(mask, degree)`` with the ``{-|lam|}`` shift."""
        k = self.ncirc(lam)
        shift = popcount(lam)
        return [(mask, k - 2 * popcount(mask) + shift) for mask in words(k)]

    def face_commutes(self, lam: int, a: int, b: int) -> bool:
        """Check that the square at ``lam`` in directions ``a``, ``b`` commutes."""
        zc = self.ring is Ring.ZC
        for mask in range(1 << self.ncirc(lam)):
            left = _compose(self.edge(lam, a), self.edge(lam | 1 << a, b), mask, zc)
            right = _compose(self.edge(lam, b), self.edge(lam | 1 << b, a), mask, zc)
            if left != right:
                return False
        return True


def _compose(first: SaddleMap, second: SaddleMap, mask: int, zc: bool) -> dict:
    out: dict = {}
    for m1, p1, c1 in first.apply(mask, 0, zc):
        for m2, p2, c2 in second.apply(m1, p1, zc):
            out[(m2, p2)] = out.get((m2, p2), 0) + c1 * c2
    return {key: v for key, v in out.items() if v}


def build_cube(d: LinkDiagram, ring: Ring | str = Ring.Z) -> StateCube:
    return StateCube(d, ring)


_WORDS: dict[int, list[int]] = {}


def words(k: int) -> list[int]:
    """All masks on ``k`` circles in lexicographic word order (1 < X)."""
    out = _WORDS.get(k)
    if out is None:
        out = sorted(range(1 << k), key=lambda m: [m >> t & 1 for t in range(k)])
        _WORDS[k] = out
    return out


_WORDS_T: dict[tuple[int, int], list[int]] = {}


def words_with(k: int, t: int) -> list[int]:
    """Masks on ``k`` circles with exactly ``t`` letters X, in word order."""
    key = (k, t)
    out = _WORDS_T.get(key)
    if out is None:
        out = [m for m in words(k) if popcount(m) == t]
        _WORDS_T[key] = out
    return out


# ---------------------------------------------------------------------------
# bigraded complexes
# ---------------------------------------------------------------------------


class BigradedComplex:
    """Per-bidegree bases and sparse differentials ``C^{i}_j -> C^{i+1}_j``.

    ``bases[(i, j)]`` is the ordered basis and ``diffs[(i, j)]`` the list of
    columns of ``d^i_j``, each a ``{row: coefficient}`` map into the basis of
    ``(i + 1, j)``.
    """

    def __init__(
        self,
        ring: Ring | str,
        bases: dict[tuple[int, int], list[Key]],
        diffs: dict[tuple[int, int], list[Column]],
        x: int = 0,
        y: int = 0,
        window: tuple[int, int] | None = None,
        meta: dict | None = None,
    ):
        self.ring = Ring.coerce(ring)
        self.bases = {k: v for k, v in bases.items() if v}
        self.diffs = {k: v for k, v in diffs.items() if k in self.bases}
        self.x, self.y = x, y
        self.window = window
        self.meta = dict(meta or {})
        self._index: dict[tuple[int, int], dict[Key, int]] = {}

    # -- shape ----------------------------------------------------------------

    @property
    def js(self) -> list[int]:
        if self.window is not None:
            return list(range(self.window[0], self.window[1] + 1))
        return sorted({j for _, j in self.bases})

    @property
    def is_(self) -> list[int]:
        return sorted({i for i, _ in self.bases})

    def rank(self, i: int, j: int) -> int:
        self._check(j)
        return len(self.bases.get((i, j), ()))

    def _check(self, j: int) -> None:
        if self.window is not None and not self.window[0] <= j <= self.window[1]:
            raise OutOfWindow(f"q-degree {j} outside the computed window {self.window}")

    def index(self, i: int, j: int) -> dict[Key, int]:
        idx = self._index.get((i, j))
        if idx is None:
            idx = {key: n for n, key in enumerate(self.bases.get((i, j), ()))}
            self._index[(i, j)] = idx
        return idx

    def matrix(self, i: int, j: int) -> list[Column]:
        """Columns of ``d^i_j``; empty when either side vanishes."""
        self._check(j)
        if (i, j) not in self.bases:
            return []
        return self.diffs.get((i, j), [{} for _ in self.bases[(i, j)]])

    def dense(self, i: int, j: int) -> list[list[int]]:
        cols = self.matrix(i, j)
        rows = self.rank(i + 1, j)
        out = [[0] * len(cols) for _ in range(rows)]
        for c, col in enumerate(cols):
            for r, v in col.items():
                out[r][c] = v
        return out

    # -- checks ---------------------------------------------------------------

    def d_squared_zero(self) -> bool:
        for (i, j), cols in self.diffs.items():
            nxt = self.diffs.get((i + 1, j))
            if not nxt:
                continue
            for col in cols:
                acc: dict[int, int] = {}
                for r, v in col.items():
                    for r2, v2 in nxt[r].items():
                        acc[r2] = acc.get(r2, 0) + v * v2
                if any(acc.values()):
                    return False
        return True

    def euler(self, j: int) -> int:
        return sum((-1) ** (i % 2) * len(b) for (i, jj), b in self.bases.items() if jj == j)

    # -- export -----------------------------------------------------------------

    def to_json(self) -> dict:
        groups = []
        for (i, j) in sorted(self.bases, key=lambda t: (t[1], t[0])):
            cols = self.diffs.get((i, j), [])
            triplets = sorted((c, r, v) for c, col in enumerate(cols) for r, v in col.items())
            groups.append(
                {"i": i, "j": j, "rank": len(self.bases[(i, j)]), "d": [[r, c, v] for c, r, v in triplets]}
            )
        return {
            "schema": 1,
            "ring": self.ring.value,
            "x": self.x,
            "y": self.y,
            "window": list(self.window) if self.window else None,
            "groups": groups,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def complex_from_generators(
    ring: Ring | str,
    gens: dict[tuple[int, int], list[Key]],
    differential: Callable[[Key], dict[Key, int]],
    x: int = 0,
    y: int = 0,
    window: tuple[int, int] | None = None,
    meta: dict | None = None,
) -> BigradedComplex:
    """Assemble a complex from bases and a function giving ``d(key)``.

    The differential must preserve ``j`` and raise ``i`` by one; keys outside
    the target basis are an error.
    """
    cplx = BigradedComplex(ring, gens, {}, x, y, window, meta)
    for (i, j), basis in cplx.bases.items():
        target = cplx.index(i + 1, j)
        cols = []
        for key in basis:
            col: dict[int, int] = {}
            for tk, v in differential(key).items():
                if not v:
                    continue
                try:
                    r = target[tk]
                except KeyError:
                    raise ValueError(f"differential of {key} leaves the bidegree ({i + 1}, {j})") from None
                nv = col.get(r, 0) + v
                if nv:
                    col[r] = nv
                else:
                    col.pop(r, None)
            cols.append(col)
        cplx.diffs[(i, j)] = cols
    return cplx


# ---------------------------------------------------------------------------
# the Khovanov complex of a diagram
# ---------------------------------------------------------------------------


def degree_shift(d: LinkDiagram) -> int:
    """The amount added to ``(#1 - #X) + |lam| + 2p`` to get the q-degree."""
    return d.y - 2 * d.x


def j_min(cube: StateCube) -> int:
    """Smallest q-degree carrying a nonzero chain group."""
    shift = degree_shift(cube.d)
    return min(popcount(lam) - cube.ncirc(lam) for lam in range(1 << cube.n)) + shift


def j_max_c0(cube: StateCube) -> int:
    shift = degree_shift(cube.d)
    return max(popcount(lam) + cube.ncirc(lam) for lam in range(1 << cube.n)) + shift


def default_window(d: LinkDiagram, cube: StateCube | None = None) -> tuple[int, int]:
    """``[j_min, j_min + 2n + 8]``, the default window for Z[c] work."""
    cube = cube or StateCube(d, Ring.ZC)
    lo = j_min(cube)
    return lo, lo + 2 * d.n + 8


def slice_generators(cube: StateCube, j: int) -> dict[int, list[tuple[int, int, int]]]:
    """Basis keys ``(lam, mask, p)`` of every ``C^{i}_j``, grouped by ``i``."""
    shift = degree_shift(cube.d)
    x = cube.d.x
    zc = cube.ring is Ring.ZC
    out: dict[int, list[tuple[int, int, int]]] = {}
    for lam in range(1 << cube.n):
        k = cube.ncirc(lam)
        size = popcount(lam)
        base = k + size + shift  # degree of the all-1 word with p = 0
        keys = []
        if zc:
            p = 0
            # t = (base + 2p - j) / 2 X-letters, 0 <= t <= k
            while True:
                twice_t = base + 2 * p - j
                if twice_t > 2 * k:
                    break
                if twice_t >= 0 and twice_t % 2 == 0:
                    t = twice_t // 2
                    keys.extend((mask, p) for mask in words_with(k, t))
                p += 1
            keys.sort(key=lambda mp: (words_rank(k, mp[0]), mp[1]))
        else:
            twice_t = base - j
            if 0 <= twice_t <= 2 * k and twice_t % 2 == 0:
                keys = [(mask, 0) for mask in words_with(k, twice_t // 2)]
        if keys:
            out.setdefault(size - x, []).extend((lam, m, p) for m, p in keys)
    return out


_RANK: dict[int, dict[int, int]] = {}


def words_rank(k: int, mask: int) -> int:
    r = _RANK.get(k)
    if r is None:
        r = {m: n for n, m in enumerate(words(k))}
        _RANK[k] = r
    return r[mask]


def cube_differential(cube: StateCube, key: tuple[int, int, int]) -> dict[tuple[int, int, int], int]:
    lam, mask, p = key
    zc = cube.ring is Ring.ZC
    out: dict[tuple[int, int, int], int] = {}
    for a in range(cube.n):
        if lam >> a & 1:
            continue
        sign = cube.signs.sign(lam, a)
        tgt = lam | 1 << a
        for m2, p2, v in cube.edge(lam, a).apply(mask, p, zc):
            tk = (tgt, m2, p2)
            out[tk] = out.get(tk, 0) + sign * v
    return out


def slice_complex(cube: StateCube, j: int) -> tuple[dict[int, list], dict[int, list[Column]]]:
    """Bases and differential columns of the q-degree ``j`` part."""
    gens = slice_generators(cube, j)
    index = {i: {key: n for n, key in enumerate(keys)} for i, keys in gens.items()}
    diffs: dict[int, list[Column]] = {}
    for i, keys in gens.items():
        target = index.get(i + 1, {})
        cols = []
        for key in keys:
            col = {}
            for tk, v in cube_differential(cube, key).items():
                if v:
                    col[target[tk]] = col.get(target[tk], 0) + v
            cols.append({r: v for r, v in col.items() if v})
        diffs[i] = cols
    return gens, diffs


def assemble_complex(
    cube: StateCube,
    signs: SignAssignment | None = None,
    x: int | None = None,
    y: int | None = None,
    window: tuple[int, int] | None = None,
) -> BigradedComplex:
    """The complex ``C(D)`` on the requested q-window.

    Over ``Z`` the window defaults to the full support.  Over ``Z[c]`` a window
    is required, since every ``C^{i}_j`` with ``j`` large enough is nonzero.
    """
    d = cube.d
    if signs is not None and signs.n != cube.n:
        raise ValueError("sign assignment does not match the cube")
    if x is not None and (x, y) != (d.x, d.y):
        raise ValueError("x, y must match the diagram")
    if window is None:
        if cube.ring is Ring.ZC:
            raise DegreeWindowTooSmall("a q-degree window is required over Z[c]")
        window = (j_min(cube), j_max_c0(cube))
    lo, hi = window
    if lo > hi:
        raise DegreeWindowTooSmall(f"empty window {window}")
    bases: dict[tuple[int, int], list] = {}
    diffs: dict[tuple[int, int], list] = {}
    for j in range(lo, hi + 1):
        gens, dj = slice_complex(cube, j)
        for i, keys in gens.items():
            bases[(i, j)] = keys
            diffs[(i, j)] = dj[i]
    return BigradedComplex(cube.ring, bases, diffs, d.x, d.y, (lo, hi), {"kind": "cube", "n": d.n})


def khovanov_complex(
    d: LinkDiagram, ring: Ring | str = Ring.Z, window: tuple[int, int] | None = None
) -> BigradedComplex:
    cube = StateCube(d, ring)
    if window is None and cube.ring is Ring.ZC:
        window = default_window(d, cube)
    return assemble_complex(cube, window=window)


# ---------------------------------------------------------------------------
# twist-chain reduction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwistChain:
    chain: tuple[int, ...]
    internal: frozenset[int]
    left: tuple[int, int]
    right: tuple[int, int]


def analyse_twist_chain(d: LinkDiagram, chain: Sequence[int]) -> TwistChain:
    """Check the twist pattern and find the internal arcs and the end pairs.

    Consecutive crossings must share exactly two arcs, and those two arcs must
    form a small circle when both crossings are 0-resolved.
    """
    chain = tuple(chain)
    if len(chain) < 2:
        raise NotATwistChain("a twist chain needs at least two crossings")
    if len(set(chain)) != len(chain) or any(not 0 <= c < d.n for c in chain):
        raise NotATwistChain(f"invalid crossing indices {chain}")
    internal: set[int] = set()
    for c1, c2 in zip(chain, chain[1:]):
        cr1, cr2 = d.crossings[c1], d.crossings[c2]
        shared = set(cr1) & set(cr2)
        if len(shared) == 4 and len(chain) == 2:
            # two crossings sharing all four arcs (the Hopf diagram): either
            # common 0-resolution circle can play the internal one
            pairs2 = {frozenset(p) for p in resolution_pairs(cr2, False)}
            common = [set(p) for p in resolution_pairs(cr1, False) if frozenset(p) in pairs2]
            if common:
                shared = common[-1]
        if len(shared) != 2 or len(set(cr1)) != 4 or len(set(cr2)) != 4:
            raise NotATwistChain(f"crossings {c1} and {c2} do not share exactly two arcs")
        for cr in (cr1, cr2):
            if set(resolution_pairs(cr, False)[0]) != shared and set(resolution_pairs(cr, False)[1]) != shared:
                raise NotATwistChain(
                    f"the 0-resolutions at {c1}, {c2} do not close arcs {sorted(shared)} into a circle"
                )
        if shared & internal:
            raise NotATwistChain("twist chain folds back on itself")
        internal |= shared
    first = [a for a in d.crossings[chain[0]] if a not in internal]
    last = [a for a in d.crossings[chain[-1]] if a not in internal]
    if len(first) != 2 or len(last) != 2:
        raise NotATwistChain("chain ends do not have two free arcs each")
    for c in chain[1:-1]:
        if any(a not in internal for a in d.crossings[c]):
            raise NotATwistChain(f"interior crossing {c} touches arcs outside the chain")
    return TwistChain(chain, frozenset(internal), tuple(first), tuple(last))


def twist_chain_reduce(
    d: LinkDiagram,
    chain: Sequence[int],
    ring: Ring | str = Ring.Z,
    window: tuple[int, int] | None = None,
) -> BigradedComplex:
    """The small complex ``C'`` obtained by collapsing a twist chain.

    Positions ``s = 0..k-1`` carry copies of ``C̄(D0){k-1-2s}``, position
    ``k`` carries ``C̄(D1){-k}``.  The map out of position ``s <= k-2`` is
    ``u_X - (-1)^{k-s} l_X`` and the last map is the saddle ``w``; the total
    differential is ``(-1)^s d_inner + horizontal``.
    """
    ring = Ring.coerce(ring)
    info = analyse_twist_chain(d, chain)
    k = len(info.chain)
    rest = tuple(c for c in range(d.n) if c not in info.chain)
    one_pairs = [p for c in info.chain for p in resolution_pairs(d.crossings[c], True)]
    cube1 = StateCube(d, ring, active=rest, fixed_pairs=one_pairs)
    cube0 = StateCube(d, ring, active=rest, fixed_pairs=[info.left, info.right], excluded=info.internal)
    zc = ring is Ring.ZC
    x = d.x
    shift = degree_shift(d)
    nrest = len(rest)
    w_maps = [_twist_saddle(cube0.states[lam], cube1.states[lam], info) for lam in range(1 << nrest)]

    def position_shift(s: int) -> int:
        return -(k - 1 - 2 * s) if s < k else k

    def jdeg(s: int, lam: int, mask: int, p: int, kc: int) -> int:
        return kc - 2 * popcount(mask) + popcount(lam) + position_shift(s) + shift + 2 * p

    if window is None:
        if zc:
            lo = min(
                jdeg(s, lam, (1 << kc) - 1, 0, kc)
                for s in range(k + 1)
                for lam in range(1 << nrest)
                for kc in [(cube0 if s < k else cube1).ncirc(lam)]
            )
            window = (lo, lo + 2 * d.n + 8)
        else:
            degs = [
                jdeg(s, lam, m, 0, kc)
                for s in range(k + 1)
                for lam in range(1 << nrest)
                for kc in [(cube0 if s < k else cube1).ncirc(lam)]
                for m in (0, (1 << kc) - 1)
            ]
            window = (min(degs), max(degs))
    lo, hi = window
    gens: dict[tuple[int, int], list] = {}
    for s in range(k + 1):
        cube = cube0 if s < k else cube1
        for lam in range(1 << nrest):
            kc = cube.ncirc(lam)
            for mask in words(kc):
                base = jdeg(s, lam, mask, 0, kc)
                p = 0
                while base + 2 * p <= hi:
                    j = base + 2 * p
                    if j >= lo:
                        gens.setdefault((s + popcount(lam) - x, j), []).append((s, lam, mask, p))
                    if not zc:
                        break
                    p += 1
    for keys in gens.values():
        keys.sort()

    def differential(key):
        s, lam, mask, p = key
        out: dict = {}

        def add(tk, v):
            out[tk] = out.get(tk, 0) + v

        cube = cube0 if s < k else cube1
        inner_sign = -1 if s % 2 else 1
        for a in range(nrest):
            if lam >> a & 1:
                continue
            sg = inner_sign * cube.signs.sign(lam, a)
            for m2, p2, v in cube.edge(lam, a).apply(mask, p, zc):
                add((s, lam | 1 << a, m2, p2), sg * v)
        if s <= k - 2:
            st = cube0.states[lam]
            u = st.pos[info.left[0]]
            l = st.pos[info.right[0]]
            lsign = -((-1) ** ((k - s) % 2))
            if not mask >> u & 1:
                add((s + 1, lam, mask | 1 << u, p), 1)
            if not mask >> l & 1:
                add((s + 1, lam, mask | 1 << l, p), lsign)
        elif s == k - 1:
            for m2, p2, v in w_maps[lam].apply(mask, p, zc):
                add((k, lam, m2, p2), v)
        return {tk: v for tk, v in out.items() if v}

    return complex_from_generators(
        ring, gens, differential, d.x, d.y, window, {"kind": "twist", "chain": list(info.chain)}
    )


def _twist_saddle(s0: StateInfo, s1: StateInfo, info: TwistChain) -> SaddleMap:
    """The saddle turning the two caps of ``D0`` into the strands of ``D1``."""
    left_circle = s0.pos[info.left[0]]
    right_circle = s0.pos[info.right[0]]
    a, b = info.left
    if left_circle != right_circle:
        return make_saddle(s0, s1, (info.left[0], info.right[0]), (a, a))
    # split: the two left ends end up on different strands of D1
    return make_saddle(s0, s1, (info.left[0], info.right[0]), (a, b))
