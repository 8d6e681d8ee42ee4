"""Movies, the chain maps they induce, and closed-surface invariants.

A movie starts from a diagram and applies elementary moves: births and deaths
of crossingless circles, oriented saddles (fusions) between two arcs, and
Reidemeister I/II moves.  Each move gives a chain map between the complexes of
consecutive frames; every map is checked against the differentials when it is
built.  Third Reidemeister moves are rejected.
"""

from __future__ import annotations

import json
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .algebra import Ring
from .cube import (
    BigradedComplex,
    StateCube,
    assemble_complex,
    circle_correspondence,
    j_max_c0,
    j_min,
    make_saddle,
    popcount,
)
from .diagram import (
    LinkDiagram,
    _swap_heads,
    apply_r1,
    apply_r2,
    bigon_crossings,
    curl_crossing,
    diagram_from_json,
    faces,
    parse_pd,
    remove_r1,
    remove_r2,
    resolution_pairs,
)
from .errors import ArcNotFound, ArcsNotAdjacent, FramesMismatch, MalformedSyntax, NonEmptyEnds, UnsupportedMove
from .homology import all_homology, homology_basis
from .laurent import LaurentPoly

Key = tuple[int, int, int]
Image = dict[Key, int]

# q-degree shift of each move: the Euler characteristic of the traced piece
MOVE_SHIFT = {"birth": 1, "death": 1, "fusion": -1, "r1": 0, "r1_remove": 0, "r2": 0, "r2_remove": 0}

EMPTY = LinkDiagram((), (), 0, None)


# ---------------------------------------------------------------------------
# moves and movies
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Move:
    """One elementary move; ``args`` holds its location data."""

    op: str
    args: tuple[tuple[str, object], ...] = ()

    def get(self, name: str, default=None):
        return dict(self.args).get(name, default)

    @classmethod
    def from_json(cls, data: Mapping) -> Move:
        if "op" not in data:
            raise MalformedSyntax(f"move without 'op': {data}")
        op = str(data["op"]).lower()
        if op == "r3":
            raise UnsupportedMove("third Reidemeister moves have no chain map here")
        if op not in MOVE_SHIFT:
            raise MalformedSyntax(f"unknown move {op!r}")
        args = tuple(sorted((k, _freeze(v)) for k, v in data.items() if k != "op"))
        return cls(op, args)

    def to_json(self) -> dict:
        out = {"op": self.op}
        out.update({k: list(v) if isinstance(v, tuple) else v for k, v in self.args})
        return out


def _freeze(v):
    return tuple(v) if isinstance(v, list) else v


@dataclass
class Movie:
    initial: LinkDiagram
    moves: list[Move] = field(default_factory=list)

    @classmethod
    def from_json(cls, data: Mapping) -> Movie:
        init = data.get("initial", "")
        if isinstance(init, str):
            initial = parse_pd(init) if init.strip() else EMPTY
        elif isinstance(init, Mapping):
            initial = diagram_from_json(init)
        elif isinstance(init, list):
            initial = parse_pd(json.dumps(init)) if init else EMPTY
        else:
            raise MalformedSyntax("'initial' must be a PD string, a list or a diagram object")
        moves = [Move.from_json(m) for m in data.get("moves", [])]
        return cls(initial, moves)

    @classmethod
    def load(cls, path: str | Path) -> Movie:
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise MalformedSyntax(f"{path}: {exc}") from None
        return cls.from_json(data)

    def to_json(self) -> dict:
        return {"initial": self.initial.to_json(), "moves": [m.to_json() for m in self.moves]}

    def frames(self) -> list[LinkDiagram]:
        out = [self.initial]
        for move in self.moves:
            out.append(apply_move(out[-1], move))
        return out

    @property
    def euler_characteristic(self) -> int:
        return sum(MOVE_SHIFT[m.op] for m in self.moves)


def _loop_renumber(removed: int) -> Callable[[int], int | None]:
    """Label map after deleting free loop ``removed`` (a negative id)."""
    t = -removed - 1

    def f(label: int) -> int | None:
        if label >= 0:
            return label
        s = -label - 1
        if s == t:
            return None
        return label if s < t else label + 1

    return f


def _check_loop(d: LinkDiagram, label: int) -> None:
    if label >= 0 or -label > d.free_loops:
        raise ArcNotFound(f"no free loop {label}")


def _fusion_diagram(d: LinkDiagram, a: int, b: int) -> LinkDiagram:
    for x in (a, b):
        if not d.has_arc(x):
            raise ArcNotFound(x)
    if a > 0 and b > 0 and a != b:
        if not any(
            dict(face).get(a) is not None and dict(face).get(a) == dict(face).get(b) for face in faces(d)
        ):
            raise ArcsNotAdjacent(f"arcs {a} and {b} do not face each other with compatible orientations")
        return _swap_heads(d, a, b)
    if a == b:
        # pinch a small circle off the arc or loop
        return LinkDiagram(d.crossings, d.signs, d.free_loops + 1, d.marked_arc)
    return LinkDiagram(d.crossings, d.signs, d.free_loops - 1, d.marked_arc)


def apply_move(d: LinkDiagram, move: Move) -> LinkDiagram:
    op = move.op
    if op == "birth":
        return LinkDiagram(d.crossings, d.signs, d.free_loops + 1, d.marked_arc)
    if op == "death":
        loop = int(move.get("loop", -1))
        _check_loop(d, loop)
        return LinkDiagram(d.crossings, d.signs, d.free_loops - 1, d.marked_arc)
    if op == "fusion":
        a, b = _arcs(move)
        return _fusion_diagram(d, a, b)
    if op == "r1":
        return apply_r1(d, int(move.get("arc")), str(move.get("kind", "left")))
    if op == "r1_remove":
        loop = move.get("loop")
        return remove_r1(d, int(move.get("crossing")), None if loop is None else int(loop))
    if op == "r2":
        face = move.get("face")
        return apply_r2(d, int(move.get("over")), int(move.get("under")), None if face is None else int(face))
    if op == "r2_remove":
        p, q = sorted(int(c) for c in move.get("crossings"))
        return remove_r2(d, p, q)
    raise UnsupportedMove(op)


def _arcs(move: Move) -> tuple[int, int]:
    arcs = move.get("arcs")
    if not arcs or len(arcs) != 2:
        raise MalformedSyntax("fusion needs 'arcs': [a, b]")
    return int(arcs[0]), int(arcs[1])


# ---------------------------------------------------------------------------
# chain maps
# ---------------------------------------------------------------------------


class ChainMap:
    """Per-bidegree matrices ``C^{i,j}(source) -> C^{i,j+shift}(target)``."""

    def __init__(self, source: BigradedComplex, target: BigradedComplex, shift: int, matrices: dict):
        self.source = source
        self.target = target
        self.shift = shift
        self.matrices = matrices  # (i, j) of the source -> list of columns {row: value}

    @classmethod
    def from_function(cls, source, target, shift: int, fn: Callable[[Key], Image]) -> ChainMap:
        mats = {}
        for (i, j), keys in source.bases.items():
            index = target.index(i, j + shift)
            cols = []
            for key in keys:
                col: dict[int, int] = {}
                for tk, v in fn(key).items():
                    if not v:
                        continue
                    try:
                        r = index[tk]
                    except KeyError:
                        raise ValueError(f"image {tk} of {key} is not a basis element at ({i}, {j + shift})") from None
                    col[r] = col.get(r, 0) + v
                cols.append({r: v for r, v in col.items() if v})
            mats[(i, j)] = cols
        return cls(source, target, shift, mats)

    def column(self, i: int, j: int, c: int) -> dict[int, int]:
        return self.matrices.get((i, j), [])[c] if (i, j) in self.matrices else {}

    def apply(self, i: int, j: int, vec: Mapping[int, int]) -> dict[int, int]:
        out: dict[int, int] = {}
        cols = self.matrices.get((i, j), [])
        for c, x in vec.items():
            for r, v in cols[c].items():
                out[r] = out.get(r, 0) + x * v
        return {r: v for r, v in out.items() if v}

    def then(self, other: ChainMap) -> ChainMap:
        """The composite ``other ∘ self``."""
        mats = {}
        for (i, j), cols in self.matrices.items():
            mats[(i, j)] = [other.apply(i, j + self.shift, col) for col in cols]
        return ChainMap(self.source, other.target, self.shift + other.shift, mats)

    def failure(self) -> tuple[int, int] | None:
        """First source bidegree where ``d f != f d``, or ``None``."""
        src, tgt, s = self.source, self.target, self.shift
        for (i, j), cols in sorted(self.matrices.items()):
            dsrc = src.diffs.get((i, j), [{} for _ in cols])
            dtgt = tgt.diffs.get((i, j + s), [])
            for c, col in enumerate(cols):
                left: dict[int, int] = {}
                for r, v in col.items():
                    for r2, v2 in dtgt[r].items():
                        left[r2] = left.get(r2, 0) + v * v2
                right = self.apply(i + 1, j, dsrc[c]) if (i + 1, j) in self.matrices else {}
                left = {r: v for r, v in left.items() if v}
                if left != right:
                    return i, j
        return None

    def is_chain_map(self) -> bool:
        return self.failure() is None

    def cone(self) -> BigradedComplex:
        """Mapping cone ``C^{i+1} + C'^{i}`` with ``d(a, b) = (-d a, f a + d' b)``, graded by the target."""
        src, tgt, s = self.source, self.target, self.shift
        bases: dict[tuple[int, int], list] = {}
        spots = {(i - 1, j + s) for i, j in src.bases} | set(tgt.bases)
        for i, j in spots:
            bases[(i, j)] = [("s", k) for k in src.bases.get((i + 1, j - s), [])] + [
                ("t", k) for k in tgt.bases.get((i, j), [])
            ]
        diffs = {}
        for (i, j), keys in bases.items():
            n_src_next = len(src.bases.get((i + 2, j - s), []))
            src_d = src.diffs.get((i + 1, j - s), [])
            maps = self.matrices.get((i + 1, j - s), [])
            tgt_d = tgt.diffs.get((i, j), [])
            cols = []
            for c, (tag, _) in enumerate(keys):
                if tag == "s":
                    col = {r: -v for r, v in src_d[c].items()} if src_d else {}
                    col.update({n_src_next + r: v for r, v in maps[c].items()} if maps else {})
                else:
                    c2 = c - len(src.bases.get((i + 1, j - s), []))
                    col = {n_src_next + r: v for r, v in tgt_d[c2].items()} if tgt_d else {}
                cols.append(col)
            diffs[(i, j)] = cols
        window = None if tgt.window is None else tuple(tgt.window)
        return BigradedComplex(tgt.ring, bases, diffs, tgt.x, tgt.y, window, {"cone": True})

    def is_quasi_isomorphism(self) -> bool:
        """True when the induced map on homology is an isomorphism in every bidegree."""
        cone = self.cone()
        if not cone.d_squared_zero():
            raise AssertionError("mapping cone is not a complex")
        return not all_homology(cone).groups

    def on_homology(self, i: int, j: int) -> list[list[int]]:
        """Matrix of the induced map ``H^{i,j}(source) -> H^{i,j+shift}(target)``."""
        src = homology_basis(self.source, i, j)
        dst = homology_basis(self.target, i, j + self.shift)
        ntgt = self.target.rank(i, j + self.shift)
        columns = []
        for gen in src.generators:
            image = [0] * ntgt
            vec = {c: v for c, v in enumerate(gen) if v}
            for r, v in self.apply(i, j, vec).items():
                image[r] = v
            columns.append(dst.coords(image))
        return [[columns[c][r] for c in range(len(columns))] for r in range(len(dst.generators))]

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "shift": self.shift,
            "maps": [
                {"i": i, "j": j, "d": sorted([r, c, v] for c, col in enumerate(cols) for r, v in col.items())}
                for (i, j), cols in sorted(self.matrices.items(), key=lambda kv: (kv[0][1], kv[0][0]))
            ],
        }


# ---------------------------------------------------------------------------
# per-state building blocks
# ---------------------------------------------------------------------------


def _transport(mask: int, perm: Sequence[int]) -> int:
    out = 0
    t = 0
    while mask:
        if mask & 1 and perm[t] >= 0:
            out |= 1 << perm[t]
        mask >>= 1
        t += 1
    return out


def _add(out: Image, key: Key, v: int) -> None:
    if v:
        out[key] = out.get(key, 0) + v


def _embed(lam: int, skip: Sequence[int]) -> int:
    """Spread the bits of ``lam`` over the indices not in ``skip``."""
    out = 0
    idx = 0
    src = 0
    while lam >> src:
        while idx in skip:
            idx += 1
        if lam >> src & 1:
            out |= 1 << idx
        src += 1
        idx += 1
    return out


def _squeeze(lam: int, skip: Sequence[int]) -> int:
    out = 0
    pos = 0
    for idx in range(lam.bit_length()):
        if idx in skip:
            continue
        if lam >> idx & 1:
            out |= 1 << pos
        pos += 1
    return out


def _above(lam: int, c: int) -> int:
    return popcount(lam >> (c + 1))


class _Context:
    """Cubes and complexes of the two frames of one move."""

    def __init__(self, before: LinkDiagram, after: LinkDiagram, ring: Ring, window, shift: int):
        self.before, self.after = before, after
        self.ring = ring
        self.zc = ring is Ring.ZC
        self.src_cube = StateCube(before, ring)
        self.dst_cube = StateCube(after, ring)
        lo, hi = window
        self.source = assemble_complex(self.src_cube, window=(lo, hi))
        self.target = assemble_complex(self.dst_cube, window=(lo + shift, hi + shift))
        self.shift = shift


def _birth_fn(ctx: _Context) -> Callable[[Key], Image]:
    new_id = -(ctx.before.free_loops + 1)

    def fn(key: Key) -> Image:
        lam, mask, p = key
        s, t = ctx.src_cube.states[lam], ctx.dst_cube.states[lam]
        perm = circle_correspondence(s, t)
        assert t.pos[new_id] not in perm
        return {(lam, _transport(mask, perm), p): 1}

    return fn


def _death_fn(ctx: _Context, loop: int) -> Callable[[Key], Image]:
    relabel = _loop_renumber(loop)

    def fn(key: Key) -> Image:
        lam, mask, p = key
        s, t = ctx.src_cube.states[lam], ctx.dst_cube.states[lam]
        gone = s.pos[loop]
        perm = circle_correspondence(s, t, relabel, skip={gone})
        rest = _transport(mask, perm)
        if mask >> gone & 1:
            return {(lam, rest, p): 1}
        return {(lam, rest, p + 1): -1} if ctx.zc else {}

    return fn


def _fusion_fn(ctx: _Context, a: int, b: int) -> Callable[[Key], Image]:
    before = ctx.before
    relabel = None
    if a == b:
        dst_arcs = (a, -(before.free_loops + 1))
    elif a > 0 and b > 0:
        dst_arcs = (a, b)
    else:
        removed = min(a, b) if (a < 0 and b < 0) else (a if a < 0 else b)
        kept = b if removed == a else a
        relabel = _loop_renumber(removed)
        dst_arcs = (relabel(kept), relabel(kept))

    def fn(key: Key) -> Image:
        lam, mask, p = key
        s, t = ctx.src_cube.states[lam], ctx.dst_cube.states[lam]
        sm = make_saddle(s, t, (a, b), dst_arcs, relabel)
        return {(lam, m2, p2): v for m2, p2, v in sm.apply(mask, p, ctx.zc)}

    return fn


def _r1_insert_fn(ctx: _Context, arc: int, kind: str) -> Callable[[Key], Image]:
    before, after = ctx.before, ctx.after
    n = before.n
    top = max(before.arcs, default=0)
    loop_label, out_label = top + 1, top + 2
    if arc < 0:
        renum = _loop_renumber(arc)

        def relabel(label):
            return out_label if label == arc else renum(label)
    else:
        relabel = None

    def fn(key: Key) -> Image:
        lam, mask, p = key
        s = ctx.src_cube.states[lam]
        alpha_src = s.pos[arc]
        out: Image = {}
        if kind == "left":
            t = ctx.dst_cube.states[lam]
            perm = list(circle_correspondence(s, t, relabel))
            alpha, beta = t.pos[out_label], t.pos[loop_label]
            perm[alpha_src] = -1
            rest = _transport(mask, perm)
            lam2 = lam
            if mask >> alpha_src & 1:
                _add(out, (lam2, rest | 1 << alpha | 1 << beta, p), 1)
            else:
                _add(out, (lam2, rest | 1 << beta, p), 1)
                _add(out, (lam2, rest | 1 << alpha, p), -1)
                if ctx.zc:
                    _add(out, (lam2, rest | 1 << alpha | 1 << beta, p + 1), 1)
            return out
        lam2 = lam | 1 << n
        t = ctx.dst_cube.states[lam2]
        perm = list(circle_correspondence(s, t, relabel))
        alpha = t.pos[out_label]
        perm[alpha_src] = -1
        rest = _transport(mask, perm)
        sign = (-1) ** _above(lam2, n)
        if mask >> alpha_src & 1:
            _add(out, (lam2, rest | 1 << alpha, p), sign)
        else:
            _add(out, (lam2, rest, p), sign)
            if ctx.zc:
                _add(out, (lam2, rest | 1 << alpha, p + 1), -2 * sign)
        return out

    return fn


def _r1_remove_fn(ctx: _Context, c: int, lobe: int | None = None) -> Callable[[Key], Image]:
    before = ctx.before
    kind, loop = curl_crossing(before, c, lobe)
    others = [a for a in before.crossings[c] if a != loop]
    group = {loop, others[0], others[-1]}
    target = _new_loop_targets(before, ctx.after, [group])[0]

    def relabel(label):
        return target if label in group else label

    keep_layer = 0 if kind == "left" else 1

    def fn(key: Key) -> Image:
        lam2, mask, p = key
        if (lam2 >> c & 1) != keep_layer:
            return {}
        lam = _squeeze(lam2, [c])
        s, t = ctx.src_cube.states[lam2], ctx.dst_cube.states[lam]
        beta = s.pos[loop]
        alpha_src = s.pos[others[0]]
        perm = list(circle_correspondence(s, t, relabel, skip={beta}))
        alpha = perm[alpha_src]
        rest = _transport(mask, perm)
        x_alpha = mask >> alpha_src & 1
        x_beta = mask >> beta & 1
        sign = (-1) ** _above(lam2, c) if keep_layer else 1
        out: Image = {}
        if kind == "left":
            # z ⊗ 1 -> 0, z ⊗ X -> (1 - c X) z
            if x_beta:
                _add(out, (lam, rest, p), sign)
                if ctx.zc and not x_alpha:
                    _add(out, (lam, rest | 1 << alpha, p + 1), -sign)
            return out
        # z ⊗ 1 -> (1 + 2cX) z, z ⊗ X -> -X z
        if x_beta:
            if not x_alpha:
                _add(out, (lam, rest | 1 << alpha, p), -sign)
        else:
            _add(out, (lam, rest, p), sign)
            if ctx.zc and not x_alpha:
                _add(out, (lam, rest | 1 << alpha, p + 1), 2 * sign)
        return out

    return fn


@dataclass(frozen=True)
class _Bigon:
    p: int
    q: int
    over_int: int
    under_int: int
    over_ext: tuple[int, int]  # at p, at q
    under_ext: tuple[int, int]
    circle_bits: tuple[int, int]

    @property
    def par_bits(self) -> tuple[int, int]:
        return 1 - self.circle_bits[0], 1 - self.circle_bits[1]


def _bigon(d: LinkDiagram, p: int, q: int) -> _Bigon:
    under_int, over_int = bigon_crossings(d, p, q)
    over_ext, under_ext, bits = [], [], []
    for c in (p, q):
        cr = d.crossings[c]
        over_ext.append(next(a for s, a in enumerate(cr) if s % 2 == 1 and a != over_int))
        under_ext.append(next(a for s, a in enumerate(cr) if s % 2 == 0 and a != under_int))
        bit = next(b for b in (0, 1) if any({x, y} == {over_int, under_int} for x, y in resolution_pairs(cr, bool(b))))
        bits.append(bit)
    if bits[0] == bits[1]:
        raise ValueError("bigon crossings resolve alike; not a second Reidemeister configuration")
    return _Bigon(p, q, over_int, under_int, tuple(over_ext), tuple(under_ext), tuple(bits))


def _r2_insert_map(
    small: StateCube, big: StateCube, bigon: _Bigon, relabel, zc: bool
) -> Callable[[Key], Image]:
    """``z -> z_par + t ψ(z) ⊗ 1_γ`` from the small diagram into the one with the bigon."""
    p, q = bigon.p, bigon.q
    skip = [p, q]
    internal = {bigon.over_int, bigon.under_int}
    big_signs = big.signs

    def layer(lam_big: int, bits: tuple[int, int]) -> int:
        return lam_big | bits[0] << p | bits[1] << q

    def s_factor(lam2: int, bits) -> int:
        sgn = 1
        for c, b in zip((p, q), bits):
            if b:
                sgn *= (-1) ** _above(lam2 & ~(1 << p) & ~(1 << q), c)
        return sgn

    def hide_internal(label):
        return None if label in internal else label

    def fn(key: Key) -> Image:
        lam, mask, pw = key
        base = _embed(lam, skip)
        par, circ = layer(base, bigon.par_bits), layer(base, bigon.circle_bits)
        both = layer(base, (1, 1))
        s, t_par = small.states[lam], big.states[par]
        t_circ, t_both = big.states[circ], big.states[both]
        out: Image = {}
        s_par = s_factor(par, bigon.par_bits)
        perm = circle_correspondence(s, t_par, relabel)
        z_par = _transport(mask, perm)
        _add(out, (par, z_par, pw), s_par)
        # the other summand: saddle to the turnback layer, then a new circle labelled 1
        sm = make_saddle(t_par, t_both, (bigon.over_ext[0], bigon.under_ext[0]), (bigon.over_ext[0], bigon.over_ext[1]))
        c_par = p if bigon.par_bits[0] == 0 else q
        c_circ = q if c_par == p else p
        sign_par = big_signs.sign(par, c_par)
        sign_circ = big_signs.sign(circ, c_circ)
        s_circ = s_factor(circ, bigon.circle_bits)
        t = -(s_par * sign_par) * (s_circ * sign_circ)
        perm2 = circle_correspondence(t_both, t_circ, hide_internal)
        for m2, p2, v in sm.apply(z_par, pw, zc):
            _add(out, (circ, _transport(m2, perm2), p2), t * s_circ * v)
        return out

    return fn


def _r2_insert_fn(ctx: _Context) -> Callable[[Key], Image]:
    n = ctx.before.n
    bigon = _bigon(ctx.after, n, n + 1)
    return _r2_insert_map(ctx.src_cube, ctx.dst_cube, bigon, None, ctx.zc)


def _r2_remove_map(ctx: _Context, p: int, q: int) -> ChainMap:
    """Projection onto the image of the insertion map along two acyclic summands."""
    big, small = ctx.src_cube, ctx.dst_cube
    bigon = _bigon(ctx.before, p, q)
    over_group = {bigon.over_int, *bigon.over_ext}
    under_group = {bigon.under_int, *bigon.under_ext}
    # labels of the small diagram are union roots or new loops; send them outside the bigon
    targets = _new_loop_targets(ctx.before, ctx.after, [over_group, under_group])
    back = {targets[0]: bigon.over_ext[0], targets[1]: bigon.under_ext[0]}

    def relabel(label):
        return back.get(label, label)

    insert = ChainMap.from_function(ctx.target, ctx.source, 0, _r2_insert_map(small, big, bigon, relabel, ctx.zc))
    if insert.failure() is not None:
        raise AssertionError("R2 insertion map does not commute with the differentials")
    big_c = ctx.source
    mats = {}
    for (i, j), keys in big_c.bases.items():
        n = len(keys)
        index = big_c.index(i, j)
        columns: list[dict[int, int]] = []
        n_x1 = 0
        for col in insert.matrices.get((i, j), []):
            columns.append(col)
            n_x1 += 1
        for r, key in enumerate(keys):
            if _bits(key[0], p, q) == (0, 0):
                columns.append({r: 1})
        for r_prev, key in enumerate(big_c.bases.get((i - 1, j), [])):
            if _bits(key[0], p, q) == (0, 0):
                columns.append(dict(big_c.diffs[(i - 1, j)][r_prev]))
        for r, key in enumerate(keys):
            if _bits(key[0], p, q) == (1, 1):
                columns.append({r: 1})
        for key in big_c.bases.get((i + 1, j), []):
            if _bits(key[0], p, q) == (1, 1):
                columns.append({index[k]: v for k, v in _lift_to_circle(key, big, bigon).items()})
        if len(columns) != n:
            raise AssertionError(f"summands do not span C^{{{i},{j}}}: {len(columns)} vs {n}")
        dense = [[QQ(0)] * n for _ in range(n)]
        for c, col in enumerate(columns):
            for r, v in col.items():
                dense[r][c] = QQ(v)
        inv = DomainMatrix(dense, (n, n), QQ).inv().to_list()
        cols_out = []
        for r in range(n):
            coeffs = {}
            for t in range(n_x1):
                v = inv[t][r]
                if v:
                    if v.denominator != 1:
                        raise AssertionError("projection is not integral")
                    coeffs[t] = int(v.numerator)
            cols_out.append(coeffs)
        mats[(i, j)] = cols_out
    return ChainMap(ctx.source, ctx.target, 0, mats)


def _new_loop_targets(big: LinkDiagram, small: LinkDiagram, groups: Sequence[set[int]]) -> list[int]:
    """Label of each merged group in the smaller diagram: its root, or a new free loop."""
    present = {a for cr in small.crossings for a in cr}
    out = []
    fresh = big.free_loops
    order = sorted(range(len(groups)), key=lambda g: min(groups[g]))
    labels: dict[int, int] = {}
    for g in order:
        root = min(groups[g])
        if root in present:
            labels[g] = root
        else:
            fresh += 1
            labels[g] = -fresh
    out = [labels[g] for g in range(len(groups))]
    return out


def _bits(lam: int, p: int, q: int) -> tuple[int, int]:
    return lam >> p & 1, lam >> q & 1


def _lift_to_circle(key: Key, big: StateCube, bigon: _Bigon) -> Image:
    """``w ⊗ 1_γ`` in the circle layer, for ``w`` in the both-one layer."""
    lam, mask, pw = key
    p, q = bigon.p, bigon.q
    circ = lam & ~(1 << p) & ~(1 << q) | bigon.circle_bits[0] << p | bigon.circle_bits[1] << q
    internal = {bigon.over_int, bigon.under_int}
    perm = circle_correspondence(big.states[lam], big.states[circ], lambda a: None if a in internal else a)
    return {(circ, _transport(mask, perm), pw): 1}


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------


def default_movie_window(d: LinkDiagram, ring: Ring) -> tuple[int, int]:
    cube = StateCube(d, ring)
    lo = j_min(cube)
    hi = j_max_c0(cube) if ring is Ring.Z else lo + 2 * d.n + 8
    return lo, hi


def elementary_chain_map(
    move: Move | Mapping,
    frame_before: LinkDiagram,
    frame_after: LinkDiagram | None = None,
    ring: Ring | str = Ring.Z,
    window: tuple[int, int] | None = None,
) -> ChainMap:
    """The chain map of one move, checked against the differentials."""
    if not isinstance(move, Move):
        move = Move.from_json(move)
    ring = Ring.coerce(ring)
    expected = apply_move(frame_before, move)
    if frame_after is None:
        frame_after = expected
    elif frame_after != expected:
        raise FramesMismatch(f"{move.op} does not turn {frame_before} into {frame_after}")
    shift = MOVE_SHIFT[move.op]
    ctx = _Context(frame_before, frame_after, ring, window or default_movie_window(frame_before, ring), shift)
    if move.op == "r2_remove":
        p, q = sorted(int(c) for c in move.get("crossings"))
        cmap = _r2_remove_map(ctx, p, q)
    else:
        if move.op == "birth":
            fn = _birth_fn(ctx)
        elif move.op == "death":
            fn = _death_fn(ctx, int(move.get("loop", -1)))
        elif move.op == "fusion":
            fn = _fusion_fn(ctx, *_arcs(move))
        elif move.op == "r1":
            fn = _r1_insert_fn(ctx, int(move.get("arc")), str(move.get("kind", "left")))
        elif move.op == "r1_remove":
            lobe = move.get("loop")
            fn = _r1_remove_fn(ctx, int(move.get("crossing")), None if lobe is None else int(lobe))
        elif move.op == "r2":
            fn = _r2_insert_fn(ctx)
        else:  # pragma: no cover - Move.from_json rejects everything else
            raise UnsupportedMove(move.op)
        cmap = ChainMap.from_function(ctx.source, ctx.target, shift, fn)
    bad = cmap.failure()
    if bad is not None:
        raise AssertionError(f"{move.op} map fails to commute with d at {bad}")
    return cmap


def movie_map(movie: Movie, ring: Ring | str = Ring.Z, window: tuple[int, int] | None = None) -> ChainMap:
    """Composite of the elementary maps; the q-shift is the Euler characteristic."""
    ring = Ring.coerce(ring)
    frames = movie.frames()
    lo, hi = window or default_movie_window(movie.initial, ring)
    if not movie.moves:
        cplx = assemble_complex(StateCube(movie.initial, ring), window=(lo, hi))
        ident = {k: [{c: 1} for c in range(len(b))] for k, b in cplx.bases.items()}
        return ChainMap(cplx, cplx, 0, ident)
    total = None
    shift = 0
    for move, before, after in zip(movie.moves, frames, frames[1:]):
        step = elementary_chain_map(move, before, after, ring, (lo + shift, hi + shift))
        shift += step.shift
        total = step if total is None else _compose(total, step)
    return total


def _compose(first: ChainMap, second: ChainMap) -> ChainMap:
    # the complexes of the shared frame were built twice; their bases agree
    return first.then(second)


def closed_surface_invariant(movie: Movie, ring: Ring | str = Ring.ZC) -> LaurentPoly:
    """Image of ``1`` under a movie from the empty diagram to itself, as a polynomial in ``c``."""
    ring = Ring.coerce(ring)
    frames = movie.frames()
    if frames[0] != EMPTY or frames[-1] != EMPTY:
        raise NonEmptyEnds("closed surfaces need movies from the empty diagram to the empty diagram")
    cmap = movie_map(movie, ring, (0, 0))
    chi = cmap.shift
    col = cmap.matrices.get((0, 0), [{}])[0]
    if chi < 0 or chi % 2 or not col:
        return LaurentPoly()
    keys = cmap.target.bases.get((0, chi), [])
    return LaurentPoly({keys[r][2]: v for r, v in col.items()})


def compare_on_homology(first: ChainMap, second: ChainMap) -> str:
    """``"equal"``, ``"negated"`` or ``"different"`` for two maps between the same complexes."""
    if first.shift != second.shift:
        return "different"
    agree, opposite = True, True
    for (i, j) in sorted(first.matrices):
        a, b = first.on_homology(i, j), second.on_homology(i, j)
        if a != b:
            agree = False
        if a != [[-v for v in row] for row in b]:
            opposite = False
    if agree:
        return "equal"
    return "negated" if opposite else "different"


def format_ring_element(value: LaurentPoly) -> str:
    return value.format("c")
