"""Integer homology of bigraded complexes.

Ranks and torsion come from a sparse diagonalisation: unit pivots are
eliminated first, chosen column by column with the shortest pivot row, and
whatever is left is diagonalised by Euclidean row and column steps.  A
diagonal form is enough to read off the cokernel, so no full Smith form is
ever needed on large matrices.  Small dense lattice computations (explicit
generators, the action of ``c``) use sympy's Smith decomposition.
"""

from __future__ import annotations

import json
import multiprocessing
import os
from collections.abc import Iterable, Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import reduce
from math import gcd

from sympy import ZZ, factorint
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

from .algebra import Ring
from .cube import BigradedComplex, StateCube, default_window, j_max_c0, j_min, slice_complex
from .diagram import LinkDiagram
from .errors import DegreeWindowTooSmall, OutOfWindow

# ---------------------------------------------------------------------------
# finitely generated abelian groups
# ---------------------------------------------------------------------------


def _primary_parts(orders: Iterable[int]) -> list[int]:
    parts = []
    for n in orders:
        n = abs(int(n))
        if n > 1:
            parts.extend(p**e for p, e in factorint(n).items())
    return sorted(parts)


def invariant_factors_from(orders: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors ``d1 | d2 | ...`` of ``sum Z/n`` over ``orders``."""
    by_prime: dict[int, list[int]] = {}
    for q in _primary_parts(orders):
        p = min(factorint(q))
        by_prime.setdefault(p, []).append(q)
    longest = max((len(v) for v in by_prime.values()), default=0)
    factors = [1] * longest
    for powers in by_prime.values():
        powers.sort(reverse=True)
        for t, q in enumerate(powers):
            factors[longest - 1 - t] *= q
    return tuple(factors)


@dataclass(frozen=True)
class AbelianGroup:
    """``Z^rank`` plus cyclic torsion, stored by invariant factors."""

    rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", invariant_factors_from(self.torsion))

    @classmethod
    def zero(cls) -> AbelianGroup:
        return cls()

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    @property
    def primary(self) -> tuple[int, ...]:
        return tuple(_primary_parts(self.torsion))

    def __add__(self, other: AbelianGroup) -> AbelianGroup:
        return AbelianGroup(self.rank + other.rank, self.torsion + other.torsion)

    def tensor(self, other: AbelianGroup) -> AbelianGroup:
        tors = [t for t in self.torsion for _ in range(other.rank)]
        tors += [t for t in other.torsion for _ in range(self.rank)]
        tors += [gcd(a, b) for a in self.torsion for b in other.torsion]
        return AbelianGroup(self.rank * other.rank, tuple(tors))

    def tor(self, other: AbelianGroup) -> AbelianGroup:
        return AbelianGroup(0, tuple(gcd(a, b) for a in self.torsion for b in other.torsion))

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


def direct_sum(groups: Iterable[AbelianGroup]) -> AbelianGroup:
    return reduce(lambda a, b: a + b, groups, AbelianGroup())


# ---------------------------------------------------------------------------
# sparse diagonalisation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """Diagonal entries of an integer matrix after unimodular row/column moves.

    ``rank`` is the number of nonzero entries and ``diagonal`` their absolute
    values.  ``torsion`` gives the invariant factors larger than one, which
    describe the torsion of the cokernel.
    """

    rank: int
    diagonal: tuple[int, ...]
    left: tuple[tuple[int, ...], ...] | None = None
    right: tuple[tuple[int, ...], ...] | None = None
    kernel: tuple[tuple[int, ...], ...] | None = None

    @property
    def torsion(self) -> tuple[int, ...]:
        return invariant_factors_from(self.diagonal)

    @property
    def factors(self) -> tuple[int, ...]:
        """All nonzero invariant factors, ones included, each dividing the next."""
        tors = self.torsion
        return (1,) * (self.rank - len(tors)) + tors


def smith(
    columns: Sequence[Mapping[int, int]], nrows: int | None = None, transforms: bool = False
) -> SmithDecomposition:
    """Diagonalise a sparse integer matrix given by columns ``{row: value}``.

    With ``transforms=True`` (meant for small matrices) the result also holds
    unimodular ``left`` and ``right`` with ``left · A · right = diag(factors)``
    and a basis of the kernel of ``A``.
    """
    if transforms:
        return _smith_dense(columns, nrows)
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, dict[int, int]] = {}
    for c, col in enumerate(columns):
        entries = {r: v for r, v in col.items() if v}
        if not entries:
            continue
        cols[c] = dict(entries)
        for r, v in entries.items():
            rows.setdefault(r, {})[c] = v
    diagonal: list[int] = []
    _unit_phase(rows, cols, diagonal)
    _euclid_phase(rows, cols, diagonal)
    return SmithDecomposition(len(diagonal), tuple(diagonal))


def _eliminate(rows, cols, r: int, c: int) -> None:
    """Clear column ``c`` with the unit pivot at ``(r, c)``, then drop row ``r``."""
    u = rows[r][c]
    prow = rows.pop(r)
    col = cols.pop(c)
    for r2, v2 in col.items():
        if r2 == r:
            continue
        f = v2 * u
        row2 = rows[r2]
        del row2[c]
        for cc, vv in prow.items():
            if cc == c:
                continue
            nv = row2.get(cc, 0) - f * vv
            if nv:
                row2[cc] = nv
                cols[cc][r2] = nv
            else:
                row2.pop(cc, None)
                cols[cc].pop(r2, None)
        if not row2:
            del rows[r2]
    for cc in prow:
        if cc == c:
            continue
        cc_col = cols[cc]
        del cc_col[r]
        if not cc_col:
            del cols[cc]


def _unit_phase(rows, cols, diagonal) -> None:
    progress = True
    while progress and cols:
        progress = False
        for c in sorted(cols, key=lambda cc: len(cols[cc])):
            col = cols.get(c)
            if not col:
                continue
            best = None
            for r, v in col.items():
                if v == 1 or v == -1:
                    length = len(rows[r])
                    if best is None or length < best[0]:
                        best = (length, r)
                        if length == 1:
                            break
            if best is None:
                continue
            _eliminate(rows, cols, best[1], c)
            diagonal.append(1)
            progress = True


def _euclid_phase(rows, cols, diagonal) -> None:
    while cols:
        r, c, p = min(
            ((r, c, v) for c, col in cols.items() for r, v in col.items()),
            key=lambda t: (abs(t[2]), len(rows[t[0]]) * len(cols[t[1]])),
        )
        if p in (1, -1):
            _eliminate(rows, cols, r, c)
            diagonal.append(1)
            continue
        clean = True
        # row moves: reduce the other entries of column c modulo p
        for r2, v2 in list(cols[c].items()):
            if r2 == r:
                continue
            q = v2 // p
            _add_row(rows, cols, r2, r, -q)
            if cols.get(c, {}).get(r2):
                clean = False
        if not clean:
            continue
        # column moves: column c is now supported on row r only
        for c2, w in list(rows[r].items()):
            if c2 == c:
                continue
            nv = w - (w // p) * p
            if nv:
                rows[r][c2] = nv
                cols[c2][r] = nv
                clean = False
            else:
                del rows[r][c2]
                del cols[c2][r]
                if not cols[c2]:
                    del cols[c2]
        if not clean:
            continue
        diagonal.append(abs(p))
        del rows[r]
        del cols[c]


def _add_row(rows, cols, target: int, source: int, f: int) -> None:
    if not f:
        return
    trow = rows[target]
    for cc, vv in rows[source].items():
        nv = trow.get(cc, 0) + f * vv
        if nv:
            trow[cc] = nv
            cols[cc][target] = nv
        else:
            trow.pop(cc, None)
            cols[cc].pop(target, None)
            if not cols[cc]:
                del cols[cc]
    if not trow:
        del rows[target]


# ---------------------------------------------------------------------------
# homology of a bigraded complex
# ---------------------------------------------------------------------------


def _smith_dense(columns: Sequence[Mapping[int, int]], nrows: int | None) -> SmithDecomposition:
    ncols = len(columns)
    if nrows is None:
        nrows = 1 + max((r for col in columns for r in col), default=-1)
    dense = [[0] * ncols for _ in range(nrows)]
    for c, col in enumerate(columns):
        for r, v in col.items():
            dense[r][c] = v
    if not nrows or not ncols:
        eye_l = tuple(tuple(int(a == b) for b in range(nrows)) for a in range(nrows))
        eye_r = tuple(tuple(int(a == b) for b in range(ncols)) for a in range(ncols))
        return SmithDecomposition(0, (), eye_l, eye_r, eye_r)
    snf, left, right = smith_normal_decomp(_dm(dense, (nrows, ncols)))
    snf_l, left_l, right_l = _to_lists(snf), _to_lists(left), _to_lists(right)
    diag = []
    for t in range(min(nrows, ncols)):
        v = snf_l[t][t]
        if v < 0:
            left_l[t] = [-a for a in left_l[t]]
            v = -v
        if v:
            diag.append(v)
    r = len(diag)
    kernel = tuple(tuple(right_l[row][t] for row in range(ncols)) for t in range(r, ncols))
    return SmithDecomposition(
        r, tuple(diag), tuple(map(tuple, left_l)), tuple(map(tuple, right_l)), kernel
    )


def _group(dim: int, outgoing: SmithDecomposition | None, incoming: SmithDecomposition | None) -> AbelianGroup:
    r_out = outgoing.rank if outgoing else 0
    r_in = incoming.rank if incoming else 0
    tors = incoming.torsion if incoming else ()
    return AbelianGroup(dim - r_out - r_in, tors)


def homology_at(cplx: BigradedComplex, i: int, j: int) -> AbelianGroup:
    """``H^{i,j}``; raises :class:`OutOfWindow` outside the computed window."""
    cplx._check(j)
    dim = cplx.rank(i, j)
    if not dim:
        return AbelianGroup()
    out = smith(cplx.matrix(i, j), cplx.rank(i + 1, j))
    inc = smith(cplx.matrix(i - 1, j), dim) if cplx.rank(i - 1, j) else None
    return _group(dim, out, inc)


def _slice_groups(dims: Mapping[int, int], mats: Mapping[int, Sequence[Mapping[int, int]]]) -> dict[int, AbelianGroup]:
    decomp = {i: smith(m) for i, m in mats.items() if m}
    out = {}
    for i, dim in dims.items():
        g = _group(dim, decomp.get(i), decomp.get(i - 1))
        if not g.is_zero():
            out[i] = g
    return out


class BigradedGroups:
    """The groups ``H^{i,j}`` on a window of q-degrees."""

    def __init__(self, ring: Ring | str, groups: Mapping[tuple[int, int], AbelianGroup], window: tuple[int, int] | None):
        self.ring = Ring.coerce(ring)
        self.groups = {k: g for k, g in sorted(groups.items()) if not g.is_zero()}
        self.window = tuple(window) if window else None

    def group(self, i: int, j: int) -> AbelianGroup:
        if self.window and not self.window[0] <= j <= self.window[1]:
            raise OutOfWindow(f"q-degree {j} outside the computed window {self.window}")
        return self.groups.get((i, j), AbelianGroup())

    __getitem__ = lambda self, key: self.group(*key)  # noqa: E731

    def rank(self, i: int, j: int) -> int:
        return self.group(i, j).rank

    def ranks(self) -> dict[tuple[int, int], int]:
        return {k: g.rank for k, g in self.groups.items() if g.rank}

    def torsion(self) -> dict[tuple[int, int], tuple[int, ...]]:
        return {k: g.torsion for k, g in self.groups.items() if g.torsion}

    def total_rank(self) -> int:
        return sum(g.rank for g in self.groups.values())

    def euler(self, j: int) -> int:
        return sum((-1) ** (i % 2) * g.rank for (i, jj), g in self.groups.items() if jj == j)

    def homological_degrees(self) -> list[int]:
        return sorted({i for i, _ in self.groups})

    def q_degrees(self) -> list[int]:
        return sorted({j for _, j in self.groups})

    def shifted(self, di: int, dj: int) -> BigradedGroups:
        win = (self.window[0] + dj, self.window[1] + dj) if self.window else None
        return BigradedGroups(self.ring, {(i + di, j + dj): g for (i, j), g in self.groups.items()}, win)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BigradedGroups):
            return NotImplemented
        return self.ring is other.ring and self.groups == other.groups

    def restricted(self, window: tuple[int, int]) -> BigradedGroups:
        lo, hi = window
        return BigradedGroups(self.ring, {k: g for k, g in self.groups.items() if lo <= k[1] <= hi}, window)

    # -- output ---------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "ring": self.ring.value,
            "window": list(self.window) if self.window else None,
            "groups": [
                {"i": i, "j": j, "rank": g.rank, "torsion": list(g.torsion)}
                for (i, j), g in sorted(self.groups.items(), key=lambda kv: (kv[0][1], kv[0][0]))
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: Mapping) -> BigradedGroups:
        groups = {(g["i"], g["j"]): AbelianGroup(g["rank"], tuple(g.get("torsion", ()))) for g in data["groups"]}
        return cls(data["ring"], groups, data.get("window"))

    def poincare(self) -> str:
        """``sum rank t^i q^j``, with torsion summands listed as ``T[n] t^i q^j``."""
        terms = []
        for (i, j), g in sorted(self.groups.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            mono = f"t^{i} q^{j}"
            if g.rank:
                terms.append(mono if g.rank == 1 else f"{g.rank} {mono}")
            terms.extend(f"T[{t}] {mono}" for t in g.torsion)
        return " + ".join(terms) if terms else "0"

    def table(self) -> str:
        """Rows are q-degrees, columns homological degrees."""
        if not self.groups:
            return "(zero)"
        is_ = range(min(self.homological_degrees()), max(self.homological_degrees()) + 1)
        js = self.q_degrees()
        cells = {k: str(g) for k, g in self.groups.items()}
        width = max([len(c) for c in cells.values()] + [4])
        head = "j\\i".rjust(5) + " " + " ".join(str(i).rjust(width) for i in is_)
        lines = [head]
        for j in reversed(js):
            row = " ".join(cells.get((i, j), ".").rjust(width) for i in is_)
            lines.append(str(j).rjust(5) + " " + row)
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# drivers, optionally parallel over q-degrees
# ---------------------------------------------------------------------------

_WORK: dict = {}


def _complex_task(j: int) -> tuple[int, dict[int, AbelianGroup]]:
    cplx: BigradedComplex = _WORK["complex"]
    dims = {i: len(b) for (i, jj), b in cplx.bases.items() if jj == j}
    mats = {i: cplx.matrix(i, j) for i in dims}
    return j, _slice_groups(dims, mats)


def _cube_task(j: int) -> tuple[int, dict[int, AbelianGroup]]:
    cube: StateCube = _WORK["cube"]
    gens, diffs = slice_complex(cube, j)
    return j, _slice_groups({i: len(k) for i, k in gens.items()}, diffs)


def _run(task, js: Sequence[int], jobs: int, payload: dict) -> dict[tuple[int, int], AbelianGroup]:
    _WORK.clear()
    _WORK.update(payload)
    try:
        if jobs <= 1 or len(js) <= 1:
            results = [task(j) for j in js]
        else:
            ctx = multiprocessing.get_context("fork")
            with ProcessPoolExecutor(max_workers=jobs, mp_context=ctx) as pool:
                results = list(pool.map(task, js, chunksize=1))
    finally:
        _WORK.clear()
    out = {}
    for j, groups in results:
        for i, g in groups.items():
            out[(i, j)] = g
    return out


def resolve_jobs(jobs: int | None) -> int:
    if jobs is None or jobs == 0:
        return os.cpu_count() or 1
    if jobs < 0:
        raise ValueError("jobs must be positive")
    return jobs


def all_homology(cplx: BigradedComplex, jobs: int = 1) -> BigradedGroups:
    """Every ``H^{i,j}`` of a complex; the result does not depend on ``jobs``."""
    groups = _run(_complex_task, cplx.js, resolve_jobs(jobs), {"complex": cplx})
    return BigradedGroups(cplx.ring, groups, cplx.window)


def khovanov_homology(
    d: LinkDiagram,
    ring: Ring | str = Ring.Z,
    window: tuple[int, int] | None = None,
    jobs: int = 1,
) -> BigradedGroups:
    """``H(D)`` over ``Z[c]`` or ``Z`` (c = 0), computed slice by slice.

    Over ``Z`` the default window is the full support.  Over ``Z[c]`` it is
    ``[j_min, j_min + 2n + 8]``; the window must reach ``j_min``.
    """
    cube = StateCube(d, ring)
    lo_support = j_min(cube)
    full_support = window is None and cube.ring is Ring.Z
    if window is None:
        window = default_window(d, cube) if cube.ring is Ring.ZC else (lo_support, j_max_c0(cube))
    lo, hi = window
    if lo > hi:
        raise DegreeWindowTooSmall(f"empty window {window}")
    if cube.ring is Ring.ZC and hi < lo_support:
        raise DegreeWindowTooSmall(f"window {window} ends below the lowest q-degree {lo_support}")
    groups = _run(_cube_task, list(range(lo, hi + 1)), resolve_jobs(jobs), {"cube": cube})
    # with c = 0 and no window requested the whole support is known
    return BigradedGroups(cube.ring, groups, None if full_support else (lo, hi))


# ---------------------------------------------------------------------------
# explicit generators and the action of c
# ---------------------------------------------------------------------------


def _dm(rows: Sequence[Sequence[int]], shape: tuple[int, int]) -> DomainMatrix:
    return DomainMatrix([[ZZ(v) for v in row] for row in rows], shape, ZZ)


def _to_lists(m: DomainMatrix) -> list[list[int]]:
    return [[int(v) for v in row] for row in m.to_list()]


def _inverse(m: DomainMatrix) -> DomainMatrix:
    inv = m.to_field().inv()
    return inv.convert_to(ZZ)


def _diag(s: DomainMatrix) -> list[int]:
    rows, cols = s.shape
    lst = s.to_list()
    return [abs(int(lst[t][t])) for t in range(min(rows, cols)) if lst[t][t]]


def lattice_quotient(
    gens: Sequence[Sequence[int]], sub: Sequence[Sequence[int]], n: int
) -> tuple[AbelianGroup, list[list[int]], list[int], callable]:
    """Quotient of the lattice spanned by ``gens`` by the one spanned by ``sub``.

    Vectors have length ``n``; ``sub`` must lie in the span of ``gens``.  The
    result is the group, generator vectors in ``Z^n`` (one per summand, free
    ones first), their orders (0 for free) and a function sending a vector of
    the numerator lattice to its coordinates in the quotient.
    """
    gens = [list(g) for g in gens if any(g)]
    if not gens:
        return AbelianGroup(), [], [], lambda v: []
    g = _dm([list(row) for row in zip(*gens)], (n, len(gens)))
    s, u, _ = smith_normal_decomp(g)  # s = u g v
    diag = _diag(s)
    r = len(diag)
    u_inv = _to_lists(_inverse(u))
    basis = [[u_inv[row][t] * diag[t] for row in range(n)] for t in range(r)]
    u_l = _to_lists(u)

    def coords_in_basis(v: Sequence[int]) -> list[int]:
        w = [sum(u_l[t][k] * v[k] for k in range(n)) for t in range(n)]
        if any(w[t] for t in range(r, n)):
            raise ValueError("vector is not in the lattice")
        out = []
        for t in range(r):
            if w[t] % diag[t]:
                raise ValueError("vector is not in the lattice")
            out.append(w[t] // diag[t])
        return out

    sub_coords = [coords_in_basis(v) for v in sub if any(v)]
    if sub_coords:
        w = _dm([list(row) for row in zip(*sub_coords)], (r, len(sub_coords)))
        s2, u2, _ = smith_normal_decomp(w)
        d2 = _diag(s2)
    else:
        u2 = DomainMatrix.eye(r, ZZ)
        d2 = []
    u2_l = _to_lists(u2)
    u2_inv = _to_lists(_inverse(u2))
    orders = [d2[t] if t < len(d2) else 0 for t in range(r)]
    keep = [t for t in range(r) if orders[t] != 1]
    keep.sort(key=lambda t: (orders[t] != 0, t))
    generators = [[sum(basis[a][k] * u2_inv[a][t] for a in range(r)) for k in range(n)] for t in keep]

    def coords(v: Sequence[int]) -> list[int]:
        b = coords_in_basis(v)
        full = [sum(u2_l[t][a] * b[a] for a in range(r)) for t in range(r)]
        return [full[t] % orders[t] if orders[t] else full[t] for t in keep]

    group = AbelianGroup(sum(1 for t in keep if orders[t] == 0), tuple(orders[t] for t in keep if orders[t]))
    return group, generators, [orders[t] for t in keep], coords


def kernel_basis(columns: Sequence[Mapping[int, int]], nrows: int) -> list[list[int]]:
    """A basis of the kernel of a (small) integer matrix, as vectors."""
    ncols = len(columns)
    if ncols == 0:
        return []
    if nrows == 0:
        return [[int(a == b) for a in range(ncols)] for b in range(ncols)]
    dense = [[0] * ncols for _ in range(nrows)]
    for c, col in enumerate(columns):
        for r, v in col.items():
            dense[r][c] = v
    s, _, v = smith_normal_decomp(_dm(dense, (nrows, ncols)))
    rank = len(_diag(s))
    vl = _to_lists(v)
    return [[vl[row][t] for row in range(ncols)] for t in range(rank, ncols)]


def _apply(columns: Sequence[Mapping[int, int]], vec: Sequence[int], nrows: int) -> list[int]:
    out = [0] * nrows
    for c, x in enumerate(vec):
        if x:
            for r, v in columns[c].items():
                out[r] += v * x
    return out


@dataclass
class HomologyBasis:
    """Explicit description of one group ``H^{i,j}`` of a complex."""

    group: AbelianGroup
    generators: list[list[int]]
    orders: list[int]
    coords: callable


def homology_basis(cplx: BigradedComplex, i: int, j: int) -> HomologyBasis:
    n = cplx.rank(i, j)
    cycles = kernel_basis(cplx.matrix(i, j), cplx.rank(i + 1, j))
    prev = cplx.matrix(i - 1, j)
    boundaries = []
    for col in prev:
        vec = [0] * n
        for r, v in col.items():
            vec[r] = v
        boundaries.append(vec)
    group, gens, orders, coords = lattice_quotient(cycles, boundaries, n)
    return HomologyBasis(group, gens, orders, coords)


def c_action(cplx: BigradedComplex, i: int, j: int) -> list[list[int]]:
    """Matrix of multiplication by ``c`` from ``H^{i,j}`` to ``H^{i,j+2}``.

    Columns are indexed by the generators of the source, rows by those of the
    target (free generators first, then torsion ones, entries of torsion rows
    reduced modulo their order).  Basis keys must end with the power of ``c``.
    """
    if cplx.ring is not Ring.ZC:
        raise ValueError("the c-action needs a complex over Z[c]")
    cplx._check(j)
    cplx._check(j + 2)
    src = homology_basis(cplx, i, j)
    dst = homology_basis(cplx, i, j + 2)
    src_keys = cplx.bases.get((i, j), [])
    dst_index = cplx.index(i, j + 2)
    n2 = cplx.rank(i, j + 2)
    columns = []
    for gvec in src.generators:
        image = [0] * n2
        for t, v in enumerate(gvec):
            if v:
                key = src_keys[t]
                image[dst_index[key[:-1] + (key[-1] + 1,)]] += v
        columns.append(dst.coords(image))
    return [[columns[c][r] for c in range(len(columns))] for r in range(len(dst.generators))]


def c_action_summary(matrix: list[list[int]], src_rank: int, dst_rank: int) -> dict:
    """Injectivity and bijectivity of a map between free abelian groups."""
    free = [row[:src_rank] for row in matrix[:dst_rank]]
    if src_rank == 0:
        return {"injective": True, "isomorphism": dst_rank == 0}
    if dst_rank == 0:
        return {"injective": False, "isomorphism": False}
    m = _dm(free, (dst_rank, src_rank))
    rank = m.rank()
    injective = rank == src_rank
    iso = injective and dst_rank == src_rank and abs(int(m.det())) == 1
    return {"injective": injective, "isomorphism": iso}
