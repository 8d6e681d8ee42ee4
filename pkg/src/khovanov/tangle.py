"""(1,1)-tangle invariants with coefficients in a graded A-module.

A graded A-module ``M`` is given by a homogeneous presentation over Z[c]:
generators with degrees, the action of ``X`` on generators and a list of
relations.  The complex ``C_M(D)`` of a tangle diagram puts ``M`` on the open
strand and ``A`` on every closed circle of each resolution; saddles that touch
the strand use ``m_M`` and ``Δ_M``.

Chain groups are presented abelian groups ``F / Rel``, so homology is
``{x : dx ∈ Rel} / (Rel + im d)``.  When ``M`` is free the ordinary sparse
routine is used instead.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import Ring
from .cube import BigradedComplex, StateCube, complex_from_generators, degree_shift, popcount, words
from .diagram import LinkDiagram
from .errors import InvalidModule, NotATangle, WindowTooSmall
from .homology import AbelianGroup, BigradedGroups, all_homology, kernel_basis, lattice_quotient

Gen = tuple[int, int]  # (generator index, power of c)
Vec = dict[Gen, int]


# ---------------------------------------------------------------------------
# graded modules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedModulePresentation:
    """A graded A-module over Z[c] given by generators, X-action and relations.

    ``x_action[r][s]`` is the integer coefficient of generator ``r`` in
    ``X g_s``; the accompanying power of ``c`` is forced by homogeneity.  A
    relation is ``(degree, coefficients)`` meaning ``sum_k a_k c^{e_k} g_k`` with
    ``e_k = (degree - deg g_k) / 2``.
    """

    degrees: tuple[int, ...]
    x_action: tuple[tuple[int, ...], ...]
    relations: tuple[tuple[int, tuple[int, ...]], ...] = ()
    name: str = ""
    _closed: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.degrees)
        if n == 0:
            raise InvalidModule("a module needs at least one generator")
        if len(self.x_action) != n or any(len(row) != n for row in self.x_action):
            raise InvalidModule(f"X must be a {n}x{n} matrix")
        for r in range(n):
            for s in range(n):
                if self.x_action[r][s] and not _power_ok(self.degrees[s] - 2 - self.degrees[r]):
                    raise InvalidModule(f"X g_{s} cannot contain g_{r}: degrees do not match")
        for deg, coeffs in self.relations:
            if len(coeffs) != n:
                raise InvalidModule("relation length differs from the number of generators")
            for k, a in enumerate(coeffs):
                if a and not _power_ok(deg - self.degrees[k]):
                    raise InvalidModule(f"relation of degree {deg} is not homogeneous")
        closed = [(deg, _rel_vector(self.degrees, deg, coeffs)) for deg, coeffs in self.relations]
        closed += [(deg - 2, self.x_vec(vec)) for deg, vec in closed]
        object.__setattr__(self, "_closed", tuple((deg, vec) for deg, vec in closed if vec))
        for s in range(n):
            xx = self.x_vec(self.x_vec({(s, 0): 1}))
            if xx and not self.in_relations(xx, self.degrees[s] - 4):
                raise InvalidModule(f"X^2 g_{s} is not zero in the module")

    # -- parsing ---------------------------------------------------------------

    @classmethod
    def from_json(cls, data: Mapping, name: str = "") -> GradedModulePresentation:
        try:
            degrees = tuple(int(g["deg"]) for g in data["gens"])
            n = len(degrees)
            x = data.get("X") or [[0] * n for _ in range(n)]
            x_action = tuple(tuple(int(v) for v in row) for row in x)
            relations = []
            for rel in data.get("relations", []):
                if isinstance(rel, Mapping):
                    coeffs = tuple(int(v) for v in rel["coeffs"])
                    deg = rel.get("deg")
                else:
                    coeffs, deg = tuple(int(v) for v in rel), None
                if deg is None:
                    support = [degrees[k] for k, a in enumerate(coeffs) if a]
                    if not support:
                        continue
                    deg = max(support)
                relations.append((int(deg), coeffs))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise InvalidModule(f"bad module description: {exc}") from None
        return cls(degrees, x_action, tuple(relations), name or str(data.get("name", "")))

    @classmethod
    def load(cls, path: str | Path) -> GradedModulePresentation:
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise InvalidModule(f"{path}: {exc}") from None
        return cls.from_json(data, name=Path(path).stem)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "gens": [{"deg": d} for d in self.degrees],
            "X": [list(row) for row in self.x_action],
            "relations": [{"deg": deg, "coeffs": list(c)} for deg, c in self.relations],
        }

    # -- arithmetic on the free module -----------------------------------------

    @property
    def ngens(self) -> int:
        return len(self.degrees)

    @property
    def min_degree(self) -> int:
        return min(self.degrees)

    @property
    def is_free(self) -> bool:
        return not self._closed

    def degree(self, g: Gen) -> int:
        return self.degrees[g[0]] + 2 * g[1]

    def x_vec(self, vec: Mapping[Gen, int]) -> Vec:
        out: Vec = {}
        for (s, e), v in vec.items():
            for r in range(self.ngens):
                a = self.x_action[r][s]
                if a:
                    key = (r, e + (self.degrees[s] - 2 - self.degrees[r]) // 2)
                    out[key] = out.get(key, 0) + a * v
        return {k: v for k, v in out.items() if v}

    def basis(self, j: int) -> list[Gen]:
        """Basis of the free component ``F_j``: one ``c^e g_k`` per generator."""
        return [(k, (j - d) // 2) for k, d in enumerate(self.degrees) if d <= j and (j - d) % 2 == 0]

    def relation_vectors(self, j: int) -> list[Vec]:
        """Generators of ``Rel_j``, the degree-``j`` part of the relation submodule."""
        out = []
        for deg, vec in self._closed:
            if deg <= j and (j - deg) % 2 == 0:
                f = (j - deg) // 2
                out.append({(k, e + f): v for (k, e), v in vec.items()})
        return out

    def in_relations(self, vec: Vec, j: int) -> bool:
        basis = self.basis(j)
        index = {g: t for t, g in enumerate(basis)}
        rels = [_dense(r, index) for r in self.relation_vectors(j)]
        if not rels:
            return not any(vec.values())
        try:
            _, _, _, coords = lattice_quotient(rels, [], len(basis))
            coords(_dense(vec, index))
        except ValueError:
            return False
        return True

    # -- graded pieces -----------------------------------------------------------

    def component(self, j: int) -> AbelianGroup:
        """The abelian group ``M_j``."""
        basis = self.basis(j)
        index = {g: t for t, g in enumerate(basis)}
        ident = [[int(a == b) for a in range(len(basis))] for b in range(len(basis))]
        rels = [_dense(r, index) for r in self.relation_vectors(j)]
        return lattice_quotient(ident, rels, len(basis))[0]

    def _times_2x(self, j: int) -> list[list[int]]:
        """Columns of ``2X : F_j -> F_{j-2}``."""
        index = {g: t for t, g in enumerate(self.basis(j - 2))}
        return [_dense({k: 2 * v for k, v in self.x_vec({g: 1}).items()}, index) for g in self.basis(j)]

    def ker_2x(self, j: int) -> AbelianGroup:
        """``{t in M_j : 2Xt = 0}``."""
        n = len(self.basis(j))
        m = len(self.basis(j - 2))
        cols = [{r: v for r, v in enumerate(col) if v} for col in self._times_2x(j)]
        index2 = {g: t for t, g in enumerate(self.basis(j - 2))}
        rels2 = [{r: v for r, v in enumerate(_dense(r_, index2)) if v} for r_ in self.relation_vectors(j - 2)]
        kernel = kernel_basis(cols + rels2, m)
        numer = [vec[:n] for vec in kernel]
        index = {g: t for t, g in enumerate(self.basis(j))}
        rels = [_dense(r, index) for r in self.relation_vectors(j)]
        return lattice_quotient(numer, rels, n)[0] if numer else AbelianGroup()

    def coker_2x(self, j: int) -> AbelianGroup:
        """``(M / 2XM)_j``."""
        basis = self.basis(j)
        index = {g: t for t, g in enumerate(basis)}
        ident = [[int(a == b) for a in range(len(basis))] for b in range(len(basis))]
        sub = [_dense(r, index) for r in self.relation_vectors(j)]
        sub += self._times_2x(j + 2)
        return lattice_quotient(ident, sub, len(basis))[0]


def _power_ok(diff: int) -> bool:
    return diff >= 0 and diff % 2 == 0


def _rel_vector(degrees: Sequence[int], deg: int, coeffs: Sequence[int]) -> Vec:
    return {(k, (deg - degrees[k]) // 2): a for k, a in enumerate(coeffs) if a}


def _dense(vec: Mapping, index: Mapping) -> list[int]:
    out = [0] * len(index)
    for key, v in vec.items():
        out[index[key]] += v
    return out


def free_a_module() -> GradedModulePresentation:
    """``A`` itself: generators ``1`` (degree 1) and ``X`` (degree -1)."""
    return GradedModulePresentation((1, -1), ((0, 0), (1, 0)), (), "A")


def reduced_a_module() -> GradedModulePresentation:
    """``A / cA``, the algebra of the c = 0 theory viewed as an A-module."""
    return GradedModulePresentation((1, -1), ((0, 0), (1, 0)), ((3, (1, 0)), (1, (0, 1))), "A/cA")


def a_mod_2x() -> GradedModulePresentation:
    """``A / 2XA``: ``X`` generates 2-torsion."""
    return GradedModulePresentation((1, -1), ((0, 0), (1, 0)), ((-1, (0, 2)),), "A/2XA")


# ---------------------------------------------------------------------------
# the module maps
# ---------------------------------------------------------------------------


def _a_tensor_basis(module: GradedModulePresentation, j: int) -> list[tuple[int, Gen]]:
    """Basis of ``(A ⊗ M)_j``: ``1 ⊗ F_{j-1}`` then ``X ⊗ F_{j+1}``."""
    return [(0, g) for g in module.basis(j - 1)] + [(1, g) for g in module.basis(j + 1)]


def _matrix(images: Sequence[Mapping], rows: Sequence) -> list[list[int]]:
    index = {k: t for t, k in enumerate(rows)}
    cols = [_dense(img, index) for img in images]
    return [[cols[c][r] for c in range(len(cols))] for r in range(len(rows))]


def m_module(module: GradedModulePresentation, letter: int, g: Gen) -> Vec:
    """``m_M(1 ⊗ g) = g`` and ``m_M(X ⊗ g) = Xg``."""
    return {g: 1} if letter == 0 else module.x_vec({g: 1})


def delta_module(module: GradedModulePresentation, g: Gen) -> dict[tuple[int, Gen], int]:
    """``Δ_M(t) = X ⊗ t + 1 ⊗ Xt + cX ⊗ Xt``."""
    out: dict[tuple[int, Gen], int] = {(1, g): 1}
    for (k, e), v in module.x_vec({g: 1}).items():
        out[(0, (k, e))] = out.get((0, (k, e)), 0) + v
        out[(1, (k, e + 1))] = out.get((1, (k, e + 1)), 0) + v
    return out


def module_maps(module: GradedModulePresentation, window: tuple[int, int]) -> dict[str, dict[int, list[list[int]]]]:
    """Matrices of ``m_M``, ``Δ_M`` and ``ι_M`` on free components, by source degree.

    ``m_M : (A⊗M)_j -> M_{j-1}``, ``Δ_M : M_j -> (A⊗M)_{j-1}`` and
    ``ι_M : M_j -> (A⊗M)_{j+1}``; bases are those of :meth:`basis` and
    ``1 ⊗ F_{j-1}, X ⊗ F_{j+1}``.
    """
    lo, hi = window
    if hi < lo or hi < module.min_degree - 1:
        raise WindowTooSmall(f"window {window} misses the module, whose lowest degree is {module.min_degree}")
    out: dict[str, dict[int, list[list[int]]]] = {"m": {}, "delta": {}, "iota": {}}
    for j in range(lo, hi + 1):
        src = _a_tensor_basis(module, j)
        out["m"][j] = _matrix([m_module(module, a, g) for a, g in src], module.basis(j - 1))
        gens = module.basis(j)
        out["delta"][j] = _matrix([delta_module(module, g) for g in gens], _a_tensor_basis(module, j - 1))
        out["iota"][j] = _matrix([{(0, g): 1} for g in gens], _a_tensor_basis(module, j + 1))
    return out


def check_splitting(module: GradedModulePresentation, window: tuple[int, int]) -> bool:
    """``A ⊗ M = Δ_M M ⊕ ι_M M`` degree by degree (spanning and rank count)."""
    lo, hi = window
    for j in range(lo, hi + 1):
        rows = _a_tensor_basis(module, j)
        index = {k: t for t, k in enumerate(rows)}
        n = len(rows)
        if not n:
            continue
        rels = [
            _dense({(a, g): v for g, v in r.items()}, index)
            for a, jj in ((0, j - 1), (1, j + 1))
            for r in module.relation_vectors(jj)
        ]
        images = [_dense(delta_module(module, g), index) for g in module.basis(j + 1)]
        images += [_dense({(0, g): 1}, index) for g in module.basis(j - 1)]
        ident = [[int(a == b) for a in range(n)] for b in range(n)]
        if not lattice_quotient(ident, images + rels, n)[0].is_zero():
            return False
        whole = lattice_quotient(ident, rels, n)[0]
        if whole.rank != module.component(j + 1).rank + module.component(j - 1).rank:
            return False
    return True


# ---------------------------------------------------------------------------
# tangle complexes
# ---------------------------------------------------------------------------

TKey = tuple[int, int, int, int]  # (lam, mask, generator, power of c)


@dataclass
class TangleComplex:
    """Free chain groups with per-bidegree relation lattices."""

    diagram: LinkDiagram
    module: GradedModulePresentation
    free: BigradedComplex
    relations: dict[tuple[int, int], list[dict[int, int]]]

    @property
    def window(self):
        return self.free.window

    def d_squared_zero(self) -> bool:
        return self.free.d_squared_zero()

    def homology_at(self, i: int, j: int) -> AbelianGroup:
        free = self.free
        n = free.rank(i, j)
        if not n:
            return AbelianGroup()
        m = free.rank(i + 1, j)
        cols = free.matrix(i, j) if m else [{} for _ in range(n)]
        rel_next = self.relations.get((i + 1, j), [])
        kernel = kernel_basis(list(cols) + list(rel_next), m)
        numer = [vec[:n] for vec in kernel]
        sub = [_from_sparse(r, n) for r in self.relations.get((i, j), [])]
        sub += [_from_sparse(col, n) for col in free.matrix(i - 1, j)]
        return lattice_quotient(numer, sub, n)[0] if numer else AbelianGroup()

    def homology(self) -> BigradedGroups:
        if self.module.is_free:
            return all_homology(self.free)
        groups = {(i, j): self.homology_at(i, j) for (i, j) in self.free.bases}
        return BigradedGroups(Ring.ZC, groups, self.free.window)

    def to_json(self) -> dict:
        out = self.free.to_json()
        out["module"] = self.module.to_json()
        out["relations"] = {f"{i},{j}": len(r) for (i, j), r in sorted(self.relations.items())}
        return out


def _from_sparse(col: Mapping[int, int], n: int) -> list[int]:
    out = [0] * n
    for r, v in col.items():
        out[r] = v
    return out


def tangle_window(d: LinkDiagram, module: GradedModulePresentation) -> tuple[int, int]:
    """Default window: from the lowest nonzero degree up ``2n + 8`` plus the module's spread."""
    cube = StateCube(d, Ring.ZC)
    lo = _lowest_degree(d, cube, module)
    spread = max(module.degrees) - module.min_degree
    return lo, lo + 2 * d.n + 8 + spread


def _lowest_degree(d: LinkDiagram, cube: StateCube, module: GradedModulePresentation) -> int:
    shift = degree_shift(d)
    return min(popcount(lam) - (cube.ncirc(lam) - 1) for lam in range(1 << cube.n)) + module.min_degree + shift


def build_tangle_complex(
    d: LinkDiagram, module: GradedModulePresentation, window: tuple[int, int] | None = None
) -> TangleComplex:
    """The complex ``C_M(D)`` restricted to the q-degrees of ``window``."""
    if not d.is_tangle:
        raise NotATangle("the diagram has no marked open strand")
    cube = StateCube(d, Ring.ZC)
    lowest = _lowest_degree(d, cube, module)
    if window is None:
        window = tangle_window(d, module)
    lo, hi = window
    if hi < lo or hi < lowest:
        raise WindowTooSmall(f"window {window} ends below the lowest degree {lowest}")
    marked = d.marked_arc
    shift = degree_shift(d)
    x = d.x
    gens: dict[tuple[int, int], list[TKey]] = {}
    for lam in range(1 << cube.n):
        state = cube.states[lam]
        ip = state.pos[marked]
        i = popcount(lam) - x
        for mask in words(state.k):
            if mask >> ip & 1:
                continue
            base = (state.k - 1) - 2 * popcount(mask) + popcount(lam) + shift
            for k, dg in enumerate(module.degrees):
                start = base + dg
                first = max(lo, start)
                if (first - start) % 2:
                    first += 1
                for j in range(first, hi + 1, 2):
                    gens.setdefault((i, j), []).append((lam, mask, k, (j - start) // 2))
    for key in gens:
        gens[key].sort()

    def differential(key: TKey) -> dict[TKey, int]:
        return _tangle_differential(cube, module, marked, key)

    meta = {"module": module.name, "tangle": True}
    free = complex_from_generators(Ring.ZC, gens, differential, d.x, d.y, (lo, hi), meta)
    relations: dict[tuple[int, int], list[dict[int, int]]] = {}
    if not module.is_free:
        for (i, j), keys in free.bases.items():
            index = free.index(i, j)
            seen = set()
            rels = []
            for lam, mask, _, _ in keys:
                if (lam, mask) in seen:
                    continue
                seen.add((lam, mask))
                state = cube.states[lam]
                base = (state.k - 1) - 2 * popcount(mask) + popcount(lam) + shift
                for vec in module.relation_vectors(j - base):
                    rels.append({index[(lam, mask, k, e)]: v for (k, e), v in vec.items()})
            relations[(i, j)] = rels
    return TangleComplex(d, module, free, relations)


def _tangle_differential(cube: StateCube, module: GradedModulePresentation, marked: int, key: TKey) -> dict[TKey, int]:
    lam, mask, g, e = key
    out: dict[TKey, int] = {}

    def add(k: TKey, v: int) -> None:
        if v:
            out[k] = out.get(k, 0) + v

    src = cube.states[lam]
    ip_s = src.pos[marked]
    for a in range(cube.n):
        if lam >> a & 1:
            continue
        lam2 = lam | 1 << a
        sign = cube.signs.sign(lam, a)
        sm = cube.edge(lam, a)
        dst = cube.states[lam2]
        ip_t = dst.pos[marked]
        rest = 0
        for t in range(src.k):
            if mask >> t & 1 and sm.perm[t] >= 0:
                rest |= 1 << sm.perm[t]
        if sm.kind == "merge" and ip_s in sm.src:
            other = sm.src[1] if sm.src[0] == ip_s else sm.src[0]
            if mask >> other & 1:
                for (k2, e2), v in module.x_vec({(g, e): 1}).items():
                    add((lam2, rest, k2, e2), sign * v)
            else:
                add((lam2, rest, g, e), sign)
        elif sm.kind == "split" and sm.src[0] == ip_s:
            q1, q2 = sm.dst
            new = q2 if q1 == ip_t else q1
            for (letter, (k2, e2)), v in delta_module(module, (g, e)).items():
                add((lam2, rest | letter << new, k2, e2), sign * v)
        else:
            for m2, e2, v in sm.apply(mask, e, True):
                add((lam2, m2, g, e2), sign * v)
    return {k: v for k, v in out.items() if v}


def tangle_homology(
    d: LinkDiagram, module: GradedModulePresentation, window: tuple[int, int] | None = None
) -> BigradedGroups:
    """``H^{i,j}(D, M)`` for every bidegree of the window."""
    return build_tangle_complex(d, module, window).homology()


# ---------------------------------------------------------------------------
# the left-handed trefoil table
# ---------------------------------------------------------------------------


def trefoil_table_prediction(module: GradedModulePresentation, window: tuple[int, int]) -> dict[tuple[int, int], AbelianGroup]:
    """``ker 2X(M){8}``, ``(M/2XM){6}`` and ``M{2}`` in homological degrees -3, -2, 0."""
    lo, hi = window
    out = {}
    for j in range(lo, hi + 1):
        for i, group in ((-3, module.ker_2x(j + 8)), (-2, module.coker_2x(j + 6)), (0, module.component(j + 2))):
            if not group.is_zero():
                out[(i, j)] = group
    return out


# ---------------------------------------------------------------------------
# naturality in the module
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModuleMap:
    """A degree-0 map sending ``g_s`` to ``sum_r matrix[r][s] c^{e} h_r``."""

    source: GradedModulePresentation
    target: GradedModulePresentation
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        src, dst = self.source, self.target
        if len(self.matrix) != dst.ngens or any(len(row) != src.ngens for row in self.matrix):
            raise InvalidModule("module map matrix has the wrong shape")
        for s, deg in enumerate(src.degrees):
            g = {(s, 0): 1}
            gap = _subtract(self.apply(src.x_vec(g)), dst.x_vec(self.apply(g)))
            if gap and not dst.in_relations(gap, deg - 2):
                raise InvalidModule(f"module map does not commute with X on generator {s}")
        for deg, vec in src._closed:
            image = self.apply(vec)
            if image and not dst.in_relations(image, deg):
                raise InvalidModule("module map does not send relations to relations")

    def apply(self, vec: Mapping[Gen, int]) -> Vec:
        out: Vec = {}
        for (s, e), v in vec.items():
            for r in range(self.target.ngens):
                a = self.matrix[r][s]
                if a:
                    diff = self.source.degrees[s] - self.target.degrees[r]
                    if not _power_ok(diff):
                        raise InvalidModule("module map is not homogeneous of degree 0")
                    key = (r, e + diff // 2)
                    out[key] = out.get(key, 0) + a * v
        return {k: v for k, v in out.items() if v}


def _subtract(a: Mapping[Gen, int], b: Mapping[Gen, int]) -> Vec:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v}


def _quotient_data(cplx: TangleComplex, i: int, j: int):
    free = cplx.free
    n = free.rank(i, j)
    m = free.rank(i + 1, j)
    cols = free.matrix(i, j) if m else [{} for _ in range(n)]
    kernel = kernel_basis(list(cols) + list(cplx.relations.get((i + 1, j), [])), m)
    numer = [vec[:n] for vec in kernel]
    sub = [_from_sparse(r, n) for r in cplx.relations.get((i, j), [])]
    sub += [_from_sparse(col, n) for col in free.matrix(i - 1, j)]
    return lattice_quotient(numer, sub, n) if numer else (AbelianGroup(), [], [], lambda v: [])


def induced_cokernel(
    d: LinkDiagram, fmap: ModuleMap, i: int, j: int, window: tuple[int, int] | None = None
) -> AbelianGroup:
    """Cokernel of ``H^{i,j}(D, M) -> H^{i,j}(D, N)`` induced by ``fmap``."""
    window = window or (j, j)
    try:
        src = build_tangle_complex(d, fmap.source, window)
        dst = build_tangle_complex(d, fmap.target, window)
    except WindowTooSmall:
        # below the lowest degree of either module both groups vanish
        return AbelianGroup()
    _, gens, _, _ = _quotient_data(src, i, j)
    group, _, orders, coords = _quotient_data(dst, i, j)
    keys_src = src.free.bases.get((i, j), [])
    index = dst.free.index(i, j) if dst.free.rank(i, j) else {}
    images = []
    for vec in gens:
        image = [0] * len(index)
        for c, v in enumerate(vec):
            if v:
                lam, mask, g, e = keys_src[c]
                for (k2, e2), w in fmap.apply({(g, e): 1}).items():
                    image[index[(lam, mask, k2, e2)]] += v * w
        images.append(coords(image))
    return _cokernel(images, orders)


def functor_cokernel(fmap: ModuleMap, functor: str, degree: int) -> AbelianGroup:
    """Cokernel of ``F(M)_degree -> F(N)_degree`` for ``F`` one of ``ker2x``, ``coker2x``, ``id``."""
    src, dst = fmap.source, fmap.target
    sb, db = src.basis(degree), dst.basis(degree)
    s_index = {g: t for t, g in enumerate(sb)}
    d_index = {g: t for t, g in enumerate(db)}
    ident_s = [[int(a == b) for a in range(len(sb))] for b in range(len(sb))]
    ident_d = [[int(a == b) for a in range(len(db))] for b in range(len(db))]
    rel_s = [_dense(r, s_index) for r in src.relation_vectors(degree)]
    rel_d = [_dense(r, d_index) for r in dst.relation_vectors(degree)]
    if functor == "ker2x":
        numer_s = _ker2x_lattice(src, degree)
        numer_d = _ker2x_lattice(dst, degree)
        sub_s, sub_d = rel_s, rel_d
    elif functor == "coker2x":
        numer_s, numer_d = ident_s, ident_d
        sub_s = rel_s + src._times_2x(degree + 2)
        sub_d = rel_d + dst._times_2x(degree + 2)
    elif functor == "id":
        numer_s, numer_d, sub_s, sub_d = ident_s, ident_d, rel_s, rel_d
    else:
        raise ValueError(f"unknown functor {functor!r}")
    if not numer_d:
        return AbelianGroup()
    group, _, orders, coords = lattice_quotient(numer_d, sub_d, len(db))
    gens = lattice_quotient(numer_s, sub_s, len(sb))[1] if numer_s else []
    images = []
    for vec in gens:
        out = fmap.apply({sb[c]: v for c, v in enumerate(vec) if v})
        images.append(coords(_dense(out, d_index)))
    return _cokernel(images, orders)


def _ker2x_lattice(module: GradedModulePresentation, j: int) -> list[list[int]]:
    n = len(module.basis(j))
    m = len(module.basis(j - 2))
    cols = [{r: v for r, v in enumerate(col) if v} for col in module._times_2x(j)]
    index2 = {g: t for t, g in enumerate(module.basis(j - 2))}
    rels2 = [{r: v for r, v in enumerate(_dense(r_, index2)) if v} for r_ in module.relation_vectors(j - 2)]
    return [vec[:n] for vec in kernel_basis(cols + rels2, m)] if n else []


def _cokernel(images: Iterable[Sequence[int]], orders: Sequence[int]) -> AbelianGroup:
    r = len(orders)
    if not r:
        return AbelianGroup()
    ident = [[int(a == b) for a in range(r)] for b in range(r)]
    sub = [list(v) for v in images]
    sub += [[orders[t] if a == t else 0 for a in range(r)] for t in range(r) if orders[t]]
    return lattice_quotient(ident, sub, r)[0]
