"""The rank-two algebra A over R = Z[c] and its c = 0 reduction.

``A`` is free over ``R`` with basis ``1`` (degree +1) and ``X`` (degree -1),
``X^2 = 0`` and ``deg c = 2``.  Elements of ``A^{(x)k}`` are stored sparsely
as ``{(word, p): coef}`` where ``word`` is a tuple over ``{0, 1}`` (``0`` for
``1`` and ``1`` for ``X``) and ``p`` is the power of ``c``.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum

from .errors import ArityChainMismatch, ArityMismatch, FactorOutOfRange, NonPeriodicTail
from .laurent import LaurentPoly, LaurentSeriesRep

__all__ = [
    "ONE",
    "X",
    "Ring",
    "TensorElement",
    "mult",
    "comult",
    "unit",
    "counit",
    "insert_unit",
    "counit_at",
    "as_scalar",
    "permute",
    "Cobordism",
    "ElementaryCobordism",
    "evaluate_cobordism",
    "cobordism_degree",
    "RModuleDecomposition",
    "euler_char",
    "LaurentPoly",
    "LaurentSeriesRep",
]

ONE, X = 0, 1


class Ring(str, Enum):
    ZC = "zc"  # R = Z[c]
    Z = "z"  # c = 0

    @classmethod
    def coerce(cls, value: Ring | str) -> Ring:
        if isinstance(value, Ring):
            return value
        key = str(value).lower().replace("[", "").replace("]", "")
        if key in ("zc", "z c", "r"):
            return cls.ZC
        if key == "z":
            return cls.Z
        raise ValueError(f"unknown ring {value!r}; use 'z' or 'zc'")


def word_degree(word: Sequence[int]) -> int:
    return sum(-1 if w else 1 for w in word)


@dataclass(frozen=True)
class TensorElement:
    """A sparse element of ``A^{(x)k}`` over ``Z[c]`` or ``Z``."""

    ring: Ring
    k: int
    terms: Mapping[tuple[tuple[int, ...], int], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (word, p), coef in self.terms.items():
            if len(word) != self.k:
                raise ArityMismatch(f"word {word} does not have {self.k} factors")
            if p < 0 or (self.ring is Ring.Z and p):
                raise ValueError("c-powers must be non-negative, and zero over Z")
            if coef:
                clean[(tuple(word), p)] = clean.get((tuple(word), p), 0) + coef
        object.__setattr__(self, "terms", {key: v for key, v in clean.items() if v})

    @classmethod
    def basis(cls, word: Sequence[int], ring: Ring | str = Ring.ZC, p: int = 0, coef: int = 1) -> TensorElement:
        ring = Ring.coerce(ring)
        return cls(ring, len(word), {(tuple(word), p): coef})

    @classmethod
    def scalar(cls, ring: Ring | str = Ring.ZC, coef: int = 1, p: int = 0) -> TensorElement:
        return cls(Ring.coerce(ring), 0, {((), p): coef})

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {word_degree(w) + 2 * p for (w, p) in self.terms}

    def degree(self) -> int:
        degs = self.degrees()
        if len(degs) != 1:
            raise ValueError("element is not homogeneous")
        return degs.pop()

    def __add__(self, other: TensorElement) -> TensorElement:
        if other.k != self.k or other.ring is not self.ring:
            raise ArityMismatch("cannot add elements of different tensor powers")
        out = dict(self.terms)
        for key, v in other.terms.items():
            out[key] = out.get(key, 0) + v
        return TensorElement(self.ring, self.k, out)

    def __sub__(self, other: TensorElement) -> TensorElement:
        return self + other.scale(-1)

    def scale(self, coef: int, p: int = 0) -> TensorElement:
        return TensorElement(self.ring, self.k, {(w, q + p): v * coef for (w, q), v in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.ring is other.ring and self.k == other.k and dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash((self.ring, self.k, tuple(sorted(self.terms.items()))))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (w, p), v in sorted(self.terms.items()):
            word = "⊗".join("X" if b else "1" for b in w) or "1"
            cpow = "" if p == 0 else ("c*" if p == 1 else f"c^{p}*")
            parts.append(f"{v}*{cpow}{word}")
        return " + ".join(parts)


def _check(u: TensorElement, *positions: int) -> None:
    for i in positions:
        if not 0 <= i < u.k:
            raise FactorOutOfRange(f"factor {i} outside 0..{u.k - 1}")


def mult(u: TensorElement, i: int, j: int) -> TensorElement:
    """Multiply factors ``i`` and ``j``; the product sits at ``min(i, j)``."""
    _check(u, i, j)
    if i == j:
        raise FactorOutOfRange("mult needs two different factors")
    lo, hi = sorted((i, j))
    out: dict = {}
    for (w, p), v in u.terms.items():
        a, b = w[lo], w[hi]
        if a and b:
            continue
        nw = list(w)
        nw[lo] = a | b
        del nw[hi]
        key = (tuple(nw), p)
        out[key] = out.get(key, 0) + v
    return TensorElement(u.ring, u.k - 1, out)


def comult(u: TensorElement, i: int) -> TensorElement:
    """Apply the coproduct to factor ``i``; the outputs sit at ``i`` and ``i+1``.

    ``1 -> 1⊗X + X⊗1 + c X⊗X`` and ``X -> X⊗X``; the c-term is dropped over Z.
    """
    _check(u, i)
    out: dict = {}

    def put(word, p, v):
        key = (tuple(word), p)
        out[key] = out.get(key, 0) + v

    for (w, p), v in u.terms.items():
        pre, post = list(w[:i]), list(w[i + 1:])
        if w[i]:
            put(pre + [X, X] + post, p, v)
        else:
            put(pre + [ONE, X] + post, p, v)
            put(pre + [X, ONE] + post, p, v)
            if u.ring is Ring.ZC:
                put(pre + [X, X] + post, p + 1, v)
    return TensorElement(u.ring, u.k + 1, out)


def unit(ring: Ring | str = Ring.ZC) -> TensorElement:
    """The element ``1`` of ``A``, the image of ``1 in R`` under the unit."""
    return TensorElement.basis((ONE,), ring)


def insert_unit(u: TensorElement, i: int) -> TensorElement:
    """Tensor a new factor ``1`` in at position ``i``."""
    if not 0 <= i <= u.k:
        raise FactorOutOfRange(f"cannot insert at {i}")
    return TensorElement(
        u.ring, u.k + 1, {(w[:i] + (ONE,) + w[i:], p): v for (w, p), v in u.terms.items()}
    )


def counit_at(u: TensorElement, i: int) -> TensorElement:
    """Apply the counit to factor ``i``: ``1 -> -c`` (0 over Z), ``X -> 1``."""
    _check(u, i)
    out: dict = {}
    for (w, p), v in u.terms.items():
        rest = w[:i] + w[i + 1:]
        if w[i]:
            key, val = (rest, p), v
        else:
            if u.ring is Ring.Z:
                continue
            key, val = (rest, p + 1), -v
        out[key] = out.get(key, 0) + val
    return TensorElement(u.ring, u.k - 1, out)


def counit(u: TensorElement) -> LaurentPoly:
    """Counit of a single-factor element, returned as a polynomial in ``c``."""
    if u.k != 1:
        raise ArityMismatch(f"counit takes one factor, got {u.k}")
    return as_scalar(counit_at(u, 0))


def as_scalar(u: TensorElement) -> LaurentPoly:
    """Read a zero-factor element as a polynomial in ``c``."""
    if u.k != 0:
        raise ArityMismatch(f"expected a scalar, got {u.k} factors")
    return LaurentPoly({p: v for ((), p), v in u.terms.items()})


def permute(u: TensorElement, i: int, j: int) -> TensorElement:
    _check(u, i, j)
    out = {}
    for (w, p), v in u.terms.items():
        nw = list(w)
        nw[i], nw[j] = nw[j], nw[i]
        out[(tuple(nw), p)] = v
    return TensorElement(u.ring, u.k, out)


# ---------------------------------------------------------------------------
# elementary cobordisms
# ---------------------------------------------------------------------------


class Cobordism(str, Enum):
    S21 = "m"
    S12 = "delta"
    S01 = "iota"
    S10 = "epsilon"
    S22 = "perm"
    S11 = "id"
    T1 = "delta_M"
    T2 = "m_M"


_ARITY = {
    Cobordism.S21: (2, 1),
    Cobordism.S12: (1, 2),
    Cobordism.S01: (0, 1),
    Cobordism.S10: (1, 0),
    Cobordism.S22: (2, 2),
    Cobordism.S11: (1, 1),
    Cobordism.T1: (1, 2),
    Cobordism.T2: (2, 1),
}

# degree of each structure map, equal to the Euler characteristic of the piece
_DEGREE = {
    Cobordism.S21: -1,
    Cobordism.S12: -1,
    Cobordism.S01: 1,
    Cobordism.S10: 1,
    Cobordism.S22: 0,
    Cobordism.S11: 0,
    Cobordism.T1: -1,
    Cobordism.T2: -1,
}


@dataclass(frozen=True)
class ElementaryCobordism:
    """One layer of a surface: a structure map on the named tensor factors.

    For the module maps ``T1``/``T2`` the module factor is the last position
    named; with ``M = A`` they agree with the coproduct and product.
    """

    kind: Cobordism
    positions: tuple[int, ...] = ()

    def __post_init__(self):
        kind = Cobordism(self.kind)
        object.__setattr__(self, "kind", kind)
        need = {Cobordism.S01: 1}.get(kind, _ARITY[kind][0])
        if len(self.positions) != need:
            raise ArityMismatch(f"{kind.name} needs {need} positions, got {self.positions}")

    @property
    def degree(self) -> int:
        return _DEGREE[self.kind]

    @property
    def factor_change(self) -> int:
        a, b = _ARITY[self.kind]
        return b - a


def cobordism_degree(pieces: Iterable[ElementaryCobordism]) -> int:
    return sum(p.degree for p in pieces)


def evaluate_cobordism(pieces: Sequence[ElementaryCobordism], element: TensorElement) -> TensorElement:
    """Apply the layers in order; the total degree shift is the Euler characteristic."""
    u = element
    for layer in pieces:
        kind, pos = layer.kind, layer.positions
        try:
            if kind is Cobordism.S01:
                u = insert_unit(u, pos[0])
            else:
                _check(u, *pos)
                if kind in (Cobordism.S21, Cobordism.T2):
                    u = mult(u, pos[0], pos[1])
                elif kind in (Cobordism.S12, Cobordism.T1):
                    u = comult(u, pos[0])
                elif kind is Cobordism.S10:
                    u = counit_at(u, pos[0])
                elif kind is Cobordism.S22:
                    u = permute(u, pos[0], pos[1])
        except FactorOutOfRange as exc:
            raise ArityChainMismatch(f"layer {layer} does not fit {u.k} factors: {exc}") from None
    return u


# ---------------------------------------------------------------------------
# graded R-modules and Euler characteristics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RModuleDecomposition:
    """A direct sum of shifted copies of ``R`` and of ``R/nR``.

    ``free`` lists shifts ``m`` of summands ``R{m}``; ``torsion`` lists pairs
    ``(m, n)`` for ``(R/nR){m}``.  ``R{m}`` has a copy of ``Z`` in every degree
    ``-m, -m+2, ...``; the ring may also be ``Z`` (c = 0), in which case each
    summand lives in the single degree ``-m``.
    """

    free: tuple[int, ...] = ()
    torsion: tuple[tuple[int, int], ...] = ()
    ring: Ring = Ring.ZC

    def component(self, j: int) -> tuple[int, list[int]]:
        rank = sum(1 for m in self.free if self._hits(m, j))
        tors = sorted(n for m, n in self.torsion if self._hits(m, j))
        return rank, tors

    def _hits(self, m: int, j: int) -> bool:
        if self.ring is Ring.Z:
            return j == -m
        return j >= -m and (j + m) % 2 == 0

    def shift(self, n: int) -> RModuleDecomposition:
        return RModuleDecomposition(
            tuple(m + n for m in self.free), tuple((m + n, t) for m, t in self.torsion), self.ring
        )

    def __add__(self, other: RModuleDecomposition) -> RModuleDecomposition:
        return RModuleDecomposition(self.free + other.free, self.torsion + other.torsion, self.ring)


def euler_char(
    family: RModuleDecomposition | Mapping[int, int],
    window: tuple[int, int] | None = None,
    tail: tuple[int, int] | None = None,
) -> LaurentSeriesRep:
    """Graded Euler characteristic ``sum_j rank(M_j) q^j`` as ``a + b/(1-q^2)``.

    ``family`` is either an :class:`RModuleDecomposition` (exact) or a map of
    ranks on ``window`` together with the eventual ranks ``tail`` in even and
    odd degrees.
    """
    if isinstance(family, RModuleDecomposition):
        if family.ring is Ring.Z:
            return LaurentSeriesRep(LaurentPoly([(-m, 1) for m in family.free]), LaurentPoly())
        return LaurentSeriesRep.from_numerator(LaurentPoly([(-m, 1) for m in family.free]))
    if window is None:
        if not family:
            raise NonPeriodicTail("an empty rank table needs an explicit window")
        window = (min(family), max(family))
    return LaurentSeriesRep.from_ranks(family, window, tail)


A_MODULE = RModuleDecomposition(free=(-1, 1))
R_MODULE = RModuleDecomposition(free=(0,))
