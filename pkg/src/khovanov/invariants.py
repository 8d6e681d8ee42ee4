"""Polynomial invariants and structural checks on homology.

The Kauffman bracket is computed twice, by a memoised skein recursion and by
the state sum, so each can serve as an oracle for the other.  The property
checks compare isomorphism classes (rank and torsion) only and return a
:class:`PropertyReport` carrying a concrete bidegree whenever they fail.
"""

from __future__ import annotations

import json
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from functools import lru_cache

from .algebra import Ring
from .cube import StateCube, default_window, khovanov_complex, popcount
from .diagram import (
    LinkDiagram,
    _UnionFind,
    disjoint_union,
    is_minus_adequate,
    is_plus_adequate,
    mirror,
    oriented_smoothing,
    resolution_pairs,
    reverse_component,
    switch_crossing,
)
from .errors import NonDivisible
from .homology import AbelianGroup, BigradedGroups, direct_sum, khovanov_homology
from .laurent import LaurentPoly

LOOP = LaurentPoly.loop()

# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

PASS, FAIL, OBSERVED, VIOLATED = "pass", "fail", "observed", "violated"


@dataclass
class PropertyReport:
    """Outcome of one property check.

    ``status`` is ``pass``/``fail`` for asserted properties and
    ``observed``/``violated`` for report-only ones.  ``witness`` holds the
    first offending bidegree and both sides of the comparison.
    """

    name: str
    status: str
    witness: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status in (PASS, OBSERVED)

    @property
    def asserted(self) -> bool:
        return self.status in (PASS, FAIL)

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "witness": self.witness}

    def __str__(self) -> str:
        extra = f" {json.dumps(self.witness, sort_keys=True)}" if self.witness else ""
        return f"{self.name}: {self.status}{extra}"


def _report(name: str, mismatch: dict | None, ok: str = PASS, bad: str = FAIL) -> PropertyReport:
    return PropertyReport(name, bad if mismatch else ok, mismatch or {})


# ---------------------------------------------------------------------------
# Kauffman bracket and Jones polynomial
# ---------------------------------------------------------------------------


def _canonical(crossings: Sequence[tuple[int, ...]], pairs: Sequence[tuple[int, int]], loops: int):
    """Merge arcs joined by ``pairs`` and relabel by first appearance."""
    labels = {a for cr in crossings for a in cr} | {a for p in pairs for a in p}
    uf = _UnionFind(labels)
    for a, b in pairs:
        uf.union(a, b)
    merged = [tuple(uf.find(a) for a in cr) for cr in crossings]
    used = {a for cr in merged for a in cr}
    loops += len({uf.find(a) for a in labels} - used)
    names: dict[int, int] = {}
    out = []
    for cr in merged:
        out.append(tuple(names.setdefault(a, len(names) + 1) for a in cr))
    return tuple(out), loops


@lru_cache(maxsize=200_000)
def _bracket(crossings: tuple[tuple[int, ...], ...]) -> LaurentPoly:
    if not crossings:
        return LaurentPoly.one()
    first, rest = crossings[0], crossings[1:]
    total = LaurentPoly()
    for one, weight in ((False, LaurentPoly.one()), (True, LaurentPoly.monomial(1, -1))):
        sub, loops = _canonical(rest, resolution_pairs(first, one), 0)
        total = total + weight * _bracket(sub) * LOOP**loops
    return total


def kauffman_bracket(d: LinkDiagram) -> LaurentPoly:
    """``<D>`` by the skein rule ``<D> = <D_0> - q <D_1>`` with ``<O> = q + q^-1``."""
    crossings, loops = _canonical(d.crossings, (), d.free_loops)
    return _bracket(crossings) * LOOP**loops


def state_sum_bracket(d: LinkDiagram) -> LaurentPoly:
    """``sum over states (-q)^{|lam|} (q + q^-1)^{#circles}``, the second oracle."""
    cube = StateCube(d)
    total = LaurentPoly()
    for lam in range(1 << d.n):
        size = popcount(lam)
        total = total + LaurentPoly.monomial(size, (-1) ** size) * LOOP ** cube.ncirc(lam)
    return total


def scaled_bracket(d: LinkDiagram) -> LaurentPoly:
    """``K(D) = (-1)^x q^{y - 2x} <D>``."""
    return kauffman_bracket(d).shift(d.y - 2 * d.x) * (-1) ** d.x


def jones(d: LinkDiagram) -> LaurentPoly:
    """The Jones polynomial as a Laurent polynomial in ``s = sqrt(t)``.

    ``V`` is obtained from ``K(D) / (q + q^-1)`` by the substitution
    ``sqrt(t) = -q``, so the coefficient of ``s^e`` is ``(-1)^e`` times the
    coefficient of ``q^e``.
    """
    return scaled_bracket(d).divide_exact(LOOP).sign_twist()


def format_jones(v: LaurentPoly) -> str:
    """Render a polynomial in ``sqrt(t)`` using powers of ``t`` (halves allowed)."""
    if v.is_zero():
        return "0"
    parts = []
    for e, c in sorted(v.items(), reverse=True):
        power = "" if e == 0 else ("t" if e == 2 else (f"t^{e // 2}" if e % 2 == 0 else f"t^({e}/2)"))
        mag = abs(c)
        mono = str(mag) if not power else (power if mag == 1 else f"{mag}*{power}")
        parts.append(("-" if c < 0 else "+", mono))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, mono in parts[1:]:
        text += f" {sign} {mono}"
    return text


def skein_triple(d: LinkDiagram, c: int) -> tuple[LinkDiagram, LinkDiagram, LinkDiagram]:
    """``(L_+, L_-, L_0)`` agreeing with ``d`` away from crossing ``c``.

    ``L_+`` has a positive (sign +1) crossing at ``c``, ``L_0`` is the oriented
    smoothing.
    """
    plus = d if d.signs[c] > 0 else switch_crossing(d, c)
    minus = switch_crossing(plus, c)
    return plus, minus, oriented_smoothing(d, c)


def check_skein(d: LinkDiagram, c: int) -> PropertyReport:
    """``t^-1 V(L_+) - t V(L_-) = (t^{1/2} - t^{-1/2}) V(L_0)`` in ``s = sqrt(t)``."""
    plus, minus, zero = skein_triple(d, c)
    lhs = jones(plus).shift(-2) - jones(minus).shift(2)
    rhs = jones(zero) * LaurentPoly({1: 1, -1: -1})
    mismatch = None if lhs == rhs else {"lhs": lhs.to_json(), "rhs": rhs.to_json()}
    return _report("jones_skein", mismatch)


# ---------------------------------------------------------------------------
# cached homology
# ---------------------------------------------------------------------------


@lru_cache(maxsize=256)
def _cached(d: LinkDiagram, ring: str, window: tuple[int, int] | None) -> BigradedGroups:
    return khovanov_homology(d, ring, window)


def homology_c0(d: LinkDiagram) -> BigradedGroups:
    """``H(D)`` with ``c = 0`` on its full support (cached)."""
    return _cached(d, Ring.Z.value, None)


def homology_zc(d: LinkDiagram, window: tuple[int, int] | None = None) -> BigradedGroups:
    """``H(D)`` over ``Z[c]`` on ``window`` (default ``[j_min, j_min + 2n + 8]``, cached)."""
    return _cached(d, Ring.ZC.value, tuple(window) if window else None)


def _poly_of(groups: BigradedGroups) -> LaurentPoly:
    acc: dict[int, int] = {}
    for (i, j), g in groups.groups.items():
        acc[j] = acc.get(j, 0) + (-1) ** (i % 2) * g.rank
    return LaurentPoly(acc)


# ---------------------------------------------------------------------------
# Euler characteristics
# ---------------------------------------------------------------------------


def check_euler_c0(d: LinkDiagram, groups: BigradedGroups | None = None) -> PropertyReport:
    """``K(D) = sum (-1)^i q^j rank H^{i,j}`` over ``Z`` with ``c = 0``."""
    groups = groups or homology_c0(d)
    k = scaled_bracket(d)
    chi = _poly_of(groups)
    if k == chi:
        return PropertyReport("euler_c0", PASS)
    j = next(e for e in sorted(set(k.exponents()) | set(chi.exponents())) if k.coeff(e) != chi.coeff(e))
    return PropertyReport("euler_c0", FAIL, {"j": j, "bracket": k.coeff(j), "euler": chi.coeff(j)})


def check_euler_Zc(d: LinkDiagram, window: tuple[int, int] | None = None) -> PropertyReport:
    """``K(D) = (1 - q^2) sum (-1)^i chi(H^i)``, compared degree by degree.

    Multiplying out, the graded Euler characteristic at ``j`` must equal
    ``sum_{k >= 0} K_{j - 2k}``, which is checked for every ``j`` in the window.
    """
    groups = homology_zc(d, window)
    k = scaled_bracket(d)
    lo, hi = groups.window
    for j in range(lo, hi + 1):
        expected = sum(c for e, c in k.items() if e <= j and (j - e) % 2 == 0)
        got = groups.euler(j)
        if expected != got:
            return PropertyReport("euler_Zc", FAIL, {"j": j, "series": expected, "euler": got})
    return PropertyReport("euler_Zc", PASS, {})


# ---------------------------------------------------------------------------
# adequacy and homological length
# ---------------------------------------------------------------------------


def homological_length(groups: BigradedGroups) -> int:
    """``max i - min i`` over the nonzero groups (0 for the zero family)."""
    degrees = groups.homological_degrees()
    return degrees[-1] - degrees[0] if degrees else 0


def crossing_lower_bound(d: LinkDiagram) -> int:
    return homological_length(homology_c0(d))


def is_adequate(d: LinkDiagram) -> bool:
    return is_plus_adequate(d) and is_minus_adequate(d)


def check_adequate_length(d: LinkDiagram) -> PropertyReport:
    """For an adequate diagram with ``n`` crossings the length equals ``n``."""
    if not is_adequate(d):
        return PropertyReport("adequate_length", PASS, {"adequate": False})
    hl = crossing_lower_bound(d)
    mismatch = None if hl == d.n else {"n": d.n, "hl": hl}
    return _report("adequate_length", mismatch)


# ---------------------------------------------------------------------------
# structural checks
# ---------------------------------------------------------------------------


def _first_mismatch(keys, left: Callable, right: Callable, label: str):
    for key in sorted(keys):
        a, b = left(key), right(key)
        if a != b:
            return {"i": key[0], "j": key[1], label: [str(a), str(b)]}
    return None


def check_d_squared(d: LinkDiagram) -> PropertyReport:
    for ring in (Ring.Z, Ring.ZC):
        cplx = khovanov_complex(d, ring)
        if not cplx.d_squared_zero():
            bad = next(
                (i, j)
                for (i, j) in cplx.diffs
                if not khovanov_complex(d, ring, (j, j)).d_squared_zero()
            )
            return PropertyReport("d_squared", FAIL, {"ring": ring.value, "i": bad[0], "j": bad[1]})
    return PropertyReport("d_squared", PASS)


def check_parity(d: LinkDiagram) -> PropertyReport:
    """Chain groups, hence homology, vanish when ``j + 1`` and ``cm`` agree mod 2."""
    cm = d.cm
    for ring in (Ring.Z, Ring.ZC):
        cplx = khovanov_complex(d, ring)
        for (i, j), basis in sorted(cplx.bases.items()):
            if basis and (j + 1 - cm) % 2 == 0:
                return PropertyReport("parity", FAIL, {"ring": ring.value, "i": i, "j": j, "cm": cm})
    return PropertyReport("parity", PASS)


def check_mirror(d: LinkDiagram) -> PropertyReport:
    """``rank H^{i,j}(D!) = rank H^{-i,-j}(D)`` and ``Tor H^{i,j}(D!) = Tor H^{1-i,-j}(D)``."""
    h = homology_c0(d)
    hm = homology_c0(mirror(d))
    keys = set(hm.groups) | {(-i, -j) for i, j in h.groups} | {(1 - i, -j) for i, j in h.groups}
    ranks = _first_mismatch(keys, lambda k: hm.group(*k).rank, lambda k: h.group(-k[0], -k[1]).rank, "rank")
    if ranks:
        return PropertyReport("mirror", FAIL, ranks)
    tors = _first_mismatch(
        keys, lambda k: hm.group(*k).torsion, lambda k: h.group(1 - k[0], -k[1]).torsion, "torsion"
    )
    return _report("mirror", tors)


def kunneth_prediction(h1: BigradedGroups, h2: BigradedGroups) -> dict[tuple[int, int], AbelianGroup]:
    pieces: dict[tuple[int, int], list[AbelianGroup]] = {}
    for (i1, j1), g1 in h1.groups.items():
        for (i2, j2), g2 in h2.groups.items():
            pieces.setdefault((i1 + i2, j1 + j2), []).append(g1.tensor(g2))
            # Tor(H^{i,j}, H^{k-i+1, m-j}) sits in degree k = i1 + i2 - 1
            pieces.setdefault((i1 + i2 - 1, j1 + j2), []).append(g1.tor(g2))
    out = {k: direct_sum(v) for k, v in pieces.items()}
    return {k: g for k, g in out.items() if not g.is_zero()}


def check_kunneth(d1: LinkDiagram, d2: LinkDiagram) -> PropertyReport:
    """``H(D1 ⊔ D2)`` against the tensor and Tor terms of the factors."""
    predicted = kunneth_prediction(homology_c0(d1), homology_c0(d2))
    actual = homology_c0(disjoint_union(d1, d2))
    keys = set(predicted) | set(actual.groups)
    mismatch = _first_mismatch(keys, lambda k: predicted.get(k, AbelianGroup()), lambda k: actual.group(*k), "group")
    return _report("kunneth", mismatch)


def check_connected_sum_ranks(k1: LinkDiagram, k2: LinkDiagram, csum: LinkDiagram | None = None) -> PropertyReport:
    """Rank balance of the long exact sequences linking ``K1 ⊔ K2`` and ``K1 # K2``.

    For each ``j`` the sequence
    ``H^{i-1,j-1}(⊔) -> H^{i-1,j-2}(#) -> H^{i,j}(#) -> H^{i,j-1}(⊔) -> ...``
    is exact, so the alternating rank sum vanishes and every term has rank at
    most the sum of its two neighbours.
    """
    from .diagram import connected_sum

    if csum is None:
        csum = connected_sum(k1, k2, k1.arcs[0] if k1.n else -1, k2.arcs[0] if k2.n else -1)
    hs = homology_c0(disjoint_union(k1, k2))
    hc = homology_c0(csum)
    js = {j for _, j in hs.groups} | {j for _, j in hc.groups}
    js = set().union(*({j, j + 1, j + 2} for j in js)) if js else set()
    ilo = min(hs.homological_degrees() + hc.homological_degrees(), default=0) - 2
    ihi = max(hs.homological_degrees() + hc.homological_degrees(), default=0) + 2
    for j in sorted(js):
        seq = []
        for i in range(ilo, ihi + 1):
            seq.append(("u", i, j - 1, hs.group(i, j - 1).rank))
            seq.append(("#", i, j - 2, hc.group(i, j - 2).rank))
            seq.append(("#", i + 1, j, hc.group(i + 1, j).rank))
        alt = sum((-1) ** t * r for t, (*_, r) in enumerate(seq))
        if alt:
            return PropertyReport("connected_sum", FAIL, {"j": j, "alternating_sum": alt})
        for t in range(1, len(seq) - 1):
            if seq[t][3] > seq[t - 1][3] + seq[t + 1][3]:
                _, i, jj, r = seq[t]
                return PropertyReport("connected_sum", FAIL, {"i": i, "j": jj, "rank": r, "term": seq[t][0]})
    return PropertyReport("connected_sum", PASS)


def check_ss_degeneration(d: LinkDiagram, window: tuple[int, int] | None = None) -> PropertyReport:
    """Report whether ``rank H^{i,j} = sum_{k >= 0} rank H_{c=0}^{i,j-2k}`` on the window."""
    hz = homology_c0(d)
    hc = homology_zc(d, window)
    lo, hi = hc.window
    is_ = set(hz.homological_degrees()) | set(hc.homological_degrees())
    for j in range(lo, hi + 1):
        for i in sorted(is_):
            predicted = sum(g.rank for (ii, jj), g in hz.groups.items() if ii == i and jj <= j and (j - jj) % 2 == 0)
            got = hc.rank(i, j)
            if predicted != got:
                return PropertyReport(
                    "ss_degeneration", VIOLATED, {"i": i, "j": j, "rank_Zc": got, "sum_c0": predicted}
                )
    return PropertyReport("ss_degeneration", OBSERVED)


def orientation_shift(d: LinkDiagram, comp: int) -> tuple[LinkDiagram, int, int, int]:
    """Reverse ``comp`` and return ``(D0, l, di, dj)`` with ``H^{i,j}(D0) = H^{i-di, j-dj}(D)``.

    ``l`` is half of (mixed x-type minus mixed y-type) crossings, so that
    ``x(D0) = x(D) - 2l`` and ``y(D0) = y(D) + 2l``; the same chain groups then
    sit at ``i + 2l`` and ``j + 6l``.
    """
    d0, l = reverse_component(d, comp)
    return d0, l, 2 * l, 6 * l


def check_orientation_reversal(d: LinkDiagram, comp: int = 0, ring: Ring | str = Ring.Z) -> PropertyReport:
    d0, l, di, dj = orientation_shift(d, comp)
    ring = Ring.coerce(ring)
    if ring is Ring.Z:
        h, h0 = homology_c0(d), homology_c0(d0)
    else:
        lo, hi = default_window(d)
        h = homology_zc(d, (lo, hi))
        h0 = homology_zc(d0, (lo + dj, hi + dj))
    expected = h.shifted(di, dj)
    keys = set(expected.groups) | set(h0.groups)
    mismatch = _first_mismatch(keys, lambda k: h0.group(*k), lambda k: expected.groups.get(k, AbelianGroup()), "group")
    if mismatch:
        mismatch["l"] = l
    return _report("orientation_reversal", mismatch)


def check_invariance(d1: LinkDiagram, d2: LinkDiagram) -> PropertyReport:
    """Equal bigraded groups in both theories for two diagrams of one link."""
    h1, h2 = homology_c0(d1), homology_c0(d2)
    if h1 != h2:
        keys = set(h1.groups) | set(h2.groups)
        return PropertyReport("invariance", FAIL, dict(_first_mismatch(keys, lambda k: h1.group(*k), lambda k: h2.group(*k), "group"), ring="z"))
    lo = min(default_window(d1)[0], default_window(d2)[0])
    window = (lo, lo + 2 * max(d1.n, d2.n) + 8)
    z1, z2 = homology_zc(d1, window), homology_zc(d2, window)
    if z1 != z2:
        keys = set(z1.groups) | set(z2.groups)
        return PropertyReport("invariance", FAIL, dict(_first_mismatch(keys, lambda k: z1.group(*k), lambda k: z2.group(*k), "group"), ring="zc"))
    return PropertyReport("invariance", PASS)


def check_bracket_oracles(d: LinkDiagram) -> PropertyReport:
    a, b = kauffman_bracket(d), state_sum_bracket(d)
    return _report("bracket_oracles", None if a == b else {"skein": a.to_json(), "state_sum": b.to_json()})


def check_jones_mirror(d: LinkDiagram) -> PropertyReport:
    try:
        v, vm = jones(d), jones(mirror(d))
    except NonDivisible as exc:
        return PropertyReport("jones_mirror", FAIL, {"error": str(exc)})
    return _report("jones_mirror", None if vm == v.substitute_inverse() else {"v": v.to_json(), "mirror": vm.to_json()})


# name -> check taking a single diagram
SINGLE_CHECKS: dict[str, Callable[[LinkDiagram], PropertyReport]] = {
    "bracket_oracles": check_bracket_oracles,
    "d_squared": check_d_squared,
    "euler_c0": check_euler_c0,
    "euler_Zc": check_euler_Zc,
    "parity": check_parity,
    "mirror": check_mirror,
    "jones_mirror": check_jones_mirror,
    "adequate_length": check_adequate_length,
    "ss_degeneration": check_ss_degeneration,
    "orientation_reversal": lambda d: _all_components(d),
}


def _all_components(d: LinkDiagram) -> PropertyReport:
    for comp in range(d.cm):
        rep = check_orientation_reversal(d, comp)
        if not rep.ok:
            rep.witness["component"] = comp
            return rep
    return PropertyReport("orientation_reversal", PASS)


def run_checks(d: LinkDiagram, names: Sequence[str] | None = None) -> list[PropertyReport]:
    names = list(SINGLE_CHECKS) if names is None else list(names)
    unknown = [n for n in names if n not in SINGLE_CHECKS]
    if unknown:
        raise KeyError(f"unknown properties: {', '.join(unknown)}")
    return [SINGLE_CHECKS[n](d) for n in names]
