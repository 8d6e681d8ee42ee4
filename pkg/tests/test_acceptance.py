"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -v`` or
``python tests/test_acceptance.py``; the collected lines are repeated in the
terminal summary.
"""

from __future__ import annotations

import os
import resource
import sys
import time
from dataclasses import dataclass

import pytest

from fixture_data import all_diagrams, diagram, invariance_pairs, movie, pair_diagrams, torus
from khovanov.algebra import Ring
from khovanov.cobordism import closed_surface_invariant, compare_on_homology, elementary_chain_map, movie_map
from khovanov.cube import default_window, twist_chain_reduce
from khovanov.diagram import closure, connected_sum, disjoint_union, make_diagram, parse_pd
from khovanov.homology import AbelianGroup, all_homology, khovanov_homology
from khovanov.invariants import (
    check_adequate_length,
    check_d_squared,
    check_euler_c0,
    check_euler_Zc,
    check_invariance,
    check_kunneth,
    check_mirror,
    check_orientation_reversal,
    check_parity,
    check_ss_degeneration,
    homological_length,
    homology_c0,
    jones,
    skein_triple,
)
from khovanov.laurent import LaurentPoly
from khovanov.tangle import (
    a_mod_2x,
    free_a_module,
    reduced_a_module,
    tangle_homology,
    tangle_window,
    trefoil_table_prediction,
)

pytestmark = pytest.mark.acceptance

Z, Z2 = AbelianGroup(1), AbelianGroup(0, (2,))


@dataclass
class Outcome:
    number: int
    title: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"criterion {self.number:2d} [{'PASS' if self.ok else 'FAIL'}] {self.title}: {self.detail}"


RESULTS: dict[int, Outcome] = {}


def record(number: int, title: str, ok: bool, detail: str) -> None:
    outcome = Outcome(number, title, ok, detail)
    RESULTS[number] = outcome
    print(outcome.line())
    assert ok, outcome.line()


def best_time(fn, repeat: int = 3) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


# ---------------------------------------------------------------------------
# expected T(2,k) tables
# ---------------------------------------------------------------------------


def torus_table_c0(k: int) -> dict[tuple[int, int], AbelianGroup]:
    """The expected c = 0 groups of T(2,k), entry by entry."""
    table = {(0, -k): Z, (0, 2 - k): Z}
    for j in range(1, (k - 1) // 2 + 1):
        table[(-2 * j - 1, -4 * j - 2 - k)] = Z
        table[(-2 * j, -4 * j - k)] = Z2
        table[(-2 * j, -4 * j + 2 - k)] = Z
    if k % 2 == 0:
        table[(-k, -3 * k)] = Z
        table[(-k, 2 - 3 * k)] = Z
    return table


def torus_modules_zc(k: int) -> dict[int, list[tuple[int, int]]]:
    """Summands ``(m, n)`` of each ``H^i`` over Z[c]: ``R{m}`` for n = 0, ``(R/nR){m}`` otherwise."""
    modules = {0: [(k, 0), (k - 2, 0)]}
    for j in range(1, (k - 1) // 2 + 1):
        modules[-2 * j] = [(4 * j + k, 2), (4 * j - 2 + k, 0)]
        modules[-2 * j - 1] = [(4 * j + 2 + k, 0)]
    if k % 2 == 0:
        modules[-k] = [(3 * k, 0), (3 * k - 2, 0)]
    return modules


def graded_components(modules: dict[int, list[tuple[int, int]]], window: tuple[int, int]):
    """Bidegree groups of the stated modules: a summand with shift m fills j = -m, -m + 2, ..."""
    lo, hi = window
    out = {}
    for i, summands in modules.items():
        for j in range(lo, hi + 1):
            rank, torsion = 0, []
            for m, n in summands:
                if j >= -m and (j + m) % 2 == 0:
                    if n:
                        torsion.append(n)
                    else:
                        rank += 1
            group = AbelianGroup(rank, tuple(torsion))
            if not group.is_zero():
                out[(i, j)] = group
    return out


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------


def test_criterion_01_torus_tables_c0():
    bad, slowest = [], 0.0
    for k in range(2, 8):
        start = time.perf_counter()
        got = khovanov_homology(torus(k), Ring.Z)
        elapsed = time.perf_counter() - start
        slowest = max(slowest, elapsed)
        if got.groups != torus_table_c0(k) or elapsed >= 5.0:
            bad.append(k)
    record(1, "T(2,k) tables with c = 0, k = 2..7", not bad, f"mismatched k {bad}; slowest {slowest:.2f}s of 5s")


def test_criterion_02_torus_tables_zc():
    bad = []
    for k in range(2, 6):
        window = (-3 * k - 2, k + 6)
        got = khovanov_homology(torus(k), Ring.ZC, window)
        if got.groups != graded_components(torus_modules_zc(k), window):
            bad.append(k)
    record(2, "T(2,k) tables over Z[c], k = 2..5", not bad, f"mismatched k {bad}")


def euler_fixtures() -> dict:
    small = {name: d for name, d in all_diagrams().items() if d.n <= 8}
    t, tr, f, h = diagram("trefoil_left"), diagram("trefoil_right"), diagram("figure_eight"), diagram("hopf")
    small["trefoil#trefoil_right"] = connected_sum(t, tr, 1, 1)
    small["trefoil#figure_eight"] = connected_sum(t, f, 1, 1)
    small["trefoil+hopf"] = disjoint_union(t, h)
    small["figure_eight+unknot"] = disjoint_union(f, diagram("unknot"))
    return small


def test_criterion_03_euler_characteristic():
    fixtures = euler_fixtures()
    bad = [
        name
        for name, d in fixtures.items()
        if not (check_euler_c0(d).ok and check_euler_Zc(d).ok)
    ]
    ok = not bad and len(fixtures) >= 20
    record(3, "Euler characteristic equals K(D)", ok, f"{len(fixtures)} diagrams, failures {bad}")


def test_criterion_04_jones_axioms():
    unknot_ok = jones(diagram("unknot")) == LaurentPoly.one()
    sqrt_diff = LaurentPoly({1: 1, -1: -1})
    bad = []
    for name, c in (("trefoil_left", 0), ("figure_eight", 1), ("hopf", 0)):
        plus, minus, zero = skein_triple(diagram(name), c)
        lhs = jones(plus).shift(-2) - jones(minus).shift(2)
        if lhs != jones(zero) * sqrt_diff:
            bad.append(name)
    record(4, "Jones axioms", unknot_ok and not bad, f"V(unknot) = 1: {unknot_ok}; skein failures {bad}")


def test_criterion_05_invariance():
    pairs = invariance_pairs()
    bad = []
    for entry in pairs:
        left, right = pair_diagrams(entry)
        if left == right or not check_invariance(left, right).ok:
            bad.append(entry["name"])
    kinds = sorted({entry["kind"] for entry in pairs})
    ok = not bad and len(pairs) >= 6
    record(5, "Reidemeister invariance in both theories", ok, f"{len(pairs)} pairs {kinds}, failures {bad}")


KUNNETH_PAIRS = [
    ("trefoil_left", "hopf"),
    ("figure_eight", "unknot"),
    ("trefoil_right", "trefoil_left"),
    ("hopf", "hopf_mirror"),
    ("unknot_curl", "torus_2_4"),
]
ORIENTED = ["hopf", "torus_2_4", "borromean", "braid_3_mixed"]


def test_criterion_06_property_suite():
    fixtures = all_diagrams()
    failures = []
    for name, d in fixtures.items():
        for check in (check_d_squared, check_mirror, check_parity):
            if not check(d).ok:
                failures.append(f"{check.__name__}:{name}")
    for a, b in KUNNETH_PAIRS:
        if not check_kunneth(diagram(a), diagram(b)).ok:
            failures.append(f"kunneth:{a}+{b}")
    for name in ORIENTED:
        d = diagram(name)
        for comp in range(d.cm):
            if not check_orientation_reversal(d, comp).ok:
                failures.append(f"orientation:{name}/{comp}")
    for k in range(2, 9):
        d = torus(k)
        if not check_adequate_length(d).ok or homological_length(homology_c0(d)) != k:
            failures.append(f"adequate:T(2,{k})")
    record(6, "property suite", not failures, f"{len(fixtures)} fixtures, failures {failures}")


def test_criterion_07_twist_reduction():
    bad = []
    for k in range(2, 8):
        d = torus(k)
        for ring in (Ring.Z, Ring.ZC):
            window = None if ring is Ring.Z else default_window(d)
            full = khovanov_homology(d, ring, window)
            reduced = all_homology(twist_chain_reduce(d, list(range(k)), ring, window))
            if full.groups != reduced.groups:
                bad.append((k, ring.value))
    d = torus(7)
    t_full = best_time(lambda: khovanov_homology(d, Ring.Z))
    t_reduced = best_time(lambda: all_homology(twist_chain_reduce(d, list(range(7)), Ring.Z)))
    ratio = t_full / t_reduced
    ok = not bad and ratio >= 10
    record(7, "twist-chain reduction", ok, f"mismatches {bad}; speedup at k = 7 is {ratio:.1f}x (need 10x)")


def test_criterion_08_tangle_table():
    trefoil = parse_pd("PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]")
    tangle = make_diagram(trefoil.crossings, signs=trefoil.signs, marked_arc=1)
    window = (-12, 4)
    bad = []
    for module in (free_a_module(), reduced_a_module(), a_mod_2x()):
        got = tangle_homology(tangle, module, window)
        if got.groups != trefoil_table_prediction(module, window):
            bad.append(module.name)
    cw = tangle_window(tangle, free_a_module())
    closed_ok = tangle_homology(tangle, free_a_module(), cw).groups == khovanov_homology(closure(tangle), Ring.ZC, cw).groups
    record(8, "tangle functor table", not bad and closed_ok, f"table failures {bad}; closure consistent: {closed_ok}")


def test_criterion_09_cobordisms():
    c = LaurentPoly.monomial(1)
    expected = {
        ("sphere", Ring.ZC): -c,
        ("sphere", Ring.Z): LaurentPoly(),
        ("torus", Ring.ZC): LaurentPoly.monomial(0, 2),
        ("torus", Ring.Z): LaurentPoly.monomial(0, 2),
        ("genus2", Ring.ZC): LaurentPoly(),
        ("genus2", Ring.Z): LaurentPoly(),
    }
    bad = [f"{n}/{r.value}" for (n, r), v in expected.items() if closed_surface_invariant(movie(n), r) != v]
    for name in ("sphere", "torus", "genus2"):
        m = movie(name)
        if movie_map(m, Ring.ZC, (0, 0)).shift != m.euler_characteristic:
            bad.append(f"shift:{name}")
    m = movie("trefoil_r1_r2")
    for ring in (Ring.Z, Ring.ZC):
        frames = m.frames()
        for move, before, after in zip(m.moves, frames, frames[1:]):
            # elementary_chain_map raises if the map fails to commute with d
            if not elementary_chain_map(move, before, after, ring).is_chain_map():
                bad.append(f"elementary:{move.op}/{ring.value}")
        composite = movie_map(m, ring)
        if not composite.is_chain_map() or composite.shift != m.euler_characteristic:
            bad.append(f"composite/{ring.value}")
    # report only: two movies of the same sphere through a curl
    first = movie_map(movie("sphere_with_curl"), Ring.ZC, (0, 0))
    second = movie_map(movie("sphere_with_curl_other_lobe"), Ring.ZC, (0, 0))
    agreement = compare_on_homology(first, second)
    record(9, "cobordism values and chain maps", not bad, f"failures {bad}; alternative sphere movies: {agreement} (reported)")


def test_criterion_10_ss_degeneration():
    statuses = {k: check_ss_degeneration(torus(k)).status for k in range(2, 9)}
    bad = [k for k, s in statuses.items() if s != "observed"]
    record(10, "spectral sequence degenerates on T(2,k)", not bad, f"statuses {statuses}")


def _peak_rss_mb() -> float:
    own = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    children = resource.getrusage(resource.RUSAGE_CHILDREN).ru_maxrss
    return max(own, children) / 1024


def test_criterion_11_performance():
    fixtures = {name: d for name, d in all_diagrams().items() if d.n <= 10}
    slowest_name, slowest = "", 0.0
    for name, d in fixtures.items():
        start = time.perf_counter()
        khovanov_homology(d, Ring.Z)
        elapsed = time.perf_counter() - start
        if elapsed > slowest:
            slowest_name, slowest = name, elapsed
    peak = _peak_rss_mb()
    nine = diagram("torus_2_9")
    serial = best_time(lambda: khovanov_homology(nine, Ring.Z, jobs=1))
    parallel = best_time(lambda: khovanov_homology(nine, Ring.Z, jobs=4))
    speedup = serial / parallel
    ok = slowest < 60 and peak < 2048 and speedup >= 2
    detail = (
        f"slowest {slowest_name} {slowest:.2f}s of 60s; peak RSS {peak:.0f} MB of 2048 MB; "
        f"speedup at 4 workers on T(2,9) {speedup:.2f}x (need 2x, {os.cpu_count()} CPUs available)"
    )
    record(11, "performance envelope", ok, detail)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
