from __future__ import annotations

import json

import pytest

from fixture_data import MODULES
from khovanov.algebra import Ring
from khovanov.diagram import closure, make_diagram, parse_pd
from khovanov.errors import InvalidModule, NotATangle, WindowTooSmall
from khovanov.homology import AbelianGroup, khovanov_homology
from khovanov.tangle import (
    GradedModulePresentation,
    ModuleMap,
    a_mod_2x,
    build_tangle_complex,
    check_splitting,
    free_a_module,
    functor_cokernel,
    induced_cokernel,
    module_maps,
    reduced_a_module,
    tangle_homology,
    tangle_window,
    trefoil_table_prediction,
)

TREFOIL = "PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]"
Z, Z2 = AbelianGroup(1), AbelianGroup(0, (2,))
WINDOW = (-12, 4)


def trefoil_tangle():
    d = parse_pd(TREFOIL)
    return make_diagram(d.crossings, signs=d.signs, marked_arc=1)


BUILTIN = {"A": free_a_module, "A/cA": reduced_a_module, "A/2XA": a_mod_2x}


# -- module presentations ----------------------------------------------------


@pytest.mark.parametrize("path, builtin", [("A.json", "A"), ("A_mod_c.json", "A/cA"), ("A_mod_2X.json", "A/2XA")])
def test_module_files_match_builtins(path, builtin):
    loaded = GradedModulePresentation.load(MODULES / path)
    expect = BUILTIN[builtin]()
    for j in range(-5, 8):
        assert loaded.component(j) == expect.component(j)


def test_module_components():
    a, ac, a2 = free_a_module(), reduced_a_module(), a_mod_2x()
    assert [a.component(j).rank for j in range(-3, 6)] == [0, 0, 1, 0, 2, 0, 2, 0, 2]
    assert [ac.component(j) for j in (-1, 1, 3)] == [Z, Z, AbelianGroup()]
    assert a2.component(-1) == Z2
    assert a2.component(1) == AbelianGroup(1, (2,))
    assert a.is_free and not ac.is_free


def test_two_x_functors_on_reduced_module():
    ac = reduced_a_module()
    # on A/cA the element 2X has kernel X and cokernel Z/2 in degree -1
    assert ac.ker_2x(-1) == Z
    assert ac.coker_2x(-1) == Z2
    assert ac.coker_2x(1) == Z


def test_invalid_modules_are_rejected():
    with pytest.raises(InvalidModule):
        GradedModulePresentation((1, -1), ((0, 0),))
    with pytest.raises(InvalidModule):
        GradedModulePresentation((1, 0), ((0, 0), (1, 0)))
    with pytest.raises(InvalidModule):
        # X^2 = 0 fails for a single generator acted on by X with a c-power
        GradedModulePresentation((1,), ((1,),))


def test_module_json_round_trip():
    m = a_mod_2x()
    again = GradedModulePresentation.from_json(json.loads(json.dumps(m.to_json())))
    assert [again.component(j) for j in range(-3, 4)] == [m.component(j) for j in range(-3, 4)]


@pytest.mark.parametrize("factory", list(BUILTIN.values()))
def test_module_structure_maps_split(factory):
    m = factory()
    maps = module_maps(m, (-4, 6))
    assert set(maps) == {"m", "delta", "iota"}
    assert check_splitting(m, (-4, 6))


# -- tangle complexes --------------------------------------------------------


def test_link_diagram_is_not_a_tangle():
    with pytest.raises(NotATangle):
        build_tangle_complex(parse_pd(TREFOIL), free_a_module())


def test_window_below_lowest_degree():
    with pytest.raises(WindowTooSmall):
        build_tangle_complex(trefoil_tangle(), free_a_module(), (-40, -30))


@pytest.mark.parametrize("name", list(BUILTIN))
def test_tangle_complex_is_a_complex(name):
    cplx = build_tangle_complex(trefoil_tangle(), BUILTIN[name](), WINDOW)
    assert cplx.d_squared_zero()
    assert cplx.to_json()["module"]


@pytest.mark.parametrize("name", list(BUILTIN))
def test_trefoil_tangle_table(name):
    m = BUILTIN[name]()
    got = tangle_homology(trefoil_tangle(), m, WINDOW)
    assert got.groups == trefoil_table_prediction(m, WINDOW)


def test_z2_module_table():
    m = GradedModulePresentation.load(MODULES / "Z2_trivial.json")
    got = tangle_homology(trefoil_tangle(), m, WINDOW)
    assert got.groups == trefoil_table_prediction(m, WINDOW)
    assert got.group(0, -2) == Z2


def test_closure_consistency():
    d = trefoil_tangle()
    window = tangle_window(d, free_a_module())
    lhs = tangle_homology(d, free_a_module(), window)
    rhs = khovanov_homology(closure(d), Ring.ZC, window)
    assert lhs.groups == rhs.groups


def test_unknot_tangle_gives_module_back():
    d = make_diagram([], tangle=True)
    m = a_mod_2x()
    h = tangle_homology(d, m, (-3, 5))
    for j in range(-3, 6):
        assert h.group(0, j) == m.component(j)


# -- naturality in the module ------------------------------------------------


def test_quotient_map_naturality():
    # the quotient A -> A/2XA induces, on each table entry, the map of
    # the corresponding functors; compare cokernels degree by degree
    q = ModuleMap(free_a_module(), a_mod_2x(), ((1, 0), (0, 1)))
    d = trefoil_tangle()
    for j in range(-10, 2):
        assert induced_cokernel(d, q, 0, j) == functor_cokernel(q, "id", j + 2)
        assert induced_cokernel(d, q, -2, j) == functor_cokernel(q, "coker2x", j + 6)
        assert induced_cokernel(d, q, -3, j) == functor_cokernel(q, "ker2x", j + 8)


def test_module_map_validation():
    with pytest.raises(InvalidModule):
        ModuleMap(free_a_module(), a_mod_2x(), ((1,), (0,)))
    with pytest.raises(InvalidModule):
        # 1 -> 1 and X -> 0 does not commute with X
        ModuleMap(free_a_module(), free_a_module(), ((1, 0), (0, 0)))
    # multiplication by cX is a module map
    ModuleMap(free_a_module(), free_a_module(), ((0, 0), (1, 0)))
    with pytest.raises(ValueError):
        functor_cokernel(ModuleMap(free_a_module(), free_a_module(), ((1, 0), (0, 1))), "nope", 0)
