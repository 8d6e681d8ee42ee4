from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from khovanov.algebra import (
    ONE,
    X,
    A_MODULE,
    Cobordism,
    ElementaryCobordism,
    RModuleDecomposition,
    Ring,
    TensorElement,
    as_scalar,
    cobordism_degree,
    comult,
    counit,
    counit_at,
    euler_char,
    evaluate_cobordism,
    insert_unit,
    mult,
    permute,
    unit,
)
from khovanov.errors import ArityChainMismatch, ArityMismatch, FactorOutOfRange, NonPeriodicTail
from khovanov.laurent import LaurentPoly, LaurentSeriesRep

RINGS = [Ring.ZC, Ring.Z]


def basis(word, ring=Ring.ZC, p=0):
    return TensorElement.basis(word, ring, p)


def elements(k: int, ring: Ring):
    max_p = 2 if ring is Ring.ZC else 0
    key = st.tuples(st.tuples(*[st.sampled_from([ONE, X])] * k), st.integers(0, max_p))
    return st.dictionaries(key, st.integers(-3, 3), max_size=4).map(lambda t: TensorElement(ring, k, t))


# -- LaurentPoly ------------------------------------------------------------


def test_laurent_arithmetic():
    q = LaurentPoly.monomial(1)
    loop = LaurentPoly.loop()
    assert loop == q + LaurentPoly.monomial(-1)
    assert (q - q).is_zero()
    assert (loop * loop).to_json() == {"-2": 1, "0": 2, "2": 1}
    assert (loop**2).divide_exact(loop) == loop
    assert loop.shift(3).min_exp() == 2
    assert LaurentPoly({1: 2, -3: 1}).substitute_inverse() == LaurentPoly({-1: 2, 3: 1})
    assert LaurentPoly({1: 2, 2: 1}).sign_twist() == LaurentPoly({1: -2, 2: 1})


def test_laurent_divide_exact_rejects_remainder():
    from khovanov.errors import NonDivisible

    with pytest.raises(NonDivisible):
        LaurentPoly({0: 1}).divide_exact(LaurentPoly.loop())


@given(st.dictionaries(st.integers(-6, 6), st.integers(-5, 5), max_size=5))
def test_laurent_json_round_trip(coeffs):
    p = LaurentPoly(coeffs)
    assert LaurentPoly.from_json(p.to_json()) == p


def test_series_from_numerator_coefficients():
    # 1 / (1 - q^2) has coefficient 1 in every even degree >= 0
    s = LaurentSeriesRep.from_numerator(LaurentPoly.one())
    assert [s.coefficient(e) for e in range(-2, 7)] == [0, 0, 1, 0, 1, 0, 1, 0, 1]


# -- Frobenius structure ---------------------------------------------------


def test_multiplication_table():
    assert mult(basis([ONE, ONE]), 0, 1) == basis([ONE])
    assert mult(basis([ONE, X]), 0, 1) == basis([X])
    assert mult(basis([X, ONE]), 0, 1) == basis([X])
    assert mult(basis([X, X]), 0, 1).is_zero()


def test_comultiplication_over_zc():
    expect = basis([ONE, X]) + basis([X, ONE]) + basis([X, X], p=1)
    assert comult(basis([ONE]), 0) == expect
    assert comult(basis([X]), 0) == basis([X, X])


def test_comultiplication_over_z_drops_c():
    assert comult(basis([ONE], Ring.Z), 0) == basis([ONE, X], Ring.Z) + basis([X, ONE], Ring.Z)


def test_counit_values():
    assert counit(basis([ONE])) == LaurentPoly.monomial(1, -1)
    assert counit(basis([X])) == LaurentPoly.one()
    assert counit(basis([ONE], Ring.Z)).is_zero()


@pytest.mark.parametrize("ring", RINGS)
@settings(max_examples=40)
@given(data=st.data())
def test_frobenius_axioms(ring, data):
    u = data.draw(elements(1, ring))
    # unit and counit
    assert mult(insert_unit(u, 0), 0, 1) == u
    assert counit_at(comult(u, 0), 0) == u
    assert counit_at(comult(u, 0), 1) == u
    # coassociativity and cocommutativity
    assert comult(comult(u, 0), 0) == comult(comult(u, 0), 1)
    assert permute(comult(u, 0), 0, 1) == comult(u, 0)


@pytest.mark.parametrize("ring", RINGS)
@settings(max_examples=40)
@given(data=st.data())
def test_product_is_associative_and_commutative(ring, data):
    w = data.draw(elements(3, ring))
    assert mult(mult(w, 0, 1), 0, 1) == mult(mult(w, 1, 2), 0, 1)
    v = data.draw(elements(2, ring))
    assert mult(v, 0, 1) == mult(permute(v, 0, 1), 0, 1)


@pytest.mark.parametrize("ring", RINGS)
@settings(max_examples=40)
@given(data=st.data())
def test_frobenius_relation(ring, data):
    # Delta(m(a x b)) = (m x id)(a x Delta b)
    v = data.draw(elements(2, ring))
    lhs = comult(mult(v, 0, 1), 0)
    rhs = mult(comult(v, 1), 0, 1)
    assert lhs == rhs


@pytest.mark.parametrize("word", [(ONE, ONE), (ONE, X), (X, ONE), (X, X)])
@pytest.mark.parametrize("p", [0, 1])
def test_structure_maps_have_degree_minus_one(word, p):
    v = basis(word, p=p)
    for image in (mult(v, 0, 1), comult(v, 0)):
        assert image.is_zero() or image.degree() == v.degree() - 1


def test_handle_is_multiplication_by_2x():
    assert mult(comult(basis([ONE]), 0), 0, 1) == basis([X]).scale(2)
    assert mult(comult(basis([X]), 0), 0, 1).is_zero()


def test_factor_range_is_checked():
    with pytest.raises(FactorOutOfRange):
        mult(basis([ONE]), 0, 1)
    with pytest.raises(ArityMismatch):
        TensorElement(Ring.ZC, 2, {((ONE,), 0): 1})


# -- closed surfaces through evaluate_cobordism -----------------------------


def _closed(genus: int) -> list[ElementaryCobordism]:
    pieces = [ElementaryCobordism(Cobordism.S01, (0,))]
    for _ in range(genus):
        pieces += [ElementaryCobordism(Cobordism.S12, (0,)), ElementaryCobordism(Cobordism.S21, (0, 1))]
    return pieces + [ElementaryCobordism(Cobordism.S10, (0,))]


@pytest.mark.parametrize(
    "genus, zc_value",
    [(0, LaurentPoly.monomial(1, -1)), (1, LaurentPoly.monomial(0, 2)), (2, LaurentPoly())],
)
def test_closed_surface_values(genus, zc_value):
    pieces = _closed(genus)
    assert as_scalar(evaluate_cobordism(pieces, TensorElement.scalar())) == zc_value
    assert cobordism_degree(pieces) == 2 - 2 * genus
    over_z = as_scalar(evaluate_cobordism(pieces, TensorElement.scalar(Ring.Z)))
    assert over_z == (LaurentPoly() if genus != 1 else LaurentPoly.monomial(0, 2))


def test_cobordism_arity_is_checked():
    with pytest.raises(ArityMismatch):
        ElementaryCobordism(Cobordism.S21, (0,))
    with pytest.raises(ArityChainMismatch):
        evaluate_cobordism([ElementaryCobordism(Cobordism.S21, (0, 1))], unit())


# -- graded R-modules ------------------------------------------------------


def test_module_components():
    assert A_MODULE.component(-1) == (1, [])
    assert A_MODULE.component(1) == (2, [])
    assert A_MODULE.component(0) == (0, [])
    tors = RModuleDecomposition(torsion=((4, 2),))
    assert tors.component(-4) == (0, [2])
    assert tors.component(-3) == (0, [])


def test_euler_char_of_a_module():
    chi = euler_char(A_MODULE)
    assert [chi.coefficient(j) for j in range(-3, 6)] == [0, 0, 1, 0, 2, 0, 2, 0, 2]
    over_z = euler_char(RModuleDecomposition(free=(-1, 1), ring=Ring.Z))
    assert over_z.coefficient(1) == 1 and over_z.coefficient(3) == 0


def test_euler_char_from_ranks_needs_window():
    with pytest.raises(NonPeriodicTail):
        euler_char({})


def test_ring_coercion():
    assert Ring.coerce("Z[c]") is Ring.ZC
    assert Ring.coerce("z") is Ring.Z
    with pytest.raises(ValueError):
        Ring.coerce("q")
