from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixture_data import all_diagrams, diagram
from khovanov.diagram import (
    apply_r1,
    apply_r2,
    bigon_crossings,
    connected_sum,
    curl_crossing,
    diagram_from_json,
    disjoint_union,
    edge_event,
    faces,
    is_minus_adequate,
    is_plus_adequate,
    mirror,
    oriented_smoothing,
    parse_braid,
    parse_pd,
    remove_r1,
    remove_r2,
    resolve,
    reverse_component,
    switch_crossing,
)
from khovanov.errors import (
    ArcNotFound,
    ArcsNotAdjacent,
    ComponentNotFound,
    CrossingAlreadyResolvedToOne,
    DuplicateArcUse,
    EmptyBraidWithZeroStrands,
    GeneratorOutOfRange,
    MalformedSyntax,
    NotABigon,
    OpenStrandInLinkMode,
)

TREFOIL_PD = "PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]"

braid_words = st.integers(2, 4).flatmap(
    lambda s: st.tuples(
        st.lists(st.integers(1, s - 1).flatmap(lambda i: st.sampled_from([i, -i])), min_size=1, max_size=6),
        st.just(s),
    )
)


def count_circles(d, lam: int) -> int:
    """Independent circle count: flood fill over the arc graph of D(lam)."""
    adj: dict[int, set[int]] = {a: set() for cr in d.crossings for a in cr}
    for c, (i, j, k, l) in enumerate(d.crossings):
        pairs = [(i, l), (j, k)] if lam >> c & 1 else [(i, j), (k, l)]
        for a, b in pairs:
            adj[a].add(b)
            adj[b].add(a)
    seen: set[int] = set()
    count = 0
    for start in adj:
        if start in seen:
            continue
        count += 1
        stack = [start]
        while stack:
            a = stack.pop()
            if a not in seen:
                seen.add(a)
                stack.extend(adj[a] - seen)
    return count + d.free_loops


# -- parsing -----------------------------------------------------------------


def test_parse_trefoil_pd():
    d = parse_pd(TREFOIL_PD)
    assert (d.n, d.x, d.y, d.cm, d.writhe) == (3, 3, 0, 1, -3)
    assert d.arcs == (1, 2, 3, 4, 5, 6)


def test_json_forms_agree_with_text():
    text = parse_pd(TREFOIL_PD)
    assert parse_pd("[[1,4,2,5],[3,6,4,1],[5,2,6,3]]") == text
    assert diagram_from_json({"crossings": [[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]}) == text
    assert parse_pd(str(text.to_pd_text())) == text


@pytest.mark.parametrize(
    "text, error",
    [
        ("X(1,2,3,4)", MalformedSyntax),
        ("PD[X(1,2,3)]", MalformedSyntax),
        ("PD[X(1,2,a,4)]", MalformedSyntax),
        ("PD[X(1,1,1,2)]", DuplicateArcUse),
        ("PD[X(1,2,3,4)]", OpenStrandInLinkMode),
        ("{bad json", MalformedSyntax),
    ],
)
def test_parse_errors(text, error):
    with pytest.raises(error):
        parse_pd(text)


def test_braid_errors():
    with pytest.raises(EmptyBraidWithZeroStrands):
        parse_braid([], 0)
    with pytest.raises(GeneratorOutOfRange):
        parse_braid([2], 2)
    with pytest.raises(GeneratorOutOfRange):
        parse_braid([0], 2)


def test_braid_signs_and_loops():
    d = parse_braid([1, 1, 1], 2)
    assert (d.x, d.y, d.cm) == (3, 0, 1)
    assert parse_braid([-1, -1, -1], 2).y == 3
    # an untouched strand becomes a free loop
    assert parse_braid([1, 1], 3).free_loops == 1
    assert parse_braid([], 2).free_loops == 2


def test_tangle_mode_marks_open_strand():
    d = parse_pd("PD[X(1,4,2,5),X(3,6,4,7),X(5,2,6,3)]", tangle=True)
    assert d.is_tangle


# -- resolutions -------------------------------------------------------------


@pytest.mark.parametrize("name", ["trefoil_left", "figure_eight", "hopf", "borromean", "braid_6_1"])
def test_resolution_circles_match_flood_fill(name):
    d = diagram(name)
    for lam in range(1 << d.n):
        assert len(resolve(d, lam)) == count_circles(d, lam)


@settings(max_examples=40, deadline=None)
@given(braid_words)
def test_resolution_circles_on_random_braids(wb):
    d = parse_braid(*wb)
    for lam in range(1 << d.n):
        assert len(resolve(d, lam)) == count_circles(d, lam)


@settings(max_examples=40, deadline=None)
@given(braid_words, st.data())
def test_edge_event_changes_circle_count_by_one(wb, data):
    d = parse_braid(*wb)
    lam = data.draw(st.integers(0, (1 << d.n) - 1))
    free = [a for a in range(d.n) if not lam >> a & 1]
    if not free:
        with pytest.raises(CrossingAlreadyResolvedToOne):
            edge_event(d, lam, 0)
        return
    a = data.draw(st.sampled_from(free))
    ev = edge_event(d, lam, a)
    delta = len(resolve(d, lam | 1 << a)) - len(resolve(d, lam))
    assert delta == (-1 if ev.kind == "merge" else 1)


def test_resolve_accepts_index_sets():
    d = diagram("trefoil_left")
    assert resolve(d, [0, 2]) == resolve(d, 0b101)
    with pytest.raises(IndexError):
        resolve(d, [5])


# -- planar structure --------------------------------------------------------


@pytest.mark.parametrize("name", ["trefoil_left", "figure_eight", "torus_3_4", "borromean", "braid_6_3"])
def test_faces_satisfy_euler_formula(name):
    d = diagram(name)
    # a connected 4-valent plane graph with n vertices has n + 2 faces
    assert len(faces(d)) == d.n + 2


def test_adequacy_of_alternating_diagrams():
    for name in ["trefoil_left", "figure_eight", "torus_2_5"]:
        d = diagram(name)
        assert is_plus_adequate(d) and is_minus_adequate(d)
    assert not is_plus_adequate(diagram("unknot_curl")) or not is_minus_adequate(diagram("unknot_curl"))


# -- whole-diagram operations ----------------------------------------------


@pytest.mark.parametrize("name", list(all_diagrams()))
def test_mirror_swaps_crossing_types(name):
    d = diagram(name)
    m = mirror(d)
    assert (m.x, m.y, m.cm) == (d.y, d.x, d.cm)
    assert mirror(m) == d


def test_switch_and_oriented_smoothing():
    d = diagram("trefoil_left")
    s = switch_crossing(d, 0)
    assert (s.x, s.y) == (2, 1)
    z = oriented_smoothing(d, 0)
    assert z.n == 2 and z.cm == 2


def test_disjoint_union_and_connected_sum():
    t, f = diagram("trefoil_left"), diagram("figure_eight")
    u = disjoint_union(t, f)
    assert (u.n, u.cm, u.x, u.y) == (7, 2, 5, 2)
    s = connected_sum(t, f, 1, 1)
    assert (s.n, s.cm) == (7, 1)
    with pytest.raises(ArcNotFound):
        connected_sum(t, f, 99, 1)


def test_reverse_component_on_hopf():
    d = diagram("hopf")
    d0, l = reverse_component(d, 1)
    assert l == 1
    assert (d0.x, d0.y) == (d.x - 2 * l, d.y + 2 * l)
    with pytest.raises(ComponentNotFound):
        reverse_component(d, 5)


# -- Reidemeister moves ----------------------------------------------------


@pytest.mark.parametrize("kind, dx, dy", [("left", 0, 1), ("right", 1, 0)])
def test_r1_insert_and_remove(kind, dx, dy):
    d = diagram("trefoil_left")
    e = apply_r1(d, 2, kind)
    assert (e.n, e.x, e.y) == (d.n + 1, d.x + dx, d.y + dy)
    curls = [c for c in range(e.n) if curl_crossing(e, c) is not None]
    assert curls
    back = remove_r1(e, curls[0])
    assert (back.n, back.x, back.y) == (d.n, d.x, d.y)


def test_r1_rejects_bad_arguments():
    d = diagram("trefoil_left")
    with pytest.raises(ArcNotFound):
        apply_r1(d, 42, "left")
    with pytest.raises(ValueError):
        apply_r1(d, 1, "up")


def test_r2_insert_and_remove():
    d = diagram("figure_eight")
    e = apply_r2(d, 1, 8)
    assert (e.n, e.x, e.y) == (d.n + 2, d.x + 1, d.y + 1)
    p, q = e.n - 2, e.n - 1
    assert bigon_crossings(e, p, q) is not None
    back = remove_r2(e, p, q)
    assert (back.n, back.x, back.y) == (d.n, d.x, d.y)


def test_r2_errors():
    d = diagram("trefoil_left")
    with pytest.raises(ArcsNotAdjacent):
        apply_r2(d, 1, 1)
    with pytest.raises(NotABigon):
        bigon_crossings(diagram("figure_eight"), 0, 3)
