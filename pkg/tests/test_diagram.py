import pytest

from linkobs.diagram import (
    CORPUS,
    BandFoot,
    BandSpec,
    LinkDiagram,
    attach_fusion_band,
    braid_closure,
    check_planar,
    concordance_inverse,
    corpus,
    generate_bing_pairs_gpc,
    generate_hopf,
    generate_nghl,
    generate_twist_family,
    generate_unlink,
    insert_generalized_positive_crossing,
    linking_matrix,
    mirror,
    parse_pd,
    reverse,
    smooth_crossing,
    sublink,
    switch_crossing,
    to_pd,
    whitehead_double,
)
from linkobs.errors import DiagramSyntaxError, DiagramValidationError, PreconditionError
from linkobs.polyring import conway_from_seifert
from linkobs.seifert import seifert_matrix

TREFOIL_PD = "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]"


def test_parse_trefoil() -> None:
    d = parse_pd(TREFOIL_PD)
    assert d.n_components == 1
    assert d.n_crossings == 3
    assert check_planar(d).n_faces == 5


def test_parse_crossing_free_unknot() -> None:
    d = parse_pd("components=1")
    assert d.n_components == 1
    assert d.n_crossings == 0
    assert d.components == ((),)


def test_parse_extra_free_components_and_colors() -> None:
    d = parse_pd("components=3\ncolor 3=7\n" + TREFOIL_PD)
    assert d.n_components == 3
    assert d.components[1] == d.components[2] == ()
    assert d.colors[2] == 7


def test_parse_reports_position_of_garbage() -> None:
    with pytest.raises(DiagramSyntaxError) as info:
        parse_pd("X[1,2,2,1] Y[3]")
    assert info.value.position == 11


def test_parse_rejects_edge_used_three_times() -> None:
    with pytest.raises(DiagramValidationError):
        parse_pd("X[1,1,2,2] X[1,3,4,4]")


def test_parse_rejects_too_few_declared_components() -> None:
    with pytest.raises(DiagramValidationError):
        parse_pd("components=1 X[1,3,2,4] X[3,1,4,2]")


def test_crossing_labels_must_be_positive() -> None:
    with pytest.raises(ValueError):
        LinkDiagram.model_validate(
            {"crossings": [{"slots": [0, 1, 2, 3], "sign": 1}], "components": [[1, 2]], "colors": [1]}
        )


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_corpus_diagrams_are_planar(name: str) -> None:
    d = corpus(name)
    fs = check_planar(d)
    assert fs.n_faces == d.n_crossings + 2 * fs.n_pieces


@pytest.mark.parametrize("name", ["trefoil_right", "figure_eight", "whitehead+", "borromean", "nghl2"])
def test_pd_text_reparses_to_the_same_invariants(name: str) -> None:
    d = corpus(name)
    again = parse_pd(to_pd(d))
    assert again.n_crossings == d.n_crossings
    assert sorted(x.sign for x in again.crossings) == sorted(x.sign for x in d.crossings)
    assert linking_matrix(again) == linking_matrix(d)


def test_unknown_corpus_name() -> None:
    with pytest.raises(PreconditionError):
        corpus("no-such-link")


def test_linking_matrix_of_hopf_links() -> None:
    assert linking_matrix(generate_hopf(1)) == ((0, 1), (1, 0))
    assert linking_matrix(generate_hopf(-1)) == ((0, -1), (-1, 0))
    assert linking_matrix(generate_unlink(2)) == ((0, 0), (0, 0))


def test_mirror_negates_linking_and_is_an_involution(hopf: LinkDiagram) -> None:
    assert linking_matrix(mirror(hopf)) == ((0, -1), (-1, 0))
    for name in ("trefoil_right", "whitehead+", "borromean"):
        d = corpus(name)
        assert mirror(mirror(d)) == d


def test_reversing_one_component_negates_its_linking(hopf: LinkDiagram) -> None:
    assert linking_matrix(reverse(hopf, 0)) == ((0, -1), (-1, 0))
    with pytest.raises(PreconditionError):
        reverse(hopf, 2)


def test_concordance_inverse_of_trefoil_is_left_handed(trefoil: LinkDiagram) -> None:
    inverse = concordance_inverse(trefoil)
    assert inverse.writhe() == -trefoil.writhe()
    assert inverse.n_components == 1


def test_switch_and_smooth(hopf: LinkDiagram) -> None:
    switched = switch_crossing(hopf, 0)
    assert linking_matrix(switched) == ((0, 0), (0, 0))
    smoothed = smooth_crossing(hopf, 0)
    assert smoothed.n_components == 1
    assert smoothed.n_crossings == 1


def test_sublink_of_borromean_rings_is_unlinked() -> None:
    d = corpus("borromean")
    pair = sublink(d, [0, 2])
    assert pair.n_components == 2
    assert linking_matrix(pair) == ((0, 0), (0, 0))
    with pytest.raises(PreconditionError):
        sublink(d, [0, 0])


def test_unlink_generator() -> None:
    d = generate_unlink(3, [1, 1, 2])
    assert d.n_crossings == 0
    assert d.colors == (1, 1, 2)
    with pytest.raises(PreconditionError):
        generate_unlink(0)
    with pytest.raises(PreconditionError):
        generate_unlink(2, [1])


def test_nghl_of_two_antiparallel_fibers() -> None:
    d = generate_nghl([(1, 1), (-1, 1)])
    assert d.n_components == 2
    assert linking_matrix(d) == ((0, -1), (-1, 0))


def test_nghl_requires_color_balance() -> None:
    with pytest.raises(PreconditionError):
        generate_nghl([(1, 1), (1, 1)])


def test_gpc_links_passing_strands_by_direction_products() -> None:
    d = generate_unlink(4, [1, 1, 2, 2])
    out = insert_generalized_positive_crossing(d, [("c1", 1), ("c2", -1), ("c3", 1), ("c4", -1)])
    assert out.n_crossings == 12
    assert linking_matrix(out) == ((0, -1, 1, -1), (-1, 0, -1, 1), (1, -1, 0, -1), (-1, 1, -1, 0))


def test_gpc_rejects_unbalanced_colors() -> None:
    with pytest.raises(PreconditionError):
        insert_generalized_positive_crossing(generate_unlink(2), [("c1", 1), ("c2", 1)])


def test_fusion_band_joins_two_unknots() -> None:
    band = BandSpec(start=BandFoot(edge="c1"), end=BandFoot(edge="c2"))
    out = attach_fusion_band(generate_unlink(2), band)
    assert out.n_components == 1


def test_fusion_band_needs_two_components() -> None:
    band = BandSpec(start=BandFoot(edge="c1"), end=BandFoot(edge="c1"))
    with pytest.raises(PreconditionError):
        attach_fusion_band(generate_unlink(2), band)


@pytest.mark.parametrize(("n", "m"), [(0, 1), (0, -2), (1, 1), (2, 1)])
def test_twist_family_has_zero_linking(n: int, m: int) -> None:
    d = generate_twist_family(n, m)
    assert d.n_components == 2
    assert linking_matrix(d) == ((0, 0), (0, 0))


def test_twist_family_rejects_m_zero() -> None:
    with pytest.raises(PreconditionError):
        generate_twist_family(0, 0)


def test_whitehead_double_of_hopf_component() -> None:
    d = whitehead_double(generate_hopf(1), 0)
    assert d.n_components == 2
    assert linking_matrix(d) == ((0, 0), (0, 0))
    with pytest.raises(PreconditionError):
        whitehead_double(generate_unlink(1), 0)


def test_bing_pairs_gpc_has_vanishing_linking() -> None:
    d = generate_bing_pairs_gpc()
    assert d.n_components == 4
    assert d.colors == (1, 2, 3, 4)
    assert d.n_crossings == 20
    assert all(v == 0 for row in linking_matrix(d) for v in row)


def test_bing_pairs_without_the_twist_split_in_two() -> None:
    d = generate_bing_pairs_gpc(0)
    assert d.n_crossings == 8
    assert check_planar(d).n_pieces == 2
    assert all(v == 0 for row in linking_matrix(d) for v in row)


@pytest.mark.parametrize(
    ("n_strands", "word", "components", "crossings"),
    [
        (1, [], 1, 0),
        (2, [1, 1], 2, 2),
        (2, [1, 1, 1], 1, 3),
        (3, [], 3, 0),
        (3, [1, -2, 1, -2, 1, -2], 3, 6),
        (4, [1, 2, 3], 1, 3),
    ],
)
def test_braid_closure_caps_every_strand(n_strands: int, word: list[int], components: int, crossings: int) -> None:
    d = braid_closure(n_strands, word)
    assert d.n_components == components
    assert d.n_crossings == crossings
    assert d.colors == tuple(range(1, components + 1))


@pytest.mark.parametrize("text", ["X[0,1,2,3]", "X[1,5,2,4] X[3,1,4,6] X[5,3,6,0]", "X[1,00,2,4]"])
def test_edge_label_zero_is_a_syntax_error(text: str) -> None:
    with pytest.raises(DiagramSyntaxError, match="positive"):
        parse_pd(text)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_canonical_pd_text_is_a_fixed_point(name: str) -> None:
    d = corpus(name)
    text = to_pd(parse_pd(to_pd(d)))
    assert to_pd(parse_pd(text)) == text
    assert parse_pd(text) == parse_pd(to_pd(d))


def test_gpc_with_zero_net_passes_keeps_the_linking_numbers() -> None:
    d = generate_unlink(3, [1, 2, 2])
    out = insert_generalized_positive_crossing(d, [("c1", 1), ("c1", -1), ("c2", 1), ("c3", -1)])
    lk = linking_matrix(out)
    first = out.colors.index(1)
    a, b = (k for k in range(3) if k != first)
    assert out.n_components == 3
    assert all(v == 0 for v in lk[first])
    assert lk[a][b] == -1

    both = insert_generalized_positive_crossing(generate_unlink(2), [("c1", 1), ("c1", -1), ("c2", -1), ("c2", 1)])
    assert linking_matrix(both) == ((0, 0), (0, 0))


def test_fusing_the_two_fibers_of_nghl2_gives_a_knot() -> None:
    d = corpus("nghl2")
    fs = check_planar(d)
    first, second = d.components
    band = next(
        BandSpec(start=BandFoot(edge=e1, side=s1), end=BandFoot(edge=e2, side=s2))
        for e1 in first
        for e2 in second
        for s1, s2 in (("left", "right"), ("right", "left"))
        if (fs.left_face(e1) if s1 == "left" else fs.right_face(e1))
        == (fs.left_face(e2) if s2 == "left" else fs.right_face(e2))
    )
    knot = attach_fusion_band(d, band)
    assert knot.n_components == 1
    assert conway_from_seifert(seifert_matrix(knot)).a(0) == 1
