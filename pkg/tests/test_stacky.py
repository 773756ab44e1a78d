"""Moment polytope validation, presets, and twisted sector enumeration."""

from fractions import Fraction

import pytest

from orbifloer import stacky
from orbifloer.errors import (
    EmptyInterior,
    InputError,
    NonPrimitiveNormal,
    NotSimple,
    Unbounded,
)


def test_teardrop_preset():
    m = stacky.build_model("teardrop:3")
    assert m.dim == 1
    assert m.stacky_vectors == ((3,), (-1,))
    assert m.vertices == ((Fraction(-1, 3),), (Fraction(1),))
    assert stacky.local_group_order(m, 0) == 3
    assert stacky.local_group_order(m, 1) == 1
    box = stacky.enumerate_box(m)
    assert [s.nu for s in box] == [(1,), (2,)]
    assert [s.iota for s in box] == [Fraction(1, 3), Fraction(2, 3)]
    assert [s.order for s in box] == [3, 3]
    # ell_nu(u) = k (u + 1/3)
    assert stacky.sector_ell(m, box[0], (Fraction(1, 10),)) == Fraction(13, 30)
    assert stacky.sector_ell(m, box[1], (Fraction(0),)) == Fraction(2, 3)


def test_wp135_preset():
    m = stacky.build_model("wp:1,3,5")
    assert m.stacky_vectors == ((-3, -5), (1, 0), (0, 1))
    assert [f.offset for f in m.facets] == [Fraction(-1)] * 3
    assert m.vertices == (
        (Fraction(-1), Fraction(-1)),
        (Fraction(-1), Fraction(4, 5)),
        (Fraction(2), Fraction(-1)),
    )
    box = stacky.enumerate_box(m)
    assert [s.nu for s in box] == [
        (0, -1),
        (-1, -2),
        (-1, -3),
        (-2, -4),
        (-1, -1),
        (-2, -3),
    ]
    assert [s.iota for s in box] == [
        Fraction(4, 5),
        Fraction(3, 5),
        Fraction(7, 5),
        Fraction(6, 5),
        Fraction(1),
        Fraction(1),
    ]
    assert [s.order for s in box] == [5, 5, 5, 5, 3, 3]
    # published area forms: ell_nu1 = 4/5 - u2, ell_nu2 = 3/5 - u1 - 2 u2
    u = (Fraction(1, 20), Fraction(0))
    assert stacky.sector_ell(m, box[0], u) == Fraction(4, 5)
    assert stacky.sector_ell(m, box[1], u) == Fraction(11, 20)


def test_wp_label_extraction():
    # weights (1, 2, 4): common divisor 2 becomes the label of the slant facet
    m = stacky.build_model("wp:1,2,4")
    f = m.facets[0]
    assert f.normal == (-1, -2)
    assert f.label == 2
    assert f.stacky_vector == (-2, -4)


def test_smooth_square_has_no_sectors():
    m = stacky.build_model("square:1,1,1,1")
    assert len(m.cones) == 4
    assert all(stacky.local_group_order(m, i) == 1 for i in range(4))
    assert stacky.enumerate_box(m) == []


def test_labeled_square_sectors_and_dedup():
    m = stacky.build_model("square:2,2,2,2")
    box = stacky.enumerate_box(m)
    assert len(box) == 8
    edge = [s for s in box if len(s.support) == 1]
    corner = [s for s in box if len(s.support) == 2]
    assert len(edge) == 4 and len(corner) == 4
    assert all(s.order == 2 for s in box)
    assert all(s.iota == Fraction(1, 2) for s in edge)
    assert all(s.iota == Fraction(1) for s in corner)
    assert len({s.nu for s in box}) == 8


def test_sector_inverse_pairing():
    # nu' = sum (1-c_i) b_i has iota(nu) + iota(nu') = #nonzero coefficients
    m = stacky.build_model("wp:1,3,5")
    box = stacky.enumerate_box(m)
    by_nu = {s.nu: s for s in box}
    for s in box:
        if any(c == 0 for c in s.coeffs):
            continue
        gens = [m.stacky_vectors[i] for i in s.facet_indices]
        inv = tuple(
            sum((1 - c) * g[k] for c, g in zip(s.coeffs, gens)) for k in range(m.dim)
        )
        inv = tuple(int(x) for x in inv)
        assert inv in by_nu
        assert s.iota + by_nu[inv].iota == len(s.coeffs)


def test_explicit_json_model():
    desc = {
        "dim": 2,
        "facets": [
            {"normal": [1, 0], "label": 1, "offset": "0"},
            {"normal": [0, 1], "label": 1, "offset": "0"},
            {"normal": [-1, -1], "label": 1, "offset": "-1"},
        ],
    }
    m = stacky.build_model(desc)
    assert len(m.vertices) == 3
    assert m.is_interior((Fraction(1, 4), Fraction(1, 4)))
    assert not m.is_interior((Fraction(1, 2), Fraction(1, 2)))


def test_validation_errors():
    with pytest.raises(NonPrimitiveNormal):
        stacky.build_model(
            {
                "dim": 1,
                "facets": [
                    {"normal": [2], "label": 1, "offset": "0"},
                    {"normal": [-1], "label": 1, "offset": "-1"},
                ],
            }
        )
    with pytest.raises(Unbounded):
        stacky.build_model(
            {
                "dim": 2,
                "facets": [
                    {"normal": [1, 0], "label": 1, "offset": "0"},
                    {"normal": [0, 1], "label": 1, "offset": "0"},
                    {"normal": [-1, 0], "label": 1, "offset": "-1"},
                ],
            }
        )
    with pytest.raises(NotSimple):
        # three facets meet at the origin
        stacky.build_model(
            {
                "dim": 2,
                "facets": [
                    {"normal": [1, 0], "label": 1, "offset": "0"},
                    {"normal": [0, 1], "label": 1, "offset": "0"},
                    {"normal": [1, 1], "label": 1, "offset": "0"},
                    {"normal": [-1, 0], "label": 1, "offset": "-1"},
                    {"normal": [0, -1], "label": 1, "offset": "-1"},
                ],
            }
        )
    with pytest.raises(NotSimple):
        # redundant facet supports nothing
        stacky.build_model(
            {
                "dim": 2,
                "facets": [
                    {"normal": [1, 0], "label": 1, "offset": "0"},
                    {"normal": [0, 1], "label": 1, "offset": "0"},
                    {"normal": [-1, 0], "label": 1, "offset": "-1"},
                    {"normal": [0, -1], "label": 1, "offset": "-1"},
                    {"normal": [1, 1], "label": 1, "offset": "-5"},
                ],
            }
        )
    with pytest.raises(EmptyInterior):
        stacky.build_model(
            {
                "dim": 1,
                "facets": [
                    {"normal": [1], "label": 1, "offset": "1"},
                    {"normal": [-1], "label": 1, "offset": "0"},
                ],
            }
        )
    with pytest.raises(InputError):
        stacky.build_model("wp:5,3")
    with pytest.raises(InputError):
        stacky.build_model("heptagon:7")


def test_interval_preset_forms():
    m = stacky.build_model("interval:2,2")
    u = (Fraction(3, 10),)
    assert m.ell(0, u) == Fraction(3, 5)  # 2u
    assert m.ell(1, u) == Fraction(7, 5)  # 2(1-u)
    box = stacky.enumerate_box(m)
    assert [(s.nu, s.iota) for s in box] == [((1,), Fraction(1, 2)), ((-1,), Fraction(1, 2))]
    assert stacky.sector_ell(m, box[0], u) == Fraction(3, 10)  # u
    assert stacky.sector_ell(m, box[1], u) == Fraction(7, 10)  # 1-u
