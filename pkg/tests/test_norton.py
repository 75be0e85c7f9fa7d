"""Norton product layer: spanning vectors, oracle, closed forms, algebras."""

import dataclasses
from fractions import Fraction

import pytest

from nortonalg.errors import ConstructionError, FormulaMismatchError
from nortonalg.graphs import TOP
from nortonalg.norton import (
    family_constants,
    formula_product,
    norton_oracle,
    spanning_vectors,
    structure_constants,
    verify_formula_vs_oracle,
)
from nortonalg.binop import direct_product
from nortonalg.spectral import rational_rank


def test_family_constants_johnson(bundle):
    assert family_constants(bundle("j31")[0].family) == {
        "rescale": 3,
        "c": -1,
    }
    assert family_constants(bundle("j41")[0].family) == {
        "rescale": 2,
        "c": Fraction(-1, 2),
    }
    assert family_constants(bundle("j52")[0].family) == {
        "rescale": Fraction(5, 1),
        "c": Fraction(-1, 3),
    }
    con = family_constants(bundle("j42")[0].family)
    assert con["zero_product"] and con["rescale"] == 1


def test_family_constants_grassmann(bundle):
    con = family_constants(bundle("g242")[0].family)
    assert con["rescale"] == Fraction(5, 3)
    assert con["c"] == Fraction(-1, 3)
    assert con["b"] == Fraction(5, 18)


def test_family_constants_hamming(bundle):
    con = family_constants(bundle("h23")[0].family)
    assert con == {
        "rescale": 1,
        "diagonal": Fraction(1, 3),
        "adjacent": Fraction(-1, 3),
        "c": -1,
    }
    con = family_constants(bundle("h14")[0].family)
    assert con["diagonal"] == Fraction(1, 2)
    assert con["adjacent"] == Fraction(-1, 4)
    assert con["c"] == Fraction(-1, 2)
    assert family_constants(bundle("h22")[0].family)["zero_product"]


def test_family_constants_dual_polar(bundle):
    con = family_constants(bundle("d22")[0].family)
    assert con["rescale"] == 3
    assert con["c"] == -1
    assert con["b"] == 1
    assert con["b_prime"] == Fraction(2, 3)
    con = family_constants(bundle("c22")[0].family)
    assert con["rescale"] == Fraction(5, 3)
    assert con["c"] == Fraction(-1, 3)
    assert con["b"] == Fraction(5, 12)
    assert con["b_prime"] == Fraction(5, 24)


def test_spanning_vectors_triangle(bundle):
    g, sd = bundle("j31")
    svs = spanning_vectors(g, sd)
    assert [sv.label for sv in svs] == [(1,), (2,), (3,)]
    assert svs[0].coords == (2, -1, -1)
    assert svs[0].unscaled == (Fraction(2, 3), Fraction(-1, 3), Fraction(-1, 3))
    assert svs[0].scale == 3


def test_spanning_vectors_are_centered_and_span(bundle):
    for name in ("j52", "g242", "h23", "d22", "c22"):
        g, sd = bundle(name)
        svs = spanning_vectors(g, sd)
        assert len(svs) == len(g.lattice.levels[1])
        for sv in svs:
            assert sum(sv.coords) == 0
        dim = sd.multiplicities[1]
        assert rational_rank([sv.coords for sv in svs]) == dim


def test_norton_oracle_triangle(bundle):
    g, sd = bundle("j31")
    svs = spanning_vectors(g, sd)
    u, v = svs[0].coords, svs[1].coords
    prod = norton_oracle(g, sd, 1, u, v)
    minus_u_minus_v = tuple(-a - b for a, b in zip(u, v))
    assert prod == minus_u_minus_v
    assert prod == svs[2].coords
    assert norton_oracle(g, sd, 1, u, u) == u


def test_norton_oracle_rejects_outside_vectors(bundle):
    g, sd = bundle("j31")
    e0 = (1, 0, 0)
    inside = spanning_vectors(g, sd)[0].coords
    with pytest.raises(ValueError):
        norton_oracle(g, sd, 1, e0, inside)
    with pytest.raises(ValueError):
        norton_oracle(g, sd, 1, inside, e0)


def test_formula_product_johnson(bundle):
    g52 = bundle("j52")[0]
    u, v = (1,), (2,)
    assert formula_product(g52.family, g52.lattice, u, u) == {u: 1}
    assert formula_product(g52.family, g52.lattice, u, v) == {
        u: Fraction(-1, 3),
        v: Fraction(-1, 3),
    }
    g42 = bundle("j42")[0]
    assert formula_product(g42.family, g42.lattice, (1,), (2,)) == {}
    assert formula_product(g42.family, g42.lattice, (1,), (1,)) == {}


def test_formula_product_hamming(bundle):
    g = bundle("h23")[0]
    same_pos = ((1, 0), (2, 0))
    diff_pos = ((1, 0), (0, 2))
    assert g.lattice.join(*same_pos) is TOP
    assert formula_product(g.family, g.lattice, *same_pos) == {
        same_pos[0]: Fraction(-1, 3),
        same_pos[1]: Fraction(-1, 3),
    }
    assert formula_product(g.family, g.lattice, *diff_pos) == {}
    assert formula_product(g.family, g.lattice, (1, 0), (1, 0)) == {
        (1, 0): Fraction(1, 3)
    }


def test_formula_product_grassmann_line_sum(bundle):
    g = bundle("g242")[0]
    points = g.lattice.levels[1]
    u, v = points[0], points[1]
    out = formula_product(g.family, g.lattice, u, v)
    assert out[u] == Fraction(-1, 18)
    assert out[v] == Fraction(-1, 18)
    others = [lbl for lbl in out if lbl not in (u, v)]
    assert len(others) == 1  # third point of the projective line
    assert out[others[0]] == Fraction(5, 18)


def test_formula_product_dual_polar_collinear(bundle):
    g = bundle("d22")[0]
    lat = g.lattice
    points = lat.levels[1]
    coll = next(
        (u, v)
        for i, u in enumerate(points)
        for v in points[i + 1:]
        if lat.join(u, v) is not TOP
    )
    out = formula_product(g.family, lat, *coll)
    # c + b = 0 for D_2(2): the factors drop out, the third point survives
    assert len(out) == 1
    (w, cf), = out.items()
    assert cf == 1
    assert w not in coll
    opp = next(
        (u, v)
        for i, u in enumerate(points)
        for v in points[i + 1:]
        if lat.join(u, v) is TOP
    )
    assert formula_product(g.family, lat, *opp) == {opp[0]: -1, opp[1]: -1}


def test_formula_matches_oracle_everywhere(bundle):
    for name in (
        "j31", "j41", "j42", "j52", "g242",
        "h22", "h23", "h14", "d22", "c22",
    ):
        g, sd = bundle(name)
        report = verify_formula_vs_oracle(g, sd)
        count = len(g.lattice.levels[1])
        assert report.pairs_checked == count * count
        assert report.max_discrepancy == 0


def test_formula_matches_oracle_with_triple_joins(bundle):
    # diameter-3 instance: products of collinear points spill onto points
    # whose join with the base plane has rank 3
    g, sd = bundle("d32")
    report = verify_formula_vs_oracle(g, sd)
    assert report.pairs_checked == len(g.lattice.levels[1]) ** 2
    assert report.max_discrepancy == 0


def test_tampered_vectors_fail_verification(bundle):
    g, sd = bundle("j52")
    svs = spanning_vectors(g, sd)
    doubled = dataclasses.replace(
        svs[0], coords=tuple(2 * x for x in svs[0].coords)
    )
    with pytest.raises(FormulaMismatchError):
        verify_formula_vs_oracle(g, sd, [doubled] + svs[1:])


def test_structure_constants_triangle(algebra):
    alg = algebra("j31")
    assert alg.dim == 2
    assert alg.basis_labels == ((1,), (2,))
    op = alg.operation
    assert op.coefficient(0, 0, 0) == 1 and op.coefficient(0, 0, 1) == 0
    assert op.coefficient(0, 1, 0) == -1 and op.coefficient(0, 1, 1) == -1
    assert op.coefficient(1, 1, 1) == 1
    # x * (x * y) = y and (x * x) * y = x * y: the one-off pair sees the
    # difference between association orders only through signs
    x, y = (Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))
    assert op.apply(x, op.apply(x, y)) == y
    assert op.apply(op.apply(x, x), y) == op.apply(x, y)
    assert op.apply(x, op.apply(y, y)) == op.apply(x, y)


def test_structure_constants_zero_algebras(algebra):
    assert algebra("j42").operation.is_zero
    assert algebra("h22").operation.is_zero
    assert algebra("j42").dim == 3
    assert algebra("h22").dim == 2


def test_hamming_23_is_square_of_hamming_13(algebra):
    op23 = algebra("h23").operation
    op13 = algebra("h13").operation
    assert algebra("h23").basis_labels == ((0, 1), (0, 2), (1, 0), (2, 0))
    assert algebra("h13").basis_labels == ((1,), (2,))
    assert direct_product(op13, op13).constants == op23.constants


def test_label_coords_cover_every_level_one_label(bundle, algebra):
    for name in ("j52", "g242", "h23", "c22"):
        g, _ = bundle(name)
        alg = algebra(name)
        labels = set(g.lattice.levels[1])
        assert set(alg.label_coords) == labels
        assert set(alg.basis_labels) <= labels
        assert len(alg.label_coords[alg.basis_labels[0]]) == alg.dim


def test_algebra_reproduces_formula_in_basis_coordinates(bundle, algebra):
    for name in ("j52", "h23", "d22"):
        g, _ = bundle(name)
        alg = algebra(name)
        op = alg.operation
        labels = list(g.lattice.levels[1])
        for u in labels:
            for v in labels:
                got = op.apply(alg.label_coords[u], alg.label_coords[v])
                expansion = formula_product(g.family, g.lattice, u, v)
                want = [Fraction(0)] * alg.dim
                for lbl, cf in expansion.items():
                    for idx, x in enumerate(alg.label_coords[lbl]):
                        want[idx] += cf * x
                assert list(got) == want, (name, u, v)


def test_structure_constants_independent_of_basis(bundle, algebra):
    g, sd = bundle("j52")
    default = algebra("j52")
    reversed_order = structure_constants(
        g, sd, label_order=list(reversed(g.lattice.levels[1]))
    )
    assert reversed_order.basis_labels != default.basis_labels
    # same algebra in different coordinates: products of the same labels
    # must expand identically over the respective label coordinates
    for u in g.lattice.levels[1]:
        for v in g.lattice.levels[1]:
            a = default.operation.apply(
                default.label_coords[u], default.label_coords[v]
            )
            b = reversed_order.operation.apply(
                reversed_order.label_coords[u], reversed_order.label_coords[v]
            )
            # compare by re-expanding both over the shared formula
            expansion = formula_product(g.family, g.lattice, u, v)
            for alg, got in ((default, a), (reversed_order, b)):
                want = [Fraction(0)] * alg.dim
                for lbl, cf in expansion.items():
                    for idx, x in enumerate(alg.label_coords[lbl]):
                        want[idx] += cf * x
                assert list(got) == want


def test_one_off_pairs(bundle, algebra):
    g52 = bundle("j52")[0]
    assert algebra("j52").one_off == tuple(g52.lattice.levels[1][:2])
    h23, _ = bundle("h23")
    u, v = algebra("h23").one_off
    assert h23.lattice.join(u, v) is TOP
    d22, _ = bundle("d22")
    u, v = algebra("d22").one_off
    assert d22.lattice.join(u, v) is TOP
    u, v = algebra("h22").one_off  # dependent pair tolerated: zero algebra
    assert u != v


def test_operations_are_commutative(algebra):
    for name in ("j31", "j52", "g242", "h23", "h14", "d22", "c22"):
        assert algebra(name).operation.is_commutative


def test_algebra_dimension_matches_multiplicity(bundle, algebra):
    for name in ("j31", "j41", "j52", "g242", "h23", "h14", "d22", "c22"):
        _, sd = bundle(name)
        assert algebra(name).dim == sd.multiplicities[1]


def test_missing_lattice_is_rejected(bundle):
    import numpy as np

    from nortonalg.graphs import graph_from_distance_matrix
    from nortonalg.spectral import spectral_data

    c4 = np.array([[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]])
    g = graph_from_distance_matrix("cycle4", c4)
    sd = spectral_data(g)
    with pytest.raises(ConstructionError):
        spanning_vectors(g, sd)
