"""Parenthesization engine: evaluation, fingerprints, class counts."""

import random
from fractions import Fraction

import pytest

from nortonalg.binop import (
    BilinearOperation,
    _int_form,
    a000975_value,
    count_classes_exact,
    direct_product,
    double_minus_classes,
    double_minus_operation,
    evaluate_int_scaled,
    evaluate_parenthesization,
    group_trees_by_fingerprint,
    tensor_fingerprint,
)
from nortonalg.errors import BudgetExceededError
from nortonalg.trees import LEAF, catalan, depth_sequence, enumerate_trees, left_comb, node

# A000975 prefix for m = 1..10, frozen; cross-checked below against the
# depth-mod-2 grouping and, for m <= 8, against tensor fingerprints.
A000975_PREFIX = [1, 2, 5, 10, 21, 42, 85, 170, 341, 682]

F = Fraction


def test_double_minus_left_comb_signs():
    op = double_minus_operation()
    t = left_comb(2)  # ((a b) c), depths (2, 2, 1)
    out = evaluate_parenthesization(op, t, [(F(5),), (F(7),), (F(2),)])
    assert out == (F(5) + F(7) - F(2),)
    # depths (1, 2, 2): a (b c) = -a - (-b - c) = -a + b + c
    t2 = node(LEAF, node(LEAF, LEAF))
    out2 = evaluate_parenthesization(op, t2, [(F(5),), (F(7),), (F(2),)])
    assert out2 == (-F(5) + F(7) + F(2),)


def test_double_minus_signs_follow_depth_parity():
    op = double_minus_operation()
    for m in range(6):
        for t in enumerate_trees(m):
            d = depth_sequence(t)
            args = [(F(random.Random(i).randint(1, 9)),) for i in range(m + 1)]
            expect = sum((-1) ** d[i] * args[i][0] for i in range(m + 1))
            assert evaluate_parenthesization(op, t, args) == (expect,)


def test_double_minus_fingerprints_distinguish_by_parity():
    op = double_minus_operation()
    assert op.probe_dimension == 2  # homogenized
    t_a = left_comb(2)  # depths (2, 2, 1)
    t_b = node(LEAF, node(LEAF, LEAF))  # depths (1, 2, 2)
    fa = tensor_fingerprint(op, t_a)
    fb = tensor_fingerprint(op, t_b)
    assert fa != fb

    # Probes with a single payload slot recover the sign vector.
    def signs(t, fp):
        m = t.internal_count
        p = 2
        out = []
        for i in range(m + 1):
            # probe tuple: payload basis vector at slot i, affine unit elsewhere
            idx = sum((0 if s == i else 1) * p ** (m - s) for s in range(m + 1))
            out.append(fp[idx * p + 0])
        return tuple(out)

    assert signs(t_a, fa) == (1, 1, -1)
    assert signs(t_b, fb) == (-1, 1, 1)


def test_double_minus_classes_match_a000975():
    for m in range(1, 11):
        rep = double_minus_classes(m)
        assert rep.method == "depth_mod2"
        assert rep.class_count == a000975_value(m) == A000975_PREFIX[m - 1]
    assert double_minus_classes(0).class_count == 1


def test_tensor_count_cross_checks_depth_grouping():
    op = double_minus_operation()
    for m in range(0, 9):
        by_tensor = count_classes_exact(op, m)
        by_depth = double_minus_classes(m)
        assert by_tensor.classes == by_depth.classes
        assert by_tensor.method == "tensor_exact"


def test_a000975_value_domain():
    with pytest.raises(ValueError):
        a000975_value(0)
    assert a000975_value(1) == 1
    assert a000975_value(10) == 682


def test_zero_operation_collapses_everything():
    op = BilinearOperation.zero(3)
    assert op.is_zero and op.is_commutative
    for m in range(0, 6):
        assert count_classes_exact(op, m).class_count == 1


def test_monotone_sanity_bounds():
    op = double_minus_operation()
    for m in range(0, 8):
        rep = count_classes_exact(op, m)
        assert 1 <= rep.class_count <= catalan(m)


def test_fingerprint_budget_enforced():
    op = BilinearOperation.zero(3)
    with pytest.raises(BudgetExceededError):
        count_classes_exact(op, 4, budget=100)  # 3^6 = 729 cells > 100
    with pytest.raises(BudgetExceededError):
        tensor_fingerprint(op, left_comb(4), budget=100)


def test_grouping_invariant_under_tree_order():
    op = double_minus_operation()
    for m in range(1, 5):
        trees = enumerate_trees(m)
        base = group_trees_by_fingerprint(op, trees)
        perm = list(range(len(trees)))
        random.Random(m).shuffle(perm)
        shuffled = [trees[i] for i in perm]
        other = group_trees_by_fingerprint(op, shuffled)
        as_tree_sets = lambda trees_, groups: {
            frozenset(trees_[i] for i in g) for g in groups
        }
        assert as_tree_sets(trees, base) == as_tree_sets(shuffled, other)


def _random_operation(rng, dim):
    cube = [
        [[F(rng.randint(-2, 2)) for _ in range(dim)] for _ in range(dim)]
        for _ in range(dim)
    ]
    return BilinearOperation(cube)


def test_direct_product_is_common_refinement():
    rng = random.Random(7)
    for trial in range(4):
        op1 = _random_operation(rng, rng.randint(1, 2))
        op2 = _random_operation(rng, rng.randint(1, 2))
        prod = direct_product(op1, op2)
        assert prod.dimension == op1.dimension + op2.dimension
        for m in range(1, 4):
            trees = enumerate_trees(m)
            g1 = group_trees_by_fingerprint(op1, trees)
            g2 = group_trees_by_fingerprint(op2, trees)
            gp = group_trees_by_fingerprint(prod, trees)
            key1 = {i: min(g) for g in g1 for i in g}
            key2 = {i: min(g) for g in g2 for i in g}
            refinement = {}
            for i in range(len(trees)):
                refinement.setdefault((key1[i], key2[i]), []).append(i)
            assert sorted(sorted(g) for g in gp) == sorted(
                sorted(g) for g in refinement.values()
            )


def test_direct_product_evaluates_blockwise():
    op1 = double_minus_operation()
    op2 = BilinearOperation([[[F(1)]]])  # a*b = ab on dim 1
    prod = direct_product(op1, op2)
    t = left_comb(2)
    out = evaluate_parenthesization(
        prod, t, [(F(2), F(3)), (F(5), F(7)), (F(1), F(2))]
    )
    assert out == (F(2) + F(5) - F(1), F(3) * F(7) * F(2))


def test_evaluate_validates_shapes():
    op = BilinearOperation.zero(2)
    with pytest.raises(ValueError):
        evaluate_parenthesization(op, left_comb(2), [(F(1), F(0))] * 2)
    with pytest.raises(ValueError):
        op.apply((F(1),), (F(1), F(0)))
    with pytest.raises(ValueError):
        BilinearOperation([[[0, 0]]])


def test_int_scaled_evaluation_matches_exact():
    rng = random.Random(3)
    op = _random_operation(rng, 3)
    den = 6
    for m in range(1, 4):
        for t in enumerate_trees(m):
            fracs = [
                tuple(F(rng.randint(-5, 5), den) for _ in range(3))
                for _ in range(m + 1)
            ]
            ints = [[int(c * den) for c in v] for v in fracs]
            got = evaluate_int_scaled(op, t, ints)
            exact = evaluate_parenthesization(op, t, fracs)
            opden, _ = _int_form(op)
            scale = den ** (m + 1) * opden ** m
            assert tuple(F(v, scale) for v in got.tolist()) == exact


def test_report_serialization():
    rep = double_minus_classes(2)
    d = rep.to_json_dict()
    assert d["m"] == 2 and d["method"] == "depth_mod2"
    assert d["class_count"] == 2
    assert sorted(i for c in d["classes"] for i in c) == [0, 1]


def test_commutativity_detection():
    sym = BilinearOperation(
        [
            [[F(1), F(0)], [F(0), F(1)]],
            [[F(0), F(1)], [F(1), F(0)]],
        ]
    )
    assert sym.is_commutative
    asym = BilinearOperation(
        [
            [[F(1), F(0)], [F(1), F(1)]],
            [[F(0), F(1)], [F(1), F(0)]],
        ]
    )
    assert not asym.is_commutative
