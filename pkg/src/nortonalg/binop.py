"""Exact parenthesization engine for binary operations on a rational vector space.

An operation is x*y = B(x,y) + Lx + Ry with rational structure constants B
and optional linear parts L, R (the reference double-minus operation
a*b = -a-b needs them).  Two parenthesizations of x_0 * ... * x_m are the
same operation exactly when they agree on every probe tuple drawn from the
standard basis; for operations with linear parts the probes run over the
basis of the homogenized space (dimension+1), which restores multilinearity
without losing any information.  All arithmetic is exact: probe tensors are
integer arrays over one common denominator, never floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .errors import BudgetExceededError
from .trees import (
    DEFAULT_ENUMERATION_LIMIT,
    BinaryTree,
    catalan,
    depth_sequence,
    enumerate_trees,
)

DEFAULT_FINGERPRINT_BUDGET = 10 ** 6

# Probe tensors with at most this many cells are memoized on the operation;
# larger ones (typically the root tensors of a big count) are streamed.
_TENSOR_CACHE_CELL_LIMIT = 250_000

METHOD_TENSOR = "tensor_exact"
METHOD_DEPTH_MOD2 = "depth_mod2"
METHOD_PATTERN = "pattern_certified"


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class BilinearOperation:
    """Structure constants of x*y = B(x,y) + Lx + Ry, exact rationals.

    constants[i][j][k] is the e_k coefficient of e_i * e_j.  linear_left and
    linear_right are dim x dim matrices (output index first) and default to
    zero; purely bilinear operations leave them None.
    """

    def __init__(self, constants, linear_left=None, linear_right=None):
        cube = tuple(
            tuple(tuple(_frac(c) for c in row) for row in plane) for plane in constants
        )
        d = len(cube)
        if d == 0:
            raise ValueError("dimension must be positive")
        for plane in cube:
            if len(plane) != d or any(len(row) != d for row in plane):
                raise ValueError("structure constants must form a dim^3 cube")
        self.constants = cube
        self._dim = d
        self.linear_left = self._as_matrix(linear_left, d)
        self.linear_right = self._as_matrix(linear_right, d)
        self._int_form = None
        self._probe_flat = None
        self._tensor_cache = {}

    @staticmethod
    def _as_matrix(m, d):
        if m is None:
            return None
        mat = tuple(tuple(_frac(c) for c in row) for row in m)
        if len(mat) != d or any(len(row) != d for row in mat):
            raise ValueError("linear part must be a dim x dim matrix")
        if all(c == 0 for row in mat for c in row):
            return None
        return mat

    @classmethod
    def zero(cls, dim: int) -> "BilinearOperation":
        z = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        return cls(z)

    @property
    def dimension(self) -> int:
        return self._dim

    @property
    def has_linear_terms(self) -> bool:
        return self.linear_left is not None or self.linear_right is not None

    @property
    def probe_dimension(self) -> int:
        """Dimension of the space probe tuples are drawn from."""
        return self._dim + 1 if self.has_linear_terms else self._dim

    @property
    def is_commutative(self) -> bool:
        c = self.constants
        d = self._dim
        if any(c[i][j] != c[j][i] for i in range(d) for j in range(i)):
            return False
        return self.linear_left == self.linear_right

    @property
    def is_zero(self) -> bool:
        return not self.has_linear_terms and all(
            x == 0 for p in self.constants for r in p for x in r
        )

    def coefficient(self, i: int, j: int, k: int) -> Fraction:
        return self.constants[i][j][k]

    def apply(self, x, y) -> tuple:
        """Exact product of two coordinate vectors."""
        d = self._dim
        if len(x) != d or len(y) != d:
            raise ValueError(f"expected vectors of length {d}")
        out = [Fraction(0)] * d
        for i, xi in enumerate(x):
            if not xi:
                continue
            plane = self.constants[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                xy = xi * yj
                row = plane[j]
                for k in range(d):
                    if row[k]:
                        out[k] += xy * row[k]
        if self.linear_left is not None:
            for k in range(d):
                out[k] += sum(self.linear_left[k][i] * x[i] for i in range(d))
        if self.linear_right is not None:
            for k in range(d):
                out[k] += sum(self.linear_right[k][j] * y[j] for j in range(d))
        return tuple(out)


def double_minus_operation() -> BilinearOperation:
    """The one-dimensional reference operation a*b = -a-b."""
    return BilinearOperation([[[0]]], linear_left=[[-1]], linear_right=[[-1]])


def evaluate_parenthesization(op: BilinearOperation, t: BinaryTree, args) -> tuple:
    """Evaluate the product shaped by t on the given argument vectors."""
    if len(args) != t.leaf_count:
        raise ValueError(f"tree has {t.leaf_count} leaves, got {len(args)} arguments")
    vecs = [tuple(_frac(c) for c in a) for a in args]

    def rec(s, offset):
        if s.is_leaf:
            return vecs[offset]
        lv = rec(s.left, offset)
        rv = rec(s.right, offset + s.left.leaf_count)
        return op.apply(lv, rv)

    return rec(t, 0)


# ---------------------------------------------------------------------------
# integer-scaled probe tensors


def _common_denominator(op: BilinearOperation) -> int:
    den = 1
    for plane in op.constants:
        for row in plane:
            for c in row:
                den = den * c.denominator // gcd(den, c.denominator)
    for mat in (op.linear_left, op.linear_right):
        if mat is not None:
            for row in mat:
                for c in row:
                    den = den * c.denominator // gcd(den, c.denominator)
    return den


def _int_form(op: BilinearOperation):
    """(den, flat) with flat[i, j*p+k] = den * probe constants, Python ints.

    For operations with linear terms the constants are homogenized: probe
    index p-1 is the affine coordinate, so e_i * e_h picks up the left linear
    part, e_h * e_j the right one, and e_h * e_h = e_h.
    """
    cached = op._int_form
    if cached is not None:
        return cached
    den = _common_denominator(op)
    d = op.dimension
    p = op.probe_dimension
    flat = np.zeros((p, p * p), dtype=object)
    for i in range(d):
        for j in range(d):
            row = op.constants[i][j]
            for k in range(d):
                if row[k]:
                    flat[i, j * p + k] = int(row[k] * den)
    if op.has_linear_terms:
        h = p - 1
        if op.linear_left is not None:
            for k in range(d):
                for i in range(d):
                    c = op.linear_left[k][i]
                    if c:
                        flat[i, h * p + k] = flat[i, h * p + k] + int(c * den)
        if op.linear_right is not None:
            for k in range(d):
                for j in range(d):
                    c = op.linear_right[k][j]
                    if c:
                        flat[h, j * p + k] = flat[h, j * p + k] + int(c * den)
        flat[h, h * p + h] = den
    op._int_form = (den, flat)
    return op._int_form


def _probe_tensor(op: BilinearOperation, t: BinaryTree) -> np.ndarray:
    """Integer tensor of the multilinear probe map of t.

    Shape (p**leaves, p); entry [probe, k] is den**internal_count(t) times the
    k-th output coordinate of the parenthesization evaluated at the probe
    tuple (lexicographic order over probe basis indices).
    """
    den, flat = _int_form(op)
    p = op.probe_dimension
    cached = op._tensor_cache.get(t)
    if cached is not None:
        return cached
    if t.is_leaf:
        arr = np.zeros((p, p), dtype=object)
        for i in range(p):
            arr[i, i] = 1
    else:
        l = _probe_tensor(op, t.left)
        r = _probe_tensor(op, t.right)
        m = (l @ flat).reshape(l.shape[0], p, p)
        arr = np.tensordot(m, r, axes=([1], [1]))
        arr = arr.transpose(0, 2, 1).reshape(l.shape[0] * r.shape[0], p)
    if arr.size <= _TENSOR_CACHE_CELL_LIMIT:
        op._tensor_cache[t] = arr
    return arr


def _check_probe_budget(op, m, budget):
    # p^(m+1) probe tuples, each with a p-entry output row
    needed = op.probe_dimension ** (m + 2)
    if needed > budget:
        raise BudgetExceededError("fingerprint", needed, budget)


def fingerprint_key(op: BilinearOperation, t: BinaryTree) -> tuple:
    """Hashable exact fingerprint (integer-scaled; comparable within one m)."""
    return tuple(_probe_tensor(op, t).reshape(-1).tolist())


def tensor_fingerprint(
    op: BilinearOperation, t: BinaryTree, budget: int = DEFAULT_FINGERPRINT_BUDGET
) -> tuple:
    """Exact rational fingerprint of the parenthesization shaped by t.

    Concatenates, in lexicographic order of probe basis tuples, the output
    vectors of the parenthesization.  Two trees with the same number of leaves
    get equal fingerprints exactly when their parenthesizations are equal as
    maps.
    """
    _check_probe_budget(op, t.internal_count, budget)
    den, _ = _int_form(op)
    scale = den ** t.internal_count
    return tuple(Fraction(v, scale) for v in _probe_tensor(op, t).reshape(-1).tolist())


# ---------------------------------------------------------------------------
# equivalence reports


@dataclass(frozen=True)
class EquivalenceReport:
    """Partition of the canonical tree list at one arity into equal-map classes."""

    m: int
    method: str
    classes: tuple
    merge_justifications: tuple | None = None

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def to_json_dict(self) -> dict:
        d = {
            "m": self.m,
            "method": self.method,
            "class_count": self.class_count,
            "classes": [list(c) for c in self.classes],
        }
        if self.merge_justifications is not None:
            d["merge_justifications"] = list(self.merge_justifications)
        return d


def _make_report(m, method, groups, justifications=None) -> EquivalenceReport:
    classes = tuple(tuple(sorted(g)) for g in groups)
    classes = tuple(sorted(classes, key=lambda c: c[0]))
    if justifications is not None:
        order = sorted(range(len(groups)), key=lambda i: min(groups[i]))
        justifications = tuple(justifications[i] for i in order)
    cm = catalan(m)
    covered = sorted(i for c in classes for i in c)
    if covered != list(range(cm)):
        raise ValueError("classes do not partition the tree list")
    if not 1 <= len(classes) <= cm:
        raise ValueError("class count out of range")
    return EquivalenceReport(m, method, classes, justifications)


def group_trees_by_fingerprint(op: BilinearOperation, trees, budget=DEFAULT_FINGERPRINT_BUDGET):
    """Group an explicit tree list (all of one arity) by exact fingerprint.

    Returns a list of index lists in first-seen order.
    """
    if not trees:
        return []
    m = trees[0].internal_count
    if any(t.internal_count != m for t in trees):
        raise ValueError("all trees must have the same number of internal nodes")
    _check_probe_budget(op, m, budget)
    groups = {}
    for idx, t in enumerate(trees):
        groups.setdefault(fingerprint_key(op, t), []).append(idx)
    return list(groups.values())


def count_classes_exact(
    op: BilinearOperation,
    m: int,
    budget: int = DEFAULT_FINGERPRINT_BUDGET,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
) -> EquivalenceReport:
    """Partition the C_m parenthesizations of m+1 factors by exact equality."""
    trees = enumerate_trees(m, limit=limit)
    groups = group_trees_by_fingerprint(op, trees, budget=budget)
    return _make_report(m, METHOD_TENSOR, groups)


def double_minus_classes(m: int, limit: int = DEFAULT_ENUMERATION_LIMIT) -> EquivalenceReport:
    """Classes of the double-minus operation: group by depth sequence mod 2."""
    trees = enumerate_trees(m, limit=limit)
    groups = {}
    for idx, t in enumerate(trees):
        groups.setdefault(depth_sequence(t).mod2(), []).append(idx)
    return _make_report(m, METHOD_DEPTH_MOD2, list(groups.values()))


def a000975_value(m: int) -> int:
    """floor(2^(m+1)/3): 1, 2, 5, 10, 21, 42, 85, ... for m = 1, 2, 3, ...

    Only defined here for m >= 1; the m = 0 count of any operation is 1 for
    the trivial reason that there is a single one-leaf tree.
    """
    if m < 1:
        raise ValueError("a000975_value requires m >= 1")
    return (2 ** (m + 1)) // 3


def direct_product(op1: BilinearOperation, op2: BilinearOperation) -> BilinearOperation:
    """Componentwise operation on the direct sum of the two spaces.

    Basis vectors from different factors multiply to zero, so a tree evaluated
    on the product is the pair of its evaluations on the factors; classes of
    the product partition is the common refinement of the factor partitions.
    """
    d1, d2 = op1.dimension, op2.dimension
    d = d1 + d2
    cube = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
    for i in range(d1):
        for j in range(d1):
            for k in range(d1):
                cube[i][j][k] = op1.constants[i][j][k]
    for i in range(d2):
        for j in range(d2):
            for k in range(d2):
                cube[d1 + i][d1 + j][d1 + k] = op2.constants[i][j][k]

    def block(m1, m2):
        if m1 is None and m2 is None:
            return None
        out = [[Fraction(0)] * d for _ in range(d)]
        if m1 is not None:
            for k in range(d1):
                for i in range(d1):
                    out[k][i] = m1[k][i]
        if m2 is not None:
            for k in range(d2):
                for i in range(d2):
                    out[d1 + k][d1 + i] = m2[k][i]
        return out

    return BilinearOperation(
        cube,
        linear_left=block(op1.linear_left, op2.linear_left),
        linear_right=block(op1.linear_right, op2.linear_right),
    )


def evaluate_int_scaled(op: BilinearOperation, t: BinaryTree, int_args) -> np.ndarray:
    """Evaluate t on integer-scaled argument vectors, staying in integers.

    Only for purely bilinear operations.  If every argument is some fixed
    rational vector times a common integer scale s, the result equals
    s**(m+1) * den**m times the exact rational evaluation, with den the
    operation's common denominator; results for trees of equal arity are
    directly comparable.
    """
    if op.has_linear_terms:
        raise ValueError("integer-scaled evaluation needs a purely bilinear operation")
    _, flat = _int_form(op)
    p = op.dimension
    args = [np.asarray(a, dtype=object) for a in int_args]
    if len(args) != t.leaf_count:
        raise ValueError("argument count mismatch")

    def rec(s, offset):
        if s.is_leaf:
            return args[offset]
        x = rec(s.left, offset)
        y = rec(s.right, offset + s.left.leaf_count)
        m = (x @ flat).reshape(p, p)
        # m[j, k] = sum_i x_i C[i][j][k]; contract with y over j.
        return y @ m

    return rec(t, 0)
