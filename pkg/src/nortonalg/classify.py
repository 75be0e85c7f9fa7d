"""Nonassociativity counts and the three-way classification of family algebras.

The number of distinct maps among the C_m parenthesizations of x_0 * ... * x_m
lands in exactly one of three regimes: a single class (the product is
associative, in fact zero), the A000975 pattern 1, 2, 5, 10, 21, ... (trees
merge exactly when their depth sequences agree mod 2), or all C_m classes
(totally nonassociative).  Counting uses either exact probe tensors or the
much cheaper one-off pattern: evaluate each tree on assignments that place a
distinguished vector at one position and a second one everywhere else.
Differing one-off results certify distinctness outright; merges are justified
by full fingerprints when affordable and otherwise by the mod-2 criterion,
which only the A000975 branch may invoke.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .binop import (
    DEFAULT_FINGERPRINT_BUDGET,
    METHOD_PATTERN,
    BilinearOperation,
    EquivalenceReport,
    _make_report,
    a000975_value,
    count_classes_exact,
    evaluate_int_scaled,
    evaluate_parenthesization,
    fingerprint_key,
)
from .errors import BudgetExceededError, ConstructionError
from .graphs import (
    DualPolarFamily,
    GrassmannFamily,
    GraphInstance,
    HammingFamily,
    JohnsonFamily,
)
from .norton import NortonAlgebra, _SpanSolver, family_constants, norton_oracle
from .spectral import SpectralData
from .trees import (
    DEFAULT_ENUMERATION_LIMIT,
    catalan,
    depth_sequence,
    enumerate_trees,
    left_comb,
)

BRANCH_ASSOCIATIVE = "associative"
BRANCH_A000975 = "a000975"
BRANCH_TOTALLY = "totally_nonassociative"

JUSTIFY_SIGNATURE = "signature-distinct"
JUSTIFY_FINGERPRINT = "fingerprint-verified"
JUSTIFY_THEOREM = "mod2-theorem"
JUSTIFY_ZERO = "zero-operation"
JUSTIFY_TESTED = "tested-assignments-only"


def predicted_branch(family) -> str:
    """Which of the three regimes the family parameters select."""
    if isinstance(family, JohnsonFamily):
        if family.n == 2 * family.k:
            return BRANCH_ASSOCIATIVE
        if (family.n, family.k) == (3, 1):
            return BRANCH_A000975
        return BRANCH_TOTALLY
    if isinstance(family, GrassmannFamily):
        return BRANCH_TOTALLY
    if isinstance(family, HammingFamily):
        if family.e == 2:
            return BRANCH_ASSOCIATIVE
        if family.e == 3:
            return BRANCH_A000975
        return BRANCH_TOTALLY
    if isinstance(family, DualPolarFamily):
        if (family.kind, family.d, family.q) == ("D", 2, 2):
            return BRANCH_A000975
        return BRANCH_TOTALLY
    raise ValueError(f"no classification for {family!r}")


def expected_class_count(branch: str, m: int) -> int:
    """Predicted number of classes at arity m + 1 for one branch."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return 1
    if branch == BRANCH_ASSOCIATIVE:
        return 1
    if branch == BRANCH_A000975:
        return a000975_value(m)
    if branch == BRANCH_TOTALLY:
        return catalan(m)
    raise ValueError(f"unknown branch {branch!r}")


# ---------------------------------------------------------------------------
# one-off evaluations


def _one_off_int_pair(alg: NortonAlgebra):
    """The preferred pair in basis coordinates, scaled to integer vectors."""
    cached = alg._signature_cache.get("pair")
    if cached is not None:
        return cached
    u, v = alg.one_off_vectors()
    den = 1
    for x in (*u, *v):
        f = Fraction(x)
        den = den * f.denominator // gcd(den, f.denominator)
    iu = tuple(int(Fraction(x) * den) for x in u)
    iv = tuple(int(Fraction(x) * den) for x in v)
    alg._signature_cache["pair"] = (iu, iv)
    return iu, iv


def one_off_signature(alg: NortonAlgebra, t) -> tuple:
    """Exact (integer-scaled) results of every one-off assignment through t.

    Entry r is the evaluation with the first preferred vector at position r
    and the second everywhere else.  Signatures of trees of equal arity are
    comparable; distinct signatures certify distinct parenthesizations.
    """
    cached = alg._signature_cache.get(t)
    if cached is not None:
        return cached
    iu, iv = _one_off_int_pair(alg)
    m = t.internal_count
    sig = []
    for r in range(m + 1):
        args = [iv] * (m + 1)
        args[r] = iu
        sig.append(tuple(evaluate_int_scaled(alg.operation, t, args).tolist()))
    sig = tuple(sig)
    alg._signature_cache[t] = sig
    return sig


def _mod2_partition(trees):
    groups = {}
    for idx, t in enumerate(trees):
        groups.setdefault(depth_sequence(t).mod2(), []).append(idx)
    return list(groups.values())


def count_norton_classes(
    alg: NortonAlgebra,
    m: int,
    strategy: str = "auto",
    budget: int = DEFAULT_FINGERPRINT_BUDGET,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
) -> EquivalenceReport:
    """Partition the arity-(m+1) parenthesizations of a Norton algebra.

    tensor: exact probe-tensor grouping (cost dim^(m+2)).  pattern: group by
    one-off signatures, then justify every merge, by full fingerprints when
    the budget allows and otherwise by the mod-2 criterion (A000975 branch)
    or triviality (zero operation); an unjustifiable merge raises.  auto
    picks tensor whenever it fits the budget.
    """
    op = alg.operation
    affordable = op.probe_dimension ** (m + 2) <= budget
    if strategy == "auto":
        strategy = "tensor" if affordable else "pattern"
    if strategy == "tensor":
        return count_classes_exact(op, m, budget=budget, limit=limit)
    if strategy != "pattern":
        raise ValueError(f"unknown strategy {strategy!r}")

    trees = enumerate_trees(m, limit=limit)
    by_signature = {}
    for idx, t in enumerate(trees):
        by_signature.setdefault(one_off_signature(alg, t), []).append(idx)

    mod2_checked = False
    groups = []
    justifications = []
    for idxs in by_signature.values():
        if len(idxs) == 1:
            groups.append(idxs)
            justifications.append(JUSTIFY_SIGNATURE)
            continue
        if affordable:
            refined = {}
            for i in idxs:
                refined.setdefault(fingerprint_key(op, trees[i]), []).append(i)
            for sub in refined.values():
                groups.append(sub)
                justifications.append(JUSTIFY_FINGERPRINT)
            continue
        if op.is_zero:
            groups.append(idxs)
            justifications.append(JUSTIFY_ZERO)
            continue
        if predicted_branch(alg.family) == BRANCH_A000975:
            if not mod2_checked:
                want = {frozenset(g) for g in _mod2_partition(trees)}
                got = {frozenset(g) for g in by_signature.values()}
                if got != want:
                    raise ConstructionError(
                        f"{alg.label()}: one-off signatures contradict the "
                        f"mod-2 criterion at m={m}"
                    )
                mod2_checked = True
            groups.append(idxs)
            justifications.append(JUSTIFY_THEOREM)
            continue
        raise BudgetExceededError(
            "fingerprint", op.probe_dimension ** (m + 2), budget
        )
    return _make_report(m, METHOD_PATTERN, groups, justifications)


# ---------------------------------------------------------------------------
# distinctness certificates


@dataclass(frozen=True)
class DistinctnessCertificate:
    """A position r where the one-off evaluations of two trees differ."""

    tree_a: object
    tree_b: object
    position: int
    value_a: tuple
    value_b: tuple


@dataclass(frozen=True)
class EquivalenceClaim:
    """Two trees the one-off pattern could not separate, with the reason
    the merge is believed (or merely not refuted)."""

    tree_a: object
    tree_b: object
    justification: str


def _exact_one_off_args(alg, m, r):
    u, v = alg.one_off_vectors()
    args = [v] * (m + 1)
    args[r] = u
    return args


def certify_distinct(alg: NortonAlgebra, tree_a, tree_b):
    """One-off certificate that two trees induce different maps, if it exists.

    Scans positions in increasing order and returns the first separating one
    with both exact evaluation vectors; otherwise returns an equivalence
    claim whose justification is the mod-2 criterion (A000975 branch), the
    zero operation, or only the tested assignments.
    """
    if tree_a == tree_b:
        raise ValueError("the two trees must be distinct")
    if tree_a.internal_count != tree_b.internal_count:
        raise ValueError("trees of different arity are not comparable")
    m = tree_a.internal_count
    sig_a = one_off_signature(alg, tree_a)
    sig_b = one_off_signature(alg, tree_b)
    for r in range(m + 1):
        if sig_a[r] != sig_b[r]:
            value_a = evaluate_parenthesization(
                alg.operation, tree_a, _exact_one_off_args(alg, m, r)
            )
            value_b = evaluate_parenthesization(
                alg.operation, tree_b, _exact_one_off_args(alg, m, r)
            )
            return DistinctnessCertificate(tree_a, tree_b, r, value_a, value_b)
    if alg.operation.is_zero:
        return EquivalenceClaim(tree_a, tree_b, JUSTIFY_ZERO)
    if predicted_branch(alg.family) == BRANCH_A000975:
        if depth_sequence(tree_a).mod2() != depth_sequence(tree_b).mod2():
            raise ConstructionError(
                f"{alg.label()}: equal signatures on trees with different "
                "mod-2 depth sequences"
            )
        return EquivalenceClaim(tree_a, tree_b, JUSTIFY_THEOREM)
    return EquivalenceClaim(tree_a, tree_b, JUSTIFY_TESTED)


# ---------------------------------------------------------------------------
# coefficient lemmas


@dataclass(frozen=True)
class CoefficientRow:
    """Exact one-off coefficients at depth h: value = alpha*u + beta*v
    (+ gamma * sum over the line through the pair, Grassmann only)."""

    h: int
    alpha: Fraction
    beta: Fraction
    gamma: Fraction | None = None


@dataclass(frozen=True)
class CoefficientTable:
    family: object
    c: Fraction
    b: Fraction | None
    b_prime: Fraction | None
    rows: tuple

    def row(self, h: int) -> CoefficientRow:
        return self.rows[h - 1]


def _lemma_pair(alg: NortonAlgebra):
    """The pair of vectors the coefficient lemma is stated for.

    Matches the preferred pair except over Hamming, where the single
    nonblank coordinate behaves like a smaller complete-graph instance only
    after rescaling by e/(e-2).
    """
    u, v = alg.one_off_vectors()
    if isinstance(alg.family, HammingFamily):
        e = alg.family.e
        if e == 2:
            raise ValueError("zero product: no coefficient lemma")
        s = Fraction(e, e - 2)
        return tuple(s * x for x in u), tuple(s * x for x in v)
    return tuple(map(Fraction, u)), tuple(map(Fraction, v))


def _line_sum(alg: NortonAlgebra):
    total = [Fraction(0)] * alg.dim
    for lbl in alg.one_off_line:
        for i, x in enumerate(alg.label_coords[lbl]):
            total[i] += x
    return tuple(total)


def pattern_coefficients(alg: NortonAlgebra, h: int) -> CoefficientRow:
    """Closed-form one-off coefficients at depth h, cross-checked directly.

    alpha(h) = c^h always; beta(h) = c + ... + c^h except over Grassmann,
    where beta has no closed form and is measured from the evaluation while
    gamma(h) = ((qb+c)^h - c^h)/q is checked against it.  The cross-check
    evaluates the left comb of depth h with the lemma pair and demands exact
    agreement.
    """
    if h < 1:
        raise ValueError("depth must be at least 1")
    con = family_constants(alg.family)
    if con.get("zero_product"):
        raise ValueError("zero product: no coefficient lemma")
    c = con["c"]
    u, v = _lemma_pair(alg)
    direct = evaluate_parenthesization(
        alg.operation, left_comb(h), [u] + [v] * h
    )
    alpha = c ** h
    if isinstance(alg.family, GrassmannFamily):
        q = alg.family.q
        b = con["b"]
        gamma = ((q * b + c) ** h - c ** h) / q
        line = _line_sum(alg)
        residual = [
            x - alpha * uu - gamma * ll for x, uu, ll in zip(direct, u, line)
        ]
        beta = next(
            (r / vv for r, vv in zip(residual, v) if vv), Fraction(0)
        )
        if any(r != beta * vv for r, vv in zip(residual, v)):
            raise ConstructionError(
                f"{alg.label()}: one-off residual at depth {h} is not a "
                "multiple of the second lemma vector"
            )
        return CoefficientRow(h, alpha, beta, gamma)
    beta = sum(c ** j for j in range(1, h + 1))
    expected = tuple(alpha * uu + beta * vv for uu, vv in zip(u, v))
    if direct != expected:
        raise ConstructionError(
            f"{alg.label()}: depth-{h} one-off evaluation disagrees with "
            "the closed form"
        )
    return CoefficientRow(h, alpha, beta)


def coefficient_table(alg: NortonAlgebra, h_max: int) -> CoefficientTable:
    con = family_constants(alg.family)
    if con.get("zero_product"):
        raise ValueError("zero product: no coefficient lemma")
    return CoefficientTable(
        family=alg.family,
        c=con["c"],
        b=con.get("b"),
        b_prime=con.get("b_prime"),
        rows=tuple(pattern_coefficients(alg, h) for h in range(1, h_max + 1)),
    )


def verify_pattern_lemma(
    alg: NortonAlgebra, m_max: int, limit: int = DEFAULT_ENUMERATION_LIMIT
) -> int:
    """Check the coefficient lemma on every tree and position up to m_max.

    For each tree t and position r, the one-off evaluation must equal the
    closed-form row at depth d_r(t) (with the measured beta over Grassmann,
    which simultaneously confirms beta depends only on the depth).  Returns
    the number of identities checked.
    """
    u, v = _lemma_pair(alg)
    grassmann = isinstance(alg.family, GrassmannFamily)
    line = _line_sum(alg) if grassmann else None
    rows = {}
    checked = 0
    for m in range(1, m_max + 1):
        for t in enumerate_trees(m, limit=limit):
            depths = depth_sequence(t)
            for r in range(m + 1):
                h = depths[r]
                row = rows.get(h)
                if row is None:
                    row = rows[h] = pattern_coefficients(alg, h)
                args = [v] * (m + 1)
                args[r] = u
                direct = evaluate_parenthesization(alg.operation, t, args)
                if grassmann:
                    expected = tuple(
                        row.alpha * uu + row.beta * vv + row.gamma * ll
                        for uu, vv, ll in zip(u, v, line)
                    )
                else:
                    expected = tuple(
                        row.alpha * uu + row.beta * vv for uu, vv in zip(u, v)
                    )
                if direct != expected:
                    raise ConstructionError(
                        f"{alg.label()}: lemma fails on tree {t!r} at "
                        f"position {r} (depth {h})"
                    )
                checked += 1
    return checked


# ---------------------------------------------------------------------------
# the classification theorem


@dataclass(frozen=True)
class ClassificationVerdict:
    """Observed class counts against the branch prediction, m = 0..m_max."""

    instance: str
    branch: str
    m_values: tuple
    counts: tuple
    expected: tuple
    methods: tuple
    passed: bool
    failures: tuple
    reports: tuple

    def to_json_dict(self) -> dict:
        return {
            "instance": self.instance,
            "branch": self.branch,
            "m_values": list(self.m_values),
            "counts": list(self.counts),
            "expected": list(self.expected),
            "methods": list(self.methods),
            "passed": self.passed,
            "failures": [list(f) for f in self.failures],
        }


def verify_classification(
    alg: NortonAlgebra,
    m_max: int,
    strategy: str = "auto",
    budget: int = DEFAULT_FINGERPRINT_BUDGET,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
) -> ClassificationVerdict:
    """Compare observed class counts with the three-way prediction.

    Also pins the distinguishing constant of the branch: the associative
    instances carry the zero product, the A000975 instances have c = -1, and
    the totally nonassociative ones have c different from 0 and +-1.  Count
    mismatches produce a failing verdict rather than an exception.
    """
    branch = predicted_branch(alg.family)
    con = family_constants(alg.family)
    if branch == BRANCH_ASSOCIATIVE:
        assert con.get("zero_product") and alg.operation.is_zero
    elif branch == BRANCH_A000975:
        assert con["c"] == -1
    else:
        assert con["c"] not in (-1, 0, 1) and not alg.operation.is_zero
    m_values = tuple(range(m_max + 1))
    reports = tuple(
        count_norton_classes(alg, m, strategy=strategy, budget=budget, limit=limit)
        for m in m_values
    )
    counts = tuple(r.class_count for r in reports)
    expected = tuple(expected_class_count(branch, m) for m in m_values)
    failures = tuple(
        (m, got, want)
        for m, got, want in zip(m_values, counts, expected)
        if got != want
    )
    return ClassificationVerdict(
        instance=alg.label(),
        branch=branch,
        m_values=m_values,
        counts=counts,
        expected=expected,
        methods=tuple(r.method for r in reports),
        passed=not failures,
        failures=failures,
        reports=reports,
    )


# ---------------------------------------------------------------------------
# the exceptional coincidence


def d22_hamming_aligned_operation(
    g: GraphInstance, spectral: SpectralData
) -> BilinearOperation:
    """The bipartite dual polar algebra in coordinates matching H(2,3).

    Splits the six vertices into the two parts of the bipartition, takes the
    centered vertex indicators of the first two vertices of each part as a
    basis, and expands oracle products over it.  The resulting cube is
    identical to the H(2,3) structure constants: each part behaves like one
    coordinate of the Hamming word.
    """
    fam = g.family
    if not (
        isinstance(fam, DualPolarFamily)
        and (fam.kind, fam.d, fam.q) == ("D", 2, 2)
    ):
        raise ValueError("alignment is specific to the bipartite instance D2(2)")
    n = g.vertex_count
    parts = (
        [x for x in range(n) if g.dist[0, x] % 2 == 0],
        [x for x in range(n) if g.dist[0, x] % 2 == 1],
    )
    basis = []
    for part in parts:
        for a in part[:2]:
            vec = [Fraction(0)] * n
            for x in part:
                vec[x] = Fraction(-1, 3)
            vec[a] += 1
            basis.append(tuple(vec))
    solver = _SpanSolver(basis)
    dim = len(basis)
    cube = [[None] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i, dim):
            prod = norton_oracle(g, spectral, 1, basis[i], basis[j])
            coeffs = solver.solve(prod)
            if coeffs is None:
                raise ConstructionError("aligned product escapes the basis span")
            cube[i][j] = coeffs
            cube[j][i] = coeffs
    op = BilinearOperation(cube)
    assert op.is_commutative
    return op
