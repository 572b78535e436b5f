"""
Exact verification of the metric equivariant algebra axioms and the triple conditions.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import List, Optional, Sequence, Tuple, Union

from app.core.logging import get_logger
from app.services.checks import CheckList
from app.services.liecore.algebra import MetricEquivariantAlgebra, add_sparse
from app.services.liecore.grading import grade, is_h_graded
from app.utils.exactlin import Mat, SparseRow, is_nondegenerate, nullspace, same_span

logger = get_logger(__name__)


def _mat_apply(M: Mat, row: SparseRow) -> SparseRow:
    out: SparseRow = {}
    for j, v in row.items():
        out = add_sparse(out, {i: M[i, j] for i in range(M.rows) if M[i, j]}, v)
    return out


def _column(M: Mat, j: int) -> SparseRow:
    return M.sparse_col(j)


def bracket_hom_defect(g: MetricEquivariantAlgebra, M: Mat, derivation: bool) -> Optional[Tuple[int, int, SparseRow]]:
    """First (i, j) where M is not an automorphism (or derivation) of the bracket."""
    columns = [_column(M, j) for j in range(g.dim)]
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            lhs = _mat_apply(M, g.bracket_basis(i, j))
            if derivation:
                rhs = add_sparse(
                    g.bracket_sparse(columns[i], {j: Fraction(1)}),
                    g.bracket_sparse({i: Fraction(1)}, columns[j]),
                )
            else:
                rhs = g.bracket_sparse(columns[i], columns[j])
            defect = add_sparse(lhs, rhs, Fraction(-1))
            if defect:
                return i, j, defect
    return None


def verify_algebra(g: MetricEquivariantAlgebra) -> CheckList:
    """Run every axiom exactly; failures are report entries, never exceptions."""
    checks = CheckList()
    n = g.dim
    G = g.form
    D = g.derivation
    theta = g.involution
    I = Mat.identity(n)

    bad = [
        (i, j)
        for i, j in product(range(n), repeat=2)
        if add_sparse(g.bracket_basis(i, j), g.bracket_basis(j, i))
    ]
    checks.record(
        "bracket.antisymmetric",
        not bad,
        f"[{g.labels[bad[0][0]]}, {g.labels[bad[0][1]]}] + [{g.labels[bad[0][1]]}, {g.labels[bad[0][0]]}] != 0" if bad else "",
    )

    defects = g.jacobi_defects()
    if defects:
        i, j, k, defect = defects[0]
        detail = f"Jacobiator({g.labels[i]}, {g.labels[j]}, {g.labels[k]}) = {g.format_vector(defect)}"
    else:
        detail = ""
    checks.record("bracket.jacobi", not defects, detail)

    checks.record("gram.symmetric", G.is_symmetric())
    if g.weak:
        radical = nullspace(G)
        ok = all(
            (theta @ v + v).is_zero() and (D @ v).is_zero() for v in radical
        )
        checks.record("gram.radical_in_g-+", ok, f"radical dimension {len(radical)}")
    else:
        checks.record("gram.nondegenerate", is_nondegenerate(G))

    invariance_defect = None
    for i, j, k in product(range(n), repeat=3):
        lhs = sum((v * G[m, k] for m, v in g.bracket_basis(i, j).items()), Fraction(0))
        rhs = sum((v * G[m, j] for m, v in g.bracket_basis(i, k).items()), Fraction(0))
        if lhs + rhs:
            invariance_defect = (i, j, k)
            break
    checks.record(
        "gram.invariant",
        invariance_defect is None,
        "<[{0},{1}],{2}> + <{1},[{0},{2}]> != 0".format(*(g.labels[x] for x in invariance_defect))
        if invariance_defect
        else "",
    )

    checks.record("theta.involution", (theta @ theta - I).is_zero())
    hom = bracket_hom_defect(g, theta, derivation=False)
    checks.record(
        "theta.automorphism",
        hom is None,
        f"at ({g.labels[hom[0]]}, {g.labels[hom[1]]})" if hom else "",
    )
    checks.record("theta.isometry", (theta.T @ G @ theta - G).is_zero())

    der = bracket_hom_defect(g, D, derivation=True)
    checks.record(
        "D.derivation",
        der is None,
        f"at ({g.labels[der[0]]}, {g.labels[der[1]]})" if der else "",
    )
    checks.record("D.antisymmetric", (D.T @ G + G @ D).is_zero())
    checks.record("D.theta_anticommute", (D @ theta + theta @ D).is_zero())
    checks.record("D.h_graded", is_h_graded(g))

    logger.debug("Algebra verified", dim=n, passed=checks.passed, failed=[c.name for c in checks.failed()])
    return checks


@dataclass(frozen=True)
class SpanCertificate:
    """Outcome of a span equality test with both sides as basis matrices."""
    result: bool
    bracket_span: Mat
    target: Mat


def is_extrinsic_triple(g: MetricEquivariantAlgebra) -> SpanCertificate:
    """[g+^-, g+^-] = g+^+."""
    grading = grade(g)
    span = g.bracket_span(grading.plus_minus, grading.plus_minus)
    return SpanCertificate(same_span(span, grading.plus_plus), span, grading.plus_plus)


def is_full(g: MetricEquivariantAlgebra) -> SpanCertificate:
    """[g^-, g^-] = g^+."""
    grading = grade(g)
    span = g.bracket_span(grading.tau_minus, grading.tau_minus)
    return SpanCertificate(same_span(span, grading.tau_plus), span, grading.tau_plus)


def split_check(
    g: MetricEquivariantAlgebra, partition: Sequence[Sequence[Union[int, str]]]
) -> bool:
    """True iff the basis partition is an orthogonal, bracket-closed, Phi-invariant splitting.

    Blocks must be disjoint, cover the basis and commute with each other.
    """
    blocks: List[List[int]] = [
        [g.index(x) if isinstance(x, str) else x for x in block] for block in partition
    ]
    flat = [i for block in blocks for i in block]
    if sorted(flat) != list(range(g.dim)) or any(not block for block in blocks):
        return False
    owner = {i: b for b, block in enumerate(blocks) for i in block}

    for i, j in product(range(g.dim), repeat=2):
        if owner[i] == owner[j]:
            if any(owner[k] != owner[i] for k in g.bracket_basis(i, j)):
                return False
        else:
            if g.bracket_basis(i, j) or g.form[i, j]:
                return False
            if g.derivation[i, j] or g.involution[i, j]:
                return False
    return True

