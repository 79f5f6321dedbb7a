"""Moment problems constrained by a homogeneous two-sided ideal.

An instance is a moment map together with generating polynomials; the
moments are representative values of a map on the quotient semigroup,
so the first thing to verify is that they do not see the ideal: every
two-sided translate of every generator that stays inside the word set
must evaluate to zero on the moments.  Only after that gate does the
kernel test mean anything, and the synthesized tuples annihilate the
ideal by construction of the compression.

Compatibility of the word set with the generators (no translate
straddling the boundary) is a structural property of the instance and
is enforced at construction time.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    GammaZeroNotIdentity,
    InfeasibleMoments,
    NotAdmissiblePair,
    NotHomogeneous,
    RelationsFail,
    ToeplitzNotPSD,
)
from .gns import (
    CpModel,
    SynthesisCertificate,
    synthesize_cp_model,
    synthesize_row_contraction,
)
from .kernels import (
    FeasibilityReport,
    MomentMap,
    check_moment_dominance,
    check_toeplitz_psd,
)
from .words import (
    FreePolynomial,
    Word,
    ideal_span_basis,
    is_admissible_pair,
    word_key,
    word_product,
)

__all__ = [
    "QuotientInstance",
    "check_ideal_relations",
    "solve_quotient_poisson",
    "solve_quotient_trig",
    "relation_residual",
]


@dataclass(frozen=True)
class QuotientInstance:
    """Moment map plus the homogeneous generators of the ideal."""

    l: MomentMap
    polys: tuple[FreePolynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))
        for p in self.polys:
            if not p.is_homogeneous():
                raise NotHomogeneous(
                    f"ideal generators must be homogeneous, got {p}"
                )
        if not is_admissible_pair(self.l.sigma, self.polys):
            raise NotAdmissiblePair(
                "a translate of an ideal generator straddles the word set"
            )


def check_ideal_relations(
    q: QuotientInstance, tol: float = linalg.DEFAULT_TOL
) -> FeasibilityReport:
    """Do the moments vanish on every in-set translate of the ideal?

    For each generator p = sum a_j alpha_j and each window (omega, beta)
    keeping all words omega alpha_j beta inside the set, the residual
    ||sum a_j L(omega alpha_j beta)|| must stay below tolerance.  The
    report names the worst offending window.
    """
    l = q.l
    sigma = l.sigma
    n = sigma.n
    scale = max(1.0, l.max_block_norm())
    max_len = sigma.max_length()
    worst = 0.0
    worst_detail = ""
    windows = 0
    for p_index, p in enumerate(q.polys):
        if p.is_zero():
            continue
        deg = p.degree()
        budget = max_len - deg
        if budget < 0:
            continue
        for total in range(budget + 1):
            for la in range(total + 1):
                lb = total - la
                for left in itertools.product(range(1, n + 1), repeat=la):
                    for right in itertools.product(range(1, n + 1), repeat=lb):
                        translated = [
                            (coeff, Word(left + w.letters + right, n))
                            for coeff, w in p.terms
                        ]
                        if not all(w in sigma for _, w in translated):
                            continue
                        windows += 1
                        acc = np.zeros((l.d_out, l.d_in), dtype=complex)
                        for coeff, w in translated:
                            acc = acc + coeff * l.blocks[w]
                        residual = float(np.linalg.norm(acc))
                        if residual > worst or not worst_detail:
                            worst = max(worst, residual)
                            worst_detail = (
                                f"generator {p_index}, window "
                                f"('{word_key(Word(left, n))}', "
                                f"'{word_key(Word(right, n))}'), "
                                f"residual={residual:.17g}"
                            )
    if not q.polys:
        worst_detail = "no relations"
    elif windows == 0:
        worst_detail = "no window fit the word set"
    else:
        worst_detail = f"{windows} windows; worst: {worst_detail}"
    return FeasibilityReport(
        kind="relations",
        passed=worst <= tol * scale,
        min_eigenvalue=0.0,
        residual_norm=worst,
        tolerance=tol,
        scale=scale,
        index_order=tuple(word_key(w) for w in sigma.sorted_words),
        detail=worst_detail,
    )


def relation_residual(tuple_, polys) -> float:
    """max over the polynomials of ||p(T_1, ..., T_n)||."""
    worst = 0.0
    for p in polys:
        if not p.terms:
            continue
        dim = tuple_[0].shape[0]
        acc = np.zeros((dim, dim), dtype=complex)
        for coeff, w in p.terms:
            acc = acc + coeff * word_product(list(tuple_), w)
        worst = max(worst, float(np.linalg.norm(acc)))
    return worst


def _ideal_span_residual(tuple_, polys, degree: int) -> float:
    if not polys or not tuple_:
        return 0.0
    basis = ideal_span_basis(list(polys), degree)
    return relation_residual(tuple_, basis)


def solve_quotient_poisson(
    q: QuotientInstance, tol: float = linalg.DEFAULT_TOL
) -> SynthesisCertificate:
    """Row-contraction synthesis under ideal constraints.

    Both gates always run, so a relation failure is reported alongside
    the kernel verdict (and vice versa).  The certificate extends the
    unconstrained one with the tuple's residuals on the generators and
    on a spanning slice of the ideal; with no generators the output is
    bit-identical to the unconstrained pipeline.
    """
    relations = check_ideal_relations(q, tol)
    dominance = check_moment_dominance(q.l, tol)
    if not relations.passed:
        raise RelationsFail(relations, dominance)
    if not dominance.passed:
        raise InfeasibleMoments(dominance, relations)
    cert = synthesize_row_contraction(q.l, tol)
    if not q.polys:
        return cert
    extra = dict(cert.extra_residuals)
    extra["ideal_relations"] = relation_residual(cert.tuple_, q.polys)
    extra["ideal_span"] = _ideal_span_residual(
        cert.tuple_, q.polys, q.l.sigma.max_length()
    )
    return SynthesisCertificate(
        tuple_=cert.tuple_,
        quotient_dim=cert.quotient_dim,
        defect_min_eig=cert.defect_min_eig,
        moment_residual=cert.moment_residual,
        extra_residuals=extra,
        tolerance=tol,
    )


def solve_quotient_trig(
    q: QuotientInstance, tol: float = linalg.DEFAULT_TOL
) -> tuple[CpModel, SynthesisCertificate]:
    """Completely positive model annihilating the ideal.

    The compression subspace is seeded with the instance's own
    generators, so the relations hold exactly on the compressed tuple;
    the moments survive because the embedded copy of the original space
    is orthogonal to everything that was cut.
    """
    l = q.l
    unit = l.unit_block()
    if l.is_square:
        gap = float(np.linalg.norm(unit - np.eye(l.d_out)))
        if gap > tol * max(1.0, float(np.linalg.norm(unit))):
            raise GammaZeroNotIdentity(
                f"L(g0) differs from the identity by {gap:.3e}"
            )
    relations = check_ideal_relations(q, tol)
    toeplitz = check_toeplitz_psd(l, tol)
    if not relations.passed:
        raise RelationsFail(relations, toeplitz)
    if not toeplitz.passed:
        raise ToeplitzNotPSD(toeplitz, relations)
    model, cert = synthesize_cp_model(l, list(q.polys), tol)
    if not q.polys:
        return model, cert
    extra = dict(cert.extra_residuals)
    extra["ideal_relations"] = relation_residual(model.compressed_tuple, q.polys)
    certificate = SynthesisCertificate(
        tuple_=cert.tuple_,
        quotient_dim=cert.quotient_dim,
        defect_min_eig=cert.defect_min_eig,
        moment_residual=cert.moment_residual,
        extra_residuals=extra,
        tolerance=tol,
    )
    return model, certificate
