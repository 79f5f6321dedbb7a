"""Moment problems indexed by multi-indices instead of free words.

A commutative moment map assigns a block Gamma(k) to every multi-index
k in a finite downward-closed set Pi.  Lifting pulls it back through
abelianization: every word sigma with letter counts in Pi receives

    L(sigma) = epsilon(sigma) * Gamma(phi(sigma)),

where epsilon is the deformation signature (identically one in the
symmetric case).  Downward closure of Pi is exactly suffix closure of
the word preimage, so the free-side machinery applies verbatim; the
synthesized tuples then carry their (lambda-)commutation defect as a
measured residual in the certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionMismatch, GammaZeroNotIdentity, NotAdmissible
from .gns import (
    CpModel,
    SynthesisCertificate,
    synthesize_cp_model,
    synthesize_row_contraction,
)
from .kernels import MomentMap
from .words import (
    LambdaSpec,
    abelianize,
    all_commutators,
    is_downward_closed,
    multiindex_product,
    multiindex_to_word,
    sigma_pi,
    signature,
    word_product,
)

__all__ = [
    "CommutativeMomentMap",
    "lift_moments",
    "solve_commutative_poisson",
    "solve_trig_moment",
    "lambda_commutation_residual",
]


@dataclass(frozen=True)
class CommutativeMomentMap:
    """Blocks Gamma(k) over a downward-closed multi-index set Pi."""

    n: int
    d_out: int
    d_in: int
    blocks: dict[tuple[int, ...], np.ndarray]
    lam: LambdaSpec | None = None

    def __post_init__(self):
        if self.lam is None:
            object.__setattr__(self, "lam", LambdaSpec(self.n, {}))
        if self.lam.n != self.n:
            raise DimensionMismatch(
                f"lambda table is for n={self.lam.n}, moments for n={self.n}"
            )
        cleaned = {}
        for k, block in self.blocks.items():
            k = tuple(int(v) for v in k)
            if len(k) != self.n or any(v < 0 for v in k):
                raise NotAdmissible(f"bad multi-index {k} for n={self.n}")
            m = linalg.as_cmatrix(block)
            if m.shape != (self.d_out, self.d_in):
                raise DimensionMismatch(
                    f"block at {k} has shape {m.shape}, "
                    f"expected ({self.d_out}, {self.d_in})"
                )
            cleaned[k] = m
        object.__setattr__(self, "blocks", cleaned)
        zero = (0,) * self.n
        if zero not in self.blocks:
            raise NotAdmissible("the zero multi-index must carry a moment")
        if not is_downward_closed(self.blocks.keys(), self.n):
            raise NotAdmissible(
                "multi-index support must be downward closed"
            )

    @property
    def pi(self) -> list[tuple[int, ...]]:
        return sorted(self.blocks.keys(), key=lambda k: (sum(k), k))

    def unit_block(self) -> np.ndarray:
        return self.blocks[(0,) * self.n]


def lift_moments(g: CommutativeMomentMap) -> MomentMap:
    """Pull Gamma back to the word preimage of its index set."""
    sigma = sigma_pi(g.pi, g.n)
    blocks = {}
    for w in sigma.sorted_words:
        gamma = g.blocks[abelianize(w)]
        eps = signature(w, g.lam)
        blocks[w] = gamma if eps == 1 else eps * gamma
    return MomentMap(sigma, g.d_out, g.d_in, blocks)


def lambda_commutation_residual(tuple_, lam: LambdaSpec) -> float:
    """max over i < j of ||T_j T_i - lambda_ji T_i T_j||."""
    worst = 0.0
    n = len(tuple_)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            ti, tj = tuple_[i - 1], tuple_[j - 1]
            worst = max(
                worst,
                float(np.linalg.norm(tj @ ti - lam(j, i) * ti @ tj)),
            )
    return worst


def _canonical_moment_residual(g: CommutativeMomentMap, tuple_) -> float:
    unit = g.unit_block()
    worst = 0.0
    for k in g.pi:
        lhs = multiindex_product(list(tuple_), k) @ unit
        worst = max(worst, float(np.linalg.norm(lhs - g.blocks[k])))
    return worst


def solve_commutative_poisson(
    g: CommutativeMomentMap, tol: float = linalg.DEFAULT_TOL
) -> SynthesisCertificate:
    """Representing row contraction for a commutative moment map.

    Lifts to the word level, synthesizes, and extends the certificate
    with the commutation defect of the tuple and the multi-index form
    of the moment identity Gamma(k) = T^k Gamma(0).  Lifting preserves
    feasibility because a word moment depends only on the abelianized
    multi-index; commutation of the output is measured rather than
    assumed, so a failure would be visible in the certificate, never
    papered over.
    """
    lifted = lift_moments(g)
    cert = synthesize_row_contraction(lifted, tol)
    extra = dict(cert.extra_residuals)
    extra["lambda_commutation"] = lambda_commutation_residual(cert.tuple_, g.lam)
    extra["canonical_moment"] = _canonical_moment_residual(g, cert.tuple_)
    return SynthesisCertificate(
        tuple_=cert.tuple_,
        quotient_dim=cert.quotient_dim,
        defect_min_eig=cert.defect_min_eig,
        moment_residual=cert.moment_residual,
        extra_residuals=extra,
        tolerance=tol,
    )


def solve_trig_moment(
    g: CommutativeMomentMap, tol: float = linalg.DEFAULT_TOL
) -> tuple[CpModel, SynthesisCertificate]:
    """Completely positive model Phi with Phi(k) = Gamma(k) on Pi.

    Requires Gamma(0) = I.  The compression subspace is seeded with the
    exchange-relation polynomials, so the compressed tuple commutes (in
    the lambda sense) by construction; the certificate reports the
    reconstruction error over the multi-index set.
    """
    unit = g.unit_block()
    if g.d_out != g.d_in:
        raise DimensionMismatch(
            f"trigonometric pipeline needs square blocks, got {g.d_out}x{g.d_in}"
        )
    gap = float(np.linalg.norm(unit - np.eye(g.d_out)))
    if gap > tol * max(1.0, float(np.linalg.norm(unit))):
        raise GammaZeroNotIdentity(
            f"Gamma(0) differs from the identity by {gap:.3e}"
        )
    lifted = lift_moments(g)
    model, cert = synthesize_cp_model(lifted, all_commutators(g.n, g.lam), tol)

    worst = 0.0
    for k in g.pi:
        word = multiindex_to_word(k, g.n)
        phi = (
            model.embed.conj().T
            @ word_product(list(model.compressed_tuple), word)
            @ model.embed
        )
        worst = max(worst, float(np.linalg.norm(phi - g.blocks[k])))
    extra = dict(cert.extra_residuals)
    extra["lambda_commutation"] = lambda_commutation_residual(
        model.compressed_tuple, g.lam
    )
    certificate = SynthesisCertificate(
        tuple_=cert.tuple_,
        quotient_dim=cert.quotient_dim,
        defect_min_eig=cert.defect_min_eig,
        moment_residual=worst,
        extra_residuals=extra,
        tolerance=tol,
    )
    return model, certificate
