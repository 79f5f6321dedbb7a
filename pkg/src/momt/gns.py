"""Constructive synthesis of representing operator tuples.

Feasibility certificates from module ``kernels`` are yes/no answers;
this module produces the witnesses.  The common engine is a quotient
construction: flatten the dominating kernel into a Gram matrix, pass to
the positive-rank quotient space, and realize the left shifts of the
index semigroup as partial isometries on that quotient.

Shifting a factorization pair (tau, beta) to (g_i tau, beta) preserves
the K2 inner products of the pairs it keeps, so the Gram matrix of the
shifted classes equals the Gram matrix of the source classes exactly.
The operator that matches those classes and annihilates the orthogonal
complement of the source span is therefore a well-defined partial
isometry -- note that this is *not* the descent of the ambient shift
matrix to the quotient (that map is typically not well defined on the
null classes; ``linalg.induced_operator`` rejects it), it is the
extension-by-zero in the quotient geometry.

From the partial isometries V_i and the contraction X mapping the
quotient onto the span of the moment blocks, the representing tuple is
T_i = X V_i X^H.  The same shifts on the word-indexed Toeplitz quotient
give the completely positive model: quotient the K2' kernel, cut out
the smallest shift-invariant subspace containing the ranges of the
relation polynomials, and compress to its orthogonal complement.  The
compression kills the relations exactly (the error terms stay inside
the invariant subspace) while the embedded copy of the original space
never meets it, so the moments survive untouched.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatch,
    EmbedNotIsometric,
    InfeasibleMoments,
    NotStarFeasible,
    NotWellDefined,
    ToeplitzNotPSD,
)
from .kernels import (
    MomentMap,
    FeasibilityReport,
    build_k2,
    build_toeplitz_kernel,
    check_moment_dominance,
    check_star_equality,
    check_toeplitz_psd,
    moment_block_row,
)
from .words import AdmissibleSet, FreePolynomial, Word, word_key, word_product

__all__ = [
    "SynthesisCertificate",
    "CpModel",
    "shift_matrix",
    "synthesize_row_contraction",
    "synthesize_star_representation",
    "synthesize_cp_model",
    "verify_certificate",
]


@dataclass(frozen=True)
class SynthesisCertificate:
    """A representing tuple together with the residuals that certify it.

    ``tuple_`` holds the n synthesized operators.  ``defect_min_eig``
    is the smallest eigenvalue of I - sum T_i T_i^H (nonnegative within
    tolerance for a row contraction).  ``moment_residual`` is the worst
    moment identity error max_w ||T_w L(g0) - L(w)|| over the indexing
    set; completely positive models store their reconstruction error
    max_w ||embed^H T'_w embed - L(w)|| here instead.  Extra residuals
    (partial isometry, range orthogonality, commutation, relations) are
    keyed by name.
    """

    tuple_: tuple[np.ndarray, ...]
    quotient_dim: int
    defect_min_eig: float
    moment_residual: float
    extra_residuals: dict[str, float]
    tolerance: float

    @property
    def n(self) -> int:
        return len(self.tuple_)

    @property
    def dim(self) -> int:
        return self.tuple_[0].shape[0] if self.tuple_ else 0


@dataclass(frozen=True)
class CpModel:
    """Compressed model behind a completely positive moment certificate.

    ``embed`` maps the original space into the Toeplitz quotient (the
    class of the delta function at the empty word); ``projector_g`` is
    the orthogonal projector onto the good subspace, and
    ``compressed_tuple`` holds the compressed shifts, written as
    operators on the full quotient supported by that subspace.
    """

    ambient_dim: int
    embed: np.ndarray
    compressed_tuple: tuple[np.ndarray, ...]
    projector_g: np.ndarray


def shift_matrix(i: int, sigma: AdmissibleSet, d: int) -> np.ndarray:
    """Ambient 0/1 shift on the pair-indexed space: (tau, b) -> (g_i tau, b).

    Blocks whose shifted pair leaves the index set are mapped to zero.
    The matrices for distinct generators have orthogonal ranges, and
    sum_i V_i V_i^H <= I holds exactly.
    """
    if not 1 <= i <= sigma.n:
        raise DimensionMismatch(f"generator {i} out of range for n={sigma.n}")
    pairs = sigma.lambda_pairs
    position = {pair: k for k, pair in enumerate(pairs)}
    size = d * len(pairs)
    out = np.zeros((size, size), dtype=complex)
    eye = np.eye(d, dtype=complex)
    for k, (tau, beta) in enumerate(pairs):
        shifted = (Word((i,) + tau.letters, sigma.n), beta)
        dest = position.get(shifted)
        if dest is not None:
            out[dest * d:(dest + 1) * d, k * d:(k + 1) * d] = eye
    return out


def _block_columns(indices: list[int], d: int) -> list[int]:
    cols: list[int] = []
    for k in indices:
        cols.extend(range(k * d, (k + 1) * d))
    return cols


def _pair_shift_support(i: int, sigma: AdmissibleSet) -> tuple[list[int], list[int]]:
    """Source/destination pair indices of the i-th shift on Lambda_Sigma."""
    pairs = sigma.lambda_pairs
    position = {pair: k for k, pair in enumerate(pairs)}
    src: list[int] = []
    dst: list[int] = []
    for k, (tau, beta) in enumerate(pairs):
        shifted = (Word((i,) + tau.letters, sigma.n), beta)
        dest = position.get(shifted)
        if dest is not None:
            src.append(k)
            dst.append(dest)
    return src, dst


def _word_shift_support(i: int, sigma: AdmissibleSet) -> tuple[list[int], list[int]]:
    """Source/destination word indices of the i-th shift on Sigma itself."""
    words = sigma.sorted_words
    position = {w: k for k, w in enumerate(words)}
    src: list[int] = []
    dst: list[int] = []
    for k, w in enumerate(words):
        shifted = Word((i,) + w.letters, sigma.n)
        dest = position.get(shifted)
        if dest is not None:
            src.append(k)
            dst.append(dest)
    return src, dst


def _partial_isometry(
    quotient_map: np.ndarray,
    src: list[int],
    dst: list[int],
    d: int,
    tol: float,
) -> np.ndarray:
    """Quotient operator sending source classes to destination classes.

    Extends by zero on the orthogonal complement of the source span.
    Well-definedness needs the two families to share their Gram matrix;
    the shift invariance of the kernels guarantees it, and we verify it
    rather than assume it.
    """
    rank = quotient_map.shape[0]
    if not src:
        return np.zeros((rank, rank), dtype=complex)
    b = quotient_map[:, _block_columns(src, d)]
    a = quotient_map[:, _block_columns(dst, d)]
    gram = b.conj().T @ b
    mismatch = np.linalg.norm(a.conj().T @ a - gram)
    if mismatch > 1e-8 * max(1.0, np.linalg.norm(gram)):
        raise NotWellDefined(
            f"shifted classes change their Gram matrix by {mismatch:.3e}"
        )
    return a @ linalg.pinv_psd(gram, tol) @ b.conj().T


def _spectral_norm(a: np.ndarray) -> float:
    if a.size == 0:
        return 0.0
    dec = linalg.hermitian_eig(a @ a.conj().T)
    return float(np.sqrt(max(dec.values[-1], 0.0)))


def _moment_identity_residual(
    tuple_: tuple[np.ndarray, ...], l: MomentMap
) -> float:
    unit = l.unit_block()
    worst = 0.0
    for w in l.sigma.sorted_words:
        lhs = word_product(tuple_, w) @ unit
        worst = max(worst, float(np.linalg.norm(lhs - l.blocks[w])))
    return worst


def _synthesize_tuple(l: MomentMap, tol: float):
    """Shared quotient pipeline; returns (tuple, quotient, V's, X)."""
    sigma = l.sigma
    d = l.d_in
    gram = build_k2(l).flat
    qs = linalg.build_quotient(gram, tol)
    xhat = moment_block_row(l) @ qs.q_pinv
    isometries = []
    tuple_ = []
    for i in range(1, sigma.n + 1):
        src, dst = _pair_shift_support(i, sigma)
        v = _partial_isometry(qs.q, src, dst, d, tol)
        isometries.append(v)
        tuple_.append(xhat @ v @ xhat.conj().T)
    return tuple(tuple_), qs, isometries, xhat


def _partial_isometry_residual(ops) -> float:
    worst = 0.0
    for v in ops:
        worst = max(
            worst, float(np.linalg.norm(v @ v.conj().T @ v - v))
        )
    return worst


def synthesize_row_contraction(
    l: MomentMap, tol: float = linalg.DEFAULT_TOL
) -> SynthesisCertificate:
    """Build a row contraction T with T_w L(g0) = L(w) for all w.

    Requires the dominance test to pass; raises InfeasibleMoments with
    the failed report otherwise.
    """
    report = check_moment_dominance(l, tol)
    if not report.passed:
        raise InfeasibleMoments(report)
    tuple_, qs, isometries, xhat = _synthesize_tuple(l, tol)
    _, defect_min = linalg.is_psd(linalg.row_defect(list(tuple_)), tol)
    extra = {
        "v_partial_isometry": _partial_isometry_residual(isometries),
        "x_contraction": max(0.0, _spectral_norm(xhat) - 1.0),
    }
    return SynthesisCertificate(
        tuple_=tuple_,
        quotient_dim=qs.rank,
        defect_min_eig=float(defect_min),
        moment_residual=_moment_identity_residual(tuple_, l),
        extra_residuals=extra,
        tolerance=tol,
    )


def synthesize_star_representation(
    l: MomentMap, tol: float = linalg.DEFAULT_TOL
) -> SynthesisCertificate:
    """Synthesis in the equality case K1 = K2.

    The same pipeline, but the quotient contraction X is now an
    isometry and the synthesized operators are partial isometries with
    mutually orthogonal ranges; the certificate records how far the
    construction is from those three identities.
    """
    report = check_star_equality(l, tol)
    if not report.passed:
        raise NotStarFeasible(report)
    tuple_, qs, isometries, xhat = _synthesize_tuple(l, tol)
    _, defect_min = linalg.is_psd(linalg.row_defect(list(tuple_)), tol)
    eye = np.eye(qs.rank, dtype=complex)
    range_orth = 0.0
    for i in range(len(tuple_)):
        for j in range(len(tuple_)):
            if i != j:
                range_orth = max(
                    range_orth,
                    float(np.linalg.norm(tuple_[i].conj().T @ tuple_[j])),
                )
    extra = {
        "v_partial_isometry": _partial_isometry_residual(isometries),
        "x_isometry": float(np.linalg.norm(xhat.conj().T @ xhat - eye)),
        "t_partial_isometry": _partial_isometry_residual(tuple_),
        "range_orthogonality": range_orth,
    }
    return SynthesisCertificate(
        tuple_=tuple_,
        quotient_dim=qs.rank,
        defect_min_eig=float(defect_min),
        moment_residual=_moment_identity_residual(tuple_, l),
        extra_residuals=extra,
        tolerance=tol,
    )


def _relation_operator(p: FreePolynomial, ops) -> np.ndarray:
    dim = ops[0].shape[0]
    out = np.zeros((dim, dim), dtype=complex)
    for coeff, w in p.terms:
        out = out + coeff * word_product(list(ops), w)
    return out


def _invariant_closure(ops, seed: np.ndarray, rank_tol: float = 1e-10) -> np.ndarray:
    """Smallest subspace containing the seed and invariant under ops.

    Span iteration: append the images of the current basis under every
    operator and re-orthonormalize until the rank stops growing.  The
    ambient dimension bounds the number of rounds.
    """
    basis = linalg.orth_basis(seed, rank_tol)
    while basis.shape[1] > 0:
        grown = np.hstack([basis] + [op @ basis for op in ops])
        refreshed = linalg.orth_basis(grown, rank_tol)
        if refreshed.shape[1] == basis.shape[1]:
            return refreshed
        basis = refreshed
    return basis


def synthesize_cp_model(
    l: MomentMap,
    relations: list[FreePolynomial],
    tol: float = linalg.DEFAULT_TOL,
) -> tuple[CpModel, SynthesisCertificate]:
    """Completely positive model reproducing a positive Toeplitz kernel.

    Quotients the K2' kernel over the word set, realizes the word
    shifts as partial isometries, and compresses them to the orthogonal
    complement of the smallest shift-invariant subspace containing the
    ranges of all relation polynomials.  The compressed tuple satisfies
    the relations exactly (up to roundoff) and the map
    w -> embed^H T'_w embed returns the original moments.

    Requires L(g0) = I (no silent renormalization) and the Toeplitz
    kernel to be positive semidefinite within tolerance.
    """
    if not l.is_square:
        raise DimensionMismatch(
            f"cp model needs square blocks, got {l.d_out}x{l.d_in}"
        )
    unit = l.unit_block()
    eye_h = np.eye(l.d_out, dtype=complex)
    unit_gap = float(np.linalg.norm(unit - eye_h))
    if unit_gap > tol * max(1.0, float(np.linalg.norm(unit))):
        raise EmbedNotIsometric(
            f"L(g0) differs from the identity by {unit_gap:.3e}; "
            "the model embeds isometrically only for unital moment maps"
        )
    report = check_toeplitz_psd(l, tol)
    if not report.passed:
        raise ToeplitzNotPSD(report)

    sigma = l.sigma
    d = l.d_in
    qs = linalg.build_quotient(build_toeplitz_kernel(l, "k2p").flat, tol)
    shifts = []
    for i in range(1, sigma.n + 1):
        src, dst = _word_shift_support(i, sigma)
        shifts.append(_partial_isometry(qs.q, src, dst, d, tol))

    seeds = [np.zeros((qs.rank, 0), dtype=complex)]
    seeds.extend(_relation_operator(p, shifts) for p in relations)
    bad_subspace = _invariant_closure(shifts, np.hstack(seeds))

    if bad_subspace.shape[1] == 0:
        projector = np.eye(qs.rank, dtype=complex)
        compressed = tuple(shifts)
    else:
        projector = linalg.orth_projector(bad_subspace, complement=True)
        compressed = tuple(projector @ v @ projector for v in shifts)

    embed = qs.q[:, :d]  # the empty word is first in canonical order
    unit_iso = float(np.linalg.norm(embed.conj().T @ embed - eye_h))
    range_gap = float(np.linalg.norm(embed - projector @ embed))

    worst = 0.0
    for w in sigma.sorted_words:
        phi = embed.conj().T @ word_product(list(compressed), w) @ embed
        worst = max(worst, float(np.linalg.norm(phi - l.blocks[w])))
    _, defect_min = linalg.is_psd(linalg.row_defect(list(compressed)), tol)

    model = CpModel(
        ambient_dim=qs.rank,
        embed=embed,
        compressed_tuple=compressed,
        projector_g=projector,
    )
    certificate = SynthesisCertificate(
        tuple_=compressed,
        quotient_dim=qs.rank,
        defect_min_eig=float(defect_min),
        moment_residual=worst,
        extra_residuals={
            "embed_isometry": unit_iso,
            "range_inclusion": range_gap,
        },
        tolerance=tol,
    )
    return model, certificate


def verify_certificate(
    cert: SynthesisCertificate,
    l: MomentMap,
    tol: float = linalg.DEFAULT_TOL,
    model: CpModel | None = None,
) -> FeasibilityReport:
    """Recompute a certificate's residuals from scratch.

    Word products are rebuilt by plain repeated multiplication and
    compared against the stored moments; nothing is trusted from the
    synthesis run.  Pass the cp model to verify a compressed
    certificate (its reconstruction goes through the embedding).
    """
    if cert.n != l.sigma.n:
        raise DimensionMismatch(
            f"certificate has {cert.n} operators, index set expects {l.sigma.n}"
        )
    dim = cert.dim
    for t in cert.tuple_:
        if t.shape != (dim, dim):
            raise DimensionMismatch("certificate operators must share one square shape")
    if model is None:
        if dim != l.d_out:
            raise DimensionMismatch(
                f"operators act on dimension {dim}, moments live in {l.d_out}"
            )
        residual = _moment_identity_residual(cert.tuple_, l)
        checks = {"moment_identity": residual}
    else:
        if model.embed.shape != (dim, l.d_out):
            raise DimensionMismatch("embedding shape does not match model/moments")
        worst = 0.0
        for w in l.sigma.sorted_words:
            phi = model.embed.conj().T @ word_product(list(cert.tuple_), w) @ model.embed
            worst = max(worst, float(np.linalg.norm(phi - l.blocks[w])))
        eye_h = np.eye(l.d_out, dtype=complex)
        checks = {
            "moment_identity": worst,
            "embed_isometry": float(
                np.linalg.norm(model.embed.conj().T @ model.embed - eye_h)
            ),
            "range_inclusion": float(
                np.linalg.norm(model.embed - model.projector_g @ model.embed)
            ),
        }
        residual = max(checks.values())
    _, defect_min = linalg.is_psd(linalg.row_defect(list(cert.tuple_)), tol)
    scale = max(1.0, l.max_block_norm())
    passed = (
        max(checks.values()) <= tol * scale and defect_min >= -tol * scale
    )
    worst_name = max(checks, key=checks.get)
    return FeasibilityReport(
        kind="certificate",
        passed=bool(passed),
        min_eigenvalue=float(defect_min),
        residual_norm=float(max(checks.values())),
        tolerance=tol,
        scale=scale,
        index_order=tuple(word_key(w) for w in l.sigma.sorted_words),
        detail=f"worst check: {worst_name}={checks[worst_name]:.3e}",
    )
