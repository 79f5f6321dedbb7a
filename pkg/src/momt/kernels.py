"""Kernels attached to a truncated moment map and the feasibility tests
built on them.

A moment map assigns a d_out x d_in block to every word of an
admissible set.  Two Hermitian kernels are indexed by the factorization
pairs (alpha, beta) of the set: the Gram kernel

    K1((alpha, beta), (sigma, gamma)) = L(alpha beta)^H L(sigma gamma)

and the case-split kernel

    K2((alpha, beta), (sigma, gamma)) =
        L(beta)^H L((sigma \\ alpha) gamma)   if alpha is a prefix of sigma,
        L((alpha \\ sigma) beta)^H L(gamma)   if sigma is a strict prefix,
        0                                     otherwise.

K2 dominating K1 is equivalent to the moments coming from a row
contraction; equality K1 = K2 is the *-representation case.  The primed
kernels live on Sigma x Sigma and detect the same equality (a cheaper
cross-check): K1'(s, t) = L(s)^H L(t) and the Toeplitz-type K2' with
K2'(s, t) = L(t \\ s) / L(s \\ t)^H / 0.  Vector-valued maps (d_in = 1)
get the scalar analogues K3/K4 and K3'/K4'.

All flat matrices are laid out in the canonical word order from module
``words``; that layout is part of the certificate format, so reports
are reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionMismatch, NotSquare, NotVectorValued
from .words import AdmissibleSet, Word, prefix_quotient, word_key

__all__ = [
    "MomentMap",
    "HermitianBlockKernel",
    "FeasibilityReport",
    "moment_block_row",
    "build_k1",
    "build_k2",
    "build_k3_k4",
    "build_toeplitz_kernel",
    "check_moment_dominance",
    "check_star_equality",
    "check_toeplitz_psd",
]


class MomentMap:
    """Moment data L : Sigma -> (d_out x d_in complex blocks).

    The block domain must be exactly Sigma.  d_out == d_in is the
    operator-valued (square) case required by the Toeplitz kernels;
    d_in == 1 is the vector-valued case.
    """

    def __init__(self, sigma: AdmissibleSet, d_out: int, d_in: int, blocks):
        if d_out < 0 or d_in < 0:
            raise DimensionMismatch(f"negative block dimensions ({d_out}, {d_in})")
        self.sigma = sigma
        self.d_out = d_out
        self.d_in = d_in
        self.blocks = {}
        for w, m in blocks.items():
            m = np.asarray(m, dtype=np.complex128)
            if m.shape != (d_out, d_in):
                raise DimensionMismatch(
                    f"block at {w!r} has shape {m.shape}, expected {(d_out, d_in)}"
                )
            self.blocks[w] = m
        if set(self.blocks) != sigma.words:
            missing = sigma.words - set(self.blocks)
            extra = set(self.blocks) - sigma.words
            raise DimensionMismatch(
                f"block domain must equal the word set: missing {sorted(map(str, missing))}, "
                f"extra {sorted(map(str, extra))}"
            )

    def block(self, w: Word) -> np.ndarray:
        return self.blocks[w]

    @property
    def is_square(self) -> bool:
        return self.d_out == self.d_in

    @property
    def is_vector_valued(self) -> bool:
        return self.d_in == 1

    def unit_block(self) -> np.ndarray:
        """L(g_0), the block at the empty word."""
        return self.blocks[Word((), self.sigma.n)]

    def max_block_norm(self) -> float:
        return max(
            (float(np.linalg.norm(m)) for m in self.blocks.values()), default=0.0
        )

    def __repr__(self):
        return (
            f"MomentMap(n={self.sigma.n}, |sigma|={len(self.sigma)}, "
            f"blocks {self.d_out}x{self.d_in})"
        )


@dataclass(frozen=True)
class HermitianBlockKernel:
    """A Hermitian kernel flattened to one matrix.

    ``index`` is the ordered list of kernel indices — factorization
    pairs (alpha, beta) or plain words — in canonical order;
    ``block_dim`` is the size of one block, so ``flat`` is square of
    size block_dim * len(index).
    """

    index: tuple
    block_dim: int
    flat: np.ndarray

    def __post_init__(self):
        expected = self.block_dim * len(self.index)
        if self.flat.shape != (expected, expected):
            raise DimensionMismatch(
                f"flat kernel shape {self.flat.shape}, expected {(expected, expected)}"
            )
        herm_err = float(np.linalg.norm(self.flat - self.flat.conj().T))
        if herm_err > 1e-10 * linalg.rel_scale(self.flat):
            raise DimensionMismatch(
                f"kernel is not Hermitian: deviation {herm_err:.3e}"
            )

    def index_keys(self) -> list[str]:
        """Serializable index labels: 'alpha|beta' for pair-indexed
        kernels, plain word keys for word-indexed ones."""
        out = []
        for item in self.index:
            if isinstance(item, Word):
                out.append(word_key(item))
            else:
                alpha, beta = item
                out.append(f"{word_key(alpha)}|{word_key(beta)}")
        return out


@dataclass(frozen=True)
class FeasibilityReport:
    """Outcome of one feasibility test.

    ``kind`` is one of dominance / equality / psd / relations.  The
    numbers are absolute; ``scale`` is the max(1, Frobenius) reference
    they were compared against, so ``passed`` can be re-derived from
    the serialized report.  (The field is named ``passed`` because
    ``pass`` is reserved in Python; it serializes as "pass".)
    """

    kind: str
    passed: bool
    min_eigenvalue: float
    residual_norm: float
    tolerance: float
    scale: float
    index_order: tuple[str, ...]
    detail: str = ""


def _pair_word(pair) -> Word:
    alpha, beta = pair
    return alpha.concat(beta)


def moment_block_row(l: MomentMap) -> np.ndarray:
    """The d_out x (d_in * |Lambda|) block row [L(alpha beta)] over the
    factorization pairs in canonical order."""
    pairs = l.sigma.lambda_pairs
    d = l.d_in
    out = np.zeros((l.d_out, d * len(pairs)), dtype=complex)
    for a, pair in enumerate(pairs):
        out[:, a * d:(a + 1) * d] = l.blocks[_pair_word(pair)]
    return out


def build_k1(l: MomentMap) -> HermitianBlockKernel:
    """Gram kernel over the factorization pairs; positive semidefinite
    by construction (it is M^H M for the moment block row M)."""
    m = moment_block_row(l)
    flat = m.conj().T @ m
    return HermitianBlockKernel(index=l.sigma.lambda_pairs, block_dim=l.d_in, flat=flat)


def build_k2(l: MomentMap) -> HermitianBlockKernel:
    """Case-split kernel over the factorization pairs.

    Only the upper triangle is assembled; the mirror blocks are exact
    conjugate transposes by the case symmetry, so the flat matrix is
    Hermitian identically.
    """
    pairs = l.sigma.lambda_pairs
    d = l.d_in
    nblk = len(pairs)
    flat = np.zeros((nblk * d, nblk * d), dtype=complex)
    for a in range(nblk):
        alpha, beta = pairs[a]
        for b in range(a, nblk):
            sg, gm = pairs[b]
            tail = prefix_quotient(sg, alpha)
            if tail is not None:
                # alpha <= sg; (sg \ alpha) gm is a suffix of sg*gm, so in Sigma
                blk = l.blocks[beta].conj().T @ l.blocks[tail.concat(gm)]
            else:
                head = prefix_quotient(alpha, sg)
                if head is not None and len(head) > 0:
                    blk = l.blocks[head.concat(beta)].conj().T @ l.blocks[gm]
                else:
                    continue
            flat[a * d:(a + 1) * d, b * d:(b + 1) * d] = blk
            if b != a:
                flat[b * d:(b + 1) * d, a * d:(a + 1) * d] = blk.conj().T
    return HermitianBlockKernel(index=pairs, block_dim=d, flat=flat)


def build_k3_k4(m: MomentMap) -> tuple[HermitianBlockKernel, HermitianBlockKernel]:
    """Scalar kernels of a vector-valued map: K3 is the Gram kernel of
    the vectors, K4 the case-split kernel — the same formulas as K1/K2
    at d_in = 1, so they share those builders."""
    if not m.is_vector_valued:
        raise NotVectorValued(
            f"vector kernels need d_in = 1, got d_in = {m.d_in}"
        )
    return build_k1(m), build_k2(m)


def build_toeplitz_kernel(l: MomentMap, which: str = "k2p") -> HermitianBlockKernel:
    """Primed kernels on Sigma x Sigma for square moment maps.

    which="k2p" (default): the Toeplitz-type kernel
    K2'(s, t) = L(t \\ s) if s <= t, L(s \\ t)^H if t < s, else 0.
    which="k1p": the Gram kernel K1'(s, t) = L(s)^H L(t).
    """
    if not l.is_square:
        raise NotSquare(
            f"primed kernels need square blocks, got {l.d_out}x{l.d_in}"
        )
    words = l.sigma.sorted_words
    d = l.d_in
    nblk = len(words)
    if which == "k1p":
        m = np.zeros((l.d_out, d * nblk), dtype=complex)
        for a, w in enumerate(words):
            m[:, a * d:(a + 1) * d] = l.blocks[w]
        return HermitianBlockKernel(index=words, block_dim=d, flat=m.conj().T @ m)
    if which != "k2p":
        raise ValueError(f"unknown kernel selector {which!r}")
    flat = np.zeros((nblk * d, nblk * d), dtype=complex)
    for a in range(nblk):
        for b in range(a, nblk):
            s, t = words[a], words[b]
            tail = prefix_quotient(t, s)
            if tail is not None:
                blk = l.blocks[tail]
            else:
                head = prefix_quotient(s, t)
                if head is not None and len(head) > 0:
                    blk = l.blocks[head].conj().T
                else:
                    continue
            flat[a * d:(a + 1) * d, b * d:(b + 1) * d] = blk
            if b != a:
                flat[b * d:(b + 1) * d, a * d:(a + 1) * d] = blk.conj().T
    return HermitianBlockKernel(index=words, block_dim=d, flat=flat)


def build_vector_primed(m: MomentMap) -> tuple[HermitianBlockKernel, HermitianBlockKernel]:
    """Scalar primed kernels of a vector-valued map on Sigma x Sigma:
    K3'(s, t) = M(s)^H M(t) and the case-split
    K4'(s, t) = M(g_0)^H M(t \\ s) / M(s \\ t)^H M(g_0) / 0."""
    if not m.is_vector_valued:
        raise NotVectorValued(
            f"vector primed kernels need d_in = 1, got d_in = {m.d_in}"
        )
    words = m.sigma.sorted_words
    nblk = len(words)
    unit = m.unit_block()
    k3 = np.zeros((nblk, nblk), dtype=complex)
    k4 = np.zeros((nblk, nblk), dtype=complex)
    for a in range(nblk):
        for b in range(nblk):
            s, t = words[a], words[b]
            k3[a, b] = (m.blocks[s].conj().T @ m.blocks[t])[0, 0]
            tail = prefix_quotient(t, s)
            if tail is not None:
                k4[a, b] = (unit.conj().T @ m.blocks[tail])[0, 0]
            else:
                head = prefix_quotient(s, t)
                if head is not None and len(head) > 0:
                    k4[a, b] = (m.blocks[head].conj().T @ unit)[0, 0]
    return (
        HermitianBlockKernel(index=words, block_dim=1, flat=k3),
        HermitianBlockKernel(index=words, block_dim=1, flat=k4),
    )


def check_moment_dominance(l: MomentMap, tol: float = linalg.DEFAULT_TOL) -> FeasibilityReport:
    """Test K1 <= K2 — the exact solvability criterion for a
    representing row contraction.

    Passes iff the smallest eigenvalue of K2 - K1 is at least
    -tol * max(1, ||K2||_F); the scale comes from K2 so the verdict is
    scale-free in the moments.
    """
    k1 = build_k1(l)
    k2 = build_k2(l)
    diff = k2.flat - k1.flat
    scale = linalg.rel_scale(k2.flat)
    if diff.shape[0] == 0:
        min_eig = 0.0
    else:
        min_eig = float(linalg.hermitian_eig(diff).values[0])
    return FeasibilityReport(
        kind="dominance",
        passed=min_eig >= -tol * scale,
        min_eigenvalue=min_eig,
        residual_norm=0.0,
        tolerance=tol,
        scale=scale,
        index_order=tuple(k2.index_keys()),
    )


def check_star_equality(l: MomentMap, tol: float = linalg.DEFAULT_TOL) -> FeasibilityReport:
    """Test K1 = K2 — the solvability criterion for a *-representation
    orbit.

    The residual is ||K1 - K2||_F against max(1, ||K2||_F).  For square
    maps the primed kernels on Sigma x Sigma are assembled as well and
    the two verdicts are asserted to agree (they are equivalent exactly;
    the assert guards the assembly code, not the mathematics).  Vector
    maps get the same cross-check through K3'/K4'.
    """
    k1 = build_k1(l)
    k2 = build_k2(l)
    residual = float(np.linalg.norm(k1.flat - k2.flat))
    scale = linalg.rel_scale(k2.flat)
    passed = residual <= tol * scale
    detail = ""
    if l.is_square:
        k1p = build_toeplitz_kernel(l, which="k1p")
        k2p = build_toeplitz_kernel(l, which="k2p")
        primed = float(np.linalg.norm(k1p.flat - k2p.flat))
        primed_pass = primed <= tol * linalg.rel_scale(k2p.flat)
        assert primed_pass == passed, (
            f"primed cross-check disagrees: full residual {residual:.3e}, "
            f"primed residual {primed:.3e}"
        )
        detail = f"primed_residual={primed:.17g}"
    elif l.is_vector_valued:
        k3p, k4p = build_vector_primed(l)
        primed = float(np.linalg.norm(k3p.flat - k4p.flat))
        primed_pass = primed <= tol * linalg.rel_scale(k4p.flat)
        assert primed_pass == passed, (
            f"vector primed cross-check disagrees: full residual {residual:.3e}, "
            f"primed residual {primed:.3e}"
        )
        detail = f"primed_residual={primed:.17g}"
    return FeasibilityReport(
        kind="equality",
        passed=passed,
        min_eigenvalue=0.0,
        residual_norm=residual,
        tolerance=tol,
        scale=scale,
        index_order=tuple(k2.index_keys()),
        detail=detail,
    )


def check_toeplitz_psd(l: MomentMap, tol: float = linalg.DEFAULT_TOL) -> FeasibilityReport:
    """Positive semidefiniteness of the Toeplitz-type kernel K2' — the
    solvability criterion for a completely positive representing map."""
    k2p = build_toeplitz_kernel(l, which="k2p")
    scale = linalg.rel_scale(k2p.flat)
    if k2p.flat.shape[0] == 0:
        min_eig = 0.0
    else:
        min_eig = float(linalg.hermitian_eig(k2p.flat).values[0])
    return FeasibilityReport(
        kind="psd",
        passed=min_eig >= -tol * scale,
        min_eigenvalue=min_eig,
        residual_norm=0.0,
        tolerance=tol,
        scale=scale,
        index_order=tuple(k2p.index_keys()),
    )
