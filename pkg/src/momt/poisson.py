"""Truncated Poisson kernel evaluation and the instance generator.

For a row contraction T with row norm rho and 0 < r <= 1, the kernel

    K_r(T) h = sum_gamma e_gamma (x) r^{|gamma|} Delta_r T_gamma^H h,
    Delta_r = (I - r^2 sum_i T_i T_i^H)^{1/2},

truncated at |gamma| <= depth, recovers compressed moments:
K_r^H (S_alpha S_beta^H (x) I) K_r collapses blockwise to

    sum_{gamma} r^{|alpha gamma|+|beta gamma|}
        T_{alpha gamma} Delta_r^2 T_{beta gamma}^H,

and the untruncated sum telescopes to r^{|alpha|+|beta|} T_alpha
T_beta^H.  Two error sources remain, with s = |alpha| + |beta|:

  * damping: (1 - r^s)||T_alpha T_beta^H|| <= s (1 - r^2) rho^s;
  * tail: the dropped terms form a positive operator of norm at most
    (r rho)^{2(depth - max|alpha|,|beta| + 1)} <= rho^{s+2} *
    rho^{2(depth - s)}.

Their sum is the reconstruction bound; both terms shrink as r grows,
so the minimizing parameter is r = 1 whenever the defect stays
positive (every genuine row contraction), and smaller r only trades
reconstruction error for a smoother kernel.

Instance generation uses an explicitly specified PRNG so files are
reproducible across implementations: splitmix64 (state advances by
0x9E3779B97F4A7C15; output z = state, z ^= z>>30, z *= 0xBF58476D1CE4E5B9,
z ^= z>>27, z *= 0x94D049BB133111EB, z ^= z>>31), uniforms are the top
53 bits over 2^53, normals come from Box-Muller on uniform pairs
(sqrt(-2 ln(1-u1)) cos(2 pi u2), then the sine partner), and a complex
normal draws the real part first.  Matrices fill row-major.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import BadKind, DepthTooSmall, DimensionMismatch, NotPSD
from .serialize import InstanceFile
from .words import (
    AdmissibleSet,
    LambdaSpec,
    Word,
    abelianize,
    full_truncation,
    multiindex_product,
    word_product,
    words_up_to,
)

__all__ = [
    "FockTruncation",
    "RowTuple",
    "SplitMix64",
    "defect_operator",
    "poisson_kernel",
    "poisson_moment",
    "truncation_error_bound",
    "default_radius",
    "generate_instance",
    "INSTANCE_KINDS",
]


@dataclass(frozen=True)
class FockTruncation:
    """All words of length at most ``depth`` in canonical order."""

    n: int
    depth: int
    basis: tuple[Word, ...]

    @classmethod
    def create(cls, n: int, depth: int) -> "FockTruncation":
        return cls(n, depth, tuple(words_up_to(n, depth)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def position(self) -> dict[Word, int]:
        return {w: k for k, w in enumerate(self.basis)}

    def creation_operator(self, i: int) -> np.ndarray:
        """Left concatenation by g_i; vectors pushed past the depth
        boundary are dropped (compression semantics)."""
        pos = self.position()
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for k, w in enumerate(self.basis):
            shifted = Word((i,) + w.letters, self.n)
            dest = pos.get(shifted)
            if dest is not None:
                out[dest, k] = 1.0
        return out


@dataclass(frozen=True)
class RowTuple:
    """n operators on a common space, optionally checked as a row
    contraction at construction."""

    n: int
    matrices: tuple[np.ndarray, ...]
    strict: bool = False
    rho: float | None = None

    def __post_init__(self):
        mats = tuple(linalg.as_cmatrix(m) for m in self.matrices)
        object.__setattr__(self, "matrices", mats)
        if len(mats) != self.n:
            raise DimensionMismatch(f"expected {self.n} matrices, got {len(mats)}")
        dim = mats[0].shape[0] if mats else 0
        for m in mats:
            if m.shape != (dim, dim):
                raise DimensionMismatch("row tuple entries must be square and equal")
        if self.strict:
            ok, min_eig = linalg.is_psd(linalg.row_defect(list(mats)), 1e-9)
            if not ok:
                raise NotPSD(
                    f"row defect has eigenvalue {min_eig:.3e}; not a row contraction"
                )
            if self.rho is not None:
                if self.row_norm() > self.rho + 1e-9:
                    raise NotPSD(
                        f"row norm {self.row_norm():.6f} exceeds declared "
                        f"bound {self.rho}"
                    )

    @property
    def dim(self) -> int:
        return self.matrices[0].shape[0] if self.matrices else 0

    def row_sum(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for m in self.matrices:
            out = out + m @ m.conj().T
        return out

    def row_norm(self) -> float:
        dec = linalg.hermitian_eig(self.row_sum())
        top = dec.values[-1] if dec.values.size else 0.0
        return float(math.sqrt(max(top, 0.0)))


def defect_operator(t: RowTuple, r: float) -> np.ndarray:
    """(I - r^2 sum T_i T_i^H)^(1/2); fails if r is too large."""
    if not 0.0 < r <= 1.0:
        raise DimensionMismatch(f"radius must lie in (0, 1], got {r}")
    eye = np.eye(t.dim, dtype=complex)
    return linalg.psd_sqrt(eye - (r * r) * t.row_sum())


def poisson_kernel(t: RowTuple, r: float, depth: int) -> np.ndarray:
    """Stacked kernel blocks r^{|gamma|} Delta_r T_gamma^H, one block
    per truncated Fock basis word, canonical order."""
    fock = FockTruncation.create(t.n, depth)
    delta = defect_operator(t, r)
    dim = t.dim
    out = np.zeros((fock.dim * dim, dim), dtype=complex)
    for k, gamma in enumerate(fock.basis):
        block = (r ** len(gamma)) * delta @ word_product(
            list(t.matrices), gamma
        ).conj().T
        out[k * dim:(k + 1) * dim, :] = block
    return out


def poisson_moment(
    t: RowTuple, alpha: Word, beta: Word, r: float, depth: int
) -> np.ndarray:
    """K_r^H (S_alpha S_beta^H (x) I) K_r on the depth-truncated Fock
    space, evaluated blockwise.

    Converges to T_alpha T_beta^H as r -> 1 and depth -> infinity for
    strict row contractions; see ``truncation_error_bound``.
    """
    s = len(alpha) + len(beta)
    if s > depth:
        raise DepthTooSmall(
            f"|alpha| + |beta| = {s} exceeds truncation depth {depth}"
        )
    delta = defect_operator(t, r)
    delta2 = delta @ delta
    mats = list(t.matrices)
    t_alpha = word_product(mats, alpha)
    t_beta_h = word_product(mats, beta).conj().T
    budget = depth - max(len(alpha), len(beta))
    # sum_{|gamma| = k} r^{2k} T_gamma Delta^2 T_gamma^H by levels:
    # grouping the inner sum over the first letter turns the word
    # enumeration into a linear recursion.
    level = delta2
    bracket = np.zeros((t.dim, t.dim), dtype=complex)
    bracket += level
    for _ in range(budget):
        level = (r * r) * sum(m @ level @ m.conj().T for m in mats)
        bracket += level
    return (r ** s) * (t_alpha @ bracket @ t_beta_h)


def truncation_error_bound(
    rho: float, weight: int, r: float, depth: int
) -> float:
    """Bound on ||poisson_moment - T_alpha T_beta^H|| for row norm rho
    and weight s = |alpha| + |beta| (see the module docstring)."""
    if weight > depth:
        raise DepthTooSmall(f"weight {weight} exceeds depth {depth}")
    damping = weight * (rho ** weight) * (1.0 - r * r)
    tail = (rho ** (weight + 2)) * (rho ** (2 * (depth - weight)))
    return damping + tail


def default_radius(t: RowTuple, depth: int) -> float:
    """Radius minimizing the derived reconstruction bound.

    Both error terms decrease as r grows and the defect stays positive
    up to r = 1 for any row contraction, so the minimizer is the right
    endpoint; the parameter exists to let callers trade accuracy away
    deliberately (smaller r smooths the kernel).
    """
    return 1.0


# ---------------------------------------------------------------------------
# deterministic instance generation


_MASK = (1 << 64) - 1


class SplitMix64:
    """The documented generator; see the module docstring."""

    def __init__(self, seed: int):
        self.state = seed & _MASK
        self._spare = None

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def next_float(self) -> float:
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def next_normal(self) -> float:
        if self._spare is not None:
            out, self._spare = self._spare, None
            return out
        u1 = self.next_float()
        u2 = self.next_float()
        radius = math.sqrt(-2.0 * math.log(1.0 - u1))
        angle = 2.0 * math.pi * u2
        self._spare = radius * math.sin(angle)
        return radius * math.cos(angle)

    def next_complex(self) -> complex:
        re = self.next_normal()
        return complex(re, self.next_normal())

    def matrix(self, rows: int, cols: int) -> np.ndarray:
        out = np.zeros((rows, cols), dtype=complex)
        for i in range(rows):
            for j in range(cols):
                out[i, j] = self.next_complex()
        return out


INSTANCE_KINDS = (
    "row-contraction",
    "commuting",
    "lambda-commuting",
    "isometric-truncated",
    "vector-orbit",
)

_TARGET_ROW_NORM = 0.9


def _scaled_row_tuple(mats: list[np.ndarray]) -> list[np.ndarray]:
    t = RowTuple(len(mats), tuple(mats))
    norm = t.row_norm()
    if norm == 0.0:
        return mats
    factor = _TARGET_ROW_NORM / norm
    return [factor * m for m in mats]


def _tuple_moments(mats, sigma: AdmissibleSet) -> dict:
    return {w: word_product(mats, w) for w in sigma.sorted_words}


def _multiindex_payload(mats, sigma: AdmissibleSet):
    """pi/gamma extension for tuples whose moments factor through
    abelianization: Gamma(k) is the canonically ordered power product."""
    pi = sorted(
        {abelianize(w) for w in sigma.sorted_words}, key=lambda k: (sum(k), k)
    )
    gamma = {k: multiindex_product(mats, k) for k in pi}
    return pi, gamma


def generate_instance(
    kind: str, n: int, d: int, depth: int, seed: int
) -> InstanceFile:
    """Deterministic forward-model instances.

    row-contraction: dense complex tuples scaled to row norm 0.9 with
    moments T_sigma.  commuting: diagonal tuples, same scaling.
    lambda-commuting (n = 2): a 2x2 nilpotent/diagonal pair with
    exchange coefficient on the unit circle, tensored with a random
    diagonal, scaled.  isometric-truncated: the vacuum orbit of the
    creation operators on the Fock truncation of depth 2*depth + 1
    (vector moments; the equality case).  vector-orbit: T_sigma h for
    a random unit vector h over a row-contraction tuple.
    """
    if kind not in INSTANCE_KINDS:
        raise BadKind(
            f"unknown kind {kind!r}; expected one of {', '.join(INSTANCE_KINDS)}"
        )
    if n < 1 or d < 1 or depth < 0:
        raise DimensionMismatch(f"bad instance shape n={n} d={d} depth={depth}")
    rng = SplitMix64(seed)
    sigma = full_truncation(n, depth)
    meta: dict = {"depth": depth}
    lam = None
    pi = None
    gamma = None

    if kind == "row-contraction":
        mats = _scaled_row_tuple([rng.matrix(d, d) for _ in range(n)])
        moments = _tuple_moments(mats, sigma)
        dims = (d, d)
        meta["rho"] = _TARGET_ROW_NORM
    elif kind == "commuting":
        mats = _scaled_row_tuple(
            [np.diag([rng.next_complex() for _ in range(d)]) for _ in range(n)]
        )
        moments = _tuple_moments(mats, sigma)
        pi, gamma = _multiindex_payload(mats, sigma)
        dims = (d, d)
        meta["rho"] = _TARGET_ROW_NORM
    elif kind == "lambda-commuting":
        if n != 2:
            raise BadKind("lambda-commuting instances are generated for n = 2")
        angle = 2.0 * math.pi * rng.next_float()
        coeff = complex(math.cos(angle), math.sin(angle))
        # T2 T1 = (a1/a2) T1 T2 for T1 nilpotent, T2 = diag(a1, a2)
        a2 = rng.next_complex()
        base1 = np.array([[0, 1], [0, 0]], dtype=complex)
        base2 = np.diag([coeff * a2, a2])
        diag1 = np.diag([rng.next_complex() for _ in range(d)])
        diag2 = np.diag([rng.next_complex() for _ in range(d)])
        mats = _scaled_row_tuple([np.kron(base1, diag1), np.kron(base2, diag2)])
        moments = _tuple_moments(mats, sigma)
        pi, gamma = _multiindex_payload(mats, sigma)
        dims = (2 * d, 2 * d)
        lam = LambdaSpec(2, {(2, 1): coeff})
        meta["rho"] = _TARGET_ROW_NORM
        meta["model_dim"] = 2 * d
    elif kind == "isometric-truncated":
        fock = FockTruncation.create(n, 2 * depth + 1)
        pos = fock.position()
        moments = {}
        for w in sigma.sorted_words:
            vec = np.zeros((fock.dim, 1), dtype=complex)
            vec[pos[w], 0] = 1.0
            moments[w] = vec
        dims = (fock.dim, 1)
        meta["fock_depth"] = 2 * depth + 1
    else:  # vector-orbit
        mats = _scaled_row_tuple([rng.matrix(d, d) for _ in range(n)])
        h = np.array([[rng.next_complex()] for _ in range(d)], dtype=complex)
        norm = float(np.linalg.norm(h))
        if norm > 0.0:
            h = h / norm
        moments = {w: word_product(mats, w) @ h for w in sigma.sorted_words}
        dims = (d, 1)
        meta["rho"] = _TARGET_ROW_NORM

    return InstanceFile(
        n=n,
        dim_out=dims[0],
        dim_in=dims[1],
        sigma=sigma,
        moments=moments,
        kind=kind,
        seed=seed,
        meta=meta,
        pi=pi,
        gamma=gamma,
        lam=lam,
    )
