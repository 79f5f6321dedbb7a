"""Canonical JSON for instances, reports, and certificates.

Byte-for-byte reproducibility is part of the certificate contract, so
nothing here goes through the stdlib float repr: every float is
emitted with 17 significant digits (enough to round-trip IEEE doubles),
object keys are sorted, and complex numbers appear as [re, im] pairs.
Matrices are nested row-major lists of those pairs.

The instance file schema:

    {"n": int, "dim_out": int, "dim_in": int,
     "sigma": [word-key, ...],
     "moments": {word-key: [[[re, im], ...], ...]},
     "kind": str, "seed": int, "meta": {...}}

with optional extensions merged at top level: "pi" / "gamma" /
"lambda" for multi-index instances, "polys" for ideal generators.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, MomtError
from .kernels import FeasibilityReport, MomentMap
from .words import (
    AdmissibleSet,
    FreePolynomial,
    LambdaSpec,
    Word,
    parse_word_key,
    word_key,
)

__all__ = [
    "canonical_json",
    "complex_to_json",
    "matrix_to_json",
    "json_to_matrix",
    "InstanceFile",
    "instance_to_json",
    "instance_from_json",
    "report_to_json",
    "certificate_to_json",
]


def _format_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise MomtError(f"non-finite float {x!r} cannot be serialized")
    if x == 0.0:
        return "0"  # normalize -0.0 as well
    out = format(float(x), ".17g")
    return out


def canonical_json(obj, indent: int = 0) -> str:
    """Deterministic JSON text: sorted keys, fixed float format."""
    pad = " " * indent
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(canonical_json(v, indent) for v in obj) + "]"
    if isinstance(obj, dict):
        keys = sorted(obj.keys())
        if any(not isinstance(k, str) for k in keys):
            raise MomtError("JSON object keys must be strings")
        inner = ",\n".join(
            f'{pad}  {json.dumps(k)}: {canonical_json(obj[k], indent + 2)}'
            for k in keys
        )
        if not inner:
            return "{}"
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(obj, (complex, np.complexfloating)):
        raise MomtError("complex values must be converted to [re, im] pairs first")
    raise MomtError(f"cannot serialize {type(obj).__name__}")


def complex_to_json(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got ndim={m.ndim}")
    return [[complex_to_json(v) for v in row] for row in m]


def json_to_matrix(rows) -> np.ndarray:
    out = np.array(
        [[complex(v[0], v[1]) for v in row] for row in rows], dtype=complex
    )
    if out.ndim != 2:
        out = out.reshape(len(rows), -1)
    return out


@dataclass(frozen=True)
class InstanceFile:
    """A generated or loaded moment problem instance."""

    n: int
    dim_out: int
    dim_in: int
    sigma: AdmissibleSet
    moments: dict
    kind: str
    seed: int
    meta: dict = field(default_factory=dict)
    pi: list | None = None
    gamma: dict | None = None
    lam: LambdaSpec | None = None
    polys: tuple | None = None

    def moment_map(self) -> MomentMap:
        return MomentMap(self.sigma, self.dim_out, self.dim_in, self.moments)


def _lambda_to_json(lam: LambdaSpec) -> dict:
    return {
        f"{j}.{i}": complex_to_json(v) for (j, i), v in sorted(lam.entries.items())
    }


def _lambda_from_json(obj: dict, n: int) -> LambdaSpec:
    entries = {}
    for key, pair in obj.items():
        j, i = (int(p) for p in key.split("."))
        entries[(j, i)] = complex(pair[0], pair[1])
    return LambdaSpec(n, entries)


def _poly_to_json(p: FreePolynomial) -> dict:
    return {
        "terms": [
            {"coeff": complex_to_json(c), "word": word_key(w)} for c, w in p.terms
        ]
    }


def _poly_from_json(obj: dict, n: int) -> FreePolynomial:
    terms = [
        (complex(t["coeff"][0], t["coeff"][1]), parse_word_key(t["word"], n))
        for t in obj["terms"]
    ]
    return FreePolynomial.from_terms(terms)


def instance_to_json(inst: InstanceFile) -> str:
    obj = {
        "n": inst.n,
        "dim_out": inst.dim_out,
        "dim_in": inst.dim_in,
        "sigma": [word_key(w) for w in inst.sigma.sorted_words],
        "moments": {
            word_key(w): matrix_to_json(inst.moments[w])
            for w in inst.sigma.sorted_words
        },
        "kind": inst.kind,
        "seed": inst.seed,
        "meta": inst.meta,
    }
    if inst.pi is not None:
        obj["pi"] = [list(k) for k in inst.pi]
    if inst.gamma is not None:
        obj["gamma"] = {
            ",".join(str(v) for v in k): matrix_to_json(m)
            for k, m in sorted(inst.gamma.items())
        }
    if inst.lam is not None and inst.lam.entries:
        obj["lambda"] = _lambda_to_json(inst.lam)
    if inst.polys is not None:
        obj["polys"] = [_poly_to_json(p) for p in inst.polys]
    return canonical_json(obj) + "\n"


def instance_from_json(text: str) -> InstanceFile:
    obj = json.loads(text)
    n = int(obj["n"])
    words = [parse_word_key(k, n) for k in obj["sigma"]]
    sigma = AdmissibleSet(n, words)
    moments = {
        parse_word_key(k, n): json_to_matrix(rows)
        for k, rows in obj["moments"].items()
    }
    pi = None
    if "pi" in obj:
        pi = [tuple(int(v) for v in k) for k in obj["pi"]]
    gamma = None
    if "gamma" in obj:
        gamma = {
            tuple(int(v) for v in key.split(",")): json_to_matrix(rows)
            for key, rows in obj["gamma"].items()
        }
    lam = None
    if "lambda" in obj:
        lam = _lambda_from_json(obj["lambda"], n)
    polys = None
    if "polys" in obj:
        polys = tuple(_poly_from_json(p, n) for p in obj["polys"])
    return InstanceFile(
        n=n,
        dim_out=int(obj["dim_out"]),
        dim_in=int(obj["dim_in"]),
        sigma=sigma,
        moments=moments,
        kind=str(obj.get("kind", "")),
        seed=int(obj.get("seed", 0)),
        meta=dict(obj.get("meta", {})),
        pi=pi,
        gamma=gamma,
        lam=lam,
        polys=polys,
    )


def report_to_json(report: FeasibilityReport) -> dict:
    return {
        "kind": report.kind,
        "pass": bool(report.passed),
        "min_eigenvalue": float(report.min_eigenvalue),
        "residual_norm": float(report.residual_norm),
        "tolerance": float(report.tolerance),
        "scale": float(report.scale),
        "index_order": list(report.index_order),
        "detail": report.detail,
    }


def certificate_to_json(cert) -> dict:
    residuals = {"moment_identity": float(cert.moment_residual)}
    residuals["defect_min_eig"] = float(cert.defect_min_eig)
    for name in sorted(cert.extra_residuals):
        residuals[name] = float(cert.extra_residuals[name])
    return {
        "n": cert.n,
        "dim": cert.dim,
        "quotient_dim": int(cert.quotient_dim),
        "tuple": [matrix_to_json(t) for t in cert.tuple_],
        "residuals": residuals,
        "tolerance": float(cert.tolerance),
    }
