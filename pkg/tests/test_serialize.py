import json

import numpy as np
import pytest

from momt import (
    MomtError,
    all_commutators,
    canonical_json,
    certificate_to_json,
    generate_instance,
    instance_from_json,
    instance_to_json,
    report_to_json,
    check_moment_dominance,
    synthesize_row_contraction,
)
from momt.serialize import (
    InstanceFile,
    complex_to_json,
    json_to_matrix,
    matrix_to_json,
)


def test_canonical_json_is_sorted_and_deterministic():
    a = canonical_json({"b": 1.0, "a": [1, 2], "c": {"y": 0.5, "x": True}})
    b = canonical_json({"c": {"x": True, "y": 0.5}, "a": [1, 2], "b": 1.0})
    assert a == b
    assert a.index('"a"') < a.index('"b"') < a.index('"c"')
    # valid JSON round-trips through the stdlib parser
    assert json.loads(a) == {"a": [1, 2], "b": 1.0, "c": {"x": True, "y": 0.5}}


def test_float_formatting():
    out = canonical_json([0.1, -0.0, 1e300, 1.0000000000000002])
    assert json.loads(out) == [0.1, 0, 1e300, 1.0000000000000002]
    # 17 significant digits keep doubles exact through a round trip
    vals = [0.1 + 0.2, np.nextafter(1.0, 2.0), 1 / 3]
    assert json.loads(canonical_json(vals)) == vals
    assert canonical_json(-0.0) == "0"


def test_canonical_json_rejections():
    with pytest.raises(MomtError):
        canonical_json(float("nan"))
    with pytest.raises(MomtError):
        canonical_json(float("inf"))
    with pytest.raises(MomtError):
        canonical_json(1 + 2j)
    with pytest.raises(MomtError):
        canonical_json({1: "non-string key"})


def test_matrix_roundtrip():
    m = np.array([[1 + 2j, 0.5], [-0.25j, 3.0]])
    again = json_to_matrix(matrix_to_json(m))
    assert np.abs(again - m).max() == 0.0
    assert complex_to_json(1 - 1j) == [1.0, -1.0]


def test_instance_roundtrip_all_kinds():
    for kind in ("row-contraction", "commuting", "lambda-commuting",
                 "isometric-truncated", "vector-orbit"):
        inst = generate_instance(kind, 2, 2, 2, 77)
        text = instance_to_json(inst)
        back = instance_from_json(text)
        assert instance_to_json(back) == text
        assert back.n == inst.n and back.kind == kind and back.seed == 77
        for w in inst.sigma:
            assert np.abs(back.moments[w] - inst.moments[w]).max() == 0.0
        if inst.pi is not None:
            assert back.pi == inst.pi
            for k in inst.gamma:
                assert np.abs(back.gamma[k] - inst.gamma[k]).max() == 0.0
        if inst.lam is not None and inst.lam.entries:
            assert back.lam.entries == inst.lam.entries


def test_instance_roundtrip_with_polys():
    inst = generate_instance("commuting", 2, 2, 2, 5)
    with_polys = InstanceFile(
        n=inst.n, dim_out=inst.dim_out, dim_in=inst.dim_in, sigma=inst.sigma,
        moments=inst.moments, kind=inst.kind, seed=inst.seed, meta=inst.meta,
        pi=inst.pi, gamma=inst.gamma, lam=inst.lam,
        polys=tuple(all_commutators(2)),
    )
    text = instance_to_json(with_polys)
    back = instance_from_json(text)
    assert back.polys == with_polys.polys
    assert '"polys"' in text


def test_report_json_schema():
    rep = check_moment_dominance(generate_instance("row-contraction", 2, 2, 2, 1).moment_map())
    obj = report_to_json(rep)
    assert sorted(obj) == [
        "detail", "index_order", "kind", "min_eigenvalue",
        "pass", "residual_norm", "scale", "tolerance",
    ]
    assert obj["pass"] is True
    assert obj["kind"] == "dominance"


def test_certificate_json_schema():
    inst = generate_instance("row-contraction", 2, 2, 2, 1)
    cert = synthesize_row_contraction(inst.moment_map())
    obj = certificate_to_json(cert)
    assert sorted(obj) == ["dim", "n", "quotient_dim", "residuals", "tolerance", "tuple"]
    assert obj["n"] == 2
    assert len(obj["tuple"]) == 2
    res = obj["residuals"]
    assert "moment_identity" in res and "defect_min_eig" in res
    assert "v_partial_isometry" in res and "x_contraction" in res
    # deterministic text
    assert canonical_json(obj) == canonical_json(certificate_to_json(cert))
