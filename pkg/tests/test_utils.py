import json
import math

import pytest

import twowaygym.utils as utils
from twowaygym.config import Caps, load_caps, load_regression


def test_digest():
    assert utils.digest("abc") == utils.digest(b"abc")
    assert utils.digest({"a": 1, "b": [2, 3]}) == utils.digest({"b": [2, 3], "a": 1})
    assert utils.digest({"a": 1}) != utils.digest({"a": 2})
    assert utils.canonical_json({"b": 1, "a": "¢"}) == '{"a":"¢","b":1}'


def test_ceil_log2():
    assert utils.ceil_log2(1) == 0
    assert utils.ceil_log2(2) == 1
    assert utils.ceil_log2(5) == 3
    assert utils.ceil_log2(8) == 3
    with pytest.raises(ValueError):
        utils.ceil_log2(0)


def test_nlogn():
    assert utils.nlogn(1) == 1.0
    assert utils.nlogn(4, power=2) == 32.0


def test_fit_constants():
    ns = [2, 4, 8, 16]
    values = [3 * n * math.log2(n) for n in ns]
    fit = utils.fit_constants(ns, values).set_index("shape")
    assert fit.loc["n log n", "c"] == pytest.approx(3.0)
    assert fit.loc["n log n", "rel_residual"] == pytest.approx(0.0, abs=1e-9)
    assert fit.loc["n^2 log n", "rel_residual"] > 0.1

    empty = utils.fit_constants([], [])
    assert len(empty) == 3 and empty["c"].isna().all()


def test_caps(tmp_path):
    assert load_caps() == Caps()
    assert load_caps(solver_max_n=5).solver_max_n == 5
    assert load_caps(solver_max_n=None) == Caps()
    with pytest.raises(ValueError, match="overrides"):
        load_caps(max_everything=1)

    pth = tmp_path / "caps.json"
    pth.write_text(json.dumps({"enumeration_max_n": 2, "bogus": 1}))
    with pytest.raises(ValueError, match="bogus"):
        load_caps(pth)
    pth.write_text(json.dumps({"enumeration_max_n": 2}))
    assert load_caps(pth).enumeration_max_n == 2


def test_regression_constants():
    regression = load_regression()
    for key in [
        "graph_code_length_c",
        "machine_code_length_e",
        "validator_states_a",
        "parity_afa_narrowness_kappa",
        "parity_afa_states_kappa_prime",
    ]:
        assert regression[key] > 0
