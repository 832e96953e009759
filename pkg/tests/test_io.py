import json

import numpy as np
import pytest

from horomaps import io
from horomaps.config import DEFAULTS, apply_config, load_config
from horomaps.models import SpectralFunction, TranslateSum, model_for


def test_spectral_document_round_trip(tmp_path):
    f = SpectralFunction(model_for(-8.0), 2, [1.0, 0.5j])
    path = tmp_path / "f.json"
    path.write_text(json.dumps(io.function_to_json_dict(f)))
    assert io.load_function(str(path)) == f
    assert io.load_function(f.to_json()) == f
    assert io.load_function(f.to_json_dict()) == f


def test_translate_sum_document():
    doc = {"mu": 2.0, "terms": [{"shift": 1.0, "k_min": 0, "coeffs": [[1, 0]]},
                                {"shift": 0.0, "k_min": 0, "coeffs": [[-1, 0]]}]}
    f = io.load_function(doc)
    assert isinstance(f, TranslateSum)
    u = SpectralFunction.basis(model_for(2.0), 0)
    x = np.array([0.3])
    assert np.allclose(f(x), u(x - 1.0) - u(x))
    back = io.load_function(io.function_to_json_dict(f))
    assert np.allclose(back(x), f(x))


def test_plain_conversion():
    out = io._plain({"a": 1 + 2j, "b": np.float64("nan"), "c": np.arange(2), "d": np.bool_(True)})
    assert out == {"a": [1.0, 2.0], "b": None, "c": [0, 1], "d": True}
    json.dumps(out)


def test_csv_rows_with_uneven_keys():
    text = io.rows_to_csv([{"a": 1, "b": [1, 2]}, {"a": 2, "c": 3.5}])
    lines = text.strip().splitlines()
    assert lines[0] == "a,b,c"
    assert lines[1] == '1,"[1, 2]",'
    assert lines[2] == "2,,3.5"


def test_config_merge(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text("[quad]\nextent = 12.5\n")
    merged = load_config(p)
    assert merged["quad"]["extent"] == 12.5
    assert merged["quad"]["order"] == DEFAULTS["quad"]["order"]
    assert DEFAULTS["quad"]["extent"] != 12.5


def test_apply_config_updates_defaults(tmp_path):
    from horomaps.quad import QuadratureSpec

    p = tmp_path / "c.toml"
    p.write_text("[quad]\nextent = 12.5\n")
    before = DEFAULTS["quad"]["extent"]
    try:
        apply_config(p)
        assert QuadratureSpec().extent == 12.5
    finally:
        DEFAULTS["quad"]["extent"] = before
    assert QuadratureSpec().extent == before
