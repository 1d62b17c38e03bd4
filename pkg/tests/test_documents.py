import json

import pytest

from dirac_stab.documents import BUNDLED, InputError, bundled_path, parse_document, read_input


def doc(**kw):
    return json.dumps(kw, indent=2) + "\n"


CARTAN = {"kind": "cartan_dirac",
          "lie_algebra": {"dim": 2, "brackets": []},
          "metric": [["1", "0"], ["0", "1"]]}


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_documents_parse(name):
    text = bundled_path(name).read_text(encoding="utf-8")
    assert text.endswith("\n")
    d = parse_document(text)
    assert d.kind in ("poly_algebroid", "cartan_dirac", "dirac_split")


def test_examples_path_falls_back_to_bundled(tmp_path):
    text, raw = read_input(str(tmp_path / "examples" / "ctangent.json"))
    assert parse_document(text).kind == "poly_algebroid"
    with pytest.raises(FileNotFoundError):
        read_input(str(tmp_path / "nowhere.json"))


def test_zero_denominator_located():
    bad = dict(CARTAN, metric=[["1/0", "0"], ["0", "1"]])
    with pytest.raises(InputError) as e:
        parse_document(doc(**bad))
    assert "zero denominator" in str(e.value)
    assert e.value.line is not None and e.value.where.startswith("metric")


def test_json_syntax_error_has_position():
    with pytest.raises(InputError) as e:
        parse_document('{"kind": "cartan_dirac",\n  "metric": [1, }\n')
    assert e.value.line == 2


def test_unknown_kind_and_fields():
    with pytest.raises(InputError):
        parse_document(doc(kind="banana"))
    with pytest.raises(InputError) as e:
        parse_document(doc(extra=1, **CARTAN))
    assert "extra" in str(e.value)


def test_inconsistent_constants_rejected():
    bad = {"kind": "cartan_dirac",
           "lie_algebra": {"dim": 2, "brackets": [[1, 2, 1, "1"], [2, 1, 1, "1"]]},
           "metric": [["1", "0"], ["0", "1"]]}
    with pytest.raises(InputError):
        parse_document(doc(**bad))


def test_index_out_of_range():
    bad = {"kind": "cartan_dirac",
           "lie_algebra": {"dim": 2, "brackets": [[1, 3, 1, "1"]]},
           "metric": [["1", "0"], ["0", "1"]]}
    with pytest.raises(InputError) as e:
        parse_document(doc(**bad))
    assert "out of range" in str(e.value)


def test_linfty_document():
    d = parse_document(doc(kind="linfty", space={"a": -1, "b": 0, "c": 1},
                           brackets=[[["b", "b"], {"c": "1/2"}]], mc={"q": {"b": "2"}}))
    alg = d.data["alg"]
    assert alg.brackets[2][("b", "b")] == {"c": 0.5}
    assert d.data["mc"]["q"] == {"b": 2}


def test_linfty_degree_violation_is_input_error():
    with pytest.raises(InputError):
        parse_document(doc(kind="linfty", space={"a": -1, "b": 0}, brackets=[[["b"], {"b": "1"}]]))


def test_poly_algebroid_with_parameter():
    d = parse_document(doc(kind="poly_algebroid", base_dim=1, rank=1, params=["t"],
                           anchor=[[1, 1, [[[1, 0], "1"]]]], pi=[], point=["0"]))
    B = d.data["B"]
    assert B.nvars == 2 and d.data["params"] == ["t"]


def test_germ_document():
    d = parse_document(doc(kind="germ", pairing=[["0", "1"], ["1", "0"]], A=[["1", "0"]],
                           kernel=[["1", "0"], ["0", "1"]]))
    assert d.data["germ"].validate()
