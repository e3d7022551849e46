"""
Tests for the JSON encodings.
"""
import json
import os
from fractions import Fraction

import pytest

from haarbmo.constructions.random_maps import RandomGenerator
from haarbmo.constructions.section5 import Section5Params
from haarbmo.decompose.generations import GenerationalDecomposer
from haarbmo.exceptions import FormatError, IntervalError, RearrangementError
from haarbmo.formats.json_codec import (
    certificate_from_json,
    certificate_to_json,
    collection_from_json,
    dumps,
    expansion_from_json,
    expansion_to_json,
    load_json,
    loads,
    params_from_json,
    params_to_json,
    parse_rational,
    rational_to_str,
    rearrangement_from_json,
    rearrangement_to_json,
    split_from_json,
    write_json,
)
from haarbmo.models.expansion import HaarExpansion
from haarbmo.models.interval import ROOT, DyadicInterval, DyadicRational, IntervalSet, Universe


def I(depth, index):
    return DyadicInterval(depth, index)


@pytest.mark.parametrize("text, expected", [
    ("3/4", Fraction(3, 4)),
    ("-1/2", Fraction(-1, 2)),
    ("6/8", Fraction(3, 4)),
    ("5", Fraction(5)),
    (2, Fraction(2)),
])
def test_parse_rational(text, expected):
    assert parse_rational(text) == expected


@pytest.mark.parametrize("value", ["1/0", "a/b", "1/-2", 0.5, True, None])
def test_parse_rational_rejects(value):
    with pytest.raises(FormatError):
        parse_rational(value)


def test_rational_to_str():
    assert rational_to_str(3) == "3/1"
    assert rational_to_str(Fraction(2, 4)) == "1/2"
    assert rational_to_str(DyadicRational(3, 2)) == "3/4"


def test_malformed_json_reports_position():
    with pytest.raises(FormatError) as excinfo:
        loads('{"depth": 2,\n  "map": [}')
    assert excinfo.value.line == 2
    assert excinfo.value.column is not None
    assert "(line 2, column" in str(excinfo.value)


def test_collection_accepts_wrapped_form():
    universe = Universe(2)
    bare = collection_from_json([[1, 0], [0, 0]], universe)
    wrapped = collection_from_json({"intervals": [[0, 0], [1, 0]]}, universe)
    assert bare == wrapped == IntervalSet([ROOT, I(1, 0)])


def test_collection_rejects_bad_pairs():
    with pytest.raises(FormatError):
        collection_from_json([[1, 0, 2]])
    with pytest.raises(FormatError):
        collection_from_json([[True, 0]])
    with pytest.raises(IntervalError):
        collection_from_json([[3, 0]], Universe(2))


def test_expansion_document():
    x = HaarExpansion({ROOT: Fraction(1, 2), I(1, 1): -1})
    data = expansion_to_json(x)
    assert data[0] == {"interval": [0, 0], "coeff": "1/2"}
    assert expansion_from_json(data) == x
    with pytest.raises(FormatError, match="duplicate coefficient"):
        expansion_from_json(data + data[:1])


def test_rearrangement_document():
    tau = RandomGenerator(8).rearrangement(2)
    data = rearrangement_to_json(tau)
    assert data["depth"] == 2
    assert data["total"] is True
    assert rearrangement_from_json(data) == tau
    assert rearrangement_from_json(json.loads(dumps(data)), depth=2) == tau


def test_rearrangement_depth_mismatch():
    data = rearrangement_to_json(RandomGenerator(8).rearrangement(2))
    with pytest.raises(FormatError, match="depth 2 but the run uses depth 3"):
        rearrangement_from_json(data, depth=3)


def test_rearrangement_total_flag_mismatch():
    data = {"depth": 1, "total": True, "map": [{"from": [0, 0], "to": [0, 0]}]}
    with pytest.raises(FormatError, match="partial"):
        rearrangement_from_json(data)


def test_rearrangement_not_injective():
    data = {"depth": 1, "map": [{"from": [1, 0], "to": [0, 0]}, {"from": [1, 1], "to": [0, 0]}]}
    with pytest.raises(RearrangementError, match="not injective"):
        rearrangement_from_json(data)


def test_certificate_document():
    tau = RandomGenerator(15).rearrangement(3)
    certificate, _ = GenerationalDecomposer(tau).decompose(ROOT)
    data = json.loads(dumps(certificate_to_json(certificate)))
    assert data["mode"] == "strong"
    assert set(data["constants"]) == {"error_carleson", "homogeneity", "mass", "weak_sup"}
    assert certificate_from_json(data, tau.universe) == certificate


def test_certificate_unknown_mode():
    with pytest.raises(FormatError, match="unknown certificate mode"):
        certificate_from_json({"root": [0, 0], "mode": "partial", "blocks": []})


@pytest.mark.parametrize("document, message", [
    ({"root": [0, 0], "blocks": [], "constants": {"mass": "1/1"}}, "missing error_carleson, homogeneity"),
    ({"root": [0, 0], "blocks": [], "constants": ["1/1"]}, "must be an object"),
    ({"root": [0, 0], "blocks": "none"}, "must be an array"),
])
def test_certificate_malformed(document, message):
    with pytest.raises(FormatError, match=message):
        certificate_from_json(document)


def test_certificate_without_constants():
    certificate = certificate_from_json({"root": [0, 0], "blocks": [], "constants": None})
    assert certificate.constants is None


def test_root_checked_against_universe():
    with pytest.raises(IntervalError, match="exceeds max depth"):
        certificate_from_json({"root": [3, 1], "blocks": []}, Universe(2))
    with pytest.raises(IntervalError, match="exceeds max depth"):
        split_from_json({"root": [3, 1], "L": [], "E": []}, Universe(2))
    assert certificate_from_json({"root": [3, 1], "blocks": []}).root == I(3, 1)


def test_split_document():
    split = split_from_json({"root": [0, 0], "L": [[0, 0]], "E": [[1, 0]]})
    assert split.root == ROOT
    assert split.error == IntervalSet([I(1, 0)])


def test_params_document():
    params = Section5Params.from_triples(10, [(3, 4, 3)])
    assert params_from_json(params_to_json(params)) == params
    with pytest.raises(FormatError, match="malformed stage"):
        params_from_json({"depth": 10, "stages": [{"kn_depth": 3}]})
    with pytest.raises(FormatError, match="must be an array"):
        params_from_json({"depth": 10, "stages": {"kn_depth": 3}})
    with pytest.raises(FormatError, match="depth must be an integer"):
        params_from_json({"depth": "10", "stages": []})


def test_write_json_is_atomic(tmp_path):
    target = tmp_path / "out.json"
    target.write_text("old")
    write_json(str(target), {"constant": "3/1"})
    assert load_json(str(target)) == {"constant": "3/1"}
    assert [p.name for p in tmp_path.iterdir()] == ["out.json"]


def test_write_json_leaves_no_temp_file_on_failure(tmp_path):
    with pytest.raises(TypeError):
        write_json(str(tmp_path / "out.json"), {"bad": object()})
    assert not os.listdir(tmp_path)
