import json

import jsonschema
import pytest

from jacmate.poly import parse_polynomial
from jacmate.tongue import GridSpec, tongue_certificate
from jacmate.falsifier import random_trials
from jacmate.certificate import (
    CERTIFICATE_SCHEMA,
    INCONCLUSIVE,
    NO_REAL_JACOBIAN_MATE,
    NOT_COVERED,
    CertificateDocument,
    build_certificate,
    document_to_dict,
    emit_certificate_json,
)


def validate(doc):
    data = json.loads(emit_certificate_json(doc))
    jsonschema.validate(data, CERTIFICATE_SCHEMA)
    return data


def test_positive_certificate(p1):
    doc = build_certificate(p1)
    assert doc.conclusion == NO_REAL_JACOBIAN_MATE
    data = validate(doc)
    assert data["conclusion"] == NO_REAL_JACOBIAN_MATE
    assert data["criterion"]["satisfied"] is True
    assert data["criterion"]["witness_edge"]["from"] == [0, 1]
    assert data["criterion"]["witness_edge"]["to"] == [1, 2]
    assert "tongue" not in data
    assert "falsifier_trials" not in data


def test_not_covered_certificate():
    doc = build_certificate(parse_polynomial("x^2 + y^2"))
    assert doc.conclusion == NOT_COVERED
    data = validate(doc)
    assert data["criterion"]["satisfied"] is False
    assert data["criterion"]["witness_edge"] is None
    assert data["criterion"]["theta"] is None
    assert "no conclusion" in data["summary"]


def test_summary_wording(p3, swap_case):
    plain = build_certificate(p3).summary
    assert "does not have a real Jacobian mate" in plain
    assert "(0, 1)" in plain and "(2, 2)" in plain
    assert "transform" not in plain
    swapped = build_certificate(swap_case).summary
    assert "after a coordinate transform" in swapped


def test_full_document_with_tongue_and_trials(p3):
    tc = tongue_certificate(p3, grid=GridSpec(x_max=50.0))
    trials = random_trials(p3, 4)
    doc = build_certificate(p3, tongue=tc, trials=trials)
    assert doc.conclusion == NO_REAL_JACOBIAN_MATE
    data = validate(doc)
    assert data["tongue"]["status"] == "Verified"
    assert len(data["falsifier_trials"]) == 4
    assert data["falsifier_summary"]["witness_rate"] == 1.0
    assert data["tongue"]["region"]["t0"] == "1/8"
    records = data["tongue"]["levels"]["records"]
    assert len(records) == 30
    assert all(r["ok"] for r in records)


def test_failed_tongue_downgrades_conclusion(p3):
    tc = tongue_certificate(p3, grid=GridSpec(x_max=50.0))
    failed = type(tc)(
        status="Failed",
        reasons=("synthetic",),
        region=tc.region,
        critical_point_check=tc.critical_point_check,
        level_report=tc.level_report,
    )
    doc = build_certificate(p3, tongue=failed)
    assert doc.conclusion == INCONCLUSIVE
    data = validate(doc)
    assert "did not pass" in data["summary"]


def test_inconsistent_document_cannot_exist(p3):
    crit = build_certificate(p3).criterion
    with pytest.raises(ValueError):
        CertificateDocument(
            tool_version="0.1.0",
            input=str(p3),
            criterion=crit,
            tongue=None,
            falsifier_trials=None,
            conclusion=NOT_COVERED,
        )
    with pytest.raises(ValueError):
        CertificateDocument(
            tool_version="0.1.0",
            input=str(p3),
            criterion=crit,
            tongue=None,
            falsifier_trials=None,
            conclusion="MAYBE",
        )


def test_key_order_and_determinism(p3):
    doc = build_certificate(p3)
    text1 = emit_certificate_json(doc)
    text2 = emit_certificate_json(build_certificate(p3))
    assert text1 == text2
    data = json.loads(text1)
    assert list(data) == ["tool_version", "input", "conclusion", "summary", "criterion"]


def test_json_has_no_nan(p1):
    tc = tongue_certificate(p1, grid=GridSpec(x_max=50.0))
    doc = build_certificate(p1, tongue=tc, trials=random_trials(p1, 2))
    text = emit_certificate_json(doc)
    assert "NaN" not in text and "Infinity" not in text
    json.loads(text)  # strict parse


def test_schema_rejects_extra_top_level_keys(p3):
    data = document_to_dict(build_certificate(p3))
    data["extra"] = 1
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(data, CERTIFICATE_SCHEMA)


def test_schema_rejects_bad_conclusion(p3):
    data = document_to_dict(build_certificate(p3))
    data["conclusion"] = "PROVED"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(data, CERTIFICATE_SCHEMA)


def test_input_round_trips_through_parser(p3):
    data = document_to_dict(build_certificate(p3))
    assert parse_polynomial(data["input"]) == p3
