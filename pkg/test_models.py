"""
Model validation, wire formats and the small utilities (ledger, errors, workers).
"""

import json

import numpy as np
import pytest
from pydantic import ValidationError

from src.models import (
    Classification,
    CircleRotation,
    CirclePoint,
    CircleUnimodular,
    CohomologyReport,
    CyclicPoint,
    ExpectationMatrix,
    FixedPointElement,
    LaurentMatrix,
    LaurentPoly,
    ParametricTrigPoly,
    RunConfig,
    SkewSystem,
    TorusObservable,
    ZInfPoint,
    ZInfUnimodular,
)
from src.models.base import ExactReal
from src.models.cohomology import classify
from src.utils.audit_log import get_audit_log, log_action
from src.utils.errors import AnzaiError, FrequencyCapError, InputError
from src.utils.parallel import ordered_map
from src.utils.serialization import dump_csv, dump_json, parse_complex, parse_fraction


# ------------------------------------------------------------- points

def test_circle_point_is_reduced_mod_one():
    assert CirclePoint(t=1.25).t == 0.25
    assert CirclePoint(t=-0.25).t == 0.75


def test_zinf_point_reads_infinity_spellings():
    for raw in ("inf", "Infinity", "∞", None):
        assert ZInfPoint.model_validate({"l": raw}).is_infinity
    assert ZInfPoint(l=-3).l == -3


def test_cyclic_point_residue_is_reduced():
    assert CyclicPoint(r=5, modulus=3).r == 2
    assert CyclicPoint(r=-1, modulus=4).r == 3


# ------------------------------------------------------------ systems

def test_rotation_number_must_lie_in_unit_interval():
    with pytest.raises(ValidationError):
        CircleRotation(alpha=1.5)
    with pytest.raises(ValidationError):
        CircleRotation(alpha=0.0)


def test_golden_mean_rotation_carries_exact_tag():
    sys = CircleRotation.golden_mean()
    assert sys.alpha == pytest.approx((5 ** 0.5 - 1) / 2)
    assert sys.alpha_tag.irrational == "golden_mean"
    assert not sys.alpha_tag.is_rational


def test_rotation_tag_must_match_alpha():
    tag = ExactReal(coefficient=1, irrational="sqrt2")
    with pytest.raises(ValidationError):
        CircleRotation(alpha=0.3, alpha_tag=tag)


def test_exact_real_rejects_unknown_irrational():
    with pytest.raises(ValidationError):
        ExactReal(coefficient=1, irrational="tau")


def test_skew_system_defaults_to_trivial_cocycle():
    sys = SkewSystem.model_validate({"base": {"kind": "cyclic", "n": 3}})
    assert sys.cocycle.kind == "cyclic"
    assert sys.cocycle.values == [1, 1, 1]

    sys = SkewSystem.model_validate({"base": {"kind": "zinf"}})
    assert sys.cocycle.limit == 1


def test_skew_system_rejects_mixed_variants():
    with pytest.raises(ValidationError):
        SkewSystem.model_validate({
            "base": {"kind": "circle", "alpha": 0.5},
            "cocycle": {"kind": "zinf", "limit": 1.0},
        })
    with pytest.raises(ValidationError):
        SkewSystem.model_validate({
            "base": {"kind": "cyclic", "n": 3},
            "cocycle": {"kind": "cyclic", "values": [1, 1]},
        })


def test_cocycles_must_be_unimodular():
    with pytest.raises(ValidationError):
        ZInfUnimodular(values={0: 2.0}, limit=1.0)
    with pytest.raises(ValidationError):
        SkewSystem.model_validate({
            "base": {"kind": "cyclic", "n": 2},
            "cocycle": {"kind": "cyclic", "values": [1, 0.5]},
        })


def test_circle_phase_must_be_real_and_mean_free():
    with pytest.raises(ValidationError):
        CircleUnimodular(phase={0: 0.1})
    with pytest.raises(ValidationError):
        CircleUnimodular(phase={1: 0.1j})
    f = CircleUnimodular(winding=1, phase={1: 0.1j, -1: -0.1j})
    assert f.has_phase
    with pytest.raises(ValueError):
        f.as_function()


def test_circle_unimodular_without_phase_is_a_monomial():
    f = CircleUnimodular(winding=2, offset=0.25)
    g = f.as_function()
    assert list(g.coefficients) == [2]
    assert g.coefficients[2] == pytest.approx(1j)
    assert abs(f(0.1)) == pytest.approx(1.0)


# --------------------------------------------------------- observables

ZINF_OBSERVABLE = {
    "base_kind": "zinf",
    "coefficients": [
        [0, {"kind": "zinf", "values": {"0": [2, 0]}, "limit": [1, 0]}],
        [1, {"kind": "zinf", "values": {}, "limit": [0, 1]}],
    ],
}


def test_observable_reads_and_writes_pairs():
    h = TorusObservable.model_validate(ZINF_OBSERVABLE)
    assert h.frequencies == [0, 1]
    assert h.degree == 1
    assert h.slot(1).limit == 1j
    dumped = h.model_dump(mode="json")
    assert [pair[0] for pair in dumped["coefficients"]] == [0, 1]
    assert dumped["coefficients"][1][1]["limit"] == [0.0, 1.0]


def test_observable_rejects_duplicate_frequencies():
    payload = dict(ZINF_OBSERVABLE, coefficients=ZINF_OBSERVABLE["coefficients"] * 2)
    with pytest.raises(ValidationError):
        TorusObservable.model_validate(payload)


def test_observable_rejects_mixed_slots():
    with pytest.raises(ValidationError):
        TorusObservable.model_validate({
            "base_kind": "zinf",
            "coefficients": [[0, {"kind": "circle", "coefficients": {"0": 1}}]],
        })
    with pytest.raises(ValidationError):
        TorusObservable.model_validate({
            "base_kind": "cyclic",
            "coefficients": [[0, {"kind": "cyclic", "values": [1, 2]}], [1, {"kind": "cyclic", "values": [1]}]],
        })


# ---------------------------------------------------------- matrices

def test_expectation_matrix_checks_positivity_and_trace():
    ExpectationMatrix.from_array([[0.5, 0.5], [0.5, 0.5]])
    with pytest.raises(ValidationError):
        ExpectationMatrix.from_array([[0.5, 1.0], [1.0, 0.5]])
    with pytest.raises(ValidationError):
        ExpectationMatrix.from_array([[1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(ValidationError):
        ExpectationMatrix.from_array([[0.5, 0.1j], [0.1j, 0.5]])


def test_scalar_matrix_is_identity_over_k():
    A = ExpectationMatrix.scalar(3)
    assert np.allclose(A.array, np.eye(3) / 3)


def test_expectation_matrix_wire_format_is_row_major_pairs():
    A = ExpectationMatrix.from_array([[0.5, 0.25j], [-0.25j, 0.5]])
    dumped = json.loads(A.model_dump_json())
    assert dumped["entries"][0][1] == [0.0, 0.25]
    assert ExpectationMatrix.model_validate(dumped) == A


def test_laurent_matrix_adjoint_inverts_the_shift():
    u = LaurentMatrix(size=2, terms={0: np.array([[0, 0], [1, 0]], dtype=complex),
                                     1: np.array([[0, 1], [0, 0]], dtype=complex)})
    assert (u @ u.adjoint()).equals(LaurentMatrix.identity(2))
    assert u.power(2).equals(LaurentMatrix(size=2, terms={1: np.eye(2, dtype=complex)}))


def test_fixed_point_element_with_m_o_zero_is_scalar():
    FixedPointElement(coefficients={0: 1.0}, m_o=0)
    with pytest.raises(ValidationError):
        FixedPointElement(coefficients={1: 1.0}, m_o=0)


def test_laurent_poly_from_json():
    q = LaurentPoly.model_validate({"coefficients": {"0": 3, "1": 1, "-1": [1, 0]}})
    assert q.degree == 1
    assert q.is_hermitian()
    assert q(np.array([1.0]))[0] == pytest.approx(5.0)


def test_parametric_poly_takes_one_form():
    with pytest.raises(ValidationError):
        ParametricTrigPoly.model_validate({
            "coefficients": {"0": {"kind": "cyclic", "values": [1]}},
            "sampled": {"0": [1]},
        })
    with pytest.raises(ValidationError):
        ParametricTrigPoly.model_validate({"sampled": {"0": [1, 2], "1": [1]}})


# -------------------------------------------------------- cohomology

def test_classification_table():
    assert classify(0, 0) == Classification.UNIQUELY_ERGODIC
    assert classify(2, 0) == Classification.TOPOLOGICALLY_ERGODIC_NOT_UE
    assert classify(1, 1) == Classification.UE_WRT_FIXED_POINT
    assert classify(1, 2) == Classification.NON_UNIQUE


def test_report_constants_must_be_consistent():
    with pytest.raises(ValidationError):
        CohomologyReport(n_o=1, m_o=3, k_o=2, classification=Classification.NON_UNIQUE, n_max=8)
    with pytest.raises(ValidationError):
        CohomologyReport(n_o=1, m_o=2, k_o=2, classification=Classification.UNIQUELY_ERGODIC, n_max=8)


# ------------------------------------------------------------ config

def test_run_config_validation():
    config = RunConfig(subcommand="report")
    assert config.schedule == [100, 200, 400, 800]
    with pytest.raises(ValidationError):
        RunConfig(subcommand="report", schedule=[100, 100])
    with pytest.raises(ValidationError):
        RunConfig(subcommand="report", tol=0)
    with pytest.raises(ValidationError):
        RunConfig(subcommand="report", seed=-1)
    with pytest.raises(ValidationError):
        RunConfig(subcommand="plot")


# ------------------------------------------------------ serialization

def test_parse_complex_accepts_wire_forms():
    assert parse_complex([1, 2]) == 1 + 2j
    assert parse_complex({"re": 0, "im": -1}) == -1j
    assert parse_complex("3-4j") == 3 - 4j
    assert parse_complex(2) == 2
    with pytest.raises(ValueError):
        parse_complex(True)


def test_parse_fraction_is_exact():
    assert parse_fraction("1/3") + parse_fraction([2, 3]) == 1
    with pytest.raises(ValueError):
        parse_fraction(0.5)


def test_dump_json_is_sorted_and_stable():
    text = dump_json({"b": 1, "a": [0.1, 2]})
    assert text.index('"a"') < text.index('"b"')
    assert text == dump_json({"a": [0.1, 2], "b": 1})


def test_dump_csv_writes_seed_and_notes_first():
    text = dump_csv(["N", "value"], [[1, 0.5], [2, None]], seed=7, notes={"status": "CONVERGING"})
    lines = text.splitlines()
    assert lines[0] == "# seed=7"
    assert lines[1] == "# status=CONVERGING"
    assert lines[2] == "N,value"
    assert lines[3] == "1,0.5"
    assert lines[4] == "2,"


# ----------------------------------------------------------- utilities

def test_errors_carry_tags_and_context():
    error = FrequencyCapError("too many modes", cap=16)
    assert isinstance(error, AnzaiError) and isinstance(error, ValueError)
    payload = error.to_dict()
    assert payload["tag"] == "FREQUENCY_CAP"
    assert payload["context"] == {"cap": "16"}
    assert InputError("x").tag == "INPUT"


def test_audit_log_appends_and_reads_back(tmp_path, monkeypatch):
    monkeypatch.setenv("ANZAI_AUDIT_LOG", str(tmp_path / "audit.log"))
    log_action("cli.report", {"exit_code": 0})
    log_action("cli.diagnose", {"exit_code": 2})
    entries = get_audit_log(limit=1)
    assert len(entries) == 1
    assert entries[0]["action"] == "cli.diagnose"
    assert len(get_audit_log()) == 2


def test_audit_log_disabled_by_empty_path(tmp_path, monkeypatch):
    monkeypatch.setenv("ANZAI_AUDIT_LOG", "")
    log_action("cli.report", {})
    assert get_audit_log() == []


def test_ordered_map_keeps_input_order():
    assert ordered_map(lambda n: n * n, range(20), workers=4) == [n * n for n in range(20)]
    assert ordered_map(str, [], workers=4) == []
