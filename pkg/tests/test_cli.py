import json

from arnoldnf.cli import equation_string, main, normal_form_string
from arnoldnf.classify import classify
from arnoldnf.poly import parse_poly


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- classify command ------------------------------------------------


def test_success_text(capsys):
    code, out, err = run(["x^3+y^7+x*y^5"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "type: E_12"
    assert lines[1] == "normal form: x^3+a*x*y^5+y^7"
    assert "a = 1 ~ 1.00000000" in lines
    assert "mu = 12" in lines


def test_success_json_schema(capsys):
    code, out, err = run(["--json", "x^3+x^2*y^2+x*y^5"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["type"] == "J_12"
    assert payload["indices"] == [12]
    assert payload["mu"] == 12
    assert payload["normal_form"] == "x^3+x^2*y^2+a*y^8"
    assert payload["normal_form_equation"] == "x^3+x^2*y^2-1/4*y^8"
    (entry,) = payload["parameters"]
    assert set(entry) == {"name", "tower", "coeffs", "approx"}
    assert entry["name"] == "a"
    assert entry["coeffs"] == ["-1/4"]
    assert entry["tower"] == []


def test_json_round_trip(capsys):
    code, first, err = run(["--json", "x^3+x^2*y^2+x*y^5"], capsys)
    equation = json.loads(first)["normal_form_equation"]
    code, second, err = run(["--json", equation], capsys)
    assert code == 0
    assert first == second


def test_json_radical_parameter(capsys):
    code, out, err = run(["--json", "--digits", "5", "x^3+2*y^7+x*y^5"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["type"] == "E_12"
    assert "normal_form_equation" not in payload
    (entry,) = payload["parameters"]
    assert entry["approx"] == "0.60950"
    (level,) = entry["tower"]
    assert level["index"] == 7
    assert level["radicand"]["coeffs"] == ["1/2"]
    assert level["radicand"]["tower"] == []


def test_steps_prints_trace(capsys):
    code, out, err = run(["--steps", "x^2*y+x*y^3"], capsys)
    assert code == 0
    assert "steps:" in out
    assert "matched D_6" in out


def test_steps_json_trace(capsys):
    code, out, err = run(["--json", "--steps", "x^2+y^5"], capsys)
    payload = json.loads(out)
    assert payload["trace"][-1] == "matched A_4"


def test_custom_variables(capsys):
    code, out, err = run(["--vars", "u,v", "u^3+u*v^3+v^5"], capsys)
    assert code == 0
    assert "type: E_7" in out


def test_digits_control_approximation(capsys):
    code, out, err = run(["--digits", "3", "x^3+2*y^7+x*y^5"], capsys)
    assert code == 0
    assert "~ 0.609" in out


# -- rejection exit code and wording ---------------------------------


def test_reject_modality(capsys):
    code, out, err = run(["x^5+y^6"], capsys)
    assert code == 2
    assert out.splitlines()[0] == "rejected: modality > 2"


def test_reject_non_isolated(capsys):
    code, out, err = run(["x^2*y^2"], capsys)
    assert code == 2
    assert out.splitlines()[0] == "rejected: non-isolated singularity"


def test_reject_corank(capsys):
    code, out, err = run(["x^3+y^3+z^3"], capsys)
    assert code == 2
    assert out.splitlines()[0] == "rejected: corank > 2"


def test_reject_json_reason(capsys):
    code, out, err = run(["--json", "x^5+y^6"], capsys)
    assert code == 2
    assert json.loads(out)["rejected_reason"] == "modality>2"


# -- usage and parse errors ------------------------------------------


def test_parse_error_position(capsys):
    code, out, err = run(["x^^3"], capsys)
    assert code == 1
    assert "parse error" in err
    assert "position 2" in err


def test_unknown_variable(capsys):
    code, out, err = run(["--vars", "x,y", "x^3+w^4"], capsys)
    assert code == 1
    assert "unknown variable" in err


def test_usage_error(capsys):
    code, out, err = run([], capsys)
    assert code == 1


def test_smooth_germ_is_usage_error(capsys):
    code, out, err = run(["x+y^2"], capsys)
    assert code == 1
    assert "no constant or linear part" in err


def test_bad_digits(capsys):
    code, out, err = run(["--digits", "0", "x^2+y^2"], capsys)
    assert code == 1


# -- harness command -------------------------------------------------


def test_harness_subset_recovers_everything(capsys):
    code, out, err = run(
        ["harness", "--types", "D;E_7", "--count", "3", "--seed", "4"], capsys
    )
    assert code == 0
    report = json.loads(out)
    names = [row["type"] for row in report["rows"]]
    assert names == ["D_4", "D_5", "D_6", "E_7"]
    assert report["totals"]["samples"] == 12
    assert report["totals"]["type_recovered"] == 12
    for row in report["rows"]:
        kinds = [s["transform"] for s in row["samples"]]
        assert kinds == ["identity", "linear", "tangent"]
        assert all(s["type_ok"] for s in row["samples"])


def test_harness_untransformed_samples_always_recover(capsys):
    code, out, err = run(
        ["harness", "--types", "J_10;X_9", "--count", "1", "--seed", "1"], capsys
    )
    assert code == 0
    report = json.loads(out)
    assert report["totals"]["samples"] >= 7
    assert (
        report["totals"]["type_recovered"] == report["totals"]["samples"]
    )
    assert (
        report["totals"]["parameters_recovered"]
        == report["totals"]["parameter_samples"]
    )


def test_harness_is_deterministic(capsys):
    argv = ["harness", "--types", "W_12;Z_11", "--count", "3", "--seed", "9"]
    code, first, err = run(argv, capsys)
    code, second, err = run(argv, capsys)
    assert first == second
    assert json.loads(first)["seed"] == 9


# -- rendering helpers -----------------------------------------------


def test_normal_form_string_core():
    r = classify(parse_poly("(x^2+y^3)^2+x*y^5", ("x", "y")))
    text = normal_form_string(r.parts)
    assert text.startswith("(x^2+y^3)^2")
    assert "a0*x*y^5" in text


def test_equation_string_skips_zero_terms():
    r = classify(parse_poly("x^3+y^7+x*y^6", ("x", "y")))
    assert equation_string(r) == "x^3+y^7"


def test_equation_string_round_trip_identity():
    source = "x^4+x^2*y^3+2*x^2*y^5+y^6+x*y^5"
    r = classify(parse_poly(source, ("x", "y")))
    back = classify(parse_poly(equation_string(r), ("x", "y")))
    assert back.name == r.name
    assert [(n, str(v)) for n, v in back.parameters] == [
        (n, str(v)) for n, v in r.parameters
    ]
