import json

import pandas as pd
import pytest

from expdiff.cli import EXIT_ERROR, EXIT_NEGATIVE, EXIT_OK, main
from expdiff.frontend.lowering import Session, lower_polynomial
from expdiff.frontend.parser import parse


def run(capsys, *argv):
    code = main([*map(str, argv), "--json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_verify_a_solution(capsys, fixture_path):
    code, payload = run(capsys, "verify", fixture_path("example22.eq"), "--f", "z*exp(z) - z")
    assert code == EXIT_OK
    assert payload["status"] == "Verified"
    assert payload["residual"] == "0"
    assert payload["order"] == 1
    assert payload["applied_L_zero"] is False


def test_verify_reports_the_misprinted_example(capsys, fixture_path):
    code, payload = run(capsys, "verify", fixture_path("example21.eq"), "--f", "z*exp(z) + z", "--spot-check", 5)
    assert code == EXIT_NEGATIVE
    assert payload["status"] == "NotASolution"
    assert payload["residual"] == "(z^2 - 1)*exp(2*z) + z^2*exp(z)"
    assert payload["note"].startswith("Example 2.1")
    assert len(payload["spot_check"]) == 5
    assert all(point["abs"] > 0 for point in payload["spot_check"])


def test_verify_reports_both_zero_notions(capsys, fixture_path):
    code, payload = run(capsys, "verify", fixture_path("remark21.eq"), "--f", "-z*exp(z)")
    assert code == EXIT_OK
    assert payload["applied_L_zero"] is True
    assert payload["operator_L_zero"] is False


def test_solve_shifted_quadratic(capsys, fixture_path):
    code, payload = run(capsys, "solve", fixture_path("example31.eq"))
    assert code == EXIT_OK
    assert payload["status"] == "TwoSolutions"
    assert payload["f0"] == "-z"
    assert sorted(payload["solutions"]) == ["-exp(z) - z", "exp(z) - z"]
    assert payload["roots"] == ["1", "-1"]


def test_solve_perturbed(capsys, fixture_path):
    code, payload = run(capsys, "solve", fixture_path("example31_perturbed.eq"))
    assert code == EXIT_NEGATIVE
    assert payload["status"] == "NoFiniteOrderSolution"
    assert payload["failed_identity"] == "v_consistency"
    assert payload["residual"] == "1"


def test_solve_with_chosen_root(capsys, fixture_path):
    code, payload = run(capsys, "solve", fixture_path("linear_shift1.eq"), "--c", "-1")
    assert code == EXIT_OK
    assert payload["solutions"] == ["-exp(z) + z", "exp(z) + z"]


def test_synthesize(capsys, fixture_path):
    code, payload = run(capsys, "synthesize", fixture_path("synth_example31.eq"))
    assert code == EXIT_OK
    session = Session.create(["eta"])
    expected = lower_polynomial(
        parse("(2 - exp(eta))*exp(-eta)*z^2 + (2*eta - 1)*exp(-eta)*z + exp(-eta)"), session
    )
    assert lower_polynomial(parse(payload["v"]), session) == expected
    assert payload["status"] == "TwoSolutions"
    assert payload["equation"].startswith("params = eta")


def test_synthesize_emits_a_loadable_equation_file(capsys, fixture_path, tmp_path):
    assert main(["synthesize", str(fixture_path("synth_example31.eq")), "--emit", "equation"]) == EXIT_OK
    path = tmp_path / "made.eq"
    path.write_text(capsys.readouterr().out)
    code, payload = run(capsys, "verify", path, "--f", "exp(z) - z")
    assert code == EXIT_OK
    assert payload["status"] == "Verified"


@pytest.mark.parametrize(
    "name, status",
    [
        ("lemma21.eq", "NoEntireSolution_Lemma21"),
        ("lemma24.eq", "NoTranscendentalFiniteOrder_Lemma24"),
        ("example22.eq", "ConstrainedN2"),
    ],
)
def test_classify(capsys, fixture_path, name, status):
    code, payload = run(capsys, "classify", fixture_path(name))
    assert code == EXIT_OK
    assert payload["status"] == status


def test_classify_constraints(capsys, fixture_path):
    _, payload = run(capsys, "classify", fixture_path("example22.eq"))
    assert (payload["sigma"], payload["lambda_bar"], payload["hyper_order"]) == (1, 1, 0)


def test_zeros(capsys):
    code, payload = run(capsys, "zeros", "exp(z) - 1", "--r", "7")
    assert code == EXIT_OK
    assert [row["count"] for row in payload["counts"]] == [3]


def test_zeros_table_output(capsys):
    assert main(["zeros", "z^3", "--r", "1,2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "n(r)" in out


def test_growth_csv(capsys, tmp_path):
    target = tmp_path / "growth.csv"
    code, payload = run(capsys, "growth", "z*exp(z)", "--csv", target)
    assert code == EXIT_OK
    assert payload["status"] == "too_few_zeros"
    assert payload["slope"] == 0.0
    assert payload["sigma"] == 1
    frame = pd.read_csv(target)
    assert list(frame["n(r)"]) == [1, 1, 1, 1, 1]


def test_growth_strict_is_an_error(capsys):
    code, payload = run(capsys, "growth", "z*exp(z)", "--strict")
    assert code == EXIT_ERROR
    assert payload["error"] == "TooFewZeros"


def test_print_eq(capsys, fixture_path):
    assert main(["print-eq", str(fixture_path("lemma24.eq"))]) == EXIT_OK
    assert capsys.readouterr().out == "equation = f^3 + f(z + 1) = exp(z)\n"


def test_errors_are_reported_as_json(capsys, fixture_path):
    code, payload = run(capsys, "verify", fixture_path("example22.eq"), "--f", "w*z")
    assert code == EXIT_ERROR
    assert payload == {
        "status": "error",
        "error": "UndeclaredParameter",
        "message": payload["message"],
    }
    assert "'w'" in payload["message"]


def test_missing_file(capsys, tmp_path):
    code, payload = run(capsys, "classify", tmp_path / "nope.eq")
    assert code == EXIT_ERROR
    assert payload["error"] == "EquationFileError"


def test_unbound_parameter_in_growth(capsys):
    code, payload = run(capsys, "growth", "eta*z*(exp(z) - 1)", "--params", "eta", "--radii", "1,2,3,4,5")
    assert code == EXIT_ERROR
    assert payload["error"] == "UnboundParameter"


def test_candidate_starting_with_minus_is_read_as_a_value(capsys, fixture_path):
    code, payload = run(capsys, "verify", fixture_path("example22.eq"), "--f", "-z*exp(z)")
    assert code == EXIT_NEGATIVE
    assert payload["status"] == "NotASolution"


def test_usage_errors_are_invalid_arguments(capsys, fixture_path):
    code, payload = run(capsys, "verify", fixture_path("example22.eq"))
    assert code == EXIT_ERROR
    assert payload["status"] == "error"
    assert payload["error"] == "InvalidArgument"
    assert "--f" in payload["message"]


def test_usage_errors_in_human_output(capsys):
    assert main(["frobnicate"]) == EXIT_ERROR
    assert "ERROR | InvalidArgument" in capsys.readouterr().err


def test_human_error_output(capsys, fixture_path):
    assert main(["solve", str(fixture_path("lemma24.eq"))]) == EXIT_ERROR
    assert "ERROR | OutOfTheoremScope" in capsys.readouterr().err
