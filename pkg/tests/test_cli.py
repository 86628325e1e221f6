"""
Command-line tests
"""
import json

import pytest

from grassmoment.cli import (
    EXIT_FAILURE,
    EXIT_OK,
    EXIT_USAGE,
    UsageError,
    main,
    parse_complex_vector,
    parse_tolerances,
)
from grassmoment.core.config import settings


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_chambers(capsys):
    code, payload = run(capsys, "chambers", "--n", "4")
    assert code == EXIT_OK
    assert len(payload["chambers"]) == 8
    assert len(payload["arrangement"]) == 3
    assert [o["label"] for o in payload["orbits"]] == ["C-", "C+"]


def test_chambers_only_for_n4(capsys):
    code, payload = run(capsys, "chambers", "--n", "5")
    assert code == EXIT_USAGE
    assert "error" in payload


def test_classify(capsys):
    code, payload = run(capsys, "chambers", "--classify", "1/3,5/9,5/9,5/9")
    assert code == EXIT_OK
    assert payload["id"] == "[-1,-1,-1]"
    assert payload["orbit"] == "C-"


def test_classify_bad_point(capsys):
    code, _ = run(capsys, "chambers", "--classify", "1/2,1/2,1/2")
    assert code == EXIT_USAGE


def test_regular_classify_n5(capsys):
    code, payload = run(capsys, "regular", "--n", "5", "--classify", "7/10,6/10,5/10,1/10,1/10")
    assert code == EXIT_OK
    assert payload["regular_mu"] is True
    assert payload["regular_mu_tilde"] is False
    assert payload["brute_force_regular_mu_tilde"] is False


def test_regular_sweep(capsys):
    code, payload = run(capsys, "regular", "--n", "4", "--denominator", "6")
    assert code == EXIT_OK
    assert payload["disagreements"] == 0


def test_moment(capsys):
    code, payload = run(capsys, "moment", "--map", "A", "--x", "0,0,1/3,4/9,1/9,1/9")
    assert code == EXIT_OK
    assert payload["map"] == "A" and payload["n"] == 4
    assert payload["input"] == ["0", "0", "1/3", "4/9", "1/9", "1/9"]
    assert payload["output"] == ["1/3", "5/9", "5/9", "5/9"]
    code, payload = run(capsys, "moment", "--map", "mu_tilde", "--z", "1;0;0;0;0;0")
    assert code == EXIT_OK
    assert payload["map"] == "mu_tilde"
    assert payload["input"] == [[1.0, 0.0]] + [[0.0, 0.0]] * 5
    assert payload["output"] == pytest.approx([1, 1, 0, 0])


def test_moment_needs_input(capsys):
    code, _ = run(capsys, "moment", "--map", "mu_hat")
    assert code == EXIT_USAGE


def test_fiber(capsys):
    code, payload = run(capsys, "fiber", "m2", "--samples", "0")
    assert code == EXIT_OK
    assert payload["passed"] is True
    code, payload = run(capsys, "fiber", "mq7", "--samples", "5", "--seed", "0x2a")
    assert code == EXIT_OK
    assert payload["seed"] == 42
    assert len(payload["certificates"]) == 5


def test_fiber_chamber_orbit(capsys):
    code, payload = run(capsys, "fiber", "mq5", "--samples", "4", "--orbit", "C-1")
    assert code == EXIT_OK
    assert payload["orbit"] == "C-1"
    assert payload["passed"] is True
    assert main(["fiber", "mq5", "--orbit", "C-4"]) == EXIT_USAGE
    capsys.readouterr()


def test_jacobian(capsys):
    code, payload = run(capsys, "jacobian", "--samples", "4")
    assert code == EXIT_OK
    assert [p["jacobian_rank"] for p in payload["points"]] == [3] * 7


def test_transition(capsys):
    code, payload = run(capsys, "transition", "--samples", "10")
    assert code == EXIT_OK
    assert payload["determinant"] == -1
    assert payload["matrix"] == [[1, 1, -1], [1, 0, 0], [0, 0, 1]]


def test_triangle(capsys):
    code, payload = run(capsys, "triangle")
    assert code == EXIT_OK
    assert all(image == ["1/3", "5/9", "5/9", "5/9"] for image in payload["vertex_images"])


def test_curve(capsys):
    code, payload = run(capsys, "curve")
    assert code == EXIT_OK
    assert len(payload["points"]) == 3
    code, payload = run(capsys, "curve", "--x0", "0.1", "--x1", "0.1")
    assert code == EXIT_OK
    assert isinstance(payload["points"][0]["feasible"], bool)
    code, _ = run(capsys, "curve", "--x0", "0")
    assert code == EXIT_USAGE


def test_report_only(capsys):
    code, payload = run(capsys, "report", "--only", "transition,center", "--samples", "10")
    assert code == EXIT_OK
    assert [c["name"] for c in payload["criteria"]] == ["transition", "center"]


def test_report_unknown_criterion(capsys):
    code, _ = run(capsys, "report", "--only", "bogus")
    assert code == EXIT_USAGE


def test_json_out(capsys, tmp_path):
    target = tmp_path / "triangle.json"
    code, payload = run(capsys, "triangle", "--json-out", str(target))
    assert code == EXIT_OK
    assert json.loads(target.read_text(encoding="utf-8")) == payload


def test_bad_arguments(capsys):
    assert main(["fiber", "mq9"]) == EXIT_USAGE
    assert main(["triangle", "--tol", "bogus=1e-3"]) == EXIT_USAGE
    assert main(["triangle", "--samples", "-1"]) == EXIT_USAGE
    capsys.readouterr()


def test_tolerance_override_is_scoped(capsys):
    before = settings.tol_identity
    code, _ = run(capsys, "curve", "--tol", "identity=1e-3")
    assert code in (EXIT_OK, EXIT_FAILURE)
    assert settings.tol_identity == before


def test_parse_tolerances():
    assert parse_tolerances(["1e-8"]) == {"identity": 1e-8, "constructive": 1e-8, "pipeline": 1e-8}
    assert parse_tolerances(["rank=1e-4"]) == {"rank": 1e-4}
    with pytest.raises(UsageError):
        parse_tolerances(["rank=-1"])
    with pytest.raises(UsageError):
        parse_tolerances(["x"])


def test_parse_complex_vector():
    assert list(parse_complex_vector("1,2;0;-1.5,0")) == [1 + 2j, 0j, -1.5 + 0j]
    with pytest.raises(UsageError):
        parse_complex_vector("1,2,3")
