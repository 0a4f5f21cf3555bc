import json
import subprocess
import sys
from pathlib import Path

import pytest

from symprove.certificate import CertificateFormatError, parse_certificate, same_content
from symprove.cli import main
from symprove.files import FileFormatError, parse_coefficients, parse_ideal_file
from symprove.prk import PRKSpec
from symprove.text import PolynomialSyntaxError

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


# -- prove -----------------------------------------------------------------------


def test_prove_det_s2(capsys, tmp_path):
    out_file = tmp_path / "det2.json"
    code, out, _ = run(capsys, "prove", "--kind", "det", "--stages", 2, "--out", out_file)
    assert code == 0 and out.startswith("SYMPLECTIC-VERIFIED")
    cert = json.loads(out_file.read_text())
    assert cert["verdict"] == "SYMPLECTIC-VERIFIED"
    assert cert["stage2"]["numerator_normal_form"] == "0"
    assert cert["stage2"]["reduced_quotient"] == ["0", "1"]
    assert cert["stage1"]["system_size"] == 20 and cert["stage2"]["ideal_size"] == 6


def test_prove_writes_stdout_and_refuses_overwrite(capsys, tmp_path):
    code, out, _ = run(capsys, "prove", "--kind", "stoch", "--stages", 1)
    assert code == 0 and json.loads(out)["system"]["kind"] == "stochastic"
    target = tmp_path / "c.json"
    target.write_text("keep")
    code, _, err = run(capsys, "prove", "--kind", "det", "--stages", 1, "--out", target)
    assert code == 1 and "exists" in err and target.read_text() == "keep"
    code, _, _ = run(capsys, "prove", "--kind", "det", "--stages", 1, "--out", target, "--force")
    assert code == 0 and json.loads(target.read_text())["verdict"] == "SYMPLECTIC-VERIFIED"


def test_prove_not_reduced_exit_3(capsys):
    code, out, _ = run(capsys, "prove", "--kind", "det", "--stages", 1, "--no-identify-mixed-partials")
    assert code == 3 and json.loads(out)["verdict"] == "NOT-REDUCED"
    code, out, _ = run(capsys, "prove", "--kind", "det", "--stages", 1, "--max-pairs", 1)
    assert code == 3 and "budget" in json.loads(out)["stage1"]["error"]


def test_certificates_identical_except_timings(capsys, tmp_path):
    docs = []
    for name in ("a.json", "b.json"):
        run(capsys, "prove", "--kind", "stoch", "--stages", 1, "--cross-check", "--emit-gg", "--out", tmp_path / name)
        docs.append((tmp_path / name).read_text())
    a, b = (parse_certificate(t) for t in docs)
    assert same_content(a, b) and a.cross_check["agree"]
    strip = lambda t: {k: v for k, v in json.loads(t).items() if k != "timings_ms"}  # noqa: E731
    assert strip(docs[0]) == strip(docs[1])


def test_certificate_version_checked(capsys, tmp_path):
    run(capsys, "prove", "--kind", "det", "--stages", 1, "--out", tmp_path / "c.json")
    data = json.loads((tmp_path / "c.json").read_text())
    data["version"] = "2"
    with pytest.raises(CertificateFormatError, match="version"):
        parse_certificate(json.dumps(data))
    data["version"] = "1"
    del data["verdict"]
    with pytest.raises(CertificateFormatError, match="verdict"):
        parse_certificate(json.dumps(data))
    with pytest.raises(CertificateFormatError):
        parse_certificate("[1, 2]")


# -- groebner / reduce --------------------------------------------------------------


def test_groebner_demo(capsys):
    code, out, _ = run(capsys, "groebner", SAMPLES / "demo.ideal")
    assert code == 0 and out == "x - y^2\ny^3 - 1\n"


def test_groebner_parametric(capsys):
    code, out, _ = run(capsys, "groebner", SAMPLES / "param.ideal")
    # S(y^2 - t*x, x*y - t/2) = -t*x^2 + t/2*y gives the third element
    assert code == 0 and out == "x^2 - 1/2*y\nx*y - 1/2*t\ny^2 - t*x\n"


def test_reduce_demo(capsys):
    code, out, _ = run(capsys, "reduce", SAMPLES / "demo.ideal", "--poly", "y^4 - y")
    assert code == 0 and out == "0\n"
    code, out, _ = run(capsys, "reduce", SAMPLES / "demo.ideal", "--poly", "x^2")
    assert code == 0 and out == "y\n"


def test_reduce_bad_poly_is_usage_error(capsys):
    code, _, err = run(capsys, "reduce", SAMPLES / "demo.ideal", "--poly", "x + w")
    assert code == 2 and "unknown identifier 'w'" in err


def test_groebner_budget_exit_3(capsys, tmp_path):
    f = tmp_path / "cyc.ideal"
    f.write_text("vars: x > y > z\nx^3 - y*z\ny^3 - x*z\nz^3 - x*y\n")
    code, _, err = run(capsys, "groebner", f, "--max-pairs", 2)
    assert code == 3 and "budget" in err


# -- coefficient checks -------------------------------------------------------------


def test_check_coeffs(capsys):
    code, out, _ = run(capsys, "check-coeffs", SAMPLES / "lobatto3ab.coeffs", "--kind", "det", "--stages", 2)
    assert code == 0 and out == "all 6 conditions satisfied\n"
    code, out, _ = run(capsys, "check-coeffs", SAMPLES / "stoch_midpoint.coeffs", "--kind", "stoch", "--stages", 1)
    assert code == 0 and out == "all 6 conditions satisfied\n"
    code, out, _ = run(capsys, "check-coeffs", SAMPLES / "euler.coeffs", "--kind", "det", "--stages", 1)
    assert code == 3 and "1 of 2 conditions violated" in out


def test_numeric_check(capsys):
    code, out, _ = run(capsys, "numeric-check", "--kind", "det", "--stages", 2,
                       "--coeffs", SAMPLES / "lobatto3ab.coeffs", "--ham", "pendulum")
    assert code == 0 and "below tolerance" in out
    code, out, _ = run(capsys, "numeric-check", "--kind", "det", "--stages", 1,
                       "--coeffs", SAMPLES / "euler.coeffs", "--ham", "harmonic", "--tol", "1e-5")
    assert code == 3 and "not below" in out
    code, out, _ = run(capsys, "numeric-check", "--kind", "stoch", "--stages", 1,
                       "--coeffs", SAMPLES / "stoch_midpoint.coeffs", "--ham", "harmonic",
                       "--noise", "sin q", "--dB", "-0.1")
    assert code == 0


def test_numeric_check_flag_consistency(capsys):
    code, _, err = run(capsys, "numeric-check", "--kind", "stoch", "--stages", 1,
                       "--coeffs", SAMPLES / "stoch_midpoint.coeffs", "--ham", "harmonic")
    assert code == 2 and "--dB" in err
    code, _, _ = run(capsys, "numeric-check", "--kind", "det", "--stages", 1,
                     "--coeffs", SAMPLES / "midpoint.coeffs", "--ham", "harmonic", "--dB", "0.1")
    assert code == 2


def test_numeric_check_divergence_exit_3(capsys):
    code, _, err = run(capsys, "numeric-check", "--kind", "det", "--stages", 1,
                       "--coeffs", SAMPLES / "midpoint.coeffs", "--ham", "cubic",
                       "--h", "2", "--state", "5,5")
    assert code == 3 and "converge" in err


# -- exit-code contract ------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["prove", "--kind", "ode", "--stages", "2"],
        ["prove", "--kind", "det", "--stages", "0"],
        ["prove", "--kind", "det"],
        ["prove", "--kind", "det", "--stages", "1", "--order2", "weird"],
        ["numeric-check", "--kind", "det", "--stages", "1", "--coeffs", "x", "--ham", "duffing"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "usage" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["groebner", "/nonexistent/file.ideal"],
        ["check-coeffs", "/nonexistent.coeffs", "--kind", "det", "--stages", "1"],
    ],
)
def test_missing_file_exit_1(capsys, argv):
    assert run(capsys, *argv)[0] == 1


@pytest.mark.parametrize(
    "text",
    [
        "x^2 - y\n",
        "vars: x > x\nx\n",
        "vars: x\norder: elim\nx\n",
        "vars: x\nx + y\n",
        "vars: x\nx\nvars: y\n",
        "vars: x\n0\n",
    ],
)
def test_bad_ideal_files_exit_1(capsys, tmp_path, text):
    f = tmp_path / "bad.ideal"
    f.write_text(text)
    code, _, err = run(capsys, "groebner", f)
    assert code == 1 and err.startswith("symprove:")


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("a11 = 1/2\nah11 = 1/2\nb1 = 1\n", "missing coefficients: bh1"),
        ("a11 = 1/2\nah11 = 1/2\nb1 = 1\nbh1 = 1\nc1 = 0\n", "unknown coefficients: c1"),
        ("a11 = 1/2\na11 = 1\n", "assigned twice"),
        ("a11 = 0.5\n", "name = rational"),
        ("a11 = 1/0\n", "zero denominator"),
    ],
)
def test_bad_coefficient_files(capsys, tmp_path, text, fragment):
    f = tmp_path / "bad.coeffs"
    f.write_text(text)
    code, _, err = run(capsys, "check-coeffs", f, "--kind", "det", "--stages", 1)
    assert code == 1 and fragment in err


def test_file_parsers_directly():
    f = parse_ideal_file((SAMPLES / "param.ideal").read_text())
    assert [s.name for s in f.variables] == ["x", "y"] and [s.name for s in f.params] == ["t"]
    assert f.order.kind.value == "grevlex" and len(f.polynomials) == 2
    with pytest.raises(PolynomialSyntaxError) as info:
        parse_ideal_file("vars: x\n\nx + 2y\n")
    assert (info.value.line, info.value.column) == (3, 6)
    with pytest.raises(FileFormatError) as info:
        parse_ideal_file("vars: x\norder: elim\nx\n")
    assert info.value.line == 2
    c = parse_coefficients((SAMPLES / "midpoint.coeffs").read_text(), PRKSpec(1))
    assert c.a[0][0] == c.ah[0][0] == 0.5


def test_console_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "symprove.cli", "reduce", str(SAMPLES / "demo.ideal"), "--poly", "y^4 - y"],
        capture_output=True,
        text=True,
    )
    assert r.returncode == 0 and r.stdout == "0\n"
