import subprocess
import sys

import pytest

from padditive import cli
from test_acceptance import CLI_CASES, GOLDEN


@pytest.mark.parametrize("name,argv", CLI_CASES, ids=[n for n, _ in CLI_CASES])
def test_golden(name, argv):
    code, out = cli.run(argv)
    assert code == 0
    assert out == (GOLDEN / f"{name}.txt").read_text()


CERTIFIED = [
    ["reduce", "--cert", "X1^2 + X2^2 + X1"],
    ["normalize", "--cert", "--nvars", "2", "X1^2 + (t)*X2", "X1^4 + X2"],
    ["classify", "--cert", "X1 + X1^2 + (t)*X2^2"],
    ["classify", "--cert", "X1 + X1^2 + X2^2 + (t)*X3^4"],
    ["classify", "--field", "F3(t)", "--cert", "X1 + (t)*X1^3 + X2^3 - (t^2)*X3^3"],
    ["complete", "--field", "F3(t)", "--cert", "X1^3 + (t)*X2^3"],
    ["embed", "--cert", "X1 + X1^4"],
    ["canon", "--cert", "X0 + X0^2 + (t)*X1^2", "Y1^8 + (t)*Y1^2 + Y1^3"],
    ["solve", "--cert", "X1^2 + (t)*X2^2", "t^3 + 1/t"],
    ["solve", "--field", "F3(t)", "--cert", "X1^3 + (t)*X2^3", "t^2"],
    ["witness", "--field", "F5(t)", "--cert"],
    ["witness", "--field", "F2(t,u)", "--constants", "0,1", "--cert"],
    ["standard", "--kind", "V", "--field", "F3(t)"],
    ["standard", "--kind", "alpha-p", "--level", "2", "--field", "F2(t,u)"],
]


@pytest.mark.parametrize("argv", CERTIFIED, ids=lambda a: "-".join(a[:2]))
def test_certificates_check(argv, tmp_path):
    code, out = cli.run(argv)
    assert code == 0, argv
    path = tmp_path / "doc.txt"
    path.write_text(out)
    code, res = cli.run(["check-cert", str(path)])
    assert code == 0
    assert res.endswith("valid: true\n"), res


def test_tampered_certificates_rejected(tmp_path):
    _, out = cli.run(["solve", "--cert", "X1^2 + (t)*X2^2", "t"])
    bad = out.replace("x[1]: ", "x[1]: 1 + ")
    path = tmp_path / "bad.txt"
    path.write_text(bad)
    assert cli.run(["check-cert", str(path)])[1].endswith("valid: false\n")
    _, out = cli.run(["witness", "--cert"])
    path.write_text(out.replace("cert.beta: 1", "cert.beta: 0"))
    assert cli.run(["check-cert", str(path)])[1].endswith("valid: false\n")
    _, out = cli.run(["complete", "X1^4"])
    path.write_text(out.replace(" + (t^3)*X4^4", ""))
    assert cli.run(["check-cert", str(path)])[1].endswith("valid: false\n")


@pytest.mark.parametrize("argv,code", [
    (["classify", "X1^3"], 2),
    (["classify", "--field", "F6(t)", "X1"], 2),
    (["complete", "X1^2 + X2^2"], 3),
    (["embed", "X1^2 + (t)*X2^2"], 3),
])
def test_exit_codes(argv, code):
    assert cli.run(argv)[0] == code


def test_unrepresented_target_is_an_answer():
    code, out = cli.run(["solve", "X1^2 + X2^2", "t"])
    assert code == 0 and "represented: false" in out


def test_stdin_and_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "padditive", "classify"],
                          input="X1 + X1^2 + (t)*X2^2\n", capture_output=True, text=True,
                          timeout=120)
    assert proc.returncode == 0
    assert "permawound: true" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "padditive", "reduce", "--", "-X1^2"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0 and "output:" in proc.stdout


def test_seed_does_not_change_canonical_output():
    outs = {cli.run(["canon", "--seed", str(s), "X1 + X1^2 + (t)*X2^2",
                     "Y1^4 + (t)*Y1^2*Y2^2 + Y1*Y2"])[1].split("seed: ")[1].split("\n", 1)[1]
            for s in range(5)}
    assert len(outs) == 1
