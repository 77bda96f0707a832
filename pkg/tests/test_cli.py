import json
from fractions import Fraction

from gjfacets.cli import main
from gjfacets.complex2d import build_delta_complex, face_slacks, zero_set_of_values
from gjfacets.diagram import loads_face_dump
from gjfacets.pwl import write_function, zero_function


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_check_minimal(capsys, tmp_path):
    assert run(capsys, "check-minimal", "psi")[0] == 0
    z = tmp_path / "zero.fun"
    write_function(zero_function(Fraction(1, 2)), z)
    code, out = run(capsys, "check-minimal", str(z))
    assert code == 1 and "pi(f)=1" in out
    bad = tmp_path / "bad.fun"
    bad.write_text("f 1/2\n0 0 zero 0\n")
    assert run(capsys, "check-minimal", str(bad))[0] == 2
    assert run(capsys, "check-minimal", str(tmp_path / "absent.fun"))[0] == 2


def test_check_extreme(capsys, tmp_path, pi_avg):
    code, out = run(capsys, "check-extreme", "psi")
    assert code == 0 and "extreme" in out
    avg = tmp_path / "avg.fun"
    write_function(pi_avg, avg)
    code, out = run(capsys, "--json", "check-extreme", str(avg))
    rep = json.loads(out)
    assert rep["verdicts"]["extremality"] == "not_extreme"
    assert "witness" in rep["certificates"] and rep["certificates"]["eps"]


def test_check_extreme_kzh(capsys):
    code, out = run(capsys, "--json", "check-extreme", "kzh")
    rep = json.loads(out)
    assert rep["verdicts"]["extremality"] == "inconclusive"
    assert rep["certificates"]["uncovered"] == [["219/800", "269/800"], ["371/800", "421/800"]]


def test_compare_e(capsys):
    assert "strict_subset" in run(capsys, "compare-e", "psi", "pi_prime_psi")[1]
    assert "equal" in run(capsys, "compare-e", "psi", "psi", "--mode", "with_limits")[1]
    assert "equal" in run(capsys, "compare-e", "kzh", "kzh_lifted")[1]
    assert run(capsys, "compare-e", "kzh", "kzh_lifted", "--mode", "with_limits")[0] == 2


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["no-such-command"]) == 2
    assert main(["diagram", "psi"]) == 2  # --out missing
    capsys.readouterr()


def test_verify_paper_missing_data(capsys, tmp_path):
    assert run(capsys, "verify-paper", "--data-dir", str(tmp_path))[0] == 2
    assert run(capsys, "verify-paper", "--data-dir", str(tmp_path / "nope"))[0] == 2


def test_json_output_is_deterministic(capsys):
    a = run(capsys, "--json", "check-minimal", "kzh")[1]
    b = run(capsys, "--json", "check-minimal", "kzh")[1]
    assert a == b


def test_diagram_round_trip(capsys, tmp_path, psi):
    out = tmp_path / "psi.svg"
    assert run(capsys, "diagram", "psi", "--out", str(out))[0] == 0
    first = out.read_bytes()
    assert first.startswith(b"<svg") and b"polygon" in first
    dump = loads_face_dump(out.with_suffix(".json").read_text())
    faces = list(build_delta_complex(psi))
    assert len(dump["faces"]) == len(faces)
    for F, d in zip(faces, dump["faces"]):
        assert d["vertices"] == list(F.vertices)
        zs = zero_set_of_values(F.vertices, face_slacks(psi, F))
        assert d["zero_set"]["kind"] == zs.kind and d["zero_set"]["vertices"] == list(zs.vertices)
    assert run(capsys, "diagram", "psi", "--out", str(out))[0] == 0
    assert out.read_bytes() == first


def test_diagram_nf_colors(capsys, tmp_path):
    out = tmp_path / "kzh.svg"
    assert run(capsys, "diagram", "kzh", "--style", "nf_colors", "--out", str(out))[0] == 0
    svg = out.read_text()
    assert "#ffff66" in svg and "#ff4d4d" in svg
    dump = loads_face_dump(out.with_suffix(".json").read_text())
    assert {f["n_F"] for f in dump["faces"]} == {0, 1, 2}


def test_diagram_bad_output(capsys, tmp_path):
    assert run(capsys, "diagram", "psi", "--out", str(tmp_path / "missing" / "x.svg"))[0] == 2
