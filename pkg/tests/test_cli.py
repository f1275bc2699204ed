import json
from fractions import Fraction as F

from exclusion.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_verify_ssep(capsys):
    code, out = run(capsys, "verify", "--model", "ssep", "--alpha", "1",
                    "--gamma", "1/2", "--beta", "1", "--delta", "1/3",
                    "--samples", "3", "--seed", "7")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == 1
    assert doc["counts"]["fail"] == 0
    assert doc["counts"]["pass"] > 0


def test_verify_tasep_skips_crossing(capsys):
    code, out = run(capsys, "verify", "--model", "tasep", "--samples", "2",
                    "--seed", "3")
    assert code == 0
    doc = json.loads(out)
    skipped = {c["check"] for c in doc["checks"] if c["status"] == "Skipped"}
    assert "r.crossing" in skipped
    assert "reflection.Ktilde" in skipped
    reasons = {c["reason"] for c in doc["checks"]
               if c["check"] == "r.crossing" and c["status"] == "Skipped"}
    assert any("partial transpose" in r for r in reasons)


def test_malformed_rational_exits_2(capsys):
    code, _ = run(capsys, "verify", "--model", "asep", "--q", "1/0")
    assert code == 2


def test_steady_tasep_weights(capsys):
    code, out = run(capsys, "steady", "--model", "tasep", "--L", "2", "--exact")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "config,weight"
    assert lines[1:5] == ["00,1/5", "01,1/5", "10,2/5", "11,1/5"]
    assert "site,density,current_lat,current_eva" in lines


def test_steady_both_methods_rd(capsys):
    code, out = run(capsys, "steady", "--model", "rd", "--kappa", "3",
                    "--L", "3", "--method", "both", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert all(float(w["rel_diff"]) <= 1e-10 for w in doc["weights"])
    assert float(doc["max_rel_diff"]) <= 1e-10


def test_steady_ansatz_unsupported_model(capsys):
    code, _ = run(capsys, "steady", "--model", "ssep", "--method", "ansatz")
    assert code == 3


def test_steady_kernel_cap(capsys):
    code, _ = run(capsys, "steady", "--model", "ssep", "--L", "11")
    assert code == 3


def test_profile_csv_columns(capsys):
    code, out = run(capsys, "profile", "--model", "rd", "--kappa", "3",
                    "--L", "8", "--asymptotics")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "site,density,current_lat,current_eva,density_asymptotic"
    assert len(lines) == 9
    # last site has no current columns
    assert lines[-1].split(",")[2] == ""


def test_profile_requires_rd(capsys):
    code, _ = run(capsys, "profile", "--model", "ssep")
    assert code == 3


def test_profile_degenerate_rates(capsys):
    # alpha = gamma makes c = 0: closed-form boundary vectors degenerate
    code, _ = run(capsys, "profile", "--model", "rd", "--alpha", "1",
                  "--gamma", "1")
    assert code == 3


def test_profile_friedel_signs(capsys):
    code, out = run(capsys, "profile", "--model", "rd", "--kappa", "1/2",
                    "--L", "20", "--exact")
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()[1:7]]
    devs = [F(r[1]) - F(1, 2) for r in rows]
    assert all(devs[k] * devs[k + 1] < 0 for k in range(5))


def test_transfer_commutation(capsys):
    code, out = run(capsys, "transfer", "--model", "asep", "--q", "2",
                    "--L", "3", "--check", "commutation", "--x", "2",
                    "--x2", "5")
    assert code == 0
    doc = json.loads(out)
    assert doc["checks"][0]["status"] == "Pass"


def test_transfer_eigenvalue_prints_lambda(capsys):
    code, out = run(capsys, "transfer", "--model", "ssep", "--L", "2",
                    "--theta", "1/2,2/3", "--check", "eigenvalue", "--x", "3",
                    "--x2", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["lambda"] == "289/256"
    assert doc["checks"][0]["status"] == "Pass"


def test_transfer_inhomogeneous_eigenvector(capsys):
    code, out = run(capsys, "transfer", "--model", "rd", "--kappa", "2",
                    "--L", "2", "--theta", "2,5",
                    "--check", "inhomogeneous-eigenvector")
    assert code == 0
    doc = json.loads(out)
    assert all(c["status"] == "Pass" for c in doc["checks"])


def test_truncation_cap_nonconvergence_exits_3(capsys):
    code, _ = run(capsys, "transfer", "--model", "rd", "--kappa", "2",
                  "--L", "2", "--theta", "2,5",
                  "--check", "inhomogeneous-eigenvector",
                  "--truncation-cap", "12")
    assert code == 3


def test_transfer_theta_pole_collision_exits_3(capsys):
    # at kappa=3 the dual boundary matrix has a genuine pole at x = 1/2
    code, _ = run(capsys, "transfer", "--model", "rd", "--kappa", "3",
                  "--L", "2", "--theta", "2,3",
                  "--check", "inhomogeneous-eigenvector")
    assert code == 3


def test_byte_identical_reruns(tmp_path, capsys):
    f1, f2 = tmp_path / "a.json", tmp_path / "b.json"
    for f in (f1, f2):
        code = main(["verify", "--model", "ssep", "--samples", "2",
                     "--seed", "11", "--out", str(f)])
        assert code == 0
        capsys.readouterr()
    assert f1.read_bytes() == f2.read_bytes()


def test_exact_flag_rational_cells(capsys):
    code, out = run(capsys, "profile", "--model", "rd", "--kappa", "3",
                    "--L", "4", "--exact")
    assert code == 0
    cell = out.splitlines()[1].split(",")[1]
    assert "/" in cell  # exact rational, not float


def test_bench_runs(capsys):
    code, out = run(capsys, "bench", "--model", "tasep", "--L", "3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "task,model,L,seconds"
    tasks = {line.split(",")[0] for line in lines[1:]}
    assert {"build_markov", "steady_nullspace", "steady_ansatz",
            "transfer_build", "transfer_commutation"} <= tasks
