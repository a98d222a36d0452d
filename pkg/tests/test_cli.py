import csv
import io
import json

import numpy as np
import pytest

from haarint import cli, linalg, runner, verify
from haarint.haar_mc import RngStream


def _write(tmp_path, data, name="spec.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def _strip_volatile(report):
    report = dict(report)
    report.pop("timestamp", None)
    report.pop("timings", None)
    return report


class TestExamples:
    def test_trivial_fisher_hartwig_all_routes(self, tmp_path, capsys):
        spec = {"integral": "zfh1", "N": 1, "parameters": {"alpha": 0, "beta": 0},
                "spectra": [[0.3]], "routes": "all", "mc_samples": 20000}
        assert cli.main(["eval", _write(tmp_path, spec)]) == 0
        report = json.loads(capsys.readouterr().out)
        for route in ("closed", "charsum", "mc"):
            assert report["routes"][route]["value"] == pytest.approx([1, 0], abs=1e-12)

    def test_generated_ingham_siegel(self, tmp_path):
        spec = {"integral": "zis1", "N": 3, "parameters": {"alpha": [1.5, 0.3]},
                "generator": {"seed": 4, "rho": 0.5}, "routes": ["closed", "charsum"]}
        report, code = runner.run_file(_write(tmp_path, spec))
        assert code == 0
        assert report["checks"][0]["discrepancy"] < 1e-12

    def test_standard_fisher_hartwig(self, tmp_path):
        spec = {"integral": "fh_standard", "N": 2, "parameters": {"alpha": 1, "beta": 1},
                "routes": ["closed", "mc"], "mc_samples": 100000, "seed": 3}
        report, code = runner.run_file(_write(tmp_path, spec))
        assert code == 0
        assert report["routes"]["closed"]["value"] == pytest.approx([3, 0])

    def test_explicit_matrices(self, tmp_path):
        A = [[[0.2, 0.1], [0.0, 0.0]], [[0.1, 0], [0.3, -0.1]]]
        D = [[[0.1, 0], [0.2, 0.0]], [[0.0, 0.1], [-0.2, 0]]]
        spec = {"integral": "zfh1", "N": 2, "parameters": {"alpha": 1.5, "beta": 0.5},
                "matrices": [A, D], "routes": "all", "mc_samples": 50000}
        report, code = runner.run(runner.ProblemSpec.from_dict(spec))
        assert code == 0 and len(report["checks"]) == 3

    def test_report_deterministic(self, tmp_path):
        spec = {"integral": "zis2", "N": 2, "parameters": {"alpha": 0.8}, "generator": {"seed": 1, "rho": 0.6},
                "routes": ["closed", "mc"], "mc_samples": 30000}
        path = _write(tmp_path, spec)
        a, _ = runner.run_file(path)
        b, _ = runner.run_file(path)
        assert _strip_volatile(a) == _strip_volatile(b)


class TestExitCodes:
    @pytest.mark.parametrize("spec", [
        {"integral": "nope", "N": 1},
        {"integral": "zis1", "N": 0, "spectra": [[0.1]]},
        {"integral": "zis1", "N": 1},
        {"integral": "zis1", "N": 1, "spectra": [[0.1]], "generator": {"seed": 0, "rho": 0.5}},
        {"integral": "zfh1", "N": 1, "parameters": {"alpha": 1}, "spectra": [[0.1]]},
        {"integral": "zis1", "N": 1, "spectra": [[0.1]], "routes": ["quantum"]},
        {"integral": "zis1", "N": 1, "parameters": {"alpha": 0.5}, "generator": {"seed": 0, "rho": 1.5}},
        {"integral": "jis", "N": 1, "spectra": [[0.1]], "routes": ["charsum"]},
        {"integral": "zis1", "N": 1, "spectra": [[0.1]], "colour": "blue"},
    ])
    def test_invalid_spec(self, tmp_path, spec, capsys):
        assert cli.main(["eval", _write(tmp_path, spec)]) == 2

    def test_unreadable(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert cli.main(["eval", str(path)]) == 2
        assert cli.main(["eval", str(tmp_path / "missing.json")]) == 2

    def test_route_failure(self, tmp_path, capsys):
        # Monte Carlo of the Hermitian average only takes integer exponents
        spec = {"integral": "jis", "N": 2, "parameters": {"alpha": 0.5}, "spectra": [[0.2, -0.1]],
                "routes": ["closed", "mc"], "mc_samples": 1000}
        assert cli.main(["eval", _write(tmp_path, spec)]) == 1
        report = json.loads(capsys.readouterr().out)
        assert "mc" in report["errors"] and "closed" in report["routes"]


class TestGenerator:
    def test_norm_and_reproducibility(self):
        M = runner.gen_matrix(4, 0.7, RngStream(2))
        assert 0.35 <= np.linalg.norm(M, 2) < 0.7
        assert abs(np.linalg.det(M)) > 0
        np.testing.assert_array_equal(M, runner.gen_matrix(4, 0.7, RngStream(2)))
        assert not np.array_equal(M, runner.gen_matrix(4, 0.7, RngStream(2, 1)))

    def test_command(self, capsys):
        assert cli.main(["gen", "--n", "3", "--rho", "0.5", "--seed", "9"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert len(out["matrix"]) == 3 and 0.25 <= out["norm"] < 0.5
        assert cli.main(["gen", "--n", "0", "--rho", "0.5"]) == 2


class TestOutputs:
    def test_csv_and_file(self, tmp_path):
        spec = {"integral": "zis1", "N": 2, "parameters": {"alpha": 1.2}, "spectra": [[0.2, [0, 0.1]]],
                "routes": ["closed", "charsum"]}
        out, table = tmp_path / "r.json", tmp_path / "r.csv"
        assert cli.main(["eval", _write(tmp_path, spec), "-o", str(out), "--csv", str(table)]) == 0
        rows = list(csv.reader(io.StringIO(table.read_text())))
        assert rows[0][0] == "record" and {r[0] for r in rows[1:]} == {"route", "check"}
        assert json.loads(out.read_text())["pass"] is True

    def test_complex_encoding(self):
        assert runner.encode_complex(1 - 2j) == [1.0, -2.0]
        assert runner.parse_complex([1, -2]) == 1 - 2j
        assert runner.parse_complex(3) == 3
        with pytest.raises(runner.SpecError):
            runner.parse_complex("x")

    def test_mc_command(self, tmp_path, capsys):
        spec = {"integral": "zis1", "N": 2, "parameters": {"alpha": 1}, "spectra": [[0.2, -0.1]]}
        assert cli.main(["mc", _write(tmp_path, spec), "--samples", "20000", "--seed", "5"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert set(report["routes"]) == {"mc"} and report["provenance"]["seed"] == 5


class TestVerifyCommand:
    def test_quick_subset(self, capsys):
        assert cli.main(["verify", "--level", "quick", "--criteria", "4,7,8"]) == 0
        err = capsys.readouterr().err
        assert err.count("[PASS]") == 3

    def test_unknown_criterion(self, capsys):
        assert cli.main(["verify", "--criteria", "99"]) == 2


def _pfaffian_negated(M, rtol=1e-12):
    return -_original_pfaffian(M, rtol)


def _pfaffian_flipped_update(M, rtol=1e-12):
    # elimination with the wrong sign on the rank-2 update
    A = np.array(M, dtype=complex)
    n = A.shape[0]
    pf = 1.0 + 0.0j
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(A[k + 1:, k])))
        if kp != k + 1:
            A[[k + 1, kp], :] = A[[kp, k + 1], :]
            A[:, [k + 1, kp]] = A[:, [kp, k + 1]]
            pf = -pf
        if A[k + 1, k] == 0:
            return 0j
        pf *= A[k, k + 1]
        if k + 2 < n:
            tau = A[k, k + 2:] / A[k, k + 1]
            col = A[k + 2:, k + 1].copy()
            A[k + 2:, k + 2:] -= np.outer(tau, col) - np.outer(col, tau)
    return complex(pf)


_original_pfaffian = linalg.pfaffian


class TestMutation:
    """The acceptance checks must notice a broken Pfaffian."""

    def test_sign_flip_caught(self, monkeypatch):
        monkeypatch.setattr(linalg, "pfaffian", _pfaffian_negated)
        c10 = verify.run_criterion(10, "quick")
        c11 = verify.run_criterion(11, "quick")
        assert not c10.passed and not c11.passed
        schur = [r for r in c10.records if r["label"].startswith("Schur-Pfaff")]
        assert schur and not any(r["pass"] for r in schur)

    def test_update_flip_caught(self, monkeypatch):
        monkeypatch.setattr(linalg, "pfaffian", _pfaffian_flipped_update)
        c10 = verify.run_criterion(10, "quick")
        squared = [r for r in c10.records if r["label"].startswith("Pf^2")]
        assert squared and not all(r["pass"] for r in squared)
