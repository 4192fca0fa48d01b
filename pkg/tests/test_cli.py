import io
import subprocess
import sys

import numpy as np
import pytest

from almostnet.cli import main
from almostnet.generator import derive_params, generate_array
from almostnet.pointfile import PointFile, PointFileError, read_pointfile, write_pointfile
from almostnet.points import PointSet


def run(capsys, *argv):
    rc = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return rc, out, err


@pytest.fixture
def small(tmp_path, capsys):
    path = tmp_path / "small.anet"
    rc, _, _ = run(capsys, "gen", "--q", 2, "--d", 2, "--m", 2, "--n", 10, "--seed", 1, "--out", path)
    assert rc == 0
    return path


class TestGen:
    def test_record_count(self, small):
        pf = read_pointfile(small)
        assert len(pf.points) == 2048 and pf.params["seed"] == "1"
        assert pf.params["basis"] == "11001;10011"

    def test_byte_identical(self, tmp_path, capsys):
        a, b = tmp_path / "a.anet", tmp_path / "b.anet"
        for p in (a, b):
            run(capsys, "gen", "--q", 3, "--d", 2, "--m", 3, "--n", 9, "--t", 2, "--seed", 4, "--out", p)
        assert a.read_bytes() == b.read_bytes()

    def test_bad_params(self, tmp_path, capsys):
        rc, _, err = run(capsys, "gen", "--q", 4, "--d", 2, "--m", 1, "--n", 8, "--out", tmp_path / "x")
        assert rc == 2 and "prime" in err

    def test_verified_header(self, tmp_path, capsys):
        out = tmp_path / "v.anet"
        rc, text, _ = run(capsys, "gen", "--q", 2, "--d", 2, "--m", 256, "--n", 10, "--verified", 1.0, "--out", out)
        pf = read_pointfile(out)
        assert rc == 0 and pf.comments["attempts"] == "1"
        assert float(pf.comments["eps_obs"]) <= 1.0 and "eps_obs=" in text

    def test_verified_exhausted(self, tmp_path, capsys):
        rc, _, err = run(capsys, "gen", "--q", 2, "--d", 2, "--m", 2, "--n", 9, "--verified", 0,
                         "--max-retries", 2, "--out", tmp_path / "x")
        assert rc == 1 and "best eps" in err

    def test_floats(self, tmp_path, capsys):
        out, fl = tmp_path / "f.anet", tmp_path / "f.csv"
        run(capsys, "gen", "--q", 3, "--d", 2, "--m", 1, "--n", 8, "--t", 2, "--floats", fl, "--out", out)
        ps = read_pointfile(out).points
        vals = np.loadtxt(fl, delimiter=",")
        D = ps.D
        exact = ps.digits().astype(np.float64) @ (3.0 ** -np.arange(1, D + 1))
        assert vals.shape == (len(ps), 2)
        assert np.all(np.abs(vals - exact) < 3.0**-D)

    def test_perturb(self, tmp_path, capsys):
        out = tmp_path / "p.anet"
        run(capsys, "gen", "--q", 2, "--d", 2, "--m", 2, "--n", 10, "--perturb", "--perturb-digits", 8, "--out", out)
        pf = read_pointfile(out)
        assert pf.points.D == 20 + 8 and pf.params["perturb_digits"] == "8"
        rc, _, _ = run(capsys, "verify", out, "--threshold", 100)
        assert rc == 0

    def test_gen_csv(self, tmp_path, capsys):
        csv = tmp_path / "g.csv"
        run(capsys, "gen", "--q", 2, "--d", 2, "--m", 1, "--n", 8, "--csv", csv, "--out", tmp_path / "g.anet")
        head, row = csv.read_text().splitlines()
        assert head.split(",")[:2] == ["out", "N"] and row.split(",")[1] == "256"


class TestVerify:
    def test_pass_and_csv(self, tmp_path, capsys):
        out = tmp_path / "t.anet"
        run(capsys, "gen", "--q", 2, "--d", 2, "--m", 2048, "--n", 8, "--out", out)
        csv = tmp_path / "r.csv"
        rc, text, _ = run(capsys, "verify", out, "--csv", csv)
        assert rc == 0 and "passed=True" in text
        head, row = csv.read_text().splitlines()
        assert head.endswith("threshold,passed") and row.endswith("True")

    def test_threshold_zero(self, small, capsys):
        rc, text, err = run(capsys, "verify", small, "--threshold", 0)
        assert rc == 1 and "passed=False" in text and "worst box" in err

    def test_truncated(self, small, tmp_path, capsys):
        bad = tmp_path / "bad.anet"
        bad.write_bytes(small.read_bytes()[:-7])
        rc, _, err = run(capsys, "verify", bad)
        assert rc == 2 and "error" in err

    def test_missing_n(self, tmp_path, capsys):
        path = tmp_path / "bare.anet"
        write_pointfile(path, PointFile(PointSet(np.zeros((4, 2), dtype=np.uint64), 2, 4)))
        rc, _, err = run(capsys, "verify", path, "--m", 1)
        assert rc == 2 and "--n" in err

    def test_threads(self, small, capsys):
        _, a, _ = run(capsys, "verify", small, "--threads", 1)
        _, b, _ = run(capsys, "verify", small, "--threads", 4)
        assert a == b


class TestCheckNetAndCert:
    @pytest.fixture
    def q3(self, tmp_path, capsys):
        path = tmp_path / "q3.anet"
        run(capsys, "gen", "--q", 3, "--d", 2, "--m", 1, "--n", 10, "--t", 2, "--out", path)
        return path

    def test_check_net(self, q3, capsys):
        rc, text, _ = run(capsys, "check-net", q3, "--level", 2, "--mu", 81, "--block-size", 729)
        assert rc == 0 and "blocks=81" in text and "failures=0" in text

    def test_check_net_failure(self, tmp_path, capsys):
        path = tmp_path / "zeros.anet"
        write_pointfile(path, PointFile(PointSet(np.zeros((18, 2), dtype=np.uint64), 3, 4)))
        rc, text, _ = run(capsys, "check-net", path, "--level", 1, "--mu", 3, "--block-size", 9)
        assert rc == 1 and "expected 3" in text and "failures=2" in text

    def test_bad_block_size(self, q3, capsys):
        rc, _, _ = run(capsys, "check-net", q3, "--level", 2, "--mu", 81, "--block-size", 700)
        assert rc == 2

    def test_cert(self, q3, tmp_path, capsys):
        block = tmp_path / "block.anet"
        pf = read_pointfile(q3)
        write_pointfile(block, PointFile(pf.points[:729], {}, {}))
        rc, text, _ = run(capsys, "cert", block, "--k", 1, "--eps", 0, "--n", 2)
        assert rc == 0 and "passed=True" in text and text.startswith("pair,J1,J2")

    def test_cert_k_range(self, q3, capsys):
        rc, _, err = run(capsys, "cert", q3, "--k", 2, "--eps", 0.5)
        assert rc == 2 and "d/2" in err


class TestListings:
    def test_irreducibles(self, capsys):
        rc, text, _ = run(capsys, "irreducibles", "--q", 2, "--t", 4, "--count", 3)
        assert rc == 0 and text.split() == ["11001", "10011", "11111"]

    def test_too_many(self, capsys):
        rc, _, err = run(capsys, "irreducibles", "--q", 2, "--t", 4, "--count", 4)
        assert rc == 2 and "only 3 exist" in err

    def test_selftest(self, capsys, tmp_path):
        csv = tmp_path / "s.csv"
        rc, text, _ = run(capsys, "selftest", "--q", 2, "--d", 1, "--t", 4, "--n", 12, "--trials", 200, "--csv", csv)
        assert rc == 0 and "FAIL" not in text and text.strip().endswith("passed=True")
        assert csv.read_text().startswith("item,passed,detail")


class TestPointFile:
    def test_round_trip(self, tmp_path):
        pts = generate_array(derive_params(5, 2, 1, 6, t=2, seed=2))
        path = tmp_path / "r.anet"
        write_pointfile(path, PointFile(pts, {"n": 6}, {"note": "x"}))
        pf = read_pointfile(path)
        assert pf.points == pts and pf.comments == {"note": "x"} and pf.get_int("n") == 6

    def test_comma_format(self, tmp_path):
        rng = np.random.default_rng(0)
        digits = rng.integers(0, 13, size=(20, 3, 5), dtype=np.uint8)
        ps = PointSet.from_digits(digits, 13)
        path = tmp_path / "c.anet"
        write_pointfile(path, PointFile(ps))
        text = path.read_text()
        assert "format=comma" in text
        assert read_pointfile(path).points == ps

    @pytest.mark.parametrize("mutate", [
        lambda b: b.replace(b"ANET1", b"ANET2", 1),
        lambda b: b.replace(b"\nend\n", b"\n", 1),
        lambda b: b.replace(b"\nN=4\n", b"\nN=5\n", 1),
        lambda b: b[:-1] + b"2",
    ])
    def test_malformed(self, tmp_path, mutate):
        path = tmp_path / "m.anet"
        write_pointfile(path, PointFile(PointSet(np.arange(8, dtype=np.uint64).reshape(4, 2), 3, 3)))
        raw = path.read_bytes()
        path.write_bytes(mutate(raw))
        with pytest.raises(PointFileError):
            read_pointfile(path)

    def test_stream_write(self):
        buf = io.BytesIO()
        write_pointfile(buf, PointFile(PointSet(np.zeros((1, 1), dtype=np.uint64), 2, 3)))
        assert buf.getvalue().endswith(b"end\n000\n")


def test_module_entry(small):
    out = subprocess.run([sys.executable, "-m", "almostnet", "verify", str(small), "--threshold", "10"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "passed=True" in out.stdout
