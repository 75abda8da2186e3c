import json

import pytest

from psprimes import cli


def run(capsys, *argv):
    rc = cli.main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


class TestExppairCli:
    def test_bourgain_golden(self, capsys):
        rc, out, _ = run(capsys, "exppair", "eval", "--k", "13/84", "--l", "55/84")
        assert rc == 0
        data = out.strip().splitlines()[-1]
        assert "498/569" in data and "569/498" in data

    def test_vdc_golden(self, capsys):
        rc, out, _ = run(capsys, "exppair", "eval", "--k", "1/2", "--l", "1/2")
        assert rc == 0
        assert "8/9" in out and "9/8" in out

    def test_trivial_rejected_exit_2(self, capsys):
        rc, _, err = run(capsys, "exppair", "eval", "--k", "0", "--l", "1")
        assert rc == 2
        assert "4k-2l+1" in err

    def test_search(self, capsys):
        rc, out, _ = run(
            capsys, "exppair", "search", "--seeds", "trivial", "--max-word-len", "1"
        )
        assert rc == 0
        assert "# best_value=8/9" in out
        assert "B(trivial),1/2,1/2,8/9,true" in out

    def test_gamma_analysis_columns(self, capsys):
        rc, out, _ = run(
            capsys, "exppair", "eval", "--k", "1/2", "--l", "1/2", "--gamma", "19/20"
        )
        assert rc == 0
        assert "11/240" in out  # max_delta at gamma = 19/20


class TestPsCli:
    def test_count_row_layout(self, capsys):
        rc, out, _ = run(capsys, "ps", "count", "--x", "1000", "--c", "1.5")
        assert rc == 0
        lines = out.strip().splitlines()
        header = [l for l in lines if l.startswith("x,")]
        assert header == ["x,c,q,a,count,main_term,ratio"]

    def test_ap_requires_coprime(self, capsys):
        rc, _, err = run(
            capsys, "ps", "ap", "--x", "1000", "--c", "1.1", "--q", "4", "--a", "2"
        )
        assert rc == 2
        assert "gcd" in err

    def test_beatty_literals(self, capsys):
        rc, out, _ = run(
            capsys, "ps", "beatty", "--x", "1000", "--c", "1.2",
            "--alpha", "sqrt2", "--beta", "0.3",
        )
        assert rc == 0
        rc2, _, err = run(
            capsys, "ps", "beatty", "--x", "1000", "--c", "1.2", "--alpha", "1.5"
        )
        assert rc2 == 2


class TestOtherSubcommands:
    def test_goldbach3_defaults_remaining_exponents(self, capsys):
        rc, out, _ = run(capsys, "goldbach3", "--N", "10001", "--c1", "1.01")
        assert rc == 0
        row = out.strip().splitlines()[-1]
        assert row.startswith("10001,1.01,1.01,1.01,")

    def test_singular_series_even_zero(self, capsys):
        rc, out, _ = run(capsys, "singular-series", "--N", "10", "--P", "1000")
        assert rc == 0
        assert ",0.0," in out.strip().splitlines()[-1]

    def test_hb_verify_golden(self, capsys):
        rc, out, _ = run(capsys, "hb", "verify", "--x", "2000", "--J", "3")
        assert rc == 0
        header = [l for l in out.splitlines() if l.startswith("x,")][0]
        row = out.strip().splitlines()[-1]
        cols = dict(zip(header.split(","), row.split(",")))
        assert cols["mismatches"] == "0"

    def test_expsum_theorem_columns(self, capsys):
        rc, out, _ = run(
            capsys, "expsum", "theorem", "--x", "1024", "--c", "1.1",
            "--alpha", "sqrt2", "--H", "2",
        )
        assert rc == 0
        assert "x,H,alpha,u,c,value,value_over_x" in out

    def test_expsum_vdc_h_zero_exit_2(self, capsys):
        rc, _, err = run(
            capsys, "expsum", "vdc", "--h", "0", "--c", "1.1", "--N", "1024"
        )
        assert rc == 2

    def test_expsum_vaaler_rows(self, capsys):
        rc, out, _ = run(capsys, "expsum", "vaaler", "--H", "4")
        assert rc == 0
        rows = [l for l in out.strip().splitlines() if not l.startswith("#")]
        assert len(rows) == 1 + 5  # header + h = 0..4

    def test_expsum_bilinear(self, capsys):
        rc, out, _ = run(
            capsys, "expsum", "bilinear", "--kind", "TypeI", "--x", "30",
            "--c", "1.1", "--M", "5", "--N", "5", "--h", "2", "--bn", "log",
        )
        assert rc == 0

    def test_expsum_bprocess(self, capsys):
        rc, out, _ = run(
            capsys, "expsum", "bprocess", "--h", "8", "--c", "1.1", "--N", "2048"
        )
        assert rc == 0
        assert "direct_re" in out

    def test_bf_scan_provenance_max(self, capsys):
        rc, out, _ = run(
            capsys, "bf", "scan", "--N", "4096", "--c", "1.1", "--grid-size", "8"
        )
        assert rc == 0
        assert "# max_discrepancy=" in out


class TestCliPlumbing:
    def test_unknown_subcommand_exit_64(self, capsys):
        rc, _, _ = run(capsys, "nonsense")
        assert rc == 64

    def test_missing_required_flag_exit_64(self, capsys):
        rc, _, _ = run(capsys, "ps", "count", "--c", "1.1")
        assert rc == 64

    def test_config_overrides_flags(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("x=200\nc=1.5\n")
        rc, out, _ = run(
            capsys, "ps", "count", "--x", "50", "--c", "1.9", "--config", str(cfg)
        )
        assert rc == 0
        assert out.strip().splitlines()[-1].startswith("200,1.5,")

    def test_config_unknown_key_exit_64(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("bogus=1\n")
        rc, _, err = run(
            capsys, "ps", "count", "--x", "50", "--c", "1.5", "--config", str(cfg)
        )
        assert rc == 64
        assert "unknown key" in err

    def test_config_malformed_line_exit_64(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("just-some-words\n")
        rc, _, _ = run(
            capsys, "ps", "count", "--x", "50", "--c", "1.5", "--config", str(cfg)
        )
        assert rc == 64

    def test_identical_config_byte_identical_output(self, tmp_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        for path in (out1, out2):
            rc = cli.main(
                ["exppair", "eval", "--k", "13/84", "--l", "55/84",
                 "--output", str(path)]
            )
            assert rc == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_json_format(self, capsys):
        rc, out, _ = run(
            capsys, "ps", "count", "--x", "1000", "--c", "1.5", "--format", "json"
        )
        assert rc == 0
        payload = json.loads(out)
        assert payload["columns"] == ["x", "c", "q", "a", "count", "main_term", "ratio"]
        assert payload["provenance"]["command"] == "ps count"
        assert payload["provenance"]["artifact"].startswith("psprimes ")

    def test_rational_strings_not_decimals(self, capsys):
        rc, out, _ = run(capsys, "exppair", "eval", "--k", "13/84", "--l", "55/84")
        data_rows = [l for l in out.splitlines() if not l.startswith(("#", "word"))]
        assert "0.8752" not in data_rows[0]  # thresholds stay exact

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["--version"])
        assert exc.value.code == 0
