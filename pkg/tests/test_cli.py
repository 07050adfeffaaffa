import json

import pytest

from cpamac.cli import CSV_HEADER, main


def run(tmp_path, *argv):
    out = tmp_path / "out.csv"
    code = main(list(argv) + ["--out", str(out)])
    return code, out, out.with_name(out.name + ".manifest.json")


class TestCapacityCommand:
    def test_baseline_saturates(self, tmp_path):
        # p2 ratio 0.4 keeps the scale pair uniquely decodable, so the rate
        # saturates at log2(16); the equal-power pair would merge sum points
        # (swap collisions) and cap out at 3 bits instead
        code, out, manifest = run(
            tmp_path, "capacity", "--constellation", "qpsk", "--scheme", "baseline",
            "--snr-db", "40", "--p2-ratio", "0.4", "--samples", "2000", "--seed", "7",
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == CSV_HEADER
        fields = lines[1].split(",")
        assert fields[0] == "baseline" and fields[1] == "qpsk"
        assert abs(float(fields[6]) - 4.0) < 0.02
        assert manifest.exists()

    def test_equal_power_baseline_collision_cap(self, tmp_path):
        code, out, _ = run(
            tmp_path, "capacity", "--constellation", "qpsk", "--scheme", "baseline",
            "--snr-db", "40", "--samples", "2000", "--seed", "7",
        )
        assert code == 0
        assert abs(float(out.read_text().splitlines()[1].split(",")[6]) - 3.0) < 0.02

    def test_rerun_byte_identical(self, tmp_path):
        args = ("capacity", "--constellation", "qpsk", "--scheme", "cpa", "--alpha", "0.43",
                "--snr-db", "8", "--samples", "1000", "--seed", "7")
        (tmp_path / "a").mkdir()
        (tmp_path / "b").mkdir()
        code1, out1, m1 = run(tmp_path / "a", *args)
        code2, out2, m2 = run(tmp_path / "b", *args)
        assert code1 == code2 == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_workers_do_not_change_bytes(self, tmp_path):
        base = ("capacity", "--constellation", "8psk", "--scheme", "cpa", "--alpha", "0.65",
                "--snr-db", "8", "--samples", "500", "--seed", "3")
        rows = {}
        for w in (1, 4, 16):
            d = tmp_path / f"w{w}"
            d.mkdir()
            code, out, _ = run(d, *base, "--workers", str(w))
            assert code == 0
            rows[w] = out.read_bytes()
        assert rows[1] == rows[4] == rows[16]

    def test_fixed_offsets(self, tmp_path):
        code, out, _ = run(
            tmp_path, "capacity", "--constellation", "qpsk", "--scheme", "baseline",
            "--snr-db", "10", "--samples", "500", "--theta1", "30", "--theta2", "0",
        )
        assert code == 0
        assert float(out.read_text().splitlines()[1].split(",")[6]) > 0

    def test_snr_range_syntax(self, tmp_path):
        code, out, _ = run(
            tmp_path, "capacity", "--constellation", "bpsk", "--scheme", "baseline",
            "--snr-db", "0:5:10", "--samples", "200",
        )
        assert code == 0
        assert len(out.read_text().splitlines()) == 4  # header + 3 SNR points


class TestAlphaStarCommand:
    def test_reference_points(self, tmp_path):
        code, out, _ = run(
            tmp_path, "alpha-star", "--constellation", "qpsk", "--snr-db", "8",
        )
        assert code == 0
        fields = out.read_text().splitlines()[1].split(",")
        assert float(fields[4]) == pytest.approx(0.43, abs=1e-9)
        assert fields[6] == ""  # no capacity on metric-only rows

    def test_8psk_10db(self, tmp_path):
        code, out, _ = run(tmp_path, "alpha-star", "--constellation", "8psk", "--snr-db", "10")
        assert code == 0
        assert float(out.read_text().splitlines()[1].split(",")[4]) == pytest.approx(0.64, abs=1e-9)


class TestErrors:
    def test_missing_constellation_is_usage_error(self, tmp_path):
        code = main(["capacity", "--snr-db", "8", "--out", str(tmp_path / "x.csv")])
        assert code == 1

    def test_bad_flag_is_usage_error(self):
        assert main(["capacity", "--no-such-flag"]) == 1

    def test_unknown_command_is_usage_error(self):
        assert main(["frobnicate"]) == 1

    def test_malformed_file_names_line(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("1 0\nnot numbers\n")
        code = main([
            "capacity", "--constellation-file", str(bad), "--snr-db", "8",
            "--samples", "100", "--out", str(tmp_path / "x.csv"),
        ])
        assert code == 1
        err = capsys.readouterr().err
        assert "bad.txt:2" in err

    def test_nan_exit_code(self, tmp_path, monkeypatch):
        import cpamac.cli as climod

        def fake_rows(args):
            return [climod._row("baseline", "qpsk", 8.0, 1.0, bits=float("nan"), se=0.0)]

        # the parser binds the command handler at build time, so patching the
        # module attribute before main() reroutes the capacity command
        monkeypatch.setattr(climod, "cmd_capacity", fake_rows)
        code = climod.main([
            "capacity", "--constellation", "qpsk", "--out", str(tmp_path / "x.csv"),
        ])
        assert code == 2


class TestManifest:
    def test_round_trip_fields(self, tmp_path):
        code, out, manifest = run(
            tmp_path, "capacity", "--constellation", "qpsk", "--scheme", "baseline",
            "--snr-db", "6", "--samples", "300", "--seed", "42",
        )
        data = json.loads(manifest.read_text())
        assert data["command"] == "capacity"
        assert data["seed"] == 42
        assert data["samples"] == 300
        assert data["backend"] in ("numba", "numpy")
        assert "workers" not in data  # execution detail, not part of the result

    def test_manifest_stable_across_output_paths(self, tmp_path):
        # manifests carry science parameters only, so runs that differ just in
        # destination are byte-identical
        args = ("alpha-star", "--constellation", "qpsk", "--snr-db", "8")
        (tmp_path / "a").mkdir()
        (tmp_path / "b").mkdir()
        _, _, m1 = run(tmp_path / "a", *args)
        _, _, m2 = run(tmp_path / "b", *args)
        assert m1.read_bytes() == m2.read_bytes()


class TestReproduceSmall:
    def test_table1_shape(self, tmp_path):
        code, out, _ = run(tmp_path, "reproduce", "table1")
        assert code == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 1 + 16 * 4  # header + 16 SNRs x 4 constellations
        consts = {ln.split(",")[1] for ln in lines[1:]}
        assert consts == {"qpsk", "8psk", "16psk", "16qam"}
