# Copyright (c) 2025 CoReason, Inc.
#
# This software is proprietary and dual-licensed.
# Licensed under the Prosperity Public License 3.0 (the "License").
# A copy of the license is available at https://prosperitylicense.com/versions/3.0.0
# For details, see the LICENSE file.
# Commercial use beyond a 30-day trial requires a separate license.
#
# Source Code: https://github.com/CoReason-AI/coreason_affine

import csv
import io
import json
from pathlib import Path

import pytest

from coreason_affine.cli import app
from coreason_affine.cli.app import build_parser, main
from coreason_affine.cli.schemas import RunConfig
from coreason_affine.profiles import sample_laguerre_profile


def test_kernel_diagonal(capsys: pytest.CaptureFixture[str]) -> None:
    """K(z, z) = 1 under Diagonal1."""
    assert main(["kernel", "--B", "3.5", "--n", "1", "--z", "0.3+1.2i", "--w", "0.3+1.2i"]) == 0
    out = capsys.readouterr().out
    assert "modulus: 1\n" in out
    assert "value (projection):" in out
    assert "jacobi form:" in out


def test_kernel_check_quadrature(capsys: pytest.CaptureFixture[str]) -> None:
    """Closed form and quadrature agree at (i, 2i) for alpha = 6."""
    assert main(["kernel", "--alpha", "6", "--n", "0", "--z", "i", "--w", "2i", "--check-quadrature"]) == 0
    out = capsys.readouterr().out
    difference = float(out.split("difference:")[1].split()[0])
    assert difference < 1e-6


def test_kernel_level_above_bound(capsys: pytest.CaptureFixture[str]) -> None:
    """n above floor(B - 1/2) is a usage error citing the bound."""
    assert main(["kernel", "--B", "0.6", "--n", "1", "--z", "i", "--w", "i"]) == 2
    assert "floor(B - 1/2)" in capsys.readouterr().err


def test_kernel_point_off_the_half_plane() -> None:
    """Points need a positive imaginary part."""
    assert main(["kernel", "--alpha", "2", "--z", "0.3-1.2i", "--w", "i"]) == 2
    assert main(["kernel", "--alpha", "2", "--z", "nonsense", "--w", "i"]) == 2


def test_kernel_needs_exactly_one_family() -> None:
    """Choosing both --B and --alpha, or neither, is a usage error."""
    assert main(["kernel", "--B", "3.5", "--alpha", "6", "--z", "i", "--w", "i"]) == 2
    assert main(["kernel", "--z", "i", "--w", "i"]) == 2


def test_kernel_from_profile_file(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    """A sampled profile file is evaluated by quadrature."""
    xi, values = sample_laguerre_profile(6.0, 0)
    path = tmp_path / "profile.txt"
    path.write_text("".join(f"{x!r} {v.real!r} {v.imag!r}\n" for x, v in zip(xi, values, strict=True)))
    argv = ["kernel", "--profile", str(path), "--decay-exponent", "3", "--z", "i", "--w", "i"]
    assert main(argv) == 0
    out = capsys.readouterr().out
    modulus = float(out.split("modulus:")[1].split()[0])
    assert modulus == pytest.approx(1.0, abs=1e-6)
    assert "jacobi form:" not in out


def test_profile_file_missing() -> None:
    """An unreadable profile file is a usage error."""
    argv = ["kernel", "--profile", "/nonexistent/profile.txt", "--decay-exponent", "1", "--z", "i", "--w", "i"]
    assert main(argv) == 2


def test_constants_alpha(capsys: pytest.CaptureFixture[str]) -> None:
    """C = 2 pi / 3 for alpha = 6, whatever n."""
    assert main(["constants", "--alpha", "6", "--n", "2", "--skip-asymptotic"]) == 0
    out = capsys.readouterr().out
    assert "C: 2.09439510239\n" in out
    assert "density: 0.477464829276\n" in out


def test_constants_maass_matches_laguerre(capsys: pytest.CaptureFixture[str]) -> None:
    """B = 3.5, n = 0 gives alpha = 6 and the same constants; output is stable."""
    assert main(["constants", "--B", "3.5", "--n", "0", "--skip-asymptotic"]) == 0
    first = capsys.readouterr().out
    assert main(["constants", "--B", "3.5", "--n", "0", "--skip-asymptotic"]) == 0
    second = capsys.readouterr().out
    assert first == second
    assert "C: 2.09439510239\n" in first
    assert "alpha: 6\n" in first


def test_constants_levels(capsys: pytest.CaptureFixture[str]) -> None:
    """--levels lists every level; the alpha = 0 level has no finite C."""
    assert main(["constants", "--B", "3.5", "--levels", "--skip-asymptotic"]) == 0
    out = capsys.readouterr().out
    assert "  n=0 alpha=6" in out
    assert "  n=3 alpha=0 eigenvalue=0.25 C=inf density=0" in out


def test_constants_non_admissible_level() -> None:
    """An infinite admissibility constant is a numerical failure."""
    assert main(["constants", "--B", "3.5", "--n", "3", "--skip-asymptotic"]) == 1


def test_variance_radius_outside_unit_interval() -> None:
    """R = 1.2 is a usage error."""
    assert main(["variance", "--B", "3.5", "--n", "0", "--R", "1.2"]) == 2


def test_variance_unknown_method() -> None:
    """Methods are validated."""
    assert main(["variance", "--B", "3.5", "--R", "0.5", "--method", "exact"]) == 2


def _rows(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


def test_variance_files(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    """CSV and JSON outputs follow the fixed schemas."""
    out_csv, out_json = tmp_path / "v.csv", tmp_path / "v.json"
    argv = ["variance", "--B", "3.5", "--n", "0", "--R", "0.3,0.5", "--method", "geometric", "--depth", "2"]
    assert main(argv + ["--out-csv", str(out_csv), "--out-json", str(out_json)]) == 0
    printed = capsys.readouterr().out
    assert out_csv.read_text() == printed
    rows = _rows(printed)
    assert [r["R"] for r in rows] == ["0.3", "0.5"]
    assert rows[0]["v_double"] == ""
    records = json.loads(out_json.read_text())
    assert len(records) == 2
    assert records[1]["normalization"] == "diagonal1"


def test_variance_normalization_scaling(capsys: pytest.CaptureFixture[str]) -> None:
    """Projection values are Diagonal1 values times (alpha / 4 pi)^2."""
    base = ["variance", "--B", "3.5", "--n", "0", "--R", "0.6", "--method", "geometric", "--depth", "2"]
    assert main(base) == 0
    diagonal = float(_rows(capsys.readouterr().out)[0]["v_geometric"])
    assert main(base + ["--normalization", "projection"]) == 0
    projection = float(_rows(capsys.readouterr().out)[0]["v_geometric"])
    assert projection == pytest.approx(diagonal * (6.0 / (4.0 * 3.141592653589793)) ** 2, rel=1e-12)


def test_sample_is_byte_reproducible(tmp_path: Path) -> None:
    """The same flags and seed give identical JSON."""
    argv = ["sample", "--B", "3.5", "--n", "0", "--R", "0.6", "--depth", "2", "--seed", "4"]
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert main(argv + ["--out", str(first)]) == 0
    assert main(argv + ["--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    record = json.loads(first.read_text())
    assert list(record) == ["kernel", "region", "seed", "points"]
    assert record["region"] == {"center": [0.0, 1.0], "R": 0.6}
    assert record["seed"] == 4


def test_sample_side_outputs(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    """SVG and eigenvalue dumps are written next to the JSON printed on stdout."""
    svg, eig = tmp_path / "s.svg", tmp_path / "eig.csv"
    argv = ["sample", "--B", "3.5", "--R", "0.6", "--center", "1,2", "--depth", "2", "--samples", "3"]
    assert main(argv + ["--svg", str(svg), "--eigenvalues", str(eig)]) == 0
    records = json.loads(capsys.readouterr().out)
    assert [r["seed"] for r in records] == [0, 1, 2]
    assert records[0]["region"]["center"] == [1.0, 2.0]
    assert svg.read_text().startswith("<svg")
    assert eig.read_text().splitlines()[0] == "index,eigenvalue"


@pytest.mark.slow
def test_sample_statistics(capsys: pytest.CaptureFixture[str]) -> None:
    """--stats reports the mean count next to the trace, about 10.67 at R = 0.8."""
    argv = ["sample", "--B", "3.5", "--n", "0", "--R", "0.8", "--depth", "2", "--samples", "100", "--stats"]
    assert main(argv) == 0
    out = capsys.readouterr().out
    expected = float(out.split("expected (trace):")[1].split()[0])
    assert expected == pytest.approx(10.667, abs=0.02)
    assert "mean:" in out
    assert "total variation to eigenvalue law:" in out


def test_sample_argument_errors() -> None:
    """Several radii, or statistics over a single draw, are usage errors."""
    assert main(["sample", "--B", "3.5", "--R", "0.5,0.6", "--depth", "2"]) == 2
    assert main(["sample", "--B", "3.5", "--R", "0.5", "--depth", "2", "--stats"]) == 2
    assert main(["sample", "--B", "3.5", "--R", "0.5", "--center", "1,2,3"]) == 2


def test_relative_outputs_land_in_output_dir(
    tmp_path: Path, clean_settings: None, monkeypatch: pytest.MonkeyPatch
) -> None:
    """Relative paths resolve under AFFINE_OUTPUT_DIR."""
    monkeypatch.setenv("AFFINE_OUTPUT_DIR", str(tmp_path / "results"))
    assert main(["sample", "--B", "3.5", "--R", "0.5", "--depth", "2", "--out", "draw.json"]) == 0
    assert (tmp_path / "results" / "draw.json").exists()


def test_verify_only_specfun(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    """--only filters the suite and --json writes the report."""
    report_path = tmp_path / "report.json"
    assert main(["verify", "--only", "specfun", "--json", str(report_path)]) == 0
    assert "4/4 checks passed (default)" in capsys.readouterr().out
    report = json.loads(report_path.read_text())
    assert report["profile"] == "default"
    assert {r["module"] for r in report["results"]} == {"specfun"}
    assert set(report["results"][0]) == {"module", "name", "value", "tolerance", "passed", "detail"}


def test_verify_strict_profile(capsys: pytest.CaptureFixture[str]) -> None:
    """The strict profile is selectable."""
    assert main(["verify", "--only", "specfun", "--tol-profile", "strict"]) == 0
    assert "(strict)" in capsys.readouterr().out


def test_verify_unknown_module() -> None:
    """Unknown modules are a usage error."""
    assert main(["verify", "--only", "bogus"]) == 2


def test_internal_value_error_is_a_numerical_failure(
    monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
) -> None:
    """A ValueError raised inside a command exits with 1, not with the usage code."""

    def failing(cfg: RunConfig) -> int:
        raise ValueError("array shapes disagree")

    monkeypatch.setitem(app.COMMANDS, "constants", failing)
    assert main(["constants", "--alpha", "2"]) == 1
    assert "ValueError: array shapes disagree" in capsys.readouterr().err


def test_malformed_profile_file_is_a_usage_error(tmp_path: Path) -> None:
    """A profile file that is not a numeric table exits with 2."""
    path = tmp_path / "profile.txt"
    path.write_text("xi value\nnot numbers\n")
    assert main(["kernel", "--profile", str(path), "--decay-exponent", "1", "--z", "i", "--w", "2i"]) == 2


def test_usage_errors_from_argparse() -> None:
    """A missing subcommand or bad flag value exits with 2; --help exits with 0."""
    assert main([]) == 2
    assert main(["variance", "--depth", "two"]) == 2
    assert main(["verify", "--tol-profile", "loose"]) == 2
    assert main(["--help"]) == 0


def test_parser_has_every_command() -> None:
    """All five commands are registered."""
    parser = build_parser()
    args = parser.parse_args(["constants", "--alpha", "2"])
    assert args.command == "constants"
    assert args.alpha == 2.0
    assert args.skip_asymptotic is False
