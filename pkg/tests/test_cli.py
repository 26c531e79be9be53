import io
import json
import os
from pathlib import Path

import pytest

from sftent import cli
from sftent.geometry import BOARD_SYMBOLS, board

HERE = Path(__file__).parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"

CASES = {
    "sft_count_golden": ["sft", "count", "--def", str(DATA / "golden.json"), "--n", "1-6"],
    "sft_count_hard_squares": ["sft", "count", "--def", "builtin:hard-squares", "--n", "1-5"],
    "sft_entropy_1d": ["sft", "entropy-1d", "--def", str(DATA / "golden.json")],
    "sft_entropy_upper": ["sft", "entropy-upper", "--def", "builtin:hard-squares", "--n-max", "6"],
    "sft_entropy_irreducible": ["sft", "entropy-irreducible", "--def", "builtin:hard-squares", "--precision", "2"],
    "sft_sofic": ["sft", "sofic-count", "--def", "builtin:golden-mean", "--map", "0=a,1=b", "--n", "1-4"],
    "sft_recode": ["sft", "recode", "--def", "builtin:golden-mean"],
    "subst_expand": ["subst", "expand", "--rule", str(DATA / "2net.json"), "--seed", "•", "--n", "3"],
    "subst_check": ["subst", "check-derivation", "--depth", "3"],
    "subst_zero": ["subst", "zero-bound", "--n", "1024", "--m", "3"],
    "geom_iset": ["geom", "iset", "--n", "2"],
    "geom_board": ["geom", "board", "--n", "2"],
    "geom_mseq": ["geom", "mseq", "--N", "3"],
    "geom_density": ["geom", "density", "--n", "1-5"],
    "base_build": ["base", "build", "--levels", "101", "--n", "8"],
    "base_freq": ["base", "freq", "--levels", "011", "--n", "1-8"],
    "tm_run": ["tm", "run", "--machine", str(DATA / "scanner.json"), "--input", "0010", "--trace"],
    "tm_board": ["tm", "board", "--machine", "bouncer", "--n", "1", "--input", "0110"],
    "prune_run": ["prune", "run", "--levels", "11", "--r", "const:1/2", "--max-N", "6"],
    "realize": ["realize", "--target", str(DATA / "target.json"), "--h", "1/2", "--L", "4", "--N", "8",
                "--n", "4,8,16"],
}


def run(argv, env=None):
    out, err = io.StringIO(), io.StringIO()
    old = os.environ.get(cli.ENV_LIMIT)
    if env is not None:
        os.environ[cli.ENV_LIMIT] = env
    try:
        code = cli.main(argv, stdout=out, stderr=err)
    finally:
        if env is not None:
            if old is None:
                del os.environ[cli.ENV_LIMIT]
            else:
                os.environ[cli.ENV_LIMIT] = old
    return code, out.getvalue(), err.getvalue()


def rows(text):
    return [line.split("\t") for line in text.splitlines() if line and not line.startswith("#")]


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_output(name):
    code, out, err = run(CASES[name])
    assert code == 0, err
    path = GOLDEN / f"{name}.txt"
    if os.environ.get("SFTENT_WRITE_GOLDEN"):
        path.write_text(out, encoding="utf-8")
    assert out == path.read_text(encoding="utf-8")
    assert run(CASES[name])[1] == out


def test_count_golden_mean_line():
    code, out, _ = run(["sft", "count", "--def", str(DATA / "golden.json"), "--n", "4"])
    assert code == 0
    header, line = rows(out)
    assert header[:5] == ["n", "m", "count", "log2_per_site_lo", "log2_per_site_hi"]
    assert line[:4] == ["4", "1", "8", "3/4"]
    assert out.startswith("# tool: sftent ")
    assert "# input-sha256: " in out


def test_mseq_n1():
    code, out, _ = run(["geom", "mseq", "--N", "1"])
    data = rows(out)[1:]
    assert code == 0 and [(r[1], r[3]) for r in data] == [("6", "0"), ("31", "1")]


def test_decimals_have_twelve_places():
    _, out, _ = run(["base", "delta", "--levels", "011"])
    assert rows(out)[1] == ["011", "3/8", "0.375000000000"]


def test_input_errors_exit_1():
    code, out, err = run(["sft", "count", "--def", str(DATA / "missing.json"), "--n", "2"])
    assert code == 1 and err and not rows(out)
    assert run(["sft", "count", "--def", "builtin:golden-mean", "--n", "2", "--bogus"])[0] == 1
    assert run(["tm", "run", "--machine", "bouncer", "--input", "012"])[0] == 1
    assert run(["nosuch"])[0] == 1


def test_budget_exhaustion_exit_2_with_partial_output():
    code, out, _ = run(["sft", "entropy-upper", "--def", "builtin:hard-squares", "--n-max", "40",
                        "--state-limit", "5000"])
    assert code == 2
    assert len(rows(out)) > 3 and "# truncated:" in out


def test_environment_budget_override():
    argv = ["sft", "entropy-upper", "--def", "builtin:hard-squares", "--n-max", "40"]
    code, out, _ = run(argv, env="5000")
    assert code == 2 and "# state-limit: 5000" in out
    assert run(argv, env="many")[0] == 1


def test_incomplete_squeeze_exits_2():
    code, out, _ = run(["sft", "entropy-irreducible", "--def", "builtin:hard-squares", "--precision", "50",
                        "--budget", "1"])
    assert code == 2 and len(rows(out)) == 2 and "# note:" in out


def test_check_board_on_a_copy_of_the_first_board(tmp_path):
    grid = [list(r) for r in board(1).render().split("\n")]
    images = {s: grid for s in BOARD_SYMBOLS}
    images[" "] = [[" "] * 5 for _ in range(5)]
    path = tmp_path / "board_rule.json"
    path.write_text(json.dumps({"alphabet": sorted(BOARD_SYMBOLS) + [" "], "images": images}), encoding="utf-8")
    code, out, _ = run(["subst", "check-board", "--rule", str(path), "--seed", "┼", "--n", "1"])
    assert code == 0 and "# verdict: matches the board" in out and rows(out) == [["x", "y", "found", "expected"]]
    code, out, _ = run(["subst", "check-board", "--rule", str(path), "--seed", "┼", "--n", "2", "--limit", "3"])
    assert code == 0 and "differs" in out and len(rows(out)) == 4


HELP_PATHS = sorted({tuple(v[:2]) if v[0] != "realize" else ("realize",) for v in CASES.values()}
                    | {("sft", "product"), ("sft", "lift"), ("base", "delta"), ("subst", "check-board")})


@pytest.mark.parametrize("path", HELP_PATHS, ids=["-".join(p) for p in HELP_PATHS])
def test_help_texts(path, capsys):
    code, _, _ = run([*path, "--help"])
    text = capsys.readouterr().out
    assert code == 0
    assert text.startswith("usage: sftent")
    desc = text.split("\n\n")[1].strip()
    assert desc and not desc.startswith("options")
