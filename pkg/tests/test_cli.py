import json
import subprocess
import sys
from pathlib import Path

import pytest

from mpg_duel.cli import execute, main
from mpg_duel.graph_core import parse_instance, validate_walk

DATA = Path(__file__).resolve().parents[1] / "data"


def run(*argv):
    report, code = execute(list(argv))
    assert report["schema"] == "mpg-duel/1"
    return report, code


def test_solve_finite_fig2():
    report, code = run(
        "solve", "finite", "--file", str(DATA / "fig2.json"), "--rounds", "2", "--mode", "non-alt",
        "--start-vertices", "P,Y",
    )
    assert code == 0
    assert report["result"]["value"] == {"value": "0", "mode": "exact", "exact": True}
    assert report["result"]["replay_matches"]


def test_witnesses_revalidate():
    report, _ = run("solve", "finite", "--file", str(DATA / "chase.json"), "--rounds", "5")
    inst = parse_instance((DATA / "chase.json").read_text())
    res = report["result"]
    validate_walk(inst.graph_g, res["witness_alice"], "W")
    validate_walk(inst.graph_h, res["witness_bob"], "W")
    assert str(inst.replay(res["witness_alice"], res["witness_bob"])) == res["value"]["value"]


def test_solve_alt_finite():
    report, code = run("solve", "finite", "--file", str(DATA / "chase.json"), "--rounds", "6", "--mode", "alt")
    assert code == 0 and report["result"]["value"]["value"] == "6"


def test_reducible_infinite_exit_3():
    report, code = run("solve", "infinite", "--file", str(DATA / "fig2.json"), "--mode", "non-alt")
    assert code == 3
    assert "irreducible" in report["error"]["message"]


def test_infinite_chase():
    report, code = run("solve", "infinite", "--file", str(DATA / "chase.json"), "--mode", "alt")
    assert code == 0 and report["result"]["value"]["value"] == "1"
    report, code = run("solve", "infinite", "--file", str(DATA / "chase.json"), "--budget", "10")
    assert code == 0
    assert report["instance"]["p"] == 1 and "C" in report["result"]


def test_covering_radius_cli():
    report, code = run("covering-radius", "--forbidden", "11", "--n", "8")
    assert code == 0
    assert report["result"]["radius"] == 4
    brute, _ = run("covering-radius", "--forbidden", "11", "--n", "8", "--brute")
    assert brute["result"]["radius"] == 4
    report, _ = run("covering-radius", "--forbidden", "1", "--asymptotic")
    assert report["result"]["asymptotic"]["value"]["value"] == "1"


def test_trace_cli():
    report, code = run("trace", "--file", str(DATA / "chase.json"), "--blocks", "3")
    assert code == 0
    res = report["result"]
    assert res["steps"] == res["block_ends"][-1] == len(res["records"])


def test_gallery_cli():
    report, code = run("gallery", "chase")
    assert code == 0 and report["result"]["all_passed"]
    _, code = run("gallery", "nope")
    assert code == 2
    report, code = run("gallery", "fig2", "--export")
    assert code == 0 and "graph_g" in report["result"]["instances"]["fig2"]


def test_inspect():
    report, code = run("inspect", "--file", str(DATA / "chase.json"))
    assert code == 0
    assert report["result"]["product"][0]["padding_D"] == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["solve"],
        ["solve", "finite", "--file", "missing.json", "--rounds", "2"],
        ["solve", "finite", "--file", str(DATA / "chase.json")],
        ["solve", "finite", "--file", str(DATA / "chase.json"), "--rounds", "2", "--start-edges", "WW"],
        ["frobnicate"],
    ],
)
def test_usage_errors(argv):
    _, code = run(*argv)
    assert code == 2


def test_node_cap_exit_4(monkeypatch):
    monkeypatch.setenv("MPG_NODE_CAP", "5")
    report, code = run("solve", "finite", "--file", str(DATA / "chase.json"), "--rounds", "8")
    assert code == 4 and report["error"]["kind"] == "resource"


def test_deterministic_output(capsys):
    argv = ["solve", "infinite", "--file", str(DATA / "chase.json"), "--budget", "8"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first
    json.loads(first)


def test_pretty(capsys):
    main(["--pretty", "solve", "finite", "--file", str(DATA / "fig2.json"), "--rounds", "3"])
    out = capsys.readouterr().out
    assert "result.value: -1" in out


def test_global_flags_after_command():
    report, code = run("inspect", "--file", str(DATA / "chase.json"), "--timing")
    assert code == 0 and "wall_time_s" in report
    report, _ = run("inspect", "--file", str(DATA / "chase.json"))
    assert "wall_time_s" not in report


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "mpg_duel", "covering-radius", "--forbidden", "00,11", "--n", "6"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["radius"] == 3
