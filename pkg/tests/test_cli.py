import json
from fractions import Fraction

import numpy as np
import pytest

from algoselect.cli import main
from algoselect.greedy import (
    KnapsackInstance,
    mwis_family,
    random_mwis_instance,
    run_greedy,
    save_knapsack,
    save_mwis,
)
from algoselect.online import build_hard_instance, instance_from_jsonl
from algoselect.gdtune import GdInstance, save_gd_instance
from _fixtures import interval_gadget


def run_cli(*argv):
    return main([str(a) for a in argv])


def mwis_dir(tmp_path, count=4, n=7, seed=0):
    d = tmp_path / "instances"
    d.mkdir()
    rng = np.random.default_rng(seed)
    for i in range(count):
        save_mwis(random_mwis_instance(n, 0.4, rng), str(d / f"g{i}.json"))
    return d


class TestErmGreedy:
    def test_empty_directory_errors(self, tmp_path, capsys):
        empty = tmp_path / "none"
        empty.mkdir()
        code = run_cli("erm-greedy", "--instances", empty, "--out", tmp_path / "o.csv")
        assert code == 1
        err = json.loads(capsys.readouterr().err)
        assert "no instances" in err["error"]

    def test_window_gadget_optimum_lands_inside(self, tmp_path):
        d = tmp_path / "instances"
        d.mkdir()
        save_mwis(interval_gadget(0.25, 0.75), str(d / "gadget.json"))
        out = tmp_path / "result.csv"
        assert run_cli("erm-greedy", "--instances", d, "--out", out, "--holdout-frac", 0) == 0
        header, row = out.read_text().strip().split("\n")
        assert header.startswith("rho_star,breakpoint_count")
        rho_star = float(row.split(",")[0])
        assert 0.25 < rho_star < 0.75

    def test_knapsack_problem_flag(self, tmp_path):
        d = tmp_path / "items"
        d.mkdir()
        save_knapsack(KnapsackInstance([4.0, 3.0], [4.0, 1.0], 4.0), str(d / "a.csv"))
        save_knapsack(KnapsackInstance([5.0, 3.2, 3.2], [5.0, 2.5, 2.5], 5.0), str(d / "b.csv"))
        out = tmp_path / "result.csv"
        code = run_cli("erm-greedy", "--problem", "knapsack", "--instances", d,
                       "--rho-hi", 2.0, "--out", out)
        assert code == 0
        assert out.read_text().count("\n") == 2


class TestGdTune:
    def test_single_point_net_echoed(self, tmp_path):
        out = tmp_path / "gd.csv"
        code = run_cli("gd-tune", "--net", "0.25", "--samples", 5, "--out", out)
        assert code == 0
        row = out.read_text().strip().split("\n")[1]
        assert float(row.split(",")[0]) == 0.25
        assert int(row.split(",")[2]) == 1

    def test_instance_directory_input(self, tmp_path):
        d = tmp_path / "gd"
        d.mkdir()
        save_gd_instance(GdInstance([1.0], [1.0]), str(d / "one.json"))
        out = tmp_path / "gd.csv"
        code = run_cli("gd-tune", "--rho-lo", 0.5, "--rho-hi", 1.0, "--L", 1.0,
                       "--c", 0.5, "--nu", 0.1, "--instances", d, "--net", "0.5,1.0",
                       "--out", out)
        assert code == 0
        row = out.read_text().strip().split("\n")[1]
        rho_star, mean_iters = float(row.split(",")[0]), float(row.split(",")[1])
        assert rho_star == 1.0 and mean_iters == 1.0


class TestAdversary:
    def test_jsonl_replay_scores_one_in_final_window(self, tmp_path):
        out = tmp_path / "seq.jsonl"
        assert run_cli("adversary", "--n-budget", 200, "--T", 10, "--seed", 3, "--out", out) == 0
        lines = out.read_text().strip().split("\n")
        assert len(lines) == 10
        params = [instance_from_jsonl(line) for line in lines]
        mid = (params[-1].r + params[-1].s) / 2
        for p in params:
            inst = build_hard_instance(p)
            cost = run_greedy(mwis_family(inst.n), mid, inst)[1].value
            assert abs(cost - 1.0) < 1e-12

    def test_windows_are_exact_rationals(self, tmp_path):
        out = tmp_path / "seq.jsonl"
        run_cli("adversary", "--n-budget", 200, "--T", 6, "--seed", 5, "--out", out)
        params = [instance_from_jsonl(l) for l in out.read_text().strip().split("\n")]
        n = params[0].n
        for j, p in enumerate(params, start=1):
            assert p.s - p.r == Fraction(1, n**j)


class TestPdimProbe:
    def test_constant_family_never_shattered(self, tmp_path):
        out = tmp_path / "probe.json"
        code = run_cli("pdim-probe", "--family", "constant", "--sets", 3,
                       "--set-size", 2, "--out", out)
        assert code == 0
        payload = json.loads(out.read_text())
        assert all(not r["shattered"] for r in payload["reports"])
        assert all(r["labeling_count"] == 1 for r in payload["reports"])

    def test_mwis_probe_runs(self, tmp_path):
        out = tmp_path / "probe.json"
        code = run_cli("pdim-probe", "--family", "mwis", "--n", 6, "--sets", 2,
                       "--set-size", 1, "--seed", 2, "--out", out)
        assert code == 0
        payload = json.loads(out.read_text())
        assert len(payload["reports"]) == 2


class TestEpmCommand:
    def test_output_schema(self, tmp_path):
        out = tmp_path / "epm.json"
        code = run_cli("epm", "--n", 6, "--samples", 30, "--holdout", 10, "--out", out)
        assert code == 0
        payload = json.loads(out.read_text())
        assert len(payload["epms"]) == 3
        for record in payload["epms"]:
            assert set(record) >= {"schema_id", "algorithm_index", "coefficients", "training_loss"}
        assert 0 <= payload["selection_matches_true_best"] <= payload["holdout_instances"]


class TestSortBench:
    def test_skewed_bench_is_correct_and_beats_mergesort(self, tmp_path):
        out = tmp_path / "sort.csv"
        code = run_cli("sort-bench", "--n", 64, "--train", 50, "--test", 20, "--out", out)
        assert code == 0
        rows = [line.split(",") for line in out.read_text().strip().split("\n")[1:]]
        assert len(rows) == 20
        assert all(row[6] == "1" for row in rows)  # matches_reference
        ours = np.mean([int(row[1]) for row in rows])
        merge = np.mean([int(row[7]) for row in rows])
        assert ours <= merge

    def test_csv_inputs(self, tmp_path):
        from algoselect.sorter import save_arrays_csv

        rng = np.random.default_rng(0)
        arrays = [rng.uniform(0, 1, 16) for _ in range(8)]
        train_csv = tmp_path / "train.csv"
        save_arrays_csv(arrays, str(train_csv))
        out = tmp_path / "sort.csv"
        code = run_cli("sort-bench", "--train-csv", train_csv, "--out", out)
        assert code == 0
        assert len(out.read_text().strip().split("\n")) == 9


class TestOnlineCommand:
    def test_trace_csv(self, tmp_path):
        out = tmp_path / "trace.csv"
        code = run_cli("online", "--n", 5, "--T", 20, "--net-size", 64, "--sigma", 0.5,
                       "--intervals", "0:1", "--out", out)
        assert code == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "step,chosen_rho,cost,cum_cost,cum_best,avg_regret"
        assert len(lines) == 21


ALL_COMMANDS = [
    ("erm-greedy", lambda tmp: ["--instances", mwis_dir(tmp)]),
    ("gd-tune", lambda tmp: ["--samples", 8, "--dim", 2]),
    ("online", lambda tmp: ["--n", 5, "--T", 10, "--net-size", 32, "--sigma", 0.5]),
    ("adversary", lambda tmp: ["--n-budget", 200, "--T", 5]),
    ("pdim-probe", lambda tmp: ["--family", "mwis", "--n", 5, "--sets", 2, "--set-size", 1]),
    ("epm", lambda tmp: ["--n", 5, "--samples", 20, "--holdout", 5]),
    ("sort-bench", lambda tmp: ["--n", 32, "--train", 20, "--test", 10]),
]


@pytest.mark.parametrize("command,extra", ALL_COMMANDS, ids=[c for c, _ in ALL_COMMANDS])
def test_reruns_are_byte_identical(command, extra, tmp_path):
    args = extra(tmp_path)
    out_a = tmp_path / "a.out"
    out_b = tmp_path / "b.out"
    assert run_cli(command, *args, "--seed", 42, "--out", out_a) == 0
    assert run_cli(command, *args, "--seed", 42, "--out", out_b) == 0
    assert out_a.read_bytes() == out_b.read_bytes()


def test_error_payload_is_machine_readable(tmp_path, capsys):
    code = run_cli("erm-greedy", "--instances", tmp_path / "missing", "--out", tmp_path / "x.csv")
    assert code == 1
    payload = json.loads(capsys.readouterr().err)
    assert payload["type"] == "ValueError"
