import math

import pytest

from vertexplace import bench
from vertexplace.bench import BenchRecord, SuiteConfig, emit_csv, emit_plot, parse_csv, plot_series
from vertexplace.gnosis import init_params
from vertexplace.objective import cost_function
from vertexplace.topology import TopologySpec, generate

FAST_GA = {"population": 10, "generations": 5}


def small_cfg(**kw):
    base = dict(families={"ba": [{"m": 1}]}, sizes=[16], algorithms=["approx", "greedy"],
                repetitions=3, ga=FAST_GA)
    base.update(kw)
    return SuiteConfig(**base)


def test_suite_cardinality():
    assert len(bench.run_suite(small_cfg())) == 6


def test_default_grid_cardinality():
    cfg = SuiteConfig()
    assert len(list(cfg.specs())) * len(cfg.algorithms) == 144


def test_suite_sorted_and_deterministic():
    cfg = small_cfg(families={"er": [{"p": 0.3}], "ba": [{"m": 2}]}, sizes=[12, 10])
    a, b = bench.run_suite(cfg), bench.run_suite(cfg)
    assert [r.key for r in a] == sorted(r.key for r in a)
    assert [(r.key, r.cf, r.vcs) for r in a] == [(r.key, r.cf, r.vcs) for r in b]


def test_run_cell_ba_tree():
    r = bench.run_cell(TopologySpec("ba", 64, m=1, seed=3), "approx")
    assert r.edges == 63 and r.vcs <= 63 and r.ext_s >= 0 and r.cf >= r.vcs


def test_run_cell_reports_coordinates_on_failure():
    with pytest.raises(RuntimeError, match=r"gnosis.*seed=0"):
        bench.run_cell(TopologySpec("er", 10, p=0.3), "gnosis")


def test_failed_cells_do_not_abort_suite():
    cfg = small_cfg(algorithms=["approx", "gnosis"], repetitions=1)
    records = bench.run_suite(cfg, models={})
    assert len(records) == 2
    failed = [r for r in records if r.error]
    assert len(failed) == 1 and "gnosis" in failed[0].error
    assert emit_csv(records).count("\n") == 2


def test_records_reproduce_from_spec():
    cfg = small_cfg(families={"sw": [{"k": 4, "p": 0.5}]}, algorithms=["approx", "greedy", "genetic"])
    for r in bench.run_suite(cfg):
        t = generate(bench.spec_from_record(r))
        cover = bench.solve(t, r.algorithm, r.seed, ga=bench.GaConfig(**FAST_GA))
        assert len(cover) == r.vcs
        assert cost_function(t, cover).cf == r.cf
        assert r.cf >= r.vcs and r.vcs <= r.n


def test_gnosis_cells_with_supplied_model():
    cfg = small_cfg(algorithms=["gnosis"], repetitions=2)
    records = bench.run_suite(cfg, models={"ba:16": init_params(8, 2)})
    assert all(r.error is None for r in records)


def test_suite_trains_models_when_needed():
    cfg = small_cfg(algorithms=["gnosis"], repetitions=1,
                    gnosis_train={"episodes": 3, "hidden_dim": 8, "layers": 2})
    log = []
    records = bench.run_suite(cfg, log)
    assert records[0].error is None
    assert log[0]["episodes"] == 3


def test_parallel_matches_serial():
    cfg = small_cfg(repetitions=2)
    serial = bench.run_suite(cfg)
    cfg.workers = 2
    parallel = bench.run_suite(cfg)
    assert [(r.key, r.cf, r.vcs) for r in serial] == [(r.key, r.cf, r.vcs) for r in parallel]


def test_csv_header_and_single_row():
    r = BenchRecord("er", 64, "p=0.2", "approx", 0, 0.001, 12.5, 10, 400)
    text = emit_csv([r])
    lines = text.splitlines()
    assert lines[0] == "family,n,param,algorithm,seed,ext_s,cf,vcs,edges"
    assert len(lines) == 2


def test_csv_round_trip():
    records = bench.run_suite(small_cfg(families={"sw": [{"k": 2, "p": 0.5}]}))
    assert parse_csv(emit_csv(records)) == records


def test_csv_round_trip_infinite_cf():
    r = BenchRecord("er", 8, "p=0.1", "approx", 1, 1e-5, math.inf, 2, 1)
    assert parse_csv(emit_csv([r])) == [r]


def test_parse_csv_rejects_wrong_header():
    with pytest.raises(ValueError):
        parse_csv("a,b\n1,2\n")


def _grid_records():
    out = []
    for n in (64, 128, 256, 512):
        for algo in ("approx", "greedy", "genetic", "gnosis"):
            for seed in range(3):
                out.append(BenchRecord("er", n, "p=0.2", algo, seed, 0.01 * seed, n + seed, n // 2 + seed, 5 * n))
    return out


def test_plot_series_structure():
    series = plot_series(_grid_records(), "vcs", "er")
    assert len(series) == 4
    for xs, ys in series.values():
        assert xs == [64, 128, 256, 512]
        assert ys == [n // 2 + 1 for n in xs]


def test_emit_plot_svg():
    svg = emit_plot(_grid_records(), "cf", "er")
    assert svg.lstrip().startswith("<?xml") and "<svg" in svg
    assert svg.count("<g id=\"line2d_") >= 4


def test_emit_plot_empty_rejected():
    with pytest.raises(ValueError):
        emit_plot([], "cf")


def test_write_plots(tmp_path):
    paths = bench.write_plots(_grid_records(), tmp_path)
    assert sorted(p.name for p in paths) == ["er_cf.svg", "er_ext_s.svg", "er_vcs.svg"]


def test_config_json_round_trip():
    cfg = small_cfg(gnosis_train={"episodes": 5})
    assert SuiteConfig.from_json(cfg.to_json()) == cfg


def test_config_rejects_unknown_keys_and_bad_reps():
    with pytest.raises(ValueError):
        SuiteConfig.from_json('{"bogus": 1}')
    with pytest.raises(ValueError):
        SuiteConfig(repetitions=0)
