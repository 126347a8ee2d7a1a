import csv
import json
from importlib import resources

import pytest

from hyperfront import cli
from hyperfront.config import Config, from_dict, load, smallness
from hyperfront.errors import BudgetExceededError, ConfigError

BASE = {"version": 1, "name": "t",
        "params": {"gamma": 1.4, "a_inf": 0.5, "tau": 0.1},
        "geometry": {"kind": "piecewise_linear", "breakpoints": [], "slopes": [0.0]},
        "initial_data": {"kind": "constant", "state": [1.0, 0.0]},
        "h": 0.05, "nu": 12, "x_end": 1.0, "query_xs": [0.5, 1.0]}


def cfg(**kw):
    d = json.loads(json.dumps(BASE))
    for k, v in kw.items():
        if v is None:
            d.pop(k, None)
        else:
            d[k] = v
    return d


def write(tmp_path, d, name="c.json"):
    p = tmp_path / name
    p.write_text(json.dumps(d))
    return str(p)


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def data_file(name):
    return str(resources.files("hyperfront") / "data" / name)


class TestConfig:
    def test_reference_configs(self):
        w = load(data_file("wedge_small.json"))
        assert isinstance(w, Config) and w.wall is not None
        assert w.taus == (0.2, 0.1, 0.05, 0.025)
        assert smallness(w) <= w.budget
        lens = load(data_file("wing_lens.json"))
        assert lens.is_wing and lens.wing_config().taus == (0.2, 0.1, 0.05)

    @pytest.mark.parametrize("change", [
        dict(version=2), dict(extra=1), dict(nu=2), dict(h=0.0),
        dict(params={"gamma": 0.9, "a_inf": 0.5, "tau": 0.1}),
        dict(params={"gamma": 1.4, "a_inf": 0.5, "tau": 0.1, "mach": 3}),
        dict(regime="small_disturbance"), dict(taus=[0.1, 0.3]),
        dict(query_xs=[2.0]), dict(synthetic_errors=[[1.0]]),
        dict(geometry={"kind": "piecewise_linear", "breakpoints": [1.0], "slopes": [0.0]}),
        dict(initial_data={"kind": "bump", "center": 0.0, "half_width": 0.0,
                           "amplitude": [0.01, 0.0]}),
    ])
    def test_invalid(self, change):
        with pytest.raises(ConfigError):
            from_dict(cfg(**change))

    def test_budget(self):
        data = {"kind": "jumps", "breakpoints": [-1.0], "states": [[1.0, 0.0], [1.09, 0.09]]}
        with pytest.raises(BudgetExceededError):
            from_dict(cfg(initial_data=data, budget=0.1))

    def test_smallness_counts_wall(self):
        c = from_dict(cfg(geometry={"kind": "piecewise_linear", "breakpoints": [1.0],
                                    "slopes": [-0.05, -0.07]}))
        assert smallness(c) == pytest.approx(0.07)

    def test_cauchy(self):
        c = from_dict(cfg(geometry="cauchy"))
        assert c.wall is None and c.run_config().wall is None

    def test_seed_override(self):
        c = from_dict(cfg(seed=3))
        assert c.with_seed(None).seed == 3 and c.with_seed(9).seed == 9

    def test_load_errors(self, tmp_path):
        with pytest.raises(ConfigError):
            load(tmp_path / "missing.json")
        bad = tmp_path / "bad.json"
        bad.write_text("{")
        with pytest.raises(ConfigError):
            load(bad)
        bad.write_text("[]")
        with pytest.raises(ConfigError):
            load(bad)


class TestFormat:
    def test_fmt(self):
        assert cli.fmt(0.1) == "0.10000000000000001"
        assert cli.fmt(float("inf")) == "inf" and cli.fmt(-float("inf")) == "-inf"
        assert cli.fmt(3) == "3"
        assert float(cli.fmt(1 / 3)) == 1 / 3


class TestCli:
    def test_background_run(self, tmp_path):
        out = tmp_path / "out"
        assert cli.main(["run", write(tmp_path, cfg()), "--out", str(out), "--quiet"]) == 0
        rows = read_csv(out / "events.csv")
        assert rows == [["x", "kind", "solver", "incoming_ids", "incoming_strengths",
                         "outgoing_ids", "outgoing_strengths", "glimm_before", "glimm_after"]]
        prof = read_csv(out / "profiles.csv")
        assert prof[0] == ["x", "y_low", "y_high", "rho", "v", "u"]
        assert len(prof) == 3
        s = json.loads((out / "summary.json").read_text())
        assert s["events"] == 0 and s["regime"] == "scaled"

    def test_single_corner_run(self, tmp_path):
        d = cfg(geometry={"kind": "piecewise_linear", "breakpoints": [], "slopes": [-0.03]})
        out = tmp_path / "out"
        assert cli.main(["run", write(tmp_path, d), "--out", str(out), "--quiet"]) == 0
        rows = read_csv(out / "events.csv")[1:]
        assert [r[1] for r in rows] == ["corner"]
        s = json.loads((out / "summary.json").read_text())
        assert s["max_rarefaction"] <= s["rarefaction_bound"]

    def test_compare_rejects_tau0(self, tmp_path):
        d = cfg(params={"gamma": 1.4, "a_inf": 0.5, "tau": 0.0})
        out = tmp_path / "out"
        assert cli.main(["compare", write(tmp_path, d), "--out", str(out), "--quiet"]) == 1
        assert not out.exists()

    def test_compare_background_zero(self, tmp_path):
        out = tmp_path / "out"
        assert cli.main(["compare", write(tmp_path, cfg()), "--out", str(out), "--quiet"]) == 0
        rows = read_csv(out / "compare.csv")
        assert rows[0] == ["tau", "x", "err_rho_v", "err_u", "err_total", "err_over_x_tau2"]
        assert all(float(v) == 0.0 for r in rows[1:] for v in r[2:])

    def test_sweep_synthetic(self, tmp_path):
        d = cfg(taus=[0.2, 0.1, 0.05], synthetic_errors=[[0.04, 0.01, 0.0025]] * 2)
        out = tmp_path / "out"
        assert cli.main(["sweep", write(tmp_path, d), "--out", str(out), "--quiet"]) == 0
        s = json.loads((out / "slopes.json").read_text())
        assert s["synthetic"] is True
        assert s["fits"][0]["slope"] == pytest.approx(2.0, abs=1e-12)
        assert {"slope", "intercept", "residual", "errors", "constants"} <= set(s["fits"][0])

    def test_sweep_needs_three(self, tmp_path):
        out = tmp_path / "out"
        assert cli.main(["sweep", write(tmp_path, cfg(taus=[0.1])), "--out", str(out),
                         "--quiet"]) == 1

    def test_invalid_config_exit(self, tmp_path):
        assert cli.main(["run", write(tmp_path, cfg(nu=1)), "--quiet"]) == 1

    def test_budget_exit(self, tmp_path):
        data = {"kind": "jumps", "breakpoints": [-1.0], "states": [[1.0, 0.0], [1.09, 0.09]]}
        out = tmp_path / "out"
        code = cli.main(["run", write(tmp_path, cfg(initial_data=data, budget=0.1)),
                         "--out", str(out), "--quiet"])
        assert code == 2 and not out.exists()

    def test_domain_exit(self, tmp_path):
        # admissible data whose wall turn drives states out of the neighbourhood
        d = cfg(geometry={"kind": "piecewise_linear", "breakpoints": [], "slopes": [-0.3]},
                budget=1.0)
        out = tmp_path / "out"
        assert cli.main(["run", write(tmp_path, d), "--out", str(out), "--quiet"]) == 2
        assert not out.exists()

    def test_wrong_command_for_wing(self, tmp_path):
        assert cli.main(["run", data_file("wing_lens.json"), "--out",
                         str(tmp_path / "o"), "--quiet"]) == 1

    def test_threads_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("HYPERFRONT_THREADS", "many")
        assert cli.main(["compare", write(tmp_path, cfg()), "--out", str(tmp_path / "o"),
                         "--quiet"]) == 1

    def test_write_outputs_atomic(self, tmp_path):
        paths = cli.write_outputs(tmp_path / "o", {"a.csv": "x\n1\n"})
        assert paths[0].read_text() == "x\n1\n"
        assert sorted(p.name for p in (tmp_path / "o").iterdir()) == ["a.csv"]
