"""End-to-end runs of the command-line front end."""

import csv
import json
from collections import Counter
from pathlib import Path

import pytest

from ajdkit.cli import EXIT_INVALID, EXIT_NUMERIC, EXIT_OK, main
from ajdkit.config import ConfigError, RunConfig
from ajdkit.pearson import SingularSystemError

from .fixtures.heston_tables import CMOM2

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
JUMP_COLUMNS = ("lambda", "mu_v", "mu_s", "sigma_s", "rho_J")


def write_config(tmp_path, name, **changes):
    doc = json.loads((CONFIGS / f"{name}.json").read_text())
    params = changes.pop("params", {})
    doc["params"].update(params)
    for k, v in list(doc["params"].items()):
        if v is None:
            del doc["params"][k]
    doc.update(changes)
    path = tmp_path / f"{name}_{len(list(tmp_path.iterdir()))}.json"
    path.write_text(json.dumps(doc))
    return str(path)


def run(cmd, config, out, *extra):
    return main([cmd, "--config", config, "--out", str(out), *extra])


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_derive_is_byte_stable(tmp_path):
    cfg = str(CONFIGS / "scenario1.json")
    assert run("derive", cfg, tmp_path / "a", "--order", "3") == EXIT_OK
    assert run("derive", cfg, tmp_path / "b", "--order", "3") == EXIT_OK
    for name in ("moment_3.csv", "moment_3.json"):
        a = (tmp_path / "a/heston/conditional" / name).read_bytes()
        b = (tmp_path / "b/heston/conditional" / name).read_bytes()
        assert a == b and a.endswith(b"\n")


def test_derive_order_zero(tmp_path):
    assert run("derive", str(CONFIGS / "scenario1.json"), tmp_path, "--order", "0") == EXIT_OK
    rows = read_rows(tmp_path / "heston/conditional/moment_0.csv")
    assert len(rows) == 1 and rows[0]["num"] == "1" and rows[0]["den"] == "1"


def test_steady_state_table_matches_fixture(tmp_path):
    cfg = write_config(tmp_path, "scenario1", mode="steady-state", params={"v0": None})
    assert run("derive", cfg, tmp_path, "--order", "2") == EXIT_OK
    lines = (tmp_path / "heston/steady-state/table_2.csv").read_text().splitlines()
    assert lines[0] == "i1,i2,i3,i4,i5,i6,i7,i8"
    got = Counter(tuple(int(v) for v in line.split(",")) for line in lines[1:])
    assert got == Counter(CMOM2)


def test_svcj_without_jumps_matches_heston_artifact(tmp_path):
    svcj = write_config(tmp_path, "svcj", params={"lambda": 0.0})
    heston = write_config(tmp_path, "scenario1")
    assert run("derive", svcj, tmp_path, "--order", "3") == EXIT_OK
    assert run("derive", heston, tmp_path, "--order", "3") == EXIT_OK
    jump_rows = read_rows(tmp_path / "svcj/conditional/moment_3.csv")
    plain = Counter(tuple(sorted(r.items())) for r in read_rows(tmp_path / "heston/conditional/moment_3.csv"))
    # symbolic artifacts: setting lambda = 0 removes every term carrying a lambda factor
    kept = Counter(tuple(sorted((k, v) for k, v in r.items() if k not in JUMP_COLUMNS))
                   for r in jump_rows if r["lambda"] == "0")
    assert kept == plain


def test_density_price_simulate_and_cache(tmp_path):
    cfg = str(CONFIGS / "scenario1.json")
    assert run("derive", cfg, tmp_path) == EXIT_OK
    assert run("density", cfg, tmp_path) == EXIT_OK
    d = tmp_path / "heston/conditional"
    for n in (2, 3, 4):
        assert (d / f"fit_n{n}.json").exists() and (d / f"fit_n{n}_table.csv").exists()
    gaps = read_rows(d / "gaps.csv")
    assert [(g["n_from"], g["n_to"]) for g in gaps] == [("2", "3"), ("3", "4")]
    assert run("price", cfg, tmp_path) == EXIT_OK
    price = json.loads((d / "price_n4.json").read_text())
    assert price["price"] == pytest.approx(6.8061, abs=0.02) and price["reference_price"] == 6.8061
    assert run("simulate", cfg, tmp_path, "--samples", "1000", "--seed", "3") == EXIT_OK
    first = (d / "samples_n4.csv").read_bytes()
    assert run("simulate", cfg, tmp_path, "--samples", "1000", "--seed", "3", "--threads", "2") == EXIT_OK
    assert (d / "samples_n4.csv").read_bytes() == first
    assert first.count(b"\n") == 1001


def test_cached_fit_not_reused_across_parameter_sets(tmp_path):
    s1 = str(CONFIGS / "scenario1.json")
    assert run("density", s1, tmp_path, "--pearson-n", "2") == EXIT_OK
    s2 = write_config(tmp_path, "scenario2", out=str(tmp_path))
    # scenario 2 shares the heston/conditional directory but not the fit
    assert run("price", s2, tmp_path, "--pearson-n", "2") == EXIT_OK
    price = json.loads((tmp_path / "heston/conditional/price_n2.json").read_text())["price"]
    assert price > 20


def test_bench_writes_csv(tmp_path):
    cfg = write_config(tmp_path, "scenario1", experiment={"G": 3, "N": [2000, 8000], "seed": 1})
    assert run("bench", cfg, tmp_path, "--pearson-n", "2") == EXIT_OK
    rows = read_rows(tmp_path / "heston/conditional/bench.csv")
    assert [r["N"] for r in rows] == ["2000", "8000"]


def test_bench_without_reference_is_invalid(tmp_path):
    cfg = write_config(tmp_path, "scenario1")
    doc = json.loads(Path(cfg).read_text())
    del doc["reference_price"]
    Path(cfg).write_text(json.dumps(doc))
    assert run("bench", cfg, tmp_path) == EXIT_INVALID


@pytest.mark.parametrize("changes", [
    {"model": "nope"},
    {"t": -1},
    {"mode": "sideways"},
    {"params": {"v0": None}},
    {"max_order": 4, "pearson_n": [3]},
    {"surprise": 1},
])
def test_invalid_configs_exit_2(tmp_path, changes):
    assert run("derive", write_config(tmp_path, "scenario1", **changes), tmp_path, "--order", "1") == EXIT_INVALID


def test_missing_config_and_bad_flags_exit_2(tmp_path):
    assert run("derive", str(tmp_path / "absent.json"), tmp_path) == EXIT_INVALID
    assert run("derive", str(CONFIGS / "scenario1.json"), tmp_path, "--order", "99") == EXIT_INVALID
    assert run("density", str(CONFIGS / "scenario1.json"), tmp_path, "--pearson-n", "9") == EXIT_INVALID
    assert run("simulate", str(CONFIGS / "scenario1.json"), tmp_path, "--threads", "0") == EXIT_INVALID


def test_numerical_failure_exits_3(tmp_path, monkeypatch):
    import ajdkit.cli

    def singular(*args, **kw):
        raise SingularSystemError(float("inf"))

    monkeypatch.setattr(ajdkit.cli, "fit_density", singular)
    assert run("density", str(CONFIGS / "scenario1.json"), tmp_path, "--pearson-n", "2") == EXIT_NUMERIC


@pytest.mark.parametrize("name", ["scenario1", "scenario2", "svj", "svcj", "svcj_steady"])
def test_config_round_trip(name):
    cfg = RunConfig.load(CONFIGS / f"{name}.json")
    again = RunConfig.from_json(cfg.to_json())
    assert again == cfg and again.to_json() == cfg.to_json()


def test_config_rejects_bad_json():
    with pytest.raises(ConfigError):
        RunConfig.from_json("{not json")
