import math

import pytest

from qfpreadout import cli
from qfpreadout.errors import ConfigError
from qfpreadout.sweep import (
    RECIPES,
    Row,
    SweepResult,
    list_recipes,
    make_config,
    parse_csv_text,
    parse_overrides,
    read_config_text,
    read_csv,
    run_sweep,
    to_csv_text,
)

EXPECTED = {
    "ChiT": ("chi_t", (0.1, 2.0, 20)),
    "Alpha": ("alpha", (0.25, 2.0, 8)),
    "JCoupling": ("j_ratio", (0.01, 0.1, 10)),
    "StorageT": ("t_over_tqfp", (0.0, 1.0, 21)),
    "StorageBetaMax": ("beta_max", (1.5, 3.0, 16)),
    "OverlapG": ("g_over_wr", (0.0, 3.0, 31)),
    "ChiVsDelta": ("delta_over_g", (2.0, 20.0, 19)),
    "ChiVsTheta": ("theta_q", (0.05, 1.5, 30)),
}


def test_recipe_table():
    assert {k: (r.sweep_var, r.grid) for k, r in RECIPES.items()} == EXPECTED
    text = list_recipes()
    for name in RECIPES:
        assert name in text
    assert "fig" not in text.lower()


def test_defaults_resolve():
    cfg = make_config(recipe="ChiT")
    assert cfg.settings["model.n_max"] == "27"
    assert cfg.settings["model.eta2"] == "1.25"
    assert cfg.bases == ("flux", "energy-q2")
    assert cfg.values()[0] == 0.1 and cfg.values()[-1] == 2.0


def test_flags_beat_file():
    text = "[sweep]\nrecipe = Alpha\nsteps = 3\n[measurement]\nchi_t = 0.5\n"
    fs, lines = read_config_text(text)
    cfg = make_config(fs, parse_overrides(["measurement.chi_t=pi/4"]), None, None, lines)
    assert cfg.recipe.name == "Alpha" and cfg.grid[2] == 3
    assert cfg.settings["measurement.chi_t"] == "pi/4"


@pytest.mark.parametrize(
    "text, line, fld",
    [
        ("[sweep]\nrecipe = ChiT\n\n[model]\nbogus = 1\n", 5, "model.bogus"),
        ("[sweep]\nrecipe = ChiT\nsteps = 1.5\n", 3, "sweep.steps"),
        ("[sweep]\nrecipe = ChiT\n[model]\nn_max = lots\n", 4, "model.n_max"),
        ("[sweep]\nrecipe = Nope\n", 2, "sweep.recipe"),
        ("[sweep]\nrecipe = ChiT\nbases = flux, sideways\n", 3, "sweep.bases"),
    ],
)
def test_config_errors_name_line_and_field(text, line, fld):
    fs, lines = read_config_text(text)
    with pytest.raises(ConfigError) as ei:
        make_config(fs, {}, None, None, lines)
    assert ei.value.line == line and ei.value.field == fld
    assert f"line {line}" in str(ei.value) and fld in str(ei.value)


def test_override_syntax():
    with pytest.raises(ConfigError):
        parse_overrides(["alpha=1"])
    assert parse_overrides(["measurement.alpha = 2"]) == {"measurement.alpha": "2"}


def test_csv_round_trip(tmp_path):
    res = SweepResult(
        (("recipe", "ChiT"), ("note", "a,b")),
        (Row("chi_t", 0.1, "flux", 1 / 3, 0.25, None), Row("chi_t", 0.2, "flux", None, None, None, "error: X: y")),
    )
    assert parse_csv_text(to_csv_text(res)) == res
    cfg = make_config(recipe="ChiVsDelta", overrides={"sweep.steps": "4"}, out_path=str(tmp_path / "c.csv"))
    out = run_sweep(cfg)
    assert read_csv(str(tmp_path / "c.csv")) == out


def test_reruns_are_byte_identical(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        run_sweep(make_config(recipe="ChiT", overrides={"sweep.steps": "3"}, out_path=str(p)))
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_storage_t_is_nondecreasing():
    res = run_sweep(make_config(recipe="StorageT"))
    for basis in ("flux", "energy-q2"):
        f = [r.fidelity for r in res.rows if r.basis == basis]
        assert all(b >= a - 1e-12 for a, b in zip(f, f[1:]))
        assert f[-1] >= 0.99


def test_chi_t_energy_not_below_flux():
    res = run_sweep(make_config(recipe="ChiT", overrides={"sweep.steps": "5"}))
    by = {(r.value, r.basis): r.fidelity for r in res.rows}
    for v in {r.value for r in res.rows}:
        assert by[(v, "energy-q2")] >= by[(v, "flux")] - 1e-12


def test_chi_vs_theta_rows_are_finite():
    res = run_sweep(make_config(recipe="ChiVsTheta", overrides={"sweep.steps": "4"}))
    assert all(r.status == "ok" for r in res.rows)
    assert all(math.isfinite(r.fidelity) for r in res.rows)


def test_cli_exit_codes(tmp_path, capsys):
    out = tmp_path / "x.csv"
    assert cli.main(["sweep", "--recipe", "Alpha", "--set", "sweep.steps=2", "--out", str(out)]) == 0
    assert out.exists()
    assert cli.main(["sweep", "--recipe", "Nope", "--out", str(out)]) == 2
    assert cli.main(["sweep", "--recipe", "Alpha"]) == 2
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[sweep]\nrecipe = Alpha\nstart = -1\nstop = 1\nsteps = 2\n")
    assert cli.main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "y.csv")]) == 3
    rows = read_csv(str(tmp_path / "y.csv")).rows
    assert any(r.status.startswith("error: ValueError") for r in rows)
    assert cli.main(["recipes"]) == 0
    assert "ChiT" in capsys.readouterr().out
