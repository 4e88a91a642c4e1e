import math
from dataclasses import replace

import numpy as np
import pytest

from qtrap import (
    COLUMNS,
    ConfigError,
    EntropyRecord,
    IonState2x2,
    RunConfig,
    RunResult,
    format_value,
    render_csv,
    run_simulation,
    simulate,
    time_grid,
)

LN2 = math.log(2.0)


def small_config(**overrides):
    base = dict(n_max=6, t_max_rescaled=8.0, dt_rescaled=0.1, initial="cat")
    base.update(overrides)
    return RunConfig(**base)


def hand_built_result():
    """Two-sample result with one divergent mutual-entropy record."""
    cfg = RunConfig(t_max_rescaled=1.0, dt_rescaled=1.0)
    ion = IonState2x2(0.5, 0.5, 0.1 + 0.0j)
    defined = EntropyRecord(
        t_rescaled=0.0, inv=0.0, s_entrywise=1.0, s_vn=0.5, s_vn_motion=0.5,
        i_mutual=0.25, s_p=0.2, s_c=0.05,
    )
    divergent = EntropyRecord(
        t_rescaled=1.0, inv=0.0, s_entrywise=1.0, s_vn=0.5, s_vn_motion=0.5,
        i_mutual=None, s_p=None, s_c=None,
    )
    return RunResult(
        config=cfg, grid=np.array([0.0, 1.0]), ions=(ion, ion),
        records=(defined, divergent),
    )


def test_time_grid_single_sample():
    assert np.array_equal(time_grid(RunConfig(t_max_rescaled=0.0)), np.array([0.0]))


def test_time_grid_default_has_3501_points():
    grid = time_grid(RunConfig())
    assert grid.size == 3501
    assert np.array_equal(grid, np.arange(3501) * 0.1)


def test_time_grid_includes_endpoint_despite_rounding():
    grid = time_grid(RunConfig(t_max_rescaled=0.3, dt_rescaled=0.1))
    assert grid.size == 4


@pytest.mark.parametrize(
    "overrides, field",
    [
        (dict(dt_rescaled=0.0), "dt_rescaled"),
        (dict(dt_rescaled=-0.1), "dt_rescaled"),
        (dict(t_max_rescaled=-1.0), "t_max_rescaled"),
        (dict(n_max=0), "n_max"),
        (dict(initial="vortex"), "initial"),
        (dict(emit=("t", "Foo")), "emit"),
        (dict(omega_bar=math.inf), "omega_bar"),
        (dict(beta=complex(math.nan, 0.0)), "beta"),
    ],
)
def test_validate_names_offending_field(overrides, field):
    cfg = replace(RunConfig(), **overrides)
    with pytest.raises(ConfigError, match=field):
        cfg.validate()


def test_validate_accepts_defaults():
    RunConfig().validate()


def test_columns_keeps_canonical_order_and_t():
    assert RunConfig(emit=("SP", "Inv")).columns() == ("t", "Inv", "SP")
    assert RunConfig(emit=()).columns() == ("t",)
    assert RunConfig().columns() == COLUMNS


def test_render_is_deterministic():
    cfg = small_config()
    first = render_csv(simulate(cfg))
    second = render_csv(simulate(cfg))
    assert first == second


def test_header_row_is_exact():
    text = render_csv(simulate(small_config(t_max_rescaled=0.0)))
    assert text.splitlines()[0] == "t,Pg,Pe,ReC,ImC,Inv,S_paper,S_vN,I,SP,SC"
    assert "\r" not in text
    assert text.endswith("\n")


def test_emit_subset_header():
    cfg = small_config(t_max_rescaled=0.0, emit=("SP", "Inv"))
    assert render_csv(simulate(cfg)).splitlines()[0] == "t,Inv,SP"


def test_format_value():
    assert format_value(1.0 / 3.0) == "0.333333333333"
    assert format_value(None) == ""
    assert format_value(836.9202829163209) == "836.920282916"
    assert format_value(0.0) == "0"
    assert format_value(-2.5e-17) == "-2.5e-17"


def test_run_simulation_writes_output_file(tmp_path):
    out = tmp_path / "run.csv"
    cfg = small_config(t_max_rescaled=0.5, output_path=str(out))
    text = run_simulation(cfg)
    assert out.read_text() == text


def test_zero_horizon_yields_single_row():
    text = run_simulation(small_config(t_max_rescaled=0.0))
    lines = text.splitlines()
    assert len(lines) == 2
    assert lines[1].startswith("0,")


def test_ground_start_has_zero_entropy_row():
    cfg = RunConfig(
        initial="ground", tau=0.0, n_max=8, t_max_rescaled=1.0,
        emit=("t", "S_paper", "S_vN"),
    )
    first = render_csv(simulate(cfg)).splitlines()[1].split(",")
    assert abs(float(first[1])) <= 1e-12
    assert abs(float(first[2])) <= 1e-12


def test_initial_mutual_entropy_is_ln2():
    result = simulate(small_config(t_max_rescaled=0.5))
    assert result.records[0].i_mutual == pytest.approx(LN2, abs=1e-6)


def test_triple_pipeline_only_runs_when_needed():
    cfg = small_config(t_max_rescaled=0.3, emit=("Inv",))
    assert simulate(cfg).records[0].i_mutual is None
    forced = simulate(cfg, with_mutual=True)
    assert forced.records[0].i_mutual is not None


def test_divergent_samples_render_as_empty_cells():
    text = render_csv(hand_built_result())
    rows = text.splitlines()
    defined_cells = rows[1].split(",")
    divergent_cells = rows[2].split(",")
    assert len(defined_cells) == len(divergent_cells) == len(COLUMNS)
    assert defined_cells[-3:] == ["0.25", "0.2", "0.05"]
    assert divergent_cells[-3:] == ["", "", ""]


def test_series_skips_undefined_samples():
    result = hand_built_result()
    assert result.series("I") == [(0.0, 0.25)]
    assert result.series("Inv") == [(0.0, 0.0), (1.0, 0.0)]
    with pytest.raises(ConfigError):
        result.series("nope")
