import math
import warnings

import numpy as np
import pytest

from conftest import MHZ, POINT_PRESETS
from esomit.eigenspace import classify_point, distance_to_es
from esomit.errors import NoExtremum, OutOfFigureRange, UnknownPreset
from esomit.presets import GridSpec, default_grid, line_gamma2, preset, \
    preset_names, run_preset, sweep_1d, sweep_phase, window_metrics
from esomit.response import SpectrumTable, transmission_spectrum


def test_catalog_names_unique_and_sorted():
    names = preset_names()
    assert len(names) == len(set(names))
    assert "baseline" in names and "fig5-phase-sweep" in names


def test_unknown_preset_lists_catalog():
    with pytest.raises(UnknownPreset) as err:
        preset("es3-ep9")
    assert "baseline" in str(err.value)


def test_table1_values():
    p = preset("es2-ep3").params
    assert p.J == pytest.approx(1.5 * MHZ)
    assert p.gamma1 == pytest.approx(1.5 * MHZ)
    assert p.gamma2 == pytest.approx(1.5 * MHZ)
    assert p.t0 == 1.0
    p = preset("es2-np1").params
    assert p.J == pytest.approx(1.5 * MHZ)
    assert p.gamma1 == pytest.approx(0.5 * MHZ)
    p = preset("es1-ep1").params
    assert p.J == 0.0
    assert p.gamma1 == pytest.approx(0.7 * MHZ)
    assert p.gamma2 == pytest.approx(1.26 * MHZ)


@pytest.mark.parametrize("name", POINT_PRESETS)
def test_presets_produce_finite_tables(name):
    pre = preset(name)
    grid = default_grid(count=101)
    table = transmission_spectrum(pre.params, pre.drive, grid.values())
    assert np.all(np.isfinite(table.T))
    assert np.all(np.isfinite(table.tau_g))
    assert np.all(np.isfinite(table.t.real))


def test_line_gamma2_values():
    assert line_gamma2(1.0 * MHZ) == pytest.approx(1.00 * MHZ, rel=1e-12)
    assert line_gamma2(0.7 * MHZ) == pytest.approx(1.258 * MHZ, rel=1e-12)
    assert line_gamma2(1.38 * MHZ) == pytest.approx(0.6732 * MHZ, rel=1e-12)


def test_line_gamma2_warns_out_of_range():
    with pytest.warns(OutOfFigureRange):
        line_gamma2(0.2 * MHZ)


def test_single_point_sweep_equals_direct():
    pre = preset("es2-ep2")
    grid = default_grid(count=51)
    [table] = sweep_1d(pre, axis="gamma1", values=[pre.params.gamma1],
                       constraint="", grid=grid)
    direct = transmission_spectrum(pre.params, pre.drive, grid.values())
    assert np.array_equal(table.T, direct.T)
    assert np.array_equal(table.t, direct.t)


def test_on_surface_sweep_stays_on_surface():
    pre = preset("fig4-surfaces")
    vals = pre.sweep.values()[::5]
    tables = sweep_1d(pre, axis="gamma1", values=vals,
                      constraint="es-coupling", grid=default_grid(count=21))
    assert len(tables) == len(vals)
    for v in vals:
        p = pre.params.with_(gamma1=float(v))
        p = p.with_(J=p.t0 * math.sqrt(p.gamma1 * p.gamma2))
        d = distance_to_es(p)
        assert d.second_kind <= 1e-9 * max(p.J, 1.0)
        assert classify_point(p).kind == "ES-Kind2"


def test_sweep_deterministic_under_threads(monkeypatch):
    pre = preset("fig2d-line")
    grid = default_grid(count=41)
    vals = pre.sweep.values()[:6]
    t1 = sweep_1d(pre, axis="gamma1", values=vals,
                  constraint="line-gamma2", grid=grid)
    monkeypatch.setenv("ESOMIT_THREADS", "1")
    t2 = sweep_1d(pre, axis="gamma1", values=vals,
                  constraint="line-gamma2", grid=grid)
    for a, b in zip(t1, t2):
        assert np.array_equal(a.T, b.T)
        assert np.array_equal(a.tau_g, b.tau_g)


def test_phase_sweep_marks_surface_row():
    pre = preset("fig5-phase-sweep")
    grid = default_grid(count=31)
    tables = sweep_phase(pre, grid=grid)
    phases = [tb.metadata["phi3"] for tb in tables]
    on = [tb.metadata["on_es"] for tb in tables]
    assert len(tables) == 5
    assert sum(on) == 1
    idx = on.index(True)
    assert phases[idx] == pytest.approx(1.5 * math.pi)


def test_phase_sweep_single_value_equals_direct():
    pre = preset("fig5-phase-sweep")
    grid = default_grid(count=31)
    [table] = sweep_phase(pre, phi3_values=[1.5 * math.pi], grid=grid)
    direct = transmission_spectrum(pre.params, pre.drive, grid.values())
    assert np.allclose(table.T, direct.T, rtol=1e-12, atol=0)


def _synthetic_table(center, width, amp, baseline=0.6):
    dp = np.linspace(-5, 5, 4001) * MHZ
    T = baseline + amp / (1.0 + ((dp - center) / (width / 2.0)) ** 2)
    t = np.sqrt(np.maximum(T, 1e-12)).astype(complex)
    return SpectrumTable(delta_p=dp, t=t, T=T, tau_g=np.zeros_like(dp))


def test_window_metrics_synthetic_lorentzian():
    center, width, amp = 0.8 * MHZ, 0.5 * MHZ, 0.4
    m = window_metrics(_synthetic_table(center, width, amp))
    assert m.polarity == "peak"
    assert m.center == pytest.approx(center, abs=0.01 * width)
    assert m.height == pytest.approx(0.6 + amp, rel=1e-3)
    assert m.width == pytest.approx(width, rel=0.01)

    m = window_metrics(_synthetic_table(-1.2 * MHZ, 0.8 * MHZ, -0.3))
    assert m.polarity == "valley"
    assert m.center == pytest.approx(-1.2 * MHZ, abs=0.01 * MHZ)
    assert m.width == pytest.approx(0.8 * MHZ, rel=0.01)


def test_window_metrics_monotone_raises():
    dp = np.linspace(-1, 1, 101) * MHZ
    T = np.linspace(0.2, 0.9, 101)
    table = SpectrumTable(delta_p=dp, t=np.sqrt(T).astype(complex), T=T,
                          tau_g=np.zeros_like(dp))
    with pytest.raises(NoExtremum):
        window_metrics(table)


def test_run_preset_metadata():
    pre = preset("es1-ep2")
    table = run_preset(pre, grid=GridSpec("delta_p", -MHZ, MHZ, 21))
    assert table.metadata["preset"] == "es1-ep2"
    assert table.delta_p.size == 21
