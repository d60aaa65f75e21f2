import math

import numpy as np
import pytest

import stochhom as sh


def test_energy_closed_form():
    e = sh.EnergyParams(4.0, 5.0, 0.0)
    assert sh.energy_value(e, np.array([1.0, 1.0])) == pytest.approx(5.0)
    np.testing.assert_allclose(sh.energy_gradient(e, np.array([1.0, 1.0])), [10.0, 10.0])
    h = sh.energy_hessian(e, np.array([1.0, 0.0]))
    np.testing.assert_allclose(h, [[15.0, 0.0], [0.0, 5.0]])


def test_antithetic_draws_and_field():
    u = sh.draw_uniforms(7, 3, 16)
    v = sh.antithetic(u)
    assert v.antithetic and not u.antithetic
    np.testing.assert_array_equal(np.add(u.a_channel, v.a_channel), 1.0)
    law = sh.Distribution.bernoulli(3, 23)
    f = sh.realize_field(law, sh.Distribution.constant(0), u, 4)
    g = sh.realize_field(law, sh.Distribution.constant(0), v, 4)
    assert set(f.a_cells) <= {3.0, 23.0}
    assert all(x != y for x, y in zip(f.a_cells, g.a_cells))


def test_constant_field_pipeline():
    mesh = sh.PeriodicMesh(2, 0.25)
    r = sh.full_pipeline(sh.CoefficientField.uniform(2, 5, 0), 4.0, np.array([1.0, 1.0]), mesh)
    assert r.outputs.value == pytest.approx(5.0, rel=1e-10)
    assert r.outputs.axial_first == pytest.approx(20.0, rel=1e-10)
    assert np.max(np.abs(r.corrector)) < 1e-10


def test_laminate_matches_oned():
    a, c = [3.0, 23.0, 23.0, 3.0], [1.0, 3.0, 1.0, 1.0]
    field = sh.CoefficientField.uniform(4, 1, 0)
    field.a_cells = [a[k % 4] for k in range(16)]
    field.c_cells = [c[k % 4] for k in range(16)]
    cfg = sh.NewtonConfig()
    cfg.tol = 1e-10
    out = sh.full_pipeline(field, 4.0, np.array([1.0, 0.0]), sh.PeriodicMesh(4, 0.25), cfg).outputs
    line = sh.OneDProblem(4.0, a, c)
    assert out.value == pytest.approx(sh.oned_value_wstar(line, 1.0), rel=1e-6)
    assert out.grad[0] == pytest.approx(sh.oned_grad_wstar(line, 1.0), rel=1e-6)


def test_two_phase_root():
    s = 3 ** (-1 / 3) + 23 ** (-1 / 3)
    zeta = 8 / s**3
    line = sh.OneDProblem(4.0, [3.0, 23.0], [0.0, 0.0])
    assert sh.oned_grad_wstar(line, 1.0) == pytest.approx(zeta, rel=1e-12)
    assert sh.oned_value_wstar(line, 1.0) == pytest.approx(zeta / 4, rel=1e-12)
    value, degenerate = sh.oned_hess_wstar(line, 0.0)
    assert degenerate and value == 0.0


def test_config_and_small_experiment(tmp_path):
    cfg = sh.parse_config_text("test_case = tc2\nsizes = [2]\nsamples_2m = 8\nmesh_h = 0.5\nseed = 5")
    assert cfg.test_case == "tc2"
    cfg.output_dir = tmp_path
    out = sh.run_experiment(cfg, threads=2)
    assert (tmp_path / "results.csv").read_text() == out["csv"]
    q = out["sizes"][0]["quantities"]
    assert set(q) == set(sh.QUANTITIES)
    assert math.isfinite(q["value"]["mc_mean"])
    with pytest.raises(sh.ConfigError):
        sh.parse_config_text("mesh_h = 0.3")
