import math

import numpy as np
import pytest

import gpmpc


def test_kernel_and_prediction():
    h = gpmpc.KernelHyper(np.array([1.0]), 1.0, 0.1)
    assert gpmpc.se_kernel(np.array([0.0]), np.array([1.0]), h) == pytest.approx(math.exp(-0.5))

    x = np.array([[0.0, 1.0]])
    y = np.array([1.0, -1.0])
    model = gpmpc.GpModel(x, y, h)
    p = model.predict(np.array([0.5]))
    k = np.array([[1.1, math.exp(-0.5)], [math.exp(-0.5), 1.1]])
    ks = np.array([math.exp(-0.125), math.exp(-0.125)])
    assert p.mean == pytest.approx(ks @ np.linalg.solve(k, y), abs=1e-12)
    assert p.variance == pytest.approx(1.0 - ks @ np.linalg.solve(k, ks), abs=1e-12)


def test_contract_errors_raise_value_error():
    h = gpmpc.KernelHyper(np.array([1.0]), 1.0, 0.1)
    with pytest.raises(ValueError):
        gpmpc.GpModel(np.zeros((1, 3)), np.zeros(2), h)


def test_fit_and_json_round_trip():
    data = gpmpc.generate_training_data(60, 3)
    assert data.inputs.shape == (2, 60)
    cfg = gpmpc.FitConfig()
    cfg.n_starts = 2
    cfg.seed = 3
    model = gpmpc.fit(data.inputs, data.targets, cfg)
    again = gpmpc.GpModel.from_json(model.to_json())
    z = np.array([0.1, -0.2])
    assert again.predict(z).mean == pytest.approx(model.predict(z).mean, rel=1e-12)


def test_lingp_anchor():
    h = gpmpc.KernelHyper(np.array([0.7, 1.3]), 1.5, 0.01)
    rng = np.random.default_rng(0)
    model = gpmpc.GpModel(rng.uniform(-1, 1, (2, 20)), rng.normal(size=20), h)
    c = np.array([0.2, -0.4])
    lg = gpmpc.lingp_build(model, c)
    at0 = lg.eval(np.zeros(2))
    exact = model.predict(c)
    assert at0.mean == pytest.approx(exact.mean, abs=1e-10)
    assert at0.variance == pytest.approx(exact.variance, abs=1e-10)
    assert np.allclose(lg.v_hat, lg.v_sqrt.T @ lg.v_sqrt)


def test_conic_disc():
    prog = gpmpc.ConicProgram(2)
    prog.P = np.zeros((2, 2))
    prog.q = np.array([1.0, 1.0])
    prog.cones = [gpmpc.SecondOrderCone(np.eye(2), np.zeros(2), np.zeros(2), 1.0)]
    sol = gpmpc.solve(prog)
    assert sol.status == "optimal"
    assert sol.objective == pytest.approx(-math.sqrt(2.0), abs=1e-6)
    assert prog.max_violation(sol.z) <= 1e-8


def test_scp_and_closed_loop():
    data = gpmpc.generate_training_data(100, 1)
    cfg = gpmpc.FitConfig()
    cfg.n_starts = 2
    cfg.seed = 1
    model = gpmpc.fit(data.inputs, data.targets, cfg)

    spec = gpmpc.TrackingMpcSpec()
    spec.horizon = 6
    spec.set_constant_reference(-0.4)
    spec.previous_input = np.array([-0.3])
    init = gpmpc.ArState(np.array([-0.2]))
    rep = gpmpc.scp_solve(model, spec, gpmpc.ArSpec(), init, np.full((1, 6), -0.3))
    assert rep.inputs.shape == (1, 6)
    assert np.all(rep.inputs >= -1.0) and np.all(rep.inputs <= 1.0)
    assert rep.iterations[0].rho == pytest.approx(gpmpc.ScpConfig().rho0)

    loop = gpmpc.ClosedLoopConfig()
    loop.steps = 5
    res = gpmpc.run_closed_loop(model, config=loop)
    assert len(res.steps) == 5
    prev = 0.0
    for st in res.steps:
        assert -1.0 <= st.u <= 1.0
        assert -0.5 <= st.u - prev <= 0.5
        prev = st.u


def test_parse_n_grid():
    assert gpmpc.parse_n_grid("100:500:200") == [100, 300, 500]
