"""Hamiltonian, brackets, motion integrals, trajectory integration."""
import math

import numpy as np
import pytest

from g4motions import catalog, mechanics
from g4motions.catalog import ABELIAN_SUBGROUP_IDS, GroupId, GroupParams, get_group
from g4motions.mechanics import (
    CoordinateObservable,
    HamiltonianObservable,
    MomentumObservable,
    MotionIntegralObservable,
    Observable,
    PhasePoint,
    Trajectory,
    check_hamiltonian_commutes,
    check_integral_algebra,
    drift_report,
    hamiltonian,
    integrate_trajectory,
    motion_integral,
    poisson_bracket,
)

FLAT_PARAMS = GroupParams(k=0.0, l=0.0, eps01=0)


def flat_model(alphas=(0.0, 0.0, 0.0, 0.0)):
    params = GroupParams(k=0.0, l=0.0, eps01=0, em_alphas=tuple(alphas))
    return get_group(GroupId.G4_VI_1, params)


def test_hamiltonian_flat_free_particle():
    state = PhasePoint(u=[0.3, 0.1, -0.2, 0.5], p=[1.0, 0.0, 0.0, 0.0])
    assert hamiltonian(flat_model(), state) == pytest.approx(1.0, abs=1e-15)


def test_hamiltonian_g4_i_origin_pure_potential(models):
    # metric = eta at the origin and A = (1,1,1,1): H = 1 - 1 - 1 - 1 = -2
    state = PhasePoint(u=np.zeros(4), p=np.zeros(4))
    assert hamiltonian(models[GroupId.G4_I_CNE1], state) == pytest.approx(-2.0, abs=1e-14)


def test_hamiltonian_reduces_to_free_without_constants(models):
    model = models[GroupId.G4_II]
    state = PhasePoint(u=[0.2, -0.4, 0.6, 0.3], p=[0.5, -0.1, 0.7, 0.2])
    from g4motions.geometry import metric_at

    g = metric_at(model, state.u).g_con
    free = float(state.p @ g @ state.p)
    assert hamiltonian(model, state, alphas=np.zeros(4)) == pytest.approx(free, rel=1e-14)


def test_motion_integral_frame_rows(models):
    state = PhasePoint(u=np.zeros(4), p=[0.0, 1.0, 0.0, 0.0])
    assert motion_integral(models[GroupId.G4_I_CNE1], 1, state) == pytest.approx(1.0)
    state8 = PhasePoint(u=[math.pi / 2, 0.0, 0.0, 0.0], p=[0.0, 1.0, 0.0, 0.0])
    assert motion_integral(models[GroupId.G4_VIII_A], 1, state8) == pytest.approx(1.0)
    zero = PhasePoint(u=[0.4, 0.2, 0.9, -0.3], p=np.zeros(4))
    assert all(
        motion_integral(models[GroupId.G4_V], a, zero) == 0.0 for a in range(1, 5)
    )
    with pytest.raises(ValueError):
        motion_integral(models[GroupId.G4_V], 5, zero)


def test_poisson_canonical_pair(models):
    state = PhasePoint(u=[0.1, 0.2, 0.3, 0.4], p=[0.5, 0.6, 0.7, 0.8])
    assert poisson_bracket(CoordinateObservable(0), MomentumObservable(0), state) == 1.0
    assert poisson_bracket(CoordinateObservable(0), MomentumObservable(1), state) == 0.0


def test_poisson_self_bracket_vanishes(models):
    H = HamiltonianObservable(models[GroupId.G4_II])
    state = PhasePoint(u=[0.1, -0.2, 0.4, 0.3], p=[0.3, 0.1, -0.5, 0.2])
    assert poisson_bracket(H, H, state) == pytest.approx(0.0, abs=1e-12)


def test_poisson_antisymmetry(models):
    model = models[GroupId.G4_VII_A]
    H = HamiltonianObservable(model)
    rng = np.random.default_rng(4)
    for _ in range(10):
        state = PhasePoint(
            u=catalog.sample_points(model.domain, 1, int(rng.integers(1e6)))[0],
            p=rng.uniform(-1, 1, 4),
        )
        for a in range(1, 5):
            Y = MotionIntegralObservable(model, a)
            lhs = poisson_bracket(H, Y, state)
            rhs = poisson_bracket(Y, H, state)
            assert abs(lhs + rhs) <= 1e-12 * (1 + abs(lhs))


class _Product(Observable):
    def __init__(self, f, g):
        self.f, self.g = f, g

    def value(self, state):
        return self.f.value(state) * self.g.value(state)

    def du(self, state):
        return self.f.du(state) * self.g.value(state) + self.f.value(state) * self.g.du(state)

    def dp(self, state):
        return self.f.dp(state) * self.g.value(state) + self.f.value(state) * self.g.dp(state)


def test_poisson_leibniz_rule(models):
    model = models[GroupId.G4_I_CNE1]
    f = HamiltonianObservable(model)
    g = MotionIntegralObservable(model, 2)
    h = MotionIntegralObservable(model, 4)
    state = PhasePoint(u=[0.3, -0.1, 0.5, 0.2], p=[0.4, -0.6, 0.1, 0.9])
    lhs = poisson_bracket(f, _Product(g, h), state)
    rhs = poisson_bracket(f, g, state) * h.value(state) + g.value(state) * poisson_bracket(
        f, h, state
    )
    assert abs(lhs - rhs) <= 1e-10 * (1 + abs(rhs))


def test_hamiltonian_commutes_with_integrals(models, samples, tol):
    for gid, model in models.items():
        pts, momenta = samples[gid]
        res = check_hamiltonian_commutes(model, pts, momenta, tol)
        assert res.passed, (gid, res.max_residual)


def test_integral_algebra_closes(models, samples, tol):
    for gid, model in models.items():
        pts, momenta = samples[gid]
        res = check_integral_algebra(model, pts, momenta, tol)
        assert res.passed, (gid, res.max_residual)


def test_integral_algebra_negative_control(models, samples, tol):
    import dataclasses

    bad = dataclasses.replace(
        models[GroupId.G4_VIII_A], structure_constants=np.zeros((4, 4, 4))
    )
    pts, momenta = samples[GroupId.G4_VIII_A]
    res = check_integral_algebra(bad, pts, momenta, tol)
    assert not res.passed and res.max_residual >= 1e-4


def test_flat_free_trajectory_is_straight():
    model = flat_model()
    state0 = PhasePoint(u=np.zeros(4), p=[0.3, -0.2, 0.1, 0.25])
    traj = integrate_trajectory(model, state0, T=2.0, h=1e-2)
    assert not traj.domain_exit
    # p constant, u linear in t (velocity 2 eta p), H and Y exact
    assert np.max(np.abs(traj.p - traj.p[0])) <= 1e-13
    v = 2.0 * np.diag([1.0, -1.0, -1.0, -1.0]) @ traj.p[0]
    assert np.max(np.abs(traj.u - traj.t[:, None] * v[None, :])) <= 1e-12
    stats = drift_report(traj)
    assert stats.worst() <= 1e-13


def test_trajectory_conservation_g4_i(models):
    model = models[GroupId.G4_I_CNE1]
    state0 = PhasePoint(u=np.zeros(4), p=[0.1, 0.2, 0.3, 0.4])
    traj = integrate_trajectory(model, state0, T=10.0, h=1e-3)
    stats = drift_report(traj)
    assert stats.H.max_abs <= 1e-8
    assert all(d.max_abs <= 1e-8 for d in stats.Y)
    # the run leaves the sampling box early (u4 shoots off); flagged, partial
    assert traj.domain_exit
    assert np.all(np.diff(traj.t) > 0)


def test_rk4_halving_reduces_drift_fourth_order(models):
    model = models[GroupId.G4_I_CNE1]
    state0 = PhasePoint(u=np.zeros(4), p=[0.1, 0.2, 0.3, 0.4])
    d1 = drift_report(integrate_trajectory(model, state0, T=10.0, h=1e-3)).H.max_abs
    d2 = drift_report(integrate_trajectory(model, state0, T=10.0, h=5e-4)).H.max_abs
    assert 8.0 <= d1 / d2 <= 32.0


def test_rk4_convergence_exponent(models):
    model = models[GroupId.G4_I_CNE1]
    state0 = PhasePoint(u=np.zeros(4), p=[0.1, 0.2, 0.3, 0.4])
    drifts = []
    for h in (4e-3, 2e-3, 1e-3):
        traj = integrate_trajectory(model, state0, T=0.4, h=h)
        assert not traj.domain_exit
        drifts.append(drift_report(traj).H.max_abs)
    for coarse, fine in zip(drifts, drifts[1:]):
        exponent = math.log2(coarse / fine)
        assert 3.5 <= exponent <= 4.5, drifts


def test_compiled_dynamics_matches_jet_route(models):
    """The code-generated integrator right-hand side equals the observable
    gradients computed through the jets."""
    for gid in (GroupId.G4_I_CNE1, GroupId.G4_III, GroupId.G4_VIII_B, GroupId.G4_VI_2):
        model = models[gid]
        rhs, observables = mechanics._compiled_dynamics(model, model.params.alphas())
        rng = np.random.default_rng(13)
        pts = catalog.sample_points(model.domain, 5, 31)
        for u in pts:
            p = rng.uniform(-1, 1, 4)
            state = PhasePoint(u=u, p=p)
            H_obs = HamiltonianObservable(model)
            du, dp = rhs(u, p)
            assert np.allclose(du, H_obs.dp(state), atol=1e-12, rtol=1e-12), gid
            assert np.allclose(dp, -H_obs.du(state), atol=1e-11, rtol=1e-11), gid
            H, Y = observables(u, p)
            assert H == pytest.approx(hamiltonian(model, state), rel=1e-12)
            for a in range(4):
                assert Y[a] == pytest.approx(
                    motion_integral(model, a + 1, state), rel=1e-12, abs=1e-13
                )


def test_integrate_rejects_bad_steps(models):
    state0 = PhasePoint(u=np.zeros(4), p=np.zeros(4))
    with pytest.raises(ValueError):
        integrate_trajectory(models[GroupId.G4_II], state0, T=1.0, h=0.0)
    with pytest.raises(ValueError):
        integrate_trajectory(models[GroupId.G4_II], state0, T=-1.0, h=0.1)


def test_drift_report_fixtures():
    t = np.linspace(0.0, 1.0, 11)
    const = Trajectory(
        t=t, u=np.zeros((11, 4)), p=np.zeros((11, 4)),
        H=np.full(11, 2.5), Y=np.full((11, 4), -1.0),
    )
    stats = drift_report(const)
    assert stats.worst() == 0.0
    ramp = Trajectory(
        t=t, u=np.zeros((11, 4)), p=np.zeros((11, 4)),
        H=1.0 + 0.5 * t, Y=np.zeros((11, 4)),
    )
    stats = drift_report(ramp)
    assert stats.H.max_abs == pytest.approx(0.5)
    assert stats.H.relative == pytest.approx(0.25)
    with pytest.raises(ValueError):
        drift_report(Trajectory(np.array([]), np.zeros((0, 4)), np.zeros((0, 4)), np.array([]), np.zeros((0, 4))))


def test_csv_export_round_trip(tmp_path, models):
    model = models[GroupId.G4_I_CNE1]
    state0 = PhasePoint(u=np.zeros(4), p=[0.1, 0.2, 0.3, 0.4])
    traj = integrate_trajectory(model, state0, T=0.05, h=1e-2)
    path = tmp_path / "traj.csv"
    mechanics.export_csv(traj, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "t,u1,u2,u3,u4,p1,p2,p3,p4,H,Y1,Y2,Y3,Y4"
    assert len(lines) == len(traj) + 1
    parsed = np.array([[float(x) for x in line.split(",")] for line in lines[1:]])
    assert np.array_equal(parsed[:, 0], traj.t)  # 17 significant digits round-trip
    assert np.array_equal(parsed[:, 9], traj.H)


def test_phase_point_validation():
    with pytest.raises(ValueError):
        PhasePoint(u=[0, 0, 0], p=[0, 0, 0, 0])
    with pytest.raises(ValueError):
        PhasePoint(u=[0, 0, 0, 0], p=[0, 0, 0, np.nan])
