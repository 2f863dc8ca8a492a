import numpy as np
import pytest

from brokenlines.extreal import INF
from brokenlines.morse import (
    BrokenTrajectory,
    FlowSegment,
    PerturbedSurface,
    SimplePath,
    Sphere,
    Tolerances,
    Torus,
    demo_report,
    euler_characteristic,
    find_broken_trajectories,
    find_connections,
    find_critical_points,
    integrate_flow,
    render_svg,
    trajectory_to_line,
    validate_trajectory,
    _rk4_step,
)

TOL = Tolerances()


@pytest.fixture(scope="module")
def sphere():
    return Sphere()


@pytest.fixture(scope="module")
def torus():
    return Torus()


@pytest.fixture(scope="module")
def sphere_criticals(sphere):
    return find_critical_points(sphere, TOL)


@pytest.fixture(scope="module")
def torus_criticals(torus):
    return find_critical_points(torus, TOL)


@pytest.fixture(scope="module")
def torus_segments(torus, torus_criticals):
    return find_connections(torus, torus_criticals, TOL)


@pytest.fixture(scope="module")
def torus_trajectories(torus, torus_criticals, torus_segments):
    return find_broken_trajectories(
        torus,
        torus_criticals[0],
        torus_criticals[-1],
        TOL,
        criticals=torus_criticals,
        segments=torus_segments,
    )


# ----------------------------------------------------------- integration


def test_flow_from_equator_rises_to_north_pole(sphere):
    result = integrate_flow(sphere, [1.0, 0.0, 0.0], horizon=25.0, tol=TOL)
    hs = sphere.h(result.states)
    assert np.all(np.diff(hs) >= -1e-12)
    assert hs[-1] > 0.9999


def test_flow_rejects_critical_start(sphere):
    with pytest.raises(ValueError):
        integrate_flow(sphere, [0.0, 0.0, 1.0], tol=TOL)


def test_reversed_flow_descends(sphere):
    result = integrate_flow(sphere, [1.0, 0.0, 0.0], direction=-1, horizon=5.0, tol=TOL)
    hs = sphere.h(result.states)
    assert np.all(np.diff(hs) <= 1e-12)
    assert hs[-1] < -0.9


def test_torus_flow_monotone(torus):
    result = integrate_flow(torus, [0.3, 1.1], horizon=10.0, tol=TOL)
    hs = torus.h(result.states)
    assert np.all(np.diff(hs) >= -1e-12)


# --------------------------------------------------------- critical points


def test_sphere_criticals(sphere_criticals):
    assert len(sphere_criticals) == 2
    assert [c.index for c in sphere_criticals] == [0, 2]
    assert all(c.grad_norm < TOL.tol_crit for c in sphere_criticals)
    assert euler_characteristic(sphere_criticals) == 2
    assert abs(sphere_criticals[0].h + 1.0) < 1e-9
    assert abs(sphere_criticals[1].h - 1.0) < 1e-9


def test_torus_criticals(torus_criticals):
    assert len(torus_criticals) == 4
    assert [c.index for c in torus_criticals] == [0, 1, 1, 2]
    assert all(c.grad_norm < TOL.tol_crit for c in torus_criticals)
    assert euler_characteristic(torus_criticals) == 0
    heights = [c.h for c in torus_criticals]
    assert np.allclose(heights, [-3.0, -1.0, 1.0, 3.0], atol=1e-9)


def test_critical_counts_stable_under_perturbation(torus, torus_criticals):
    bumped = PerturbedSurface(torus, [0.4, 0.8], height=1e-4, width=0.7)
    crits = find_critical_points(bumped, TOL)
    assert len(crits) == len(torus_criticals)
    assert sorted(c.index for c in crits) == sorted(
        c.index for c in torus_criticals
    )


def test_sphere_counts_stable_under_perturbation(sphere, sphere_criticals):
    bumped = PerturbedSurface(sphere, [1.0, 0.0, 0.0], height=1e-4, width=0.7)
    crits = find_critical_points(bumped, TOL)
    assert len(crits) == len(sphere_criticals)
    assert euler_characteristic(crits) == 2


# ------------------------------------------------------------ trajectories


def test_sphere_has_many_unbroken_trajectories(sphere, sphere_criticals):
    segments = find_connections(sphere, sphere_criticals, TOL)
    trajectories = find_broken_trajectories(
        sphere,
        sphere_criticals[0],
        sphere_criticals[-1],
        TOL,
        criticals=sphere_criticals,
        segments=segments,
    )
    assert len(trajectories) >= 8
    assert all(t.component_count == 1 for t in trajectories)
    for t in trajectories[:4]:
        assert validate_trajectory(t, TOL).ok


def test_torus_broken_trajectories_exist(torus_trajectories):
    broken = [t for t in torus_trajectories if t.component_count >= 2]
    assert broken, "no broken trajectory found through the saddles"
    for t in broken:
        assert all(
            earlier.h < later.h
            for earlier, later in zip(t.criticals, t.criticals[1:])
        )


def test_torus_trajectories_validate(torus_trajectories):
    for t in torus_trajectories[:6] + [
        t for t in torus_trajectories if t.component_count >= 2
    ]:
        report = validate_trajectory(t, TOL)
        assert report.ok, report
        assert report.reparam_residual < TOL.tol_reparam


def test_rejects_equal_endpoints(torus, torus_criticals, torus_segments):
    with pytest.raises(ValueError):
        find_broken_trajectories(
            torus,
            torus_criticals[0],
            torus_criticals[0],
            TOL,
            criticals=torus_criticals,
            segments=torus_segments,
        )


def test_chord_counterexample_fails(torus, torus_criticals):
    start = np.array(torus_criticals[0].state)
    end = np.array(torus_criticals[-1].state)
    grid = np.linspace(torus_criticals[0].h, torus_criticals[-1].h, 101)
    lam = (grid - grid[0]) / (grid[-1] - grid[0])
    points = np.array([(1 - l) * start + l * end for l in lam])
    chord = SimplePath(
        torus, [torus_criticals[0], torus_criticals[-1]], grid, points
    )
    report = validate_trajectory(chord, TOL)
    assert not report.ok
    assert report.reparam_residual >= TOL.tol_reparam
    assert report.invariance_residual >= TOL.tol_inv


def test_time_shifted_segments_validate_identically(torus, torus_trajectories):
    traj = next(t for t in torus_trajectories if t.component_count >= 2)
    shifted_segments = [
        FlowSegment(
            s.source,
            s.target,
            s.seed_angle,
            s.states,
            s.times + 5.0,
            s.h_values,
        )
        for s in traj.segments
    ]
    shifted = BrokenTrajectory(
        traj.surface, traj.criticals, shifted_segments, traj.grid_t, traj.points
    )
    a = validate_trajectory(traj, TOL)
    b = validate_trajectory(shifted, TOL)
    assert b.ok
    assert b.reparam_residual == a.reparam_residual


# ------------------------------------------------------------- extraction


def test_unbroken_extraction(sphere, sphere_criticals):
    segments = find_connections(sphere, sphere_criticals, TOL)
    trajectories = find_broken_trajectories(
        sphere,
        sphere_criticals[0],
        sphere_criticals[-1],
        TOL,
        criticals=sphere_criticals,
        segments=segments,
    )
    line, rep, marks = trajectory_to_line(trajectories[0])
    assert line.m == 1
    assert rep.base.n == 1
    assert rep.validate() is None


def test_broken_extraction_all_infinite_gaps(torus_trajectories):
    traj = next(t for t in torus_trajectories if t.component_count >= 2)
    line, rep, marks = trajectory_to_line(traj)
    assert line.m == traj.component_count
    assert rep.validate() is None
    assert all(g == INF for g in rep.gaps())
    # classification consistency: component count matches the line
    assert {p.component for p in marks.values()} == set(range(1, line.m + 1))


def test_within_segment_distance_matches_flow_time(torus, torus_trajectories):
    traj = next(t for t in torus_trajectories if t.component_count >= 2)
    line, rep, marks = trajectory_to_line(traj, marks_per_segment=2)
    # marks 0,1 sit on the first segment; the line distance is the exact
    # recorded time difference, which re-integration must reproduce
    seg = traj.segments[0]
    count = len(seg.times)
    i1, i2 = count // 3, 2 * count // 3
    delta = float(seg.times[i2] - seg.times[i1])
    state = seg.states[i1]
    steps = max(1, int(round(delta / TOL.step)))
    for _ in range(steps):
        state = _rk4_step(torus, state, delta / steps)
    dist = float(np.linalg.norm(torus.embed(state) - torus.embed(seg.states[i2])))
    assert dist < TOL.tol_time


# ------------------------------------------------------------------ report


def test_render_svg(torus, torus_criticals, torus_segments):
    svg = render_svg(torus, torus_criticals, torus_segments)
    assert svg.startswith("<svg")
    assert "polyline" in svg
    assert svg.count("circle") == len(torus_criticals)


def test_demo_report_sphere():
    report = demo_report("sphere", TOL)
    assert report["euler_characteristic"] == 2
    assert len(report["criticals"]) == 2
    assert report["trajectories"]
    assert all(t["valid"] for t in report["trajectories"])
