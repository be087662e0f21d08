import json
import math

import numpy as np
import pytest

from oracles import eigenbasis_mixture, random_real_spectrum_matrix
from tcqeve.errors import CapacityError, RescaleRequiredError, ValidationError
from tcqeve.qeve_sim import (
    build_system,
    chebyshev_eval,
    chebyshev_u_eval,
    estimate_energy,
    history_state_direct,
    history_state_via_inverse,
    mass_near_angle,
    measure,
    measure_distribution,
    modal_angle,
    run_experiment,
    verify_bounds,
    walk_phase_distribution,
)
from tcqeve.spectral_oracle import analyze_matrix


def test_chebyshev_values():
    assert chebyshev_eval(0, 0.3) == 1.0
    assert chebyshev_eval(2, 0.5) == pytest.approx(-0.5)
    assert chebyshev_eval(100, 0.3) == pytest.approx(math.cos(100 * math.acos(0.3)), abs=1e-12)
    assert chebyshev_u_eval(3, 0.5) == pytest.approx(-1.0)
    assert chebyshev_u_eval(-1, 0.5) == 0.0


def test_chebyshev_vectorized():
    x = np.linspace(-1, 1, 11)
    np.testing.assert_allclose(chebyshev_eval(5, x), np.cos(5 * np.arccos(x)), atol=1e-12)


def test_chebyshev_domain():
    with pytest.raises(ValidationError):
        chebyshev_eval(3, 1.5)


def test_denominator_examples():
    np.testing.assert_allclose(build_system(np.zeros((1, 1)), 2).denominator.toarray(), np.eye(2))
    C = build_system(np.array([[0.4]]), 2).denominator.toarray()
    np.testing.assert_allclose(C, [[1.0, 0.0], [-0.8, 1.0]])


def test_denominator_four_degrees():
    C = build_system(np.array([[0.25]]), 4).denominator.toarray()
    expected = np.eye(4) - 0.5 * np.eye(4, k=-1) + np.eye(4, k=-2)
    np.testing.assert_allclose(C, expected)


def test_rescale_required():
    with pytest.raises(RescaleRequiredError):
        build_system(np.array([[0.6]]), 4)


def test_degree_must_be_power_of_two():
    with pytest.raises(ValidationError):
        build_system(np.array([[0.1]]), 12)


@pytest.mark.parametrize("seed", range(200))
def test_inverse_matches_recursion(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 17))
    N = 2 ** int(rng.integers(0, 9))
    h = random_real_spectrum_matrix(rng, d, norm=0.45, hermitian=seed % 3 == 0)
    psi = rng.normal(size=d) + 1j * rng.normal(size=d)
    psi /= np.linalg.norm(psi)
    direct = history_state_direct(h, psi, N)
    inverse = history_state_via_inverse(build_system(h, N), psi)
    np.testing.assert_allclose(inverse.amplitudes, direct.amplitudes, atol=1e-8)


def test_on_grid_line_splits_between_aliases():
    N, k = 64, 12
    h = np.array([[math.cos(2 * math.pi * k / N)]])
    dist = measure_distribution(history_state_direct(h, [1.0], N))
    assert dist[k] == pytest.approx(0.5, abs=1e-12)
    assert dist[N - k] == pytest.approx(0.5, abs=1e-12)
    assert modal_angle(dist) == pytest.approx(k / N)
    assert mass_near_angle(dist, k / N) == pytest.approx(1.0)
    assert estimate_energy(dist, 2.0) == pytest.approx(2.0 * math.cos(2 * math.pi * k / N))
    measured = measure(history_state_direct(h, [1.0], N), 2.0)
    assert measured.estimated_angle == pytest.approx(k / N)
    assert measured.estimated_energy == pytest.approx(2.0 * math.cos(2 * math.pi * k / N))


def test_modal_angle_needs_a_window_bin():
    with pytest.raises(ValidationError):
        modal_angle(np.array([0.5, 0.5]))


@pytest.mark.parametrize("hermitian", [True, False])
def test_energy_estimates_are_accurate(hermitian):
    hits = 0
    for seed in range(100):
        rng = np.random.default_rng(1000 + seed)
        d = int(rng.integers(2, 9))
        matrix = random_real_spectrum_matrix(rng, d, hermitian=hermitian, min_gap=0.2)
        report = analyze_matrix(matrix)
        alpha_eff = 2 * report.shifted_norm
        psi = eigenbasis_mixture(rng, matrix, 0.9)
        epsilon = 0.05 * alpha_eff
        result = run_experiment(matrix, epsilon, psi0=psi, report=report)
        assert result.N == 1024
        assert result.mass_within_5_over_N >= 0.45, f"seed {seed}"
        if result.energy_error <= epsilon:
            hits += 1
    assert hits >= 95


def test_direct_and_inverse_experiments_agree(rng):
    matrix = random_real_spectrum_matrix(rng, 4)
    first = run_experiment(matrix, 0.1, method="inverse")
    second = run_experiment(matrix, 0.1, method="direct")
    assert first.estimated_energy == pytest.approx(second.estimated_energy)


def test_experiment_degree_cap(rng):
    matrix = random_real_spectrum_matrix(rng, 2)
    with pytest.raises(CapacityError):
        run_experiment(matrix, 1e-4, max_degree=256)


def test_experiment_json(rng):
    result = run_experiment(random_real_spectrum_matrix(rng, 3), 0.05)
    data = json.loads(result.to_json())
    assert data["N"] == result.N
    assert set(data) == {
        "N", "alpha_eff", "kappa_S", "angle_error", "energy_error",
        "mass_within_5_over_N", "estimated_energy", "reference_energy",
    }


@pytest.mark.parametrize("seed", range(200))
def test_norm_bounds_hold(seed):
    rng = np.random.default_rng(5000 + seed)
    d = int(rng.integers(1, 9))
    N = 2 ** int(rng.integers(0, 7))
    h = random_real_spectrum_matrix(rng, d, norm=float(rng.uniform(0.05, 0.5)), hermitian=seed % 4 == 0)
    table = verify_bounds(build_system(h, N), analyze_matrix(h))
    assert table["holds"].all()
    assert ("C_norm_lower" in set(table["check"])) == (N > 2)


def test_walk_statistics_on_grid():
    M, k = 32, 5
    h = np.array([[math.cos(2 * math.pi * k / M)]])
    probabilities = walk_phase_distribution(h, [1.0], 5)
    assert probabilities[k] == pytest.approx(0.5)
    assert probabilities[M - k] == pytest.approx(0.5)


def test_walk_statistics_checks_inputs():
    with pytest.raises(ValidationError):
        walk_phase_distribution(np.array([[0.0, 0.5], [0.1, 0.0]]), [1.0, 0.0], 3)
    with pytest.raises(RescaleRequiredError):
        walk_phase_distribution(np.array([[1.5]]), [1.0], 3)
