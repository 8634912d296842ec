import numpy as np
import pytest

from eaqturbo.channel import ChannelModel
from eaqturbo.encoder import bundled
from eaqturbo.simulation import (
    SimulationConfig,
    run_cell,
    run_trial,
    simulate,
    trial_rng,
)


@pytest.fixture(scope="module")
def pto1rea():
    return bundled("PTO1REA")


def test_config_validation():
    with pytest.raises(ValueError):
        SimulationConfig("a", "b", 10, (0.1,), min_failures=0)
    with pytest.raises(ValueError):
        SimulationConfig("a", "b", 10, (1.2,))
    with pytest.raises(ValueError):
        SimulationConfig("a", "b", 0, (0.1,))


def test_trial_rng_is_reproducible():
    a = trial_rng(1, 2, 3).random(4)
    b = trial_rng(1, 2, 3).random(4)
    c = trial_rng(1, 2, 4).random(4)
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_noiseless_channel_never_fails(pto1rea):
    cfg = SimulationConfig("PTO1REA", "PTO1REA", 20, (0.0,), max_trials=50)
    res = simulate(cfg, pto1rea, pto1rea)
    cell = res.cells[0]
    assert cell.trials == 50 and cell.failures == 0 and cell.wer == 0.0


def test_stops_at_min_failures(pto1rea):
    cfg = SimulationConfig("PTO1REA", "PTO1REA", 10, (0.6,), min_failures=3, max_trials=500)
    cell = run_cell(pto1rea, pto1rea, cfg, 0, 0.6)
    assert cell.failures == 3 and cell.trials < 500
    lo, hi = cell.wilson
    assert lo <= cell.wer <= hi


def test_trial_is_a_function_of_its_rng(pto1rea):
    model = ChannelModel(0.3)
    runs = [run_trial(pto1rea, pto1rea, 10, model, trial_rng(5, 0, t)) for t in range(6)]
    again = [run_trial(pto1rea, pto1rea, 10, model, trial_rng(5, 0, t)) for t in range(6)]
    assert runs == again


def test_worker_count_does_not_change_counts(pto1rea):
    base = dict(outer="PTO1REA", inner="PTO1REA", frames_outer=8, ps=(0.35, 0.45),
                min_failures=4, max_trials=60, batch=5, seed=11)
    one = simulate(SimulationConfig(**base, workers=1), pto1rea, pto1rea)
    two = simulate(SimulationConfig(**base, workers=2), pto1rea, pto1rea)
    assert [(c.trials, c.failures, c.mean_iters) for c in one.cells] == \
           [(c.trials, c.failures, c.mean_iters) for c in two.cells]


def test_ebit_noise_hurts_only_when_present(pto1rea):
    r = bundled("PTO1R")
    cfg = SimulationConfig("PTO1R", "PTO1R", 5, (0.0,), p_ebit=0.5, max_trials=20)
    # no ebits anywhere, so ebit noise cannot matter
    assert simulate(cfg, r, r).cells[0].failures == 0
