import pytest
from pydantic import ValidationError

from app.services import theorems
from app.services.errors import CheckConfigError
from app.services.theorems import (
    BIPARTITE,
    STATEMENTS,
    SEARCH_DIMS,
    CheckConfig,
    SampleFamily,
    TheoremId,
    TrialOutcome,
    derive_config,
    replay_subadditivity_instance,
    replay_trial,
    run_all,
    run_check,
    search_subadditivity_violation,
)


def test_every_theorem_has_checker_and_statement():
    assert set(theorems._CHECKERS) == set(TheoremId)
    assert set(STATEMENTS) == set(TheoremId)
    assert len(TheoremId) == 11


@pytest.mark.parametrize("theorem", list(TheoremId))
def test_single_trial_passes(theorem):
    report = run_check(theorem, CheckConfig(trials=1, seed=7))
    assert report.trials_run == 1
    assert report.passed
    assert report.statement == STATEMENTS[theorem]


@pytest.mark.parametrize("theorem", list(TheoremId))
def test_default_dims_pass(theorem):
    report = run_check(theorem, CheckConfig(trials=40, seed=42))
    assert report.failures == 0, report.failing_seeds
    assert report.worst_margin >= -report.tolerance
    assert report.worst_margin == min(report.side_margins.values())


def test_run_all_passes_and_is_deterministic():
    config = CheckConfig(trials=15, seed=42)
    first = run_all(config)
    second = run_all(config)
    assert [r.theorem for r in first] == list(TheoremId)
    assert all(r.passed for r in first)
    assert [r.model_dump_json() for r in first] == [r.model_dump_json() for r in second]


def test_workers_do_not_change_report():
    serial = run_check(TheoremId.MEASUREMENT_MONOTONE, CheckConfig(trials=30, seed=3, workers=1))
    parallel = run_check(TheoremId.MEASUREMENT_MONOTONE, CheckConfig(trials=30, seed=3, workers=4))
    assert serial.model_dump_json() == parallel.model_dump_json()


def test_seed_changes_instances():
    a = run_check(TheoremId.KLEIN, CheckConfig(trials=5, seed=1))
    b = run_check(TheoremId.KLEIN, CheckConfig(trials=5, seed=2))
    assert a.side_margins != b.side_margins


def test_concavity_orthogonal_reports_gap():
    report = run_check(TheoremId.CONCAVITY_ORTHOGONAL, CheckConfig(trials=50, seed=11))
    assert report.passed
    assert report.observations["min_gap"] > 0.0


def test_concavity_bounds_reports_both_sides():
    report = run_check(TheoremId.CONCAVITY_BOUNDS, CheckConfig(trials=20, seed=5))
    assert {"lower", "upper"} <= set(report.side_margins)
    assert report.side_margins["lower"] >= -report.tolerance
    assert report.side_margins["upper"] >= -report.tolerance


def test_divergence_monotone_twirl_identity():
    report = run_check(TheoremId.DIVERGENCE_MONOTONE, CheckConfig(trials=30, seed=9, dims=[(2, 2), (2, 3), (3, 2)]))
    assert report.passed
    assert report.side_margins["twirl_identity"] > -1e-10


# TEIL 2 - Konfiguration
def test_bipartite_theorem_rejects_scalar_dims():
    with pytest.raises(CheckConfigError):
        run_check(TheoremId.PURE_MARGINALS, CheckConfig(dims=[2, 3]))


def test_scalar_theorem_rejects_pairs():
    with pytest.raises(CheckConfigError):
        run_check(TheoremId.KLEIN, CheckConfig(dims=[(2, 2)]))


def test_concavity_orthogonal_needs_two_dimensions():
    with pytest.raises(CheckConfigError):
        run_check(TheoremId.CONCAVITY_ORTHOGONAL, CheckConfig(dims=[1]))


@pytest.mark.parametrize("values", [{"trials": 0}, {"tolerance": 0.0}, {"seed": -1}, {"dims": [0]}])
def test_check_config_validation(values):
    with pytest.raises(ValidationError):
        CheckConfig(**values)


def test_check_config_accepts_lists_as_pairs():
    config = CheckConfig(dims=[[2, 3], 4])
    assert config.dims == [(2, 3), 4]


def test_derive_config_filters_dims():
    config = CheckConfig(dims=[1, 2, (2, 2)])
    assert derive_config(TheoremId.KLEIN, config).dims == [1, 2]
    assert derive_config(TheoremId.CONCAVITY_ORTHOGONAL, config).dims == [2]
    assert all(derive_config(t, config).dims == [(2, 2)] for t in BIPARTITE)


def test_unknown_theorem_name():
    with pytest.raises(ValueError):
        run_check("bogus", CheckConfig(trials=1))


# TEIL 3 - Fehlerprotokoll und Replay
def _noisy_checker(rng, dims, tol):
    return TrialOutcome(sides={"noise": float(rng.uniform(-1.0, 1.0))})


def test_failing_seeds_replay(monkeypatch):
    monkeypatch.setitem(theorems._CHECKERS, TheoremId.KLEIN, _noisy_checker)
    report = run_check(TheoremId.KLEIN, CheckConfig(trials=40, seed=123))
    assert report.failures == len(report.failing_seeds) > 0
    assert not report.passed
    for failure in report.failing_seeds:
        outcome = replay_trial(TheoremId.KLEIN, failure.seed, failure.dims, report.tolerance)
        assert outcome.slack == failure.slack
        assert outcome.slack < -report.tolerance
    assert report.worst_margin == min(f.slack for f in report.failing_seeds)


def test_replay_trial_matches_passing_run():
    report = run_check(TheoremId.JOINT_CONVEXITY, CheckConfig(trials=1, seed=77, dims=[3]))
    seed = theorems.trial_seed(77, list(TheoremId).index(TheoremId.JOINT_CONVEXITY), 0)
    outcome = replay_trial("joint_convexity", seed, 3)
    assert outcome.slack == report.worst_margin


# TEIL 4 - Explorative Suche
def test_search_subadditivity_replays():
    instance = search_subadditivity_violation(CheckConfig(trials=200, seed=42, dims=[(2, 2), (3, 3)]))
    if instance is not None:
        assert instance.excess > 0
        assert replay_subadditivity_instance(instance) == pytest.approx(instance.excess, abs=1e-12)


@pytest.mark.parametrize("family", [SampleFamily.PRODUCT, SampleFamily.DIAGONAL])
def test_search_never_returns_subadditive_families(family):
    config = CheckConfig(trials=300, seed=42, dims=[(2, 2), (2, 3), (3, 3)])
    assert search_subadditivity_violation(config, family) is None


def test_search_replays_forced_instance():
    # negative Toleranz erzwingt einen Fund, der dann exakt nachgerechnet wird
    config = CheckConfig(trials=5, seed=3).model_copy(update={"tolerance": -10.0})
    instance = search_subadditivity_violation(config, SampleFamily.DIAGONAL)
    assert instance is not None
    assert instance.trial == 0
    assert instance.family is SampleFamily.DIAGONAL
    assert tuple(instance.dims) == SEARCH_DIMS[0]
    assert replay_subadditivity_instance(instance) == instance.excess


def test_diagonal_checker_passes_trivial_b():
    report = run_check(TheoremId.DIAG_SUBADDITIVITY, CheckConfig(trials=5, seed=1, dims=[(3, 1)]))
    assert report.passed


def test_search_subadditivity_needs_pairs():
    with pytest.raises(CheckConfigError):
        search_subadditivity_violation(CheckConfig(trials=5, dims=[4]))
