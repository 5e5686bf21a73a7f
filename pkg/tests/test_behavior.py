import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trianglekit.behavior import (
    Behavior,
    JointTable,
    correlator,
    deterministic,
    fixture_nc,
    fixture_p1,
    fixture_p2,
    marginal,
    mix,
    sample_no_disturbance,
    triple_gap,
    uniform,
    validate,
)
from trianglekit.errors import BehaviorError, NotAContextError
from trianglekit.scenario import make_cycle, make_kcbs_chsh_hybrid, make_tripartite_chsh


def test_fixtures_validate():
    for b in (fixture_p1(), fixture_p2(), fixture_nc()):
        assert validate(b).ok


def test_fixture_correlators():
    p1 = fixture_p1()
    assert correlator(p1, "X1", "X2") == -1.0
    assert correlator(p1, "X3", "X1") == 1.0
    assert correlator(fixture_p2(), "X1", "X2") == 0.0


def test_table_orientation():
    t = JointTable(0.1, 0.2, 0.3, 0.4)
    b = Behavior(make_cycle(3), {("X2", "X1"): t, ("X2", "X3"): t, ("X1", "X3"): t})
    assert b.table("X2", "X1") == t
    assert b.table("X1", "X2") == t.transpose()
    assert b.prob("X1", 1, "X2", -1) == pytest.approx(0.3)


def test_missing_table_names_context():
    with pytest.raises(BehaviorError, match="X1|X3"):
        Behavior(make_cycle(3), {("X1", "X2"): JointTable(1, 0, 0, 0), ("X2", "X3"): JointTable(1, 0, 0, 0)})


def test_table_for_non_context_rejected():
    t = JointTable(1, 0, 0, 0)
    tables = {c: t for c in make_cycle(4).contexts}
    tables[("X1", "X3")] = t
    with pytest.raises(NotAContextError):
        Behavior(make_cycle(4), tables)


def test_validate_flags_disturbance_and_bad_normalization():
    s = make_cycle(3)
    b = Behavior(s, {("X1", "X2"): JointTable(1, 0, 0, 0), ("X2", "X3"): JointTable(0, 0, 0, 1), ("X1", "X3"): JointTable(1, 0, 0, 0)})
    rep = validate(b)
    assert not rep.ok
    assert any("no-disturbance" in f for f in rep.failures())

    bad = Behavior(s, {c: JointTable(0.5, 0.5, 0.5, -0.5) for c in s.contexts})
    assert any("normalization" in f for f in validate(bad).failures())


def test_triple_gap_detects_pr_like_triangle():
    # +,+ correlated on two edges and anticorrelated on the third has no joint
    corr, anti = JointTable(0.5, 0, 0, 0.5), JointTable(0, 0.5, 0.5, 0)
    assert triple_gap(corr, corr, anti) > 0
    assert triple_gap(corr, corr, corr) <= 0


def test_validate_checks_declared_triples():
    s = make_tripartite_chsh()
    corr, anti = JointTable(0.5, 0, 0, 0.5), JointTable(0, 0.5, 0.5, 0)
    tables = {c: corr for c in s.contexts}
    tables[("B1", "C1")] = anti
    rep = validate(Behavior(s, tables))
    assert rep.triple_gaps[("A1", "B1", "C1")] > 0
    assert not rep.ok


def test_marginal_and_deterministic():
    s = make_cycle(4)
    b = deterministic(s, {"X1": 1, "X2": -1, "X3": -1, "X4": 1})
    assert marginal(b, "X2") == (0.0, 1.0)
    assert correlator(b, "X1", "X2") == -1.0
    assert validate(b).ok
    assert marginal(uniform(s), "X3") == (0.5, 0.5)


def test_mix_endpoints_and_midpoint():
    p1, nc = fixture_p1(), fixture_nc()
    assert mix(p1, nc, 0.0) == nc
    assert mix(p1, nc, 1.0) == p1
    m = mix(p1, nc, 0.5)
    for c in m.scenario.contexts:
        np.testing.assert_allclose(m.tables[c].array, fixture_p2().tables[c].array, atol=1e-12)
    with pytest.raises(ValueError):
        mix(p1, nc, 1.5)


def test_json_round_trip(tmp_path):
    for b in (fixture_p1(), sample_no_disturbance(make_kcbs_chsh_hybrid(), 3)):
        path = tmp_path / "b.json"
        b.save(path)
        assert Behavior.load(path) == b


def test_from_dict_rejects_non_canonical_keys():
    d = fixture_p1().to_dict()
    d["tables"]["X2|X1"] = d["tables"].pop("X1|X2")
    with pytest.raises(BehaviorError, match="canonical"):
        Behavior.from_dict(json.loads(json.dumps(d)))


def test_from_dict_rejects_bad_table_keys():
    d = fixture_p1().to_dict()
    d["tables"]["X1|X2"] = {"++": 1.0}
    with pytest.raises(BehaviorError):
        Behavior.from_dict(d)


@pytest.mark.parametrize("make", [lambda: make_cycle(5), make_kcbs_chsh_hybrid, make_tripartite_chsh])
def test_samples_validate(make):
    s = make()
    for seed in range(10):
        assert validate(sample_no_disturbance(s, seed)).ok


def test_sampling_is_seeded():
    s = make_cycle(4)
    assert sample_no_disturbance(s, 5) == sample_no_disturbance(s, 5)
    assert sample_no_disturbance(s, 5) != sample_no_disturbance(s, 6)


probs = st.lists(st.floats(0, 1), min_size=4, max_size=4).filter(lambda p: sum(p) > 1e-3)


@given(probs)
def test_transpose_swaps_marginals(p):
    t = JointTable(*(np.array(p) / sum(p)))
    assert t.transpose().first_marginal() == pytest.approx(t.second_marginal())
    assert t.transpose().transpose() == t
    assert t.transpose().correlator() == pytest.approx(t.correlator())


@settings(max_examples=50)
@given(st.floats(0, 1))
def test_mixture_stays_valid(w):
    s = make_cycle(3)
    assert validate(mix(sample_no_disturbance(s, 1), sample_no_disturbance(s, 2), w)).ok
