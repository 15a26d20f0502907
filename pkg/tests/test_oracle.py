import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from plbattle.choice_model import PLInstance, winner_prob
from plbattle.oracle import (
    DiscreteDistribution,
    build_lower_bound_instances,
    empirical_distribution,
    enumerate_top_m_distribution,
    enumerate_top_m_recursive,
    kl_upper_bound,
    tv_distance,
    winner_kl,
)


def test_uniform_full_rankings():
    dist = enumerate_top_m_distribution(PLInstance(np.ones(3)), (0, 1, 2), 3)
    assert len(dist.support) == 6
    assert np.allclose(dist.probs, 1 / 6)


def test_top1_matches_winner_prob():
    inst = PLInstance(np.array([0.3, 2.0, 1.1, 0.7]))
    dist = enumerate_top_m_distribution(inst, (3, 0, 1), 1)
    for (i,), p in dist.as_dict().items():
        assert p == pytest.approx(winner_prob(inst, (3, 0, 1), i), abs=1e-15)


def test_top2_spot_value():
    dist = enumerate_top_m_distribution(PLInstance(np.array([2.0, 1.0, 1.0])), (0, 1, 2), 2)
    assert dist.prob((0, 1)) == pytest.approx(0.25, abs=1e-15)
    assert len(dist.support) == 6


def test_enumeration_cap():
    inst = PLInstance(np.ones(9))
    with pytest.raises(ValueError):
        enumerate_top_m_distribution(inst, tuple(range(9)), 1)
    with pytest.raises(ValueError):
        enumerate_top_m_distribution(inst, (0, 1), 3)
    assert len(enumerate_top_m_distribution(inst, tuple(range(8)), 8).support) == math.factorial(8)


@given(st.lists(st.floats(0.01, 50.0), min_size=1, max_size=6), st.data())
def test_two_enumerations_agree(thetas, data):
    inst = PLInstance(np.array(thetas + [1.0]))
    s = tuple(data.draw(st.permutations(range(inst.n))))
    m = data.draw(st.integers(1, len(s)))
    a = enumerate_top_m_distribution(inst, s, m).as_dict()
    b = enumerate_top_m_recursive(inst, s, m).as_dict()
    assert set(a) == set(b)
    assert max(abs(a[x] - b[x]) for x in a) <= 1e-10
    assert sum(a.values()) == pytest.approx(1.0, abs=1e-10)


def test_distribution_validation():
    with pytest.raises(ValueError):
        DiscreteDistribution((0, 1), np.array([0.5, 0.6]))
    with pytest.raises(ValueError):
        DiscreteDistribution((0, 0), np.array([0.5, 0.5]))
    with pytest.raises(ValueError):
        DiscreteDistribution((0, 1), np.array([1.2, -0.2]))


def test_tv_examples():
    p = DiscreteDistribution((0, 1), np.array([1.0, 0.0]))
    q = DiscreteDistribution((1, 0), np.array([1.0, 0.0]))
    assert tv_distance(p, p) == 0.0
    assert tv_distance(p, q) == 1.0
    a = DiscreteDistribution((0, 1), np.array([0.6, 0.4]))
    b = DiscreteDistribution((0, 1), np.array([0.4, 0.6]))
    assert tv_distance(a, b) == pytest.approx(0.2)
    with pytest.raises(ValueError):
        tv_distance(a, DiscreteDistribution((0, 2), np.array([0.5, 0.5])))


def test_empirical_distribution():
    d = empirical_distribution([1, 1, 0, 2], (0, 1, 2))
    assert d.as_dict() == {0: 0.25, 1: 0.5, 2: 0.25}
    with pytest.raises(ValueError):
        empirical_distribution([3], (0, 1))


def test_lower_bound_construction_values():
    true, alts = build_lower_bound_instances(3, 0.1, theta=1.0)
    assert np.allclose(true.thetas, [0.6, 0.4, 0.4])
    assert np.allclose(alts[0].thetas, [0.24, 0.36, 0.16])
    assert len(alts) == 2
    for a, alt in enumerate(alts, start=1):
        assert alt.best_set == (a,)
    with pytest.raises(ValueError):
        build_lower_bound_instances(3, 0.4)
    with pytest.raises(ValueError):
        build_lower_bound_instances(3, 0.0)


def test_kl_spot_values():
    true, alts = build_lower_bound_instances(3, 0.1)
    kl = winner_kl(true, alts[0], (0, 1))
    # the winner laws are (0.6, 0.4) and (0.4, 0.6)
    expected = 0.6 * math.log(0.6 / 0.4) + 0.4 * math.log(0.4 / 0.6)
    assert kl == pytest.approx(expected, abs=1e-12)
    assert kl == pytest.approx(0.08109, abs=1e-5)
    assert kl_upper_bound(2, 0.1) == pytest.approx(0.5 * (1.5 - 1 / 1.5) ** 2, abs=1e-12)
    assert kl <= kl_upper_bound(2, 0.1)
    assert winner_kl(true, true, (0, 1, 2)) == 0.0


def test_kl_is_asymmetric():
    true, alts = build_lower_bound_instances(4, 0.1)
    s = (0, 1, 2)
    assert winner_kl(true, alts[0], s) != pytest.approx(winner_kl(alts[0], true, s), abs=1e-6)


@given(st.integers(2, 6), st.floats(1e-3, 1 / math.sqrt(8)), st.floats(0.1, 10.0))
def test_kl_bound_on_subsets_with_perturbed_arm(k, eps, theta):
    n = k + 2
    true, alts = build_lower_bound_instances(n, eps, theta)
    bound = kl_upper_bound(k, eps)
    for a in (1, n - 1):
        rest = [x for x in range(n) if x != a]
        for chosen in itertools.combinations(rest, k - 1):
            assert winner_kl(true, alts[a - 1], (a, *chosen)) <= bound + 1e-9
