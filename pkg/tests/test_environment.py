import numpy as np
import pytest

from plbattle.choice_model import PLInstance, sample_top_m
from plbattle.environment import BattleEnvironment
from plbattle.oracle import enumerate_top_m_distribution
from plbattle.validation import tally_rankings
from plbattle.oracle import tv_distance


@pytest.fixture
def inst():
    return PLInstance(np.array([1.0, 0.8, 0.5, 0.3, 0.2, 0.1]))


@pytest.mark.parametrize("mode,m,size,length", [("WI", 3, 4, 1), ("TR", 2, 4, 2), ("FR", 1, 4, 4)])
def test_play_returns_ranking_of_mode_length(inst, mode, m, size, length):
    env = BattleEnvironment(inst, mode=mode, m=m, rng=np.random.default_rng(0))
    r = env.play(list(range(size)))
    assert len(r) == length
    assert len(set(r)) == length
    assert set(r) <= set(range(size))


def test_round_counter_counts_rounds_not_items(inst):
    env = BattleEnvironment(inst, mode="TR", m=3, rng=np.random.default_rng(0))
    env.play([0, 1, 2, 3])
    env.play([0, 1, 2, 3])
    assert env.rounds == 2
    env.play_many([1, 2, 3], 500)
    assert env.rounds == 502


def test_play_and_play_many_share_the_stream(inst):
    a = BattleEnvironment(inst, mode="TR", m=2, rng=np.random.default_rng(9))
    b = BattleEnvironment(inst, mode="TR", m=2, rng=np.random.default_rng(9))
    one_by_one = np.array([a.play([5, 1, 3]) for _ in range(40)])
    assert np.array_equal(one_by_one, b.play_many([5, 1, 3], 40))


def test_play_matches_library_sampler(inst):
    env = BattleEnvironment(inst, mode="TR", m=2, rng=np.random.default_rng(4))
    rng = np.random.default_rng(4)
    for _ in range(30):
        assert env.play([0, 2, 4]) == sample_top_m(inst, [0, 2, 4], 2, rng)


def test_chunks_cover_requested_rounds(inst, monkeypatch):
    import plbattle.environment as envmod

    monkeypatch.setattr(envmod, "CHUNK_ROUNDS", 7)
    env = BattleEnvironment(inst, mode="WI", rng=np.random.default_rng(1))
    chunks = list(env.play_chunks([0, 1], 20))
    assert [c.shape for c in chunks] == [(7, 1), (7, 1), (6, 1)]
    assert env.rounds == 20


def test_size_rules(inst):
    fixed = BattleEnvironment(inst, mode="WI", k=3)
    with pytest.raises(ValueError):
        fixed.play([0, 1])
    fixed.play([0, 1, 2])
    flexible = BattleEnvironment(inst, mode="WI", k=3, variable_size=True)
    flexible.play([4])
    with pytest.raises(ValueError):
        flexible.play([0, 1, 2, 3])
    tr = BattleEnvironment(inst, mode="TR", m=3)
    with pytest.raises(ValueError):
        tr.play([0, 1])
    with pytest.raises(ValueError):
        BattleEnvironment(inst, mode="XX")
    with pytest.raises(ValueError):
        fixed.play([0, 0, 1])


def test_environment_law_matches_oracle(inst):
    env = BattleEnvironment(inst, mode="TR", m=2, rng=np.random.default_rng(5))
    s = (1, 3, 4, 5)
    exact = enumerate_top_m_distribution(inst, s, 2)
    sampled = tally_rankings(env.play_many(s, 100_000), exact.support)
    assert tv_distance(sampled, exact) < 0.02


def test_hidden_instance_not_public(inst):
    env = BattleEnvironment(inst)
    assert not any(isinstance(getattr(env, name), PLInstance) for name in dir(env) if not name.startswith("_"))
