from gridplay.core.rng import CounterRng, mix64

import pytest


def test_same_state_same_draw():
    a = CounterRng(seed=42, counter=17)
    b = CounterRng(seed=42, counter=17)
    assert [a.next_u64() for _ in range(100)] == [b.next_u64() for _ in range(100)]


def test_counter_alone_determines_draw():
    rng = CounterRng(seed=9)
    first = [rng.next_u64() for _ in range(10)]
    rng.counter = 0
    assert [rng.next_u64() for _ in range(10)] == first


def test_frozen_reference_values():
    # Pinned outputs of the generator; a change here is a replay break.
    rng = CounterRng(seed=0)
    assert rng.next_u64() == mix64(0x9E3779B97F4A7C15)
    rng = CounterRng(seed=12345)
    assert [rng.next_u64() for _ in range(3)] == [
        mix64((12345 + (k + 1) * 0x9E3779B97F4A7C15) % 2**64) for k in range(3)
    ]


def test_randrange_bounds():
    rng = CounterRng(seed=1)
    draws = [rng.randrange(7) for _ in range(1000)]
    assert set(draws) == set(range(7))
    with pytest.raises(ValueError):
        rng.randrange(0)


def test_uniform_range():
    rng = CounterRng(seed=3)
    draws = [rng.uniform(5.0, 25.0) for _ in range(1000)]
    assert all(5.0 <= d < 25.0 for d in draws)


def test_shuffle_is_permutation_and_deterministic():
    items = list(range(20))
    a, b = list(items), list(items)
    CounterRng(seed=8).shuffle(a)
    CounterRng(seed=8).shuffle(b)
    assert a == b
    assert sorted(a) == items
    assert a != items  # vanishingly unlikely to be identity


def test_spawn_streams_independent():
    base = CounterRng(seed=77)
    s1, s2 = base.spawn(1), base.spawn(2)
    assert s1.seed != s2.seed
    assert s1.next_u64() != s2.next_u64()
    # Spawning does not draw from the parent.
    assert base.counter == 0


def test_clone_detached():
    rng = CounterRng(seed=5)
    rng.next_u64()
    dup = rng.clone()
    assert dup.next_u64() == rng.next_u64()
    rng.next_u64()
    assert dup.counter != rng.counter
