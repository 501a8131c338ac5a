import numpy as np

from beliefdyn.core.rng import derive_stream, replicate_seed

SEED = 20240611

def test_same_key_same_stream():
    a = derive_stream(SEED, "u1", 3).random(64)
    b = derive_stream(SEED, "u1", 3).random(64)
    assert np.array_equal(a, b)

def test_distinct_agents_distinct_streams():
    a = derive_stream(SEED, "u1", 3).random(64)
    b = derive_stream(SEED, "u2", 3).random(64)
    assert not np.array_equal(a, b)

def test_distinct_seeds_and_rounds_distinct_streams():
    base = derive_stream(SEED, "u1", 3).random(64)
    assert not np.array_equal(base, derive_stream(SEED + 1, "u1", 3).random(64))
    assert not np.array_equal(base, derive_stream(SEED, "u1", 4).random(64))

def test_stream_independent_of_call_order():
    forward = [derive_stream(SEED, f"u{i}", 1).random() for i in range(5)]
    backward = [derive_stream(SEED, f"u{i}", 1).random() for i in reversed(range(5))]
    assert forward == backward[::-1]

def test_replicate_seeds_are_stable_and_distinct():
    seeds = [replicate_seed(SEED, k) for k in range(8)]
    assert seeds == [replicate_seed(SEED, k) for k in range(8)]
    assert len(set(seeds)) == 8
    assert all(0 <= s < 2 ** 64 for s in seeds)

def test_large_seeds_are_accepted():
    assert 0.0 <= derive_stream(2 ** 64 - 1, "visibility", 0).random() < 1.0

def test_first_replicate_keeps_the_master_seed():
    assert replicate_seed(SEED, 0) == SEED
    assert replicate_seed(SEED, 1) != SEED
