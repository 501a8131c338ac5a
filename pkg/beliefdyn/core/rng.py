"""
Seeded random streams keyed by (seed, label, round).

Every stochastic decision in a run draws from a stream derived from the master
seed, the identity of the deciding entity and the round number. Streams are
built through ``numpy.random.SeedSequence`` hashing, so the mapping does not
depend on the order in which agents are visited or on how work is split across
workers.
"""

import hashlib

from functools import lru_cache

import numpy as np

UINT64_MASK = (1 << 64) - 1

@lru_cache(maxsize=65536)
def _label_key(label: str) -> int:
    return int.from_bytes(hashlib.blake2b(label.encode("utf-8"), digest_size=8).digest(), "little")

def derive_stream(seed: int, agent_id: str, round: int) -> np.random.Generator:
    """
    Returns the PCG64 generator for the key (seed, agent_id, round).

    Args:
        seed (int): 64-bit master seed.
        agent_id (str): Agent id or any other stable label (``"replicate"``, ``"visibility"``).
        round (int): Round number or ordinal within the label.

    Returns:
        np.random.Generator: A fresh single-consumer generator. Identical keys
        yield identical draw sequences; distinct keys yield independent streams.
    """
    entropy = [seed & UINT64_MASK, _label_key(agent_id), round & UINT64_MASK]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))

def replicate_seed(seed: int, k: int) -> int:
    """
    The 64-bit seed of replicate ``k``.

    Replicate 0 keeps the master seed, so a single-replicate run and the first
    replicate of a multi-replicate run produce the same trace. Later replicates
    take the first raw draw of the ``"replicate"`` stream.
    """
    if k == 0:
        return seed & UINT64_MASK
    return int(derive_stream(seed, "replicate", k).bit_generator.random_raw())
