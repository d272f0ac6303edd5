"""Deterministic per-purpose random streams derived from one master seed.

Every stochastic component owns a domain tag so that streams never collide
and per-node work is independent of scheduling order.
"""

from __future__ import annotations

import numpy as np

_DATA = 0
_INIT = 1
_TRAIN = 2
_ATTACK = 3
_TOPOLOGY = 4


def data_rng(master_seed: int, node: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([master_seed, _DATA, node]))


def init_rng(master_seed: int, node: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([master_seed, _INIT, node]))


def train_rng(master_seed: int, node: int, round_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([master_seed, _TRAIN, node, round_index]))


def attack_rng(master_seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([master_seed, _ATTACK]))


def topology_rng(master_seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([master_seed, _TOPOLOGY]))
