"""Synthetic BPSK/QPSK receptions and the per-node classification datasets.

One sample covers 16 bits. BPSK holds each bit for one complex sample;
QPSK holds each 2-bit symbol for two half-symbol samples, so both schemes
yield 16 complex samples and 32 features: interleaved pairs of phase-shift
magnitude and instantaneous power.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import seeds
from .graphs import Topology

SCHEMES = ("bpsk", "qpsk")  # classifier class order: 0 = BPSK, 1 = QPSK
BITS_PER_SAMPLE = 16
IQ_SAMPLES = 16
FEATURES_PER_SAMPLE = 32

_QPSK_GRAY_PHASES = {
    (0, 0): math.pi / 4,
    (0, 1): 3 * math.pi / 4,
    (1, 1): 5 * math.pi / 4,
    (1, 0): 7 * math.pi / 4,
}


@dataclass(frozen=True)
class ChannelParams:
    """Log-distance path loss around a transmitter at the origin.

    Signal amplitude decays as (d / reference_distance) ** (-exponent / 2)
    while the receiver noise floor stays fixed, so the per-node SNR in dB is
    reference_snr_db - 10 * exponent * log10(d / reference_distance).
    """

    tx_position: tuple[float, float] = (0.0, 0.0)
    path_loss_exponent: float = 2.7
    reference_snr_db: float = 25.0
    reference_distance: float = 200.0
    phase_offset_sigma: float = 0.1

    def __post_init__(self):
        if self.path_loss_exponent <= 0:
            raise ValueError("path_loss_exponent must be positive")
        if self.reference_distance <= 0:
            raise ValueError("reference_distance must be positive")

    @classmethod
    def noiseless(cls, path_loss_exponent: float = 2.7) -> "ChannelParams":
        return cls(path_loss_exponent=path_loss_exponent, reference_snr_db=math.inf, phase_offset_sigma=0.0)

    def distance_to(self, position) -> float:
        return math.dist(self.tx_position, position)

    def amplitude_at(self, position) -> float:
        d = max(self.distance_to(position), 1e-9)
        return (d / self.reference_distance) ** (-self.path_loss_exponent / 2.0)

    def snr_db_at(self, position) -> float:
        d = max(self.distance_to(position), 1e-9)
        return self.reference_snr_db - 10.0 * self.path_loss_exponent * math.log10(d / self.reference_distance)

    def noise_amplitude(self) -> float:
        # fixed noise floor: amplitude such that SNR at the reference distance matches
        return 10.0 ** (-self.reference_snr_db / 20.0)


def modulate(bits, scheme: str, rng: np.random.Generator, channel: ChannelParams, node_position) -> np.ndarray:
    """Complex baseband sequence for one 16-bit sample as seen at a node."""
    bits = np.asarray(bits, dtype=np.int64)
    if bits.shape != (BITS_PER_SAMPLE,) or not np.all((bits == 0) | (bits == 1)):
        raise ValueError(f"expected {BITS_PER_SAMPLE} binary values, got shape {bits.shape}")
    if scheme == "bpsk":
        phases = np.where(bits == 0, 0.0, math.pi)
    elif scheme == "qpsk":
        symbol_phases = np.array(
            [_QPSK_GRAY_PHASES[(int(bits[2 * k]), int(bits[2 * k + 1]))] for k in range(BITS_PER_SAMPLE // 2)]
        )
        phases = np.repeat(symbol_phases, 2)  # two half-symbol samples per symbol
    else:
        raise ValueError(f"unknown scheme {scheme!r}")

    amplitude = channel.amplitude_at(node_position)
    offset = rng.normal(0.0, channel.phase_offset_sigma) if channel.phase_offset_sigma > 0 else 0.0
    clean = amplitude * np.exp(1j * (phases + offset))
    sigma = channel.noise_amplitude()
    noise = (rng.standard_normal(IQ_SAMPLES) + 1j * rng.standard_normal(IQ_SAMPLES)) * (sigma / math.sqrt(2.0))
    return clean + noise


def extract_features(iq, scheme: str) -> np.ndarray:
    """Interleaved (phase shift, power) feature pairs for one sample.

    The phase shift of sample k is the magnitude of the wrapped phase
    difference to sample k-1 (sample 0 is measured against phase 0), so
    the phase features live in [0, pi].
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    iq = np.asarray(iq, dtype=np.complex128)
    if iq.shape != (IQ_SAMPLES,):
        raise ValueError(f"expected {IQ_SAMPLES} complex samples, got shape {iq.shape}")
    angles = np.angle(iq)
    previous = np.concatenate(([0.0], angles[:-1]))
    raw = angles - previous
    wrapped = np.mod(raw + math.pi, 2.0 * math.pi) - math.pi
    phase_shift = np.abs(wrapped)
    power = np.abs(iq) ** 2
    features = np.empty(FEATURES_PER_SAMPLE, dtype=np.float64)
    features[0::2] = phase_shift
    features[1::2] = power
    return features


@dataclass
class NodeDataset:
    """Per-node labelled feature samples; labels index SCHEMES."""

    node: int
    train_x: np.ndarray
    train_y: np.ndarray
    test_x: np.ndarray
    test_y: np.ndarray


@dataclass
class DatasetBundle:
    nodes: list[NodeDataset]
    pooled_x: np.ndarray
    pooled_y: np.ndarray


def _balanced_labels(count: int, rng: np.random.Generator) -> np.ndarray:
    # exact class balance in random order; keeps the +-5% balance invariant at any seed
    labels = np.concatenate([np.zeros(count // 2, dtype=np.int64), np.ones(count - count // 2, dtype=np.int64)])
    return rng.permutation(labels)


def _draw_samples(count: int, rng, channel, position) -> tuple[np.ndarray, np.ndarray]:
    labels = _balanced_labels(count, rng)
    x = np.empty((count, FEATURES_PER_SAMPLE), dtype=np.float64)
    for k in range(count):
        scheme = SCHEMES[labels[k]]
        bits = rng.integers(0, 2, size=BITS_PER_SAMPLE)
        iq = modulate(bits, scheme, rng, channel, position)
        x[k] = extract_features(iq, scheme)
    return x, labels


def build_datasets(
    topology: Topology,
    channel: ChannelParams,
    master_seed: int,
    train_size: int = 1000,
    test_size: int = 100,
) -> DatasetBundle:
    """Per-node train/test splits plus the pooled test set over all nodes.

    Each node draws from its own stream seeded by (master_seed, node), so
    the bundle is a pure function of topology, channel and seed.
    """
    nodes = []
    for node, position in enumerate(topology.positions):
        rng = seeds.data_rng(master_seed, node)
        train_x, train_y = _draw_samples(train_size, rng, channel, position)
        test_x, test_y = _draw_samples(test_size, rng, channel, position)
        nodes.append(NodeDataset(node, train_x, train_y, test_x, test_y))
    pooled_x = np.concatenate([d.test_x for d in nodes])
    pooled_y = np.concatenate([d.test_y for d in nodes])
    return DatasetBundle(nodes, pooled_x, pooled_y)


def dump_datasets(bundle: DatasetBundle, out_dir, master_seed: int) -> None:
    """Write one JSON record per sample plus a manifest with the seed and sizes."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    train_size = bundle.nodes[0].train_x.shape[0] if bundle.nodes else 0
    test_size = bundle.nodes[0].test_x.shape[0] if bundle.nodes else 0
    manifest = {
        "master_seed": master_seed,
        "num_nodes": len(bundle.nodes),
        "train_size": train_size,
        "test_size": test_size,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    with (out / "samples.jsonl").open("w", encoding="utf-8") as fh:
        for d in bundle.nodes:
            for x, y in ((d.train_x, d.train_y), (d.test_x, d.test_y)):
                for k in range(x.shape[0]):
                    record = {"node": d.node, "label": SCHEMES[y[k]], "features": x[k].tolist()}
                    fh.write(json.dumps(record) + "\n")


def load_datasets(in_dir) -> DatasetBundle:
    src = Path(in_dir)
    manifest = json.loads((src / "manifest.json").read_text(encoding="utf-8"))
    train_size = manifest["train_size"]
    test_size = manifest["test_size"]
    per_node = train_size + test_size
    records = [json.loads(line) for line in (src / "samples.jsonl").read_text(encoding="utf-8").splitlines()]
    nodes = []
    for node in range(manifest["num_nodes"]):
        chunk = records[node * per_node : (node + 1) * per_node]
        if len(chunk) != per_node or any(r["node"] != node for r in chunk):
            raise ValueError(f"sample records for node {node} are missing or out of order")
        x = np.array([r["features"] for r in chunk], dtype=np.float64)
        y = np.array([SCHEMES.index(r["label"]) for r in chunk], dtype=np.int64)
        nodes.append(
            NodeDataset(node, x[:train_size], y[:train_size], x[train_size:], y[train_size:])
        )
    pooled_x = np.concatenate([d.test_x for d in nodes])
    pooled_y = np.concatenate([d.test_y for d in nodes])
    return DatasetBundle(nodes, pooled_x, pooled_y)
