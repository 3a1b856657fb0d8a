"""Direct real-vector encoding of shapes and the variation operators.

A genome is a flat vector in [0,1]^(3*volume): three genes per cell, in cell
order x-major then y then z (index = (x*sy + y)*sz + z for a 3x3x3 shape).
The triple (presence, type, orientation) decodes as: a block exists iff
presence > 0.5; the type interval [0,1] is split evenly over the active block
set; orientation is split evenly over North, South, East, West, Up, Down.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blocks import BlockPlacement, BlockSet, ORIENTATION_ORDER

Genome = np.ndarray

PRESENCE_THRESHOLD = 0.5


class LengthError(ValueError):
    """Genome length is not a positive multiple of 3."""


class LengthMismatchError(ValueError):
    """Genome length does not match the expected shape volume or partner."""


@dataclass(frozen=True)
class DecodeConfig:
    block_set: BlockSet = BlockSet.ORIGINAL
    presence_threshold: float = PRESENCE_THRESHOLD
    shape_dims: tuple[int, int, int] = (3, 3, 3)

    def __post_init__(self):
        if not 0.0 < self.presence_threshold < 1.0:
            raise ValueError("presence_threshold must be in (0, 1)")

    @property
    def volume(self) -> int:
        dx, dy, dz = self.shape_dims
        return dx * dy * dz

    @property
    def genome_length(self) -> int:
        return 3 * self.volume

    def cell_for_index(self, i: int) -> tuple[int, int, int]:
        _, dy, dz = self.shape_dims
        x, rem = divmod(i, dy * dz)
        y, z = divmod(rem, dz)
        return (x, y, z)


def decode(genome: Genome, cfg: DecodeConfig) -> list[BlockPlacement]:
    """Turn a genome into block placements in deterministic cell order."""
    if len(genome) != cfg.genome_length:
        raise LengthMismatchError(f"expected length {cfg.genome_length}, got {len(genome)}")
    members = cfg.block_set.members
    k = len(members)
    shape: list[BlockPlacement] = []
    for i in range(cfg.volume):
        presence, kind_gene, orient_gene = genome[3 * i : 3 * i + 3]
        if presence <= cfg.presence_threshold:
            continue
        kind = members[min(int(kind_gene * k), k - 1)]
        orient = ORIENTATION_ORDER[min(int(orient_gene * 6), 5)]
        shape.append(BlockPlacement(cfg.cell_for_index(i), kind, orient))
    return shape


def random_genome(rng: np.random.Generator, length: int) -> Genome:
    if length <= 0 or length % 3 != 0:
        raise LengthError(f"length must be a positive multiple of 3, got {length}")
    return rng.random(length)


def polynomial_mutate(
    genome: Genome,
    rng: np.random.Generator,
    per_gene_rate: float = 0.3,
    eta: float = 20.0,
) -> Genome:
    """Bounded polynomial mutation on [0,1], applied gene-wise.

    Each gene mutates independently with probability `per_gene_rate`; `eta`
    is the distribution index (larger means smaller perturbations). Untouched
    genes are returned bit-identical.
    """
    n = len(genome)
    mask = rng.random(n) < per_gene_rate
    u = rng.random(n)
    out = genome.copy()
    if not mask.any():
        return out
    x = out[mask]
    r = u[mask]
    mut_pow = 1.0 / (eta + 1.0)
    delta1 = x  # distance to the lower bound 0
    delta2 = 1.0 - x  # distance to the upper bound 1
    low = r <= 0.5
    deltaq = np.empty_like(x)
    val = 2.0 * r[low] + (1.0 - 2.0 * r[low]) * (1.0 - delta1[low]) ** (eta + 1.0)
    deltaq[low] = val**mut_pow - 1.0
    val = 2.0 * (1.0 - r[~low]) + 2.0 * (r[~low] - 0.5) * (1.0 - delta2[~low]) ** (eta + 1.0)
    deltaq[~low] = 1.0 - val**mut_pow
    out[mask] = np.clip(x + deltaq, 0.0, 1.0)
    return out


def crossover(a: Genome, b: Genome, rng: np.random.Generator) -> Genome:
    """Single-point crossover cut at a gene-triple boundary.

    The cut index is a uniform multiple of 3 in [0, len], so a cell's
    (presence, type, orientation) triple is never split between parents.
    """
    if len(a) != len(b):
        raise LengthMismatchError(f"parent lengths differ: {len(a)} vs {len(b)}")
    cut = 3 * int(rng.integers(0, len(a) // 3 + 1))
    return np.concatenate([a[:cut], b[cut:]])


def genome_to_line(genome: Genome) -> str:
    """Serialize as one space-separated line, 17 significant digits (exact replay)."""
    return " ".join(f"{v:.17g}" for v in genome)


def genome_from_line(line: str) -> Genome:
    values = np.array([float(tok) for tok in line.split()], dtype=float)
    if len(values) == 0 or len(values) % 3 != 0:
        raise LengthError(f"parsed {len(values)} values, expected a positive multiple of 3")
    return values
