# Copyright (c) 2025 CoReason, Inc.
#
# This software is proprietary and dual-licensed.
# Licensed under the Prosperity Public License 3.0 (the "License").
# A copy of the license is available at https://prosperitylicense.com/versions/3.0.0
# For details, see the LICENSE file.
# Commercial use beyond a 30-day trial requires a separate license.
#
# Source Code: https://github.com/CoReason-AI/coreason_affine

"""
Exact sampling of the discretized ensemble by the spectral algorithm: Bernoulli selection of
eigenvectors, then sequential point selection with downdating of the selected basis.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from coreason_affine.concentration import ConcentrationOperator, traces
from coreason_affine.config import get_settings
from coreason_affine.exceptions import DomainError
from coreason_affine.geometry import hyp_dist_array
from coreason_affine.models import BatchStatistics, HalfPlanePoint, PointConfiguration
from coreason_affine.utils.logger import logger

RealArray = npt.NDArray[np.float64]


def make_generator(seed: int) -> np.random.Generator:
    """Counter-based Philox stream; one independent stream per seed."""
    if seed < 0:
        raise DomainError(f"seed must be nonnegative, got {seed}")
    return np.random.Generator(np.random.Philox(seed))


def sample_indices(
    eigenvalues: RealArray, eigenvectors: npt.NDArray[np.complex128], rng: np.random.Generator
) -> List[int]:
    """
    Node indices of one draw from the DPP with marginal kernel V diag(eigenvalues) V^H.
    """
    # 1. Bernoulli selection of eigenvectors
    selected = rng.random(eigenvalues.shape[0]) < eigenvalues
    V = eigenvectors[:, selected]
    chosen: List[int] = []

    while V.shape[1] > 0:
        # 2. Node with probability proportional to the squared row norms
        probabilities = np.sum(np.abs(V) ** 2, axis=1)
        probabilities /= probabilities.sum()
        k = int(rng.choice(probabilities.shape[0], p=probabilities))
        chosen.append(k)
        if V.shape[1] == 1:
            break

        # 3. Eliminate the column with the largest entry at k, zeroing row k in the rest
        j = int(np.argmax(np.abs(V[k, :])))
        Vj = V[:, j]
        V = np.delete(V, j, axis=1)
        V = V - np.outer(Vj, V[k, :] / Vj[k])

        # 4. Re-orthonormalize
        V, _ = np.linalg.qr(V)

    return sorted(chosen)


def sample(op: ConcentrationOperator, seed: int) -> PointConfiguration:
    """One exact draw; deterministic given (operator, seed). Points are grid nodes."""
    indices = sample_indices(op.eigenvalues, op.eigenvectors, make_generator(seed))
    points = [HalfPlanePoint.from_complex(complex(op.grid.nodes[k])) for k in indices]
    return PointConfiguration(
        points=points,
        node_indices=indices,
        region=op.region,
        seed=seed,
        kernel=op.spec.summary(),
    )


def poisson_binomial(probabilities: Sequence[float]) -> RealArray:
    """Law of a sum of independent Bernoulli(p_j), by convolution."""
    law = np.zeros(len(probabilities) + 1)
    law[0] = 1.0
    for m, p in enumerate(probabilities, start=1):
        law[1 : m + 1] = law[1 : m + 1] * (1.0 - p) + law[:m] * p
        law[0] *= 1.0 - p
    return law


def total_variation(counts: npt.ArrayLike, law: npt.ArrayLike) -> float:
    """Total-variation distance between an empirical count histogram and a probability vector."""
    hist = np.asarray(counts, dtype=np.float64)
    target = np.asarray(law, dtype=np.float64)
    size = max(hist.shape[0], target.shape[0])
    empirical = np.pad(hist / hist.sum(), (0, size - hist.shape[0]))
    target = np.pad(target, (0, size - target.shape[0]))
    return 0.5 * float(np.sum(np.abs(empirical - target)))


def _pair_distances(op: ConcentrationOperator, indices: List[int]) -> RealArray:
    if len(indices) < 2:
        return np.zeros(0)
    nodes = op.grid.nodes[indices]
    upper = np.triu_indices(len(indices), k=1)
    return np.asarray(hyp_dist_array(nodes[:, None], nodes[None, :])[upper])


def _pair_expectations(op: ConcentrationOperator, edges: RealArray) -> Tuple[RealArray, RealArray]:
    """
    Expected number of unordered pairs per distance bin: the Poisson benchmark uses the product of
    the one-point masses M_ii M_jj, the determinantal value subtracts |M_ij|^2.
    """
    diag = np.real(np.diag(op.matrix))
    nodes = op.grid.nodes
    upper = np.triu_indices(nodes.shape[0], k=1)
    distances = hyp_dist_array(nodes[upper[0]], nodes[upper[1]])
    product = diag[upper[0]] * diag[upper[1]]
    repulsion = np.abs(op.matrix[upper]) ** 2
    poisson, _ = np.histogram(distances, bins=edges, weights=product)
    dpp, _ = np.histogram(distances, bins=edges, weights=product - repulsion)
    return poisson, dpp


def batch_stats(
    op: ConcentrationOperator,
    n_samples: int,
    base_seed: int,
    bin_width: float = 0.05,
    max_distance: float = 3.0,
    workers: Optional[int] = None,
) -> BatchStatistics:
    """
    Monte Carlo statistics over seeds base_seed + k, k < n_samples. Draws may run on a thread pool;
    results are reduced in seed order.
    """
    if n_samples < 2:
        raise DomainError(f"n_samples must be >= 2, got {n_samples}")
    workers = get_settings().WORKERS if workers is None else workers

    def draw(k: int) -> List[int]:
        return sample_indices(op.eigenvalues, op.eigenvectors, make_generator(base_seed + k))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            draws = list(pool.map(draw, range(n_samples)))
    else:
        draws = [draw(k) for k in range(n_samples)]

    counts = np.array([len(d) for d in draws], dtype=np.float64)
    mean = float(counts.mean())
    variance = float(counts.var(ddof=1))
    m4 = float(np.mean((counts - mean) ** 4))
    se_variance = float(np.sqrt(max(m4 - variance**2 * (n_samples - 3) / (n_samples - 1), 0.0) / n_samples))

    law = poisson_binomial(op.eigenvalues)
    histogram = np.bincount(counts.astype(np.int64))
    summary = traces(op)

    edges = np.arange(0.0, max_distance + bin_width / 2.0, bin_width)
    distances = np.concatenate([_pair_distances(op, d) for d in draws])
    pair_counts, _ = np.histogram(distances, bins=edges)
    poisson, dpp = _pair_expectations(op, edges)

    logger.info(
        f"Batch of {n_samples} samples: mean={mean:.4f} (tr={summary.expected:.4f}), "
        f"var={variance:.4f} (tr-tr2={summary.variance:.4f})"
    )
    return BatchStatistics(
        n_samples=n_samples,
        base_seed=base_seed,
        mean=mean,
        variance=variance,
        se_mean=float(np.sqrt(variance / n_samples)),
        se_variance=se_variance,
        expected=summary.expected,
        trace_variance=summary.variance,
        count_histogram=[int(c) for c in histogram],
        count_law=[float(p) for p in law],
        total_variation=total_variation(histogram, law),
        pair_edges=[float(e) for e in edges],
        pair_counts=[int(c) for c in pair_counts],
        poisson_pair_benchmark=[float(v) * n_samples for v in poisson],
        dpp_pair_expectation=[float(v) * n_samples for v in dpp],
    )
