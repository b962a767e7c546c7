"""Probe sets for sampled infima and suprema over a state box."""

import itertools

import numpy as np

from rd_contract.types.certificate import StateBox
from rd_contract.types.config import SamplingSettings

MAX_CORNER_DIM = 10


def box_probes(box: StateBox, sampling: SamplingSettings | None = None) -> np.ndarray:
    """Centre, corners (dim <= 10), face midpoints, then ``n_random`` uniform draws.

    Args:
        box: Box to probe
        sampling: Random probe count and seed

    Returns:
        (k, dim) array; a zero-dimensional box gives a single empty probe
    """
    sampling = sampling or SamplingSettings()
    if box.dim == 0:
        return np.zeros((1, 0))

    lower, upper = box.lower, box.upper
    centre = 0.5 * (lower + upper)
    probes = [centre]
    if box.dim <= MAX_CORNER_DIM:
        probes.extend(np.array(corner) for corner in itertools.product(*zip(lower, upper, strict=True)))
    for i in range(box.dim):
        for end in (lower[i], upper[i]):
            face = centre.copy()
            face[i] = end
            probes.append(face)
    if sampling.n_random:
        rng = np.random.default_rng(sampling.seed)
        probes.extend(rng.uniform(lower, upper, size=(sampling.n_random, box.dim)))
    return np.vstack(probes)
