"""
Monte Carlo generation of single trials and full row/column spelling sessions.

Randomness uses PCG64. A session seed is expanded with SeedSequence into one
child stream per symbol, so each symbol can be generated independently and the
result does not depend on the order in which symbols are produced. Standard
normals come from the inverse normal CDF of open-interval uniforms: every trial
consumes exactly D uniform draws.
"""
from typing import List

import numpy as np
from loguru import logger
from scipy.special import ndtri

from core.simulation.gaussian_model import GaussianP300Model
from core.simulation.session import SessionConfig, SessionData

_UNIFORM_BITS = 53


def symbol_generators(seed: int, count: int) -> List[np.random.Generator]:
    """One independent PCG64 stream per symbol, derived from the session seed"""
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.PCG64(child)) for child in children]


def open_uniform(rng: np.random.Generator, shape) -> np.ndarray:
    """Uniforms on the open interval (0, 1) with 53-bit resolution"""
    draws = rng.integers(0, 2 ** _UNIFORM_BITS, size=shape, dtype=np.int64)
    return (draws + 0.5) * 2.0 ** -_UNIFORM_BITS


def standard_normals(rng: np.random.Generator, shape) -> np.ndarray:
    return ndtri(open_uniform(rng, shape))


def sample_trials(model: GaussianP300Model, is_target, rng: np.random.Generator) -> np.ndarray:
    """
    Draw one feature vector per entry of is_target.

    Returns:
        array of shape (len(is_target), D): mu_y + L z with z standard normal
    """
    is_target = np.asarray(is_target, dtype=bool).ravel()
    z = standard_normals(rng, (is_target.size, model.dim))
    means = np.where(is_target[:, None], model.mu1[None, :], model.mu0[None, :])
    return means + z @ model.chol_lower.T


def sample_trial(model: GaussianP300Model, is_target: bool, rng: np.random.Generator) -> np.ndarray:
    """A single trial x = mu_y + L z"""
    return sample_trials(model, [is_target], rng)[0]


def simulate_session(model: GaussianP300Model, config: SessionConfig) -> SessionData:
    """
    Simulate every symbol of the session.

    Per symbol, each cycle flashes a fresh uniform permutation of all row and
    column stimuli; one trial is drawn per flash, labeled 1 when the stimulus is
    the target row or the target column.
    """
    geometry = config.geometry
    n_stim = geometry.n_stimuli
    cycles = config.cycles_per_symbol
    blocks = []
    generators = symbol_generators(config.rng_seed, config.n_symbols)
    for symbol_index, ((row, col), rng) in enumerate(zip(config.symbols, generators)):
        row_stim, col_stim = geometry.target_stimuli(row, col)
        order = np.concatenate([rng.permutation(n_stim) for _ in range(cycles)])
        labels = (order == row_stim) | (order == col_stim)
        features = sample_trials(model, labels, rng)
        blocks.append(
            (
                features,
                labels.astype(np.int64),
                order,
                np.repeat(np.arange(cycles), n_stim),
                np.full(order.size, symbol_index),
            )
        )

    if blocks:
        columns = [np.concatenate(parts) for parts in zip(*blocks)]
    else:
        columns = [np.zeros((0, model.dim))] + [np.zeros(0, dtype=np.int64)] * 4
    logger.debug(
        f"simulated {config.n_symbols} symbols x {cycles} cycles x {n_stim} stimuli (D={model.dim})"
    )
    return SessionData.from_arrays(config, *columns)
