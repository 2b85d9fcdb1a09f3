"""
Composite Gauss-Legendre rule over fixed panels.

Nodes and weights of the 16-point rule are computed once; a call maps them onto
``panel_count`` equal panels of each requested interval.
"""
from typing import Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from core.accuracy.models import QuadratureConfig

RULE_POINTS = 16
_RULE_NODES, _RULE_WEIGHTS = leggauss(RULE_POINTS)


def composite_nodes(
    lower: np.ndarray,
    upper: np.ndarray,
    quad: QuadratureConfig,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodes and weights for every interval [lower[i], upper[i]].

    Args:
        lower: interval starts, shape (m,)
        upper: interval ends, shape (m,)
        quad: panel configuration

    Returns:
        (nodes, weights), both of shape (m, panel_count * 16)
    """
    lower = np.atleast_1d(np.asarray(lower, dtype=float))
    upper = np.atleast_1d(np.asarray(upper, dtype=float))
    fractions = np.arange(quad.panel_count + 1) / quad.panel_count
    edges = lower[:, None] + (upper - lower)[:, None] * fractions[None, :]
    mid = 0.5 * (edges[:, 1:] + edges[:, :-1])
    half = 0.5 * (edges[:, 1:] - edges[:, :-1])

    nodes = mid[:, :, None] + half[:, :, None] * _RULE_NODES[None, None, :]
    weights = half[:, :, None] * _RULE_WEIGHTS[None, None, :]
    m = lower.shape[0]
    return nodes.reshape(m, -1), weights.reshape(m, -1)
