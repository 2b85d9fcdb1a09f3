"""
Across-session comparison of accuracy proxies.

Each session contributes one row: its empirical SNR, the three amplitude
proxies, its validated accuracy at a fixed cycle count and (for the SNR
relation) its best-fit gamma. Each proxy is then regressed against the target.
"""
from typing import Dict, List, Optional, Sequence

import pandas as pd
from loguru import logger
from pydantic import BaseModel, ConfigDict

from core.accuracy.models import QuadratureConfig, SpellerGeometry
from core.classifier.lda import ShrinkagePolicy, fit_lda
from core.errors import DomainError, InsufficientDataError
from core.metrics.snr import snr_report
from core.simulation.session import SessionData
from core.validation.curves import SeedLike, accuracy_vs_repetitions, seed_sequence
from core.validation.fitting import fit_gamma
from core.validation.regression import RegressionStats, linear_fit
from settings_config import Settings

PROXY_COLUMNS = ["gamma_hat", "ptp_v1", "ptp_v2", "auc"]


class ProxyComparison(BaseModel):
    """One row per session plus the regression of accuracy on every proxy column"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    table: pd.DataFrame
    fixed_n: int
    regressions: Dict[str, RegressionStats]

    def best_proxy(self) -> str:
        return max(self.regressions, key=lambda name: self.regressions[name].pearson_r)


class SnrFitRelation(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    table: pd.DataFrame
    regression: RegressionStats


def _session_names(sessions: Sequence[SessionData], names: Optional[Sequence[str]]) -> List[str]:
    if names is None:
        return [f"session_{i}" for i in range(len(sessions))]
    if len(names) != len(sessions):
        raise DomainError(f"{len(names)} names given for {len(sessions)} sessions")
    return list(names)


def proxy_accuracy_comparison(
    sessions: Sequence[SessionData],
    fixed_n: Optional[int] = None,
    shrinkage_policy: Optional[ShrinkagePolicy] = None,
    rng: SeedLike = None,
    n_train: Optional[int] = None,
    n_reps: Optional[int] = None,
    names: Optional[Sequence[str]] = None,
) -> ProxyComparison:
    """
    Regress validated accuracy at `fixed_n` cycles on each proxy.

    The proxies come from one LDA fit on all of a session's data. The fixed n
    defaults to 3, low enough that the accuracy has not saturated.
    """
    settings = Settings()
    fixed_n = settings.validation.proxy_fixed_n if fixed_n is None else int(fixed_n)
    policy = shrinkage_policy or ShrinkagePolicy.from_settings()
    if len(sessions) < 3:
        raise InsufficientDataError(f"proxy comparison needs at least 3 sessions, got {len(sessions)}")
    names = _session_names(sessions, names)

    children = seed_sequence(rng).spawn(len(sessions))
    rows = []
    for name, session, child in zip(names, sessions, children):
        if not 1 <= fixed_n <= session.config.cycles_per_symbol:
            raise DomainError(f"fixed_n={fixed_n} outside 1..{session.config.cycles_per_symbol} for {name}")
        report = snr_report(fit_lda(session.features, session.labels, policy))
        curve = accuracy_vs_repetitions(session, n_train, n_reps, policy, rng=int(child.generate_state(1)[0]))
        rows.append(
            {
                "session": name,
                "gamma_hat": report.empirical_snr,
                "ptp_v1": report.peak_to_peak_v1,
                "ptp_v2": report.peak_to_peak_v2,
                "auc": report.area_under_curve,
                "accuracy": curve.at(fixed_n).accuracy,
            }
        )

    table = pd.DataFrame(rows, columns=["session", *PROXY_COLUMNS, "accuracy"])
    regressions = {column: linear_fit(table[column], table["accuracy"]) for column in PROXY_COLUMNS}
    for column, stats in regressions.items():
        logger.info(f"accuracy at n={fixed_n} vs {column}: r={stats.pearson_r:.3f}, p={stats.p_value:.3g}")
    return ProxyComparison(table=table, fixed_n=fixed_n, regressions=regressions)


def snr_fit_relation(
    sessions: Sequence[SessionData],
    geometry: Optional[SpellerGeometry] = None,
    quad: Optional[QuadratureConfig] = None,
    shrinkage_policy: Optional[ShrinkagePolicy] = None,
    rng: SeedLike = None,
    n_train: Optional[int] = None,
    n_reps: Optional[int] = None,
    names: Optional[Sequence[str]] = None,
) -> SnrFitRelation:
    """Empirical SNR against the best-fit SNR of each session's validated curve"""
    policy = shrinkage_policy or ShrinkagePolicy.from_settings()
    if len(sessions) < 3:
        raise InsufficientDataError(f"SNR relation needs at least 3 sessions, got {len(sessions)}")
    names = _session_names(sessions, names)

    children = seed_sequence(rng).spawn(len(sessions))
    rows = []
    for name, session, child in zip(names, sessions, children):
        gamma_hat = snr_report(fit_lda(session.features, session.labels, policy)).empirical_snr
        curve = accuracy_vs_repetitions(session, n_train, n_reps, policy, rng=int(child.generate_state(1)[0]))
        fit = fit_gamma(curve, geometry or session.config.geometry, quad)
        rows.append({"session": name, "gamma_hat": gamma_hat, "gamma_fit": fit.gamma_fit, "sse": fit.sse})

    table = pd.DataFrame(rows, columns=["session", "gamma_hat", "gamma_fit", "sse"])
    regression = linear_fit(table["gamma_hat"], table["gamma_fit"])
    logger.info(
        f"gamma_fit = {regression.slope:.3f} * gamma_hat + {regression.intercept:.3f} "
        f"(r={regression.pearson_r:.3f}, p={regression.p_value:.3g})"
    )
    return SnrFitRelation(table=table, regression=regression)
