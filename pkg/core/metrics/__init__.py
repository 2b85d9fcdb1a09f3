"""
Empirical SNR and competing accuracy proxies.
"""
from core.metrics.snr import (
    SnrReport,
    area_under_curve,
    empirical_snr,
    peak_to_peak_v1,
    peak_to_peak_v2,
    snr_report,
)

__all__ = [
    "SnrReport",
    "area_under_curve",
    "empirical_snr",
    "peak_to_peak_v1",
    "peak_to_peak_v2",
    "snr_report",
]
