"""
Command-line front end.

Every command writes its result file plus a `<output>.manifest.json` sidecar
and prints a short rich summary. Exit codes: 0 success, 3 configuration or
domain error, 4 data error, 5 numerical error, 1 anything else.
"""
import json
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional

import numpy as np
import pandas as pd
import typer
from loguru import logger
from pydantic import ValidationError
from rich.console import Console

from core.accuracy.accuracy_function import accuracy_curve, accuracy_function_many, required_cycles
from core.accuracy.models import QuadratureConfig, SpellerGeometry
from core.classifier.lda import ShrinkagePolicy, fit_lda
from core.cli.config import load_simulation_config
from core.cli.manifest import RunManifest, write_manifest
from core.errors import ConfigError, DataError, NumericalError
from core.ingest.session_io import read_session, write_session
from core.metrics.snr import snr_report
from core.simulation.simulator import simulate_session
from core.utils.log_utils import configure_logging
from core.utils.print_utils import print_dataframe, print_json, print_report
from core.validation.curves import accuracy_vs_repetitions
from core.validation.electrodes import rank_electrode_subsets
from core.validation.fitting import fit_gamma
from core.validation.proxies import proxy_accuracy_comparison, snr_fit_relation
from core.validation.tables import curve_table, ranking_table, regression_table
from settings_config import settings

EXIT_CONFIG_ERROR = 3
EXIT_DATA_ERROR = 4
EXIT_NUMERICAL_ERROR = 5
EXIT_UNEXPECTED = 1

app = typer.Typer(help="Predict and validate P300 speller accuracy from the single-trial SNR.", add_completion=False)
err_console = Console(stderr=True)


@contextmanager
def exit_codes() -> Iterator[None]:
    """Turn toolkit errors into a message on stderr and the matching exit code"""
    try:
        yield
    except typer.Exit:
        raise
    except (ConfigError, ValidationError) as e:
        err_console.print(f"[bold red]Configuration error:[/bold red] {e}")
        raise typer.Exit(EXIT_CONFIG_ERROR)
    except (DataError, OSError) as e:
        err_console.print(f"[bold red]Data error:[/bold red] {e}")
        raise typer.Exit(EXIT_DATA_ERROR)
    except NumericalError as e:
        err_console.print(f"[bold red]Numerical error:[/bold red] {e}")
        raise typer.Exit(EXIT_NUMERICAL_ERROR)
    except Exception as e:
        logger.exception("unexpected failure")
        err_console.print(f"[bold red]Unexpected error:[/bold red] {e}")
        raise typer.Exit(EXIT_UNEXPECTED)


def parse_int_list(text: Optional[str]) -> Optional[List[int]]:
    """'1,3,5' or '1-15' (inclusive range) into a list of integers"""
    if text is None:
        return None
    values: List[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if "-" in part:
                start, stop = part.split("-", 1)
                values.extend(range(int(start), int(stop) + 1))
            else:
                values.append(int(part))
    except ValueError as e:
        raise ConfigError(f"cannot read '{text}' as a list of integers") from e
    if not values:
        raise ConfigError(f"'{text}' names no values")
    return values


def parse_shrinkage(text: Optional[str]) -> ShrinkagePolicy:
    """'fixed:0.5', 'relative:1e-6' or a bare number (fixed lambda)"""
    if text is None:
        return ShrinkagePolicy.from_settings()
    kind, _, value = text.rpartition(":")
    try:
        number = float(value)
    except ValueError as e:
        raise ConfigError(f"cannot read shrinkage '{text}'") from e
    kind = kind or "fixed"
    if kind not in ("fixed", "relative"):
        raise ConfigError(f"shrinkage kind must be 'fixed' or 'relative', got '{kind}'")
    return ShrinkagePolicy(kind=kind, value=number)


def _finish(command: str, output: Path, params: Dict[str, Any], seed: Optional[int] = None) -> None:
    manifest = RunManifest(
        command=command,
        params={key: (str(value) if isinstance(value, Path) else value) for key, value in params.items()},
        rng_seed=seed,
    )
    path = write_manifest(output, manifest)
    logger.info(f"wrote {output} (manifest {path.name})")


@app.callback()
def main(
    log_level: str = typer.Option(settings.log_level, "--log-level", help="loguru level for stderr logging"),
) -> None:
    configure_logging(log_level)


@app.command("accuracy-table")
def accuracy_table(
    output: Path = typer.Option(..., "--output", "-o", help="CSV with columns N, x, H"),
    alternatives: str = typer.Option("2,6,12,36", "--alternatives", help="Comma-separated N values"),
    x_min: float = typer.Option(-2.0, "--x-min"),
    x_max: float = typer.Option(5.0, "--x-max"),
    x_step: float = typer.Option(0.1, "--x-step"),
    gamma: Optional[float] = typer.Option(None, "--gamma", help="Evaluate at x = sqrt(n) * gamma instead of the grid"),
    cycles: Optional[str] = typer.Option(None, "--cycles", help="Cycle counts used with --gamma (default 1-15)"),
) -> None:
    """Tabulate the accuracy function H_N(x) for several N."""
    with exit_codes():
        ns = parse_int_list(alternatives)
        if gamma is not None:
            counts = parse_int_list(cycles) or list(range(1, settings.speller.cycles + 1))
            if gamma < 0 or min(counts) < 1:
                raise ConfigError("gamma must be non-negative and cycles positive")
            xs = np.sqrt(np.asarray(counts, dtype=float)) * gamma
        else:
            if x_step <= 0 or x_max < x_min:
                raise ConfigError(f"bad x grid [{x_min}, {x_max}] step {x_step}")
            count = int(np.floor((x_max - x_min) / x_step + 1e-9)) + 1
            xs = np.round(x_min + x_step * np.arange(count), 10)

        quad = QuadratureConfig.from_settings()
        frames = [pd.DataFrame({"N": n, "x": xs, "H": accuracy_function_many(n, xs, quad)}) for n in ns]
        table = pd.concat(frames, ignore_index=True)
        table.to_csv(output, index=False, float_format="%.17g")
        _finish("accuracy-table", output, {"alternatives": ns, "x": xs.tolist(), "output": output})
        print_dataframe(table, f"Accuracy function ({len(ns)} N values x {xs.size} points)", max_rows=20)


@app.command()
def simulate(
    output: Path = typer.Option(..., "--output", "-o", help="Session file to write"),
    config: Optional[Path] = typer.Option(None, "--config", "-c", help="JSON simulation config"),
    seed: Optional[int] = typer.Option(None, "--seed"),
    cycles: Optional[int] = typer.Option(None, "--cycles", help="Averaging cycles per symbol"),
    gamma: Optional[float] = typer.Option(None, "--gamma", help="Single-trial SNR of the synthetic model"),
    symbols: Optional[int] = typer.Option(None, "--symbols", help="Number of random target symbols"),
) -> None:
    """Simulate a spelling session from a synthetic Gaussian model."""
    with exit_codes():
        cfg = load_simulation_config(config, seed=seed, cycles_per_symbol=cycles, gamma=gamma, n_symbols=symbols)
        model = cfg.build_model()
        session = simulate_session(model, cfg.session_config())
        if cfg.electrode_count:
            session = session.model_copy(update={"electrode_count": cfg.electrode_count})
        write_session(session, output)
        _finish("simulate", output, {"config": cfg.model_dump(mode="json"), "output": output}, seed=cfg.seed)
        print_report(
            {
                "symbols": session.config.n_symbols,
                "cycles": session.config.cycles_per_symbol,
                "trials": session.n_trials,
                "dimension": session.dim,
                "gamma": cfg.gamma,
            },
            title=f"Simulated session -> {output}",
        )


@app.command("fit-curve")
def fit_curve(
    session_file: Path = typer.Argument(..., help="Session file"),
    output: Path = typer.Option(..., "--output", "-o", help="Curve CSV; the fit goes to <output>.fit.json"),
    seed: Optional[int] = typer.Option(None, "--seed"),
    n_train: Optional[int] = typer.Option(None, "--n-train"),
    n_reps: Optional[int] = typer.Option(None, "--n-reps"),
    shrinkage: Optional[str] = typer.Option(None, "--shrinkage", help="fixed:<lambda> or relative:<epsilon>"),
) -> None:
    """Validate a session and fit the single-trial SNR that best explains its accuracy curve."""
    with exit_codes():
        policy = parse_shrinkage(shrinkage)
        seed = settings.simulation.seed if seed is None else seed
        session = read_session(session_file)
        curve = accuracy_vs_repetitions(session, n_train, n_reps, policy, rng=seed)
        geometry = session.config.geometry
        fit = fit_gamma(curve, geometry)
        table = curve_table(curve, fit, geometry)
        table.to_csv(output, index=False, float_format="%.17g")
        fit_path = output.with_name(output.name + ".fit.json")
        fit_path.write_text(fit.model_dump_json(indent=2))
        _finish(
            "fit-curve",
            output,
            {"session": session_file, "n_train": curve.n_train, "n_reps": curve.n_reps,
             "shrinkage": policy.model_dump(), "output": output},
            seed=seed,
        )
        print_dataframe(table, "Accuracy vs cycles")
        print_report(fit.model_dump(), title="Best-fit SNR")


@app.command("rank-electrodes")
def rank_electrodes(
    session_file: Path = typer.Argument(..., help="Session file"),
    output: Path = typer.Option(..., "--output", "-o", help="Ranking CSV"),
    keep: int = typer.Option(..., "--keep", help="Electrodes kept in each subset"),
    electrodes: Optional[int] = typer.Option(None, "--electrodes", help="Electrode count (default: from the session)"),
    cycles: str = typer.Option("1,3,5,10,15", "--cycles", help="Cycle counts n reported per subset"),
    seed: Optional[int] = typer.Option(None, "--seed"),
    n_train: Optional[int] = typer.Option(None, "--n-train"),
    n_reps: Optional[int] = typer.Option(None, "--n-reps"),
    shrinkage: Optional[str] = typer.Option(None, "--shrinkage"),
) -> None:
    """Rank every electrode subset by empirical SNR and by validated accuracy."""
    with exit_codes():
        policy = parse_shrinkage(shrinkage)
        seed = settings.simulation.seed if seed is None else seed
        session = read_session(session_file)
        electrode_count = electrodes or session.electrode_count
        if not electrode_count:
            raise ConfigError("the session does not record its electrode count; pass --electrodes")
        n_values = parse_int_list(cycles)
        ranking = rank_electrode_subsets(
            session, electrode_count, keep, n_values, policy, rng=seed, n_train=n_train, n_reps=n_reps
        )
        table = ranking_table(ranking)
        table.to_csv(output, index=False, float_format="%.17g")
        _finish(
            "rank-electrodes",
            output,
            {"session": session_file, "electrodes": electrode_count, "keep": keep, "cycles": n_values,
             "n_train": n_train, "n_reps": n_reps, "shrinkage": policy.model_dump(), "output": output},
            seed=seed,
        )
        print_dataframe(table, f"{keep}-of-{electrode_count} electrode subsets")
        print_report(
            {"snr_seconds": ranking.snr_seconds, "validation_seconds": ranking.validation_seconds},
            title="Scoring time",
        )


@app.command()
def proxies(
    session_files: List[Path] = typer.Argument(..., help="Three or more session files"),
    output: Path = typer.Option(..., "--output", "-o", help="Proxy CSV; regressions go to <output>.regression.json"),
    cycles: Optional[int] = typer.Option(None, "--cycles", help="Cycle count at which accuracy is read (default 3)"),
    seed: Optional[int] = typer.Option(None, "--seed"),
    n_train: Optional[int] = typer.Option(None, "--n-train"),
    n_reps: Optional[int] = typer.Option(None, "--n-reps"),
    shrinkage: Optional[str] = typer.Option(None, "--shrinkage"),
) -> None:
    """Compare the empirical SNR with amplitude proxies as predictors of accuracy."""
    with exit_codes():
        policy = parse_shrinkage(shrinkage)
        seed = settings.simulation.seed if seed is None else seed
        sessions = [read_session(path) for path in session_files]
        comparison = proxy_accuracy_comparison(
            sessions, cycles, policy, rng=seed, n_train=n_train, n_reps=n_reps,
            names=[path.stem for path in session_files],
        )
        comparison.table.to_csv(output, index=False, float_format="%.17g")
        regressions = {name: stats.model_dump() for name, stats in comparison.regressions.items()}
        regression_path = output.with_name(output.name + ".regression.json")
        regression_path.write_text(json.dumps({"fixed_n": comparison.fixed_n, "regressions": regressions}, indent=2))
        _finish(
            "proxies",
            output,
            {"sessions": [str(p) for p in session_files], "fixed_n": comparison.fixed_n,
             "n_train": n_train, "n_reps": n_reps, "shrinkage": policy.model_dump(), "output": output},
            seed=seed,
        )
        print_dataframe(comparison.table, f"Proxies and accuracy at n={comparison.fixed_n}")
        print_dataframe(regression_table(comparison.regressions), "Regression of accuracy on each proxy")


@app.command("snr-report")
def snr_report_command(
    session_file: Path = typer.Argument(..., help="Session file"),
    output: Path = typer.Option(..., "--output", "-o", help="JSON report"),
    shrinkage: Optional[str] = typer.Option(None, "--shrinkage"),
) -> None:
    """Empirical SNR and amplitude proxies of one session."""
    with exit_codes():
        policy = parse_shrinkage(shrinkage)
        session = read_session(session_file)
        report = snr_report(fit_lda(session.features, session.labels, policy))
        output.write_text(report.model_dump_json(indent=2))
        _finish("snr-report", output, {"session": session_file, "shrinkage": policy.model_dump(), "output": output})
        print_json(report.model_dump(), title="SNR report")


@app.command()
def predict(
    gamma: float = typer.Option(..., "--gamma", help="Single-trial SNR"),
    output: Path = typer.Option(..., "--output", "-o", help="CSV with columns n, predicted"),
    rows: int = typer.Option(settings.speller.rows, "--rows"),
    cols: int = typer.Option(settings.speller.cols, "--cols"),
    cycles: int = typer.Option(settings.speller.cycles, "--cycles", help="Largest cycle count tabulated"),
    target: Optional[float] = typer.Option(None, "--target", help="Report the cycles needed for this accuracy"),
) -> None:
    """Predicted symbol accuracy for n = 1..cycles at a given SNR."""
    with exit_codes():
        geometry = SpellerGeometry(n_rows=rows, n_cols=cols)
        quad = QuadratureConfig.from_settings()
        ns = np.arange(1, cycles + 1) if cycles >= 1 else np.arange(0)
        if ns.size == 0:
            raise ConfigError("cycles must be at least 1")
        table = pd.DataFrame({"n": ns, "predicted": accuracy_curve(geometry, gamma, ns.tolist(), quad)})
        table.to_csv(output, index=False, float_format="%.17g")
        summary: Dict[str, Any] = {"gamma": gamma, "rows": rows, "cols": cols, "chance": geometry.chance}
        if target is not None:
            summary["target"] = target
            summary["required_cycles"] = required_cycles(geometry, gamma, target, max_cycles=max(cycles, 50), quad=quad)
        _finish("predict", output, {**summary, "cycles": cycles, "output": output})
        print_dataframe(table, f"Predicted accuracy ({rows}x{cols}, gamma={gamma})")
        print_report(summary, title="Prediction")


@app.command("snr-fit")
def snr_fit(
    session_files: List[Path] = typer.Argument(..., help="Three or more session files"),
    output: Path = typer.Option(..., "--output", "-o", help="CSV with columns session, gamma_hat, gamma_fit, sse"),
    seed: Optional[int] = typer.Option(None, "--seed"),
    n_train: Optional[int] = typer.Option(None, "--n-train"),
    n_reps: Optional[int] = typer.Option(None, "--n-reps"),
    shrinkage: Optional[str] = typer.Option(None, "--shrinkage"),
) -> None:
    """Relate each session's empirical SNR to its best-fit SNR."""
    with exit_codes():
        policy = parse_shrinkage(shrinkage)
        seed = settings.simulation.seed if seed is None else seed
        sessions = [read_session(path) for path in session_files]
        relation = snr_fit_relation(
            sessions, shrinkage_policy=policy, rng=seed, n_train=n_train, n_reps=n_reps,
            names=[path.stem for path in session_files],
        )
        relation.table.to_csv(output, index=False, float_format="%.17g")
        _finish(
            "snr-fit",
            output,
            {"sessions": [str(p) for p in session_files], "n_train": n_train, "n_reps": n_reps,
             "shrinkage": policy.model_dump(), "regression": relation.regression.model_dump(), "output": output},
            seed=seed,
        )
        print_dataframe(relation.table, "Empirical vs best-fit SNR")
        print_report(relation.regression.model_dump(), title="gamma_fit ~ gamma_hat")
