"""
Subcommand handlers. Each returns the JSON result body and, where the
report is tabular, its CSV rendering.
"""
import io
import sys
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional

from pydantic import ValidationError

from src.analysis import (
    conclusive_branch_traces,
    contradiction_demo,
    f_passage_check,
    phase_scan,
    solo_path_probability,
    trajectory_asymmetry,
    weak_trace_report,
    weak_value_report,
)
from src.cli.config_loader import LoadedConfig, load_config
from src.cli.output import render_json, write_report
from src.cli.parser import RunSpec, flag_error
from src.config.accounting_config import AccountingRuntime
from src.core.exceptions import EXIT_OK, ConfigurationError, SimulatorException, exit_code_for
from src.danan import parseval_residual, power_spectrum, simulate_quadcell_signal
from src.danan.vibration import mirror_weights
from src.discrimination import PovmMode, expected_fractions, monte_carlo_accounting
from src.interferometer.config import PATHS, NestedMziConfig, equal_markers
from src.interferometer.network import port_probabilities
from src.qcore.state import ModeLabel
from src.utils.logging_config import RunLogger, get_cli_logger

logger = get_cli_logger()


@dataclass(frozen=True)
class CommandResult:
    result: Dict[str, Any]
    csv: Optional[str] = None


def _csv(header: str, rows) -> str:
    buffer = io.StringIO()
    buffer.write(header + "\n")
    for row in rows:
        buffer.write(",".join(value if isinstance(value, str) else repr(value) for value in row) + "\n")
    return buffer.getvalue()


def _marked(network: NestedMziConfig, theta: Optional[float]) -> NestedMziConfig:
    return network if theta is None else network.with_markers(equal_markers(theta))


def run_command(spec: RunSpec, loaded: LoadedConfig) -> CommandResult:
    network = _marked(loaded.network, spec.theta)
    probabilities = port_probabilities(network)
    trace = None if network.marker_free else weak_trace_report(network, ModeLabel(spec.port)).model_dump(mode="json")
    return CommandResult(
        result={
            "port_probabilities": {str(port): p for port, p in probabilities.items()},
            "total_probability": sum(probabilities.values()),
            "trace": trace,
        },
        csv=_csv("port,probability", ((str(port), p) for port, p in probabilities.items())),
    )


def phase_scan_command(spec: RunSpec, loaded: LoadedConfig) -> CommandResult:
    block = loaded.experiments.phase_scan
    segment = ModeLabel(spec.segment) if spec.segment else block.segment
    points = spec.points if spec.points is not None else block.points
    scan = phase_scan(loaded.network, segment, points)
    return CommandResult(
        result={**scan.model_dump(mode="json"), "spread": scan.spread},
        csv=_csv("phi,p_d", ((point.phi, point.p_d) for point in scan.points)),
    )


def solo_command(spec: RunSpec, loaded: LoadedConfig) -> CommandResult:
    paths = (ModeLabel(spec.segment),) if spec.segment else PATHS
    solo = {str(path): solo_path_probability(path, loaded.network) for path in paths}
    full = port_probabilities(loaded.network)[ModeLabel.D]
    return CommandResult(
        result={"solo": solo, "full": full},
        csv=_csv("path,p_d", solo.items()),
    )


def argue_command(spec: RunSpec, loaded: LoadedConfig) -> CommandResult:
    report = contradiction_demo(loaded.network, strict=True, n_points=spec.points)
    return CommandResult(result=report.model_dump(mode="json"))


def f_check_command(spec: RunSpec, loaded: LoadedConfig) -> CommandResult:
    theta = spec.theta if spec.theta is not None else loaded.experiments.f_check.theta
    return CommandResult(result=f_passage_check(theta, loaded.network).model_dump(mode="json"))


def conclusive_command(spec: RunSpec, loaded: LoadedConfig) -> CommandResult:
    theta = spec.theta if spec.theta is not None else loaded.experiments.conclusive.theta_weak
    return CommandResult(result=conclusive_branch_traces(theta, loaded.network).model_dump(mode="json"))


def accounting_command(spec: RunSpec, loaded: LoadedConfig) -> CommandResult:
    block = loaded.experiments.accounting
    theta = spec.theta if spec.theta is not None else block.theta
    if spec.theta is None and not loaded.network.marker_free:
        if "theta" in block.model_fields_set:
            logger.warning(
                "accounting_theta_ignored",
                theta=block.theta,
                markers=[marker.location.value for marker in loaded.network.markers],
            )
        network = loaded.network
    else:
        network = _marked(loaded.network, theta)
    povm = PovmMode(spec.povm) if spec.povm else block.povm
    runtime = AccountingRuntime.from_env(workers=spec.workers if spec.workers is not None else block.workers)

    tally = monte_carlo_accounting(
        network,
        povm_mode=povm,
        n_trials=spec.trials if spec.trials is not None else block.trials,
        seed=spec.seed if spec.seed is not None else block.seed,
        runtime=runtime,
    )
    result = {
        **tally.model_dump(mode="json"),
        "fraction_at_d": tally.fraction_at_d(),
        "fractions": tally.fractions(),
        "double_conclusive": tally.double_conclusive,
        "expected_fractions": expected_fractions(tally.theta) if povm == PovmMode.BASIS_CHECK else None,
    }
    return CommandResult(result=result, csv=tally.to_csv())


def spectrum_command(spec: RunSpec, loaded: LoadedConfig) -> CommandResult:
    vib = loaded.experiments.spectrum.to_vibration(loaded.network, seed=spec.seed)
    series = simulate_quadcell_signal(vib)
    spectrum = power_spectrum(series, vib)
    return CommandResult(
        result={
            "weights": {str(mirror): weight for mirror, weight in mirror_weights(vib).items()},
            "peaks": {str(mirror): power for mirror, power in spectrum.peaks.items()},
            "peak_frequencies": {str(mirror): frequency for mirror, frequency in vib.frequencies.items()},
            "noise_floor": spectrum.noise_floor,
            "parseval_residual": parseval_residual(series, spectrum),
            "n_frames": vib.n_frames,
            "sample_rate": vib.sample_rate,
        },
        csv=spectrum.to_csv(),
    )


def weak_values_command(spec: RunSpec, loaded: LoadedConfig) -> CommandResult:
    return CommandResult(result=weak_value_report(loaded.network, ModeLabel(spec.port)).model_dump(mode="json"))


def trajectories_command(spec: RunSpec, loaded: LoadedConfig) -> CommandResult:
    return CommandResult(result=trajectory_asymmetry(loaded.network).model_dump(mode="json"))


HANDLERS: Dict[str, Callable[[RunSpec, LoadedConfig], CommandResult]] = {
    "run": run_command,
    "phase-scan": phase_scan_command,
    "solo": solo_command,
    "argue": argue_command,
    "f-check": f_check_command,
    "conclusive": conclusive_command,
    "accounting": accounting_command,
    "spectrum": spectrum_command,
    "weak-values": weak_values_command,
    "trajectories": trajectories_command,
}


def render(spec: RunSpec, outcome: CommandResult) -> str:
    if spec.format == "csv":
        if outcome.csv is None:
            raise ConfigurationError(f"'{spec.command}' has no tabular report; use --format json", key="--format")
        return outcome.csv
    return render_json(spec.command, outcome.result)


def dispatch(spec: RunSpec) -> int:
    """Run one subcommand and write its report. Returns the process exit code."""
    handler = HANDLERS.get(spec.command)
    if handler is None:
        logger.error("unknown_command", command=spec.command)
        return exit_code_for(ConfigurationError(f"Unknown command {spec.command}"))

    try:
        with RunLogger(spec.command, logger):
            loaded = load_config(spec.config_path)
            try:
                outcome = handler(spec, loaded)
            except ValidationError as exc:
                raise flag_error(exc) from exc
            text = render(spec, outcome)
            write_report(text, spec.out)
    except SimulatorException as exc:
        code = exit_code_for(exc)
        logger.error("command_failed", error_type=type(exc).__name__, error=str(exc), exit_code=code)
        sys.stderr.write(f"{spec.command}: {exc}\n")
        return code
    return EXIT_OK
