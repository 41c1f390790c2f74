import argparse
import json
import logging
import sys
import pandas as pd
from dotenv import load_dotenv
from pydantic import ValidationError
from app import __version__
from app.errors import ExitCode, UsageError
from app.interfaces import COMMANDS, RunConfig
from app.logging import setup_logging
from app.models.reports import RunReport
from app.physics import zpf_unruh
from app.run_service import RunService

logger = logging.getLogger(__name__)

# flag dest -> location inside RunConfig
FLAG_PATHS = {
    "command": ("command",),
    "seed": ("seed",),
    "unit_system": ("unit_system",),
    "constants_file": ("constants_file",),
    "output_path": ("output_path",),
    "format": ("format",),
    "n_jobs": ("n_jobs",),
    "kind": ("spectra", "kind"),
    "temperature": ("spectra", "temperature"),
    "omega_min": ("spectra", "omega_min"),
    "omega_max": ("spectra", "omega_max"),
    "n_omega": ("spectra", "n_omega"),
    "omega": ("ode", "omega"),
    "t_start": ("ode", "t_start"),
    "t_end": ("ode", "t_end"),
    "steps": ("ode", "steps"),
    "include_zeropoint": ("ode", "include_zeropoint"),
    "acceleration": ("unruh", "acceleration"),
    "t_obs": ("unruh", "t_obs"),
    "delta_x": ("unruh", "delta_x"),
    "n_realizations": ("unruh", "n_realizations"),
    "omega_out_min": ("unruh", "omega_out_min"),
    "omega_out_max": ("unruh", "omega_out_max"),
    "n_out": ("unruh", "n_out"),
    "fade_factor": ("unruh", "fade_factor"),
    "dtau": ("unruh", "dtau"),
}


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message):
        raise UsageError(message, module=__name__)


def build_parser() -> CliParser:
    parser = CliParser(
        prog="zpf",
        description="Zeropoint-field spectra, fluctuation ODE and accelerated-detector checks",
        argument_default=argparse.SUPPRESS,
        allow_abbrev=False,
    )
    parser.add_argument("command", nargs="?", help=", ".join(COMMANDS))
    parser.add_argument("--config", dest="config_file", help="JSON RunConfig file")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--unit-system", choices=("natural", "si"))
    parser.add_argument("--constants", dest="constants_file", help="JSON constants file")
    parser.add_argument("--out", dest="output_path")
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--n-jobs", type=int)
    parser.add_argument("--log-level")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    spectra = parser.add_argument_group("spectra")
    spectra.add_argument("--kind", choices=("rayleigh_jeans", "zeropoint", "planck", "planck_zp"))
    spectra.add_argument("--temperature", type=float)
    spectra.add_argument("--omega-min", type=float)
    spectra.add_argument("--omega-max", type=float)
    spectra.add_argument("--n-omega", type=int)

    ode = parser.add_argument_group("ode")
    ode.add_argument("--omega", type=float)
    ode.add_argument("--t-start", type=float)
    ode.add_argument("--t-end", type=float)
    ode.add_argument("--steps", type=int)
    ode.add_argument("--no-zeropoint", dest="include_zeropoint", action="store_false")

    unruh = parser.add_argument_group("unruh")
    unruh.add_argument("--a", dest="acceleration", type=float)
    unruh.add_argument("--t-obs", type=float)
    unruh.add_argument("--delta-x", type=float)
    unruh.add_argument("--n", dest="n_realizations", type=int)
    unruh.add_argument("--omega-out-min", type=float)
    unruh.add_argument("--omega-out-max", type=float)
    unruh.add_argument("--n-out", type=int)
    unruh.add_argument("--fade-factor", type=float)
    unruh.add_argument("--no-fade", dest="fade_factor", action="store_const", const=None)
    unruh.add_argument("--dtau", type=float)
    return parser


def _merge(base: dict, overrides: dict) -> dict:
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _read_config_file(path: str) -> dict:
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except OSError as e:
        raise UsageError(f"--config: cannot read {path}: {e.strerror}", module=__name__) from e
    except json.JSONDecodeError as e:
        raise UsageError(f"--config: {path} is not valid JSON: {e}", module=__name__) from e
    if not isinstance(data, dict):
        raise UsageError(f"--config: {path} must hold a JSON object", module=__name__)
    return data


UNRUH_COMMANDS = ("unruh-expected", "unruh-mc", "all-checks")

FLAG_NAMES = {
    "constants_file": "--constants",
    "output_path": "--out",
    "include_zeropoint": "--no-zeropoint",
    "acceleration": "--a",
    "n_realizations": "--n",
}


def _flag_name(loc: tuple) -> str:
    """Command-line flag (or config key) that a validation error points at."""
    if not loc:
        return "config"
    for dest, path in FLAG_PATHS.items():
        if path == tuple(loc[: len(path)]):
            return FLAG_NAMES.get(dest, "--" + dest.replace("_", "-"))
    return ".".join(str(part) for part in loc)


def parse_config(argv: list[str], config_file: str | None = None) -> RunConfig:
    """Defaults < JSON config file < command-line flags."""
    args = {
        dest: value
        for dest, value in vars(build_parser().parse_args(argv)).items()
        if value is not argparse.SUPPRESS and not (dest == "command" and not value)
    }
    args.pop("log_level", None)
    config_file = args.pop("config_file", config_file)

    values = _read_config_file(config_file) if config_file else {}
    flags: dict = {}
    for dest, value in args.items():
        path = FLAG_PATHS[dest]
        target = flags
        for part in path[:-1]:
            target = target.setdefault(part, {})
        target[path[-1]] = value
    values = _merge(values, flags)
    if "command" not in values:
        raise UsageError("a command is required", module=__name__)

    try:
        config = RunConfig.model_validate(values)
    except ValidationError as e:
        problems = "; ".join(
            f"{_flag_name(error['loc'])}: {error['msg']}" for error in e.errors()
        )
        raise UsageError(problems, module=__name__) from e
    if config.constants_file:
        try:
            config.physical_constants()
        except (OSError, ValueError) as e:
            raise UsageError(f"--constants: {e}", module=__name__) from e
    if config.command in UNRUH_COMMANDS:
        _check_window_size(config)
    return config


def _check_window_size(config: RunConfig) -> None:
    unruh = config.unruh
    dtau = zpf_unruh.sampling_step(unruh, config.physical_constants().c)
    samples = zpf_unruh.window_samples(unruh.t_obs, dtau)
    if samples <= zpf_unruh.MAX_WINDOW_SAMPLES:
        return
    if unruh.dtau is not None:
        flag = "--dtau"
    elif unruh.fade_factor is None:
        flag = "--no-fade"
    else:
        flag = "--fade-factor"
    raise UsageError(
        f"{flag}: dtau={dtau:.3g} gives {samples} window samples, "
        f"limit {zpf_unruh.MAX_WINDOW_SAMPLES}",
        module=__name__,
    )


def run(config: RunConfig) -> RunReport:
    return RunService.execute(config)


def summary_table(report: RunReport) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "check": check.name,
                "module": check.module,
                "passed": check.passed,
                "residual": check.residual,
                "tolerance": check.tolerance,
            }
            for check in report.checks
        ]
    )


def main(argv: list[str] | None = None) -> int:
    load_dotenv()
    argv = sys.argv[1:] if argv is None else argv
    level = None
    if "--log-level" in argv[:-1]:
        level = argv[argv.index("--log-level") + 1]
    setup_logging(level)

    try:
        config = parse_config(argv)
    except UsageError as e:
        logger.error(f"Usage error: {e}")
        print(f"usage error: {e}", file=sys.stderr)
        return int(ExitCode.USAGE)

    report = run(config)
    if report.checks:
        with pd.option_context("display.width", 160, "display.max_rows", None):
            print(summary_table(report).to_string(index=False))
    if report.error:
        print(f"error: {report.error}", file=sys.stderr)
    return int(report.exit_code)


if __name__ == "__main__":
    sys.exit(main())
