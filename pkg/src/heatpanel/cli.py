"""``heatpanel`` command line.

Every subcommand takes the same options, either as flags or from a
``key = value`` config file given with ``--config``; flags win.

Exit status: 0 on success, 1 for invalid input or configuration, 2 for
failures during computation.
"""
import argparse
import logging
import os
import sys

from . import __version__
from .errors import BadConfig, HeatPanelError, InputError, PipelineError
from .panel import read_panel, validate
from .pipeline import FORMATS, PipelineConfig, run_pipeline
from .report import emit_report, render_files

log = logging.getLogger("heatpanel")

EXIT_OK, EXIT_INPUT, EXIT_RUNTIME = 0, 1, 2

# config key -> (PipelineConfig field, parser)
_KEYS = {
    "panel": ("panel_path", str),
    "target": ("target", str),
    "factors": ("factors", lambda s: tuple(_split_list(s))),
    "threshold": ("threshold", lambda s: s if s.strip() == "median" else float(s)),
    "alpha": ("alpha", float),
    "breaks_k": ("breaks_k", int),
    "ridge": ("ridge_lambda", float),
    "standardize": ("standardize", lambda s: _parse_bool(s)),
    "perms": ("permutations", int),
    "seed": ("seed", int),
    "out": ("output_dir", str),
    "formats": ("formats", lambda s: tuple(_split_list(s))),
}
_ALIASES = {"permutations": "perms", "ridge_lambda": "ridge", "output_dir": "out",
            "panel_path": "panel", "k": "breaks_k"}

_STAGE_FOR = {
    "trends": ("trends",),
    "classify": ("classify",),
    "correlate": ("correlate",),
    "breaks": ("breaks",),
    "causal": ("causal",),
    "run": ("trends", "classify", "correlate", "breaks", "causal"),
}
_FILES_FOR = {
    "trends": ("trends.csv",),
    "classify": ("grouping.csv",),
    "correlate": ("correlations.csv",),
    "breaks": ("breaks.csv",),
    "causal": ("tests.csv",),
}


def _split_list(s):
    s = s.strip()
    if s.startswith("[") and s.endswith("]"):
        s = s[1:-1]
    return [item.strip().strip("'\"") for item in s.split(",") if item.strip()]


def _parse_bool(s):
    v = str(s).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def read_config_file(path):
    """Parse ``key = value`` lines (``#`` comments, optional quotes)."""
    settings = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise BadConfig(f"cannot read config {path}: {exc.strerror}") from exc
    for lineno, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line or line.startswith("["):
            continue
        if "=" not in line:
            raise BadConfig(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        key = _ALIASES.get(key, key)
        if key not in _KEYS:
            raise BadConfig(f"{path}:{lineno}: unknown key {key!r}")
        if len(value) >= 2 and value[0] == value[-1] and value[0] in "'\"":
            value = value[1:-1]
        field_name, parse = _KEYS[key]
        try:
            settings[field_name] = parse(value)
        except ValueError as exc:
            raise BadConfig(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return settings


def _common(parser):
    parser.add_argument("--config", help="key = value file; flags override it")
    parser.add_argument("--panel", help="long-format CSV: region_id,year,variable,value")
    parser.add_argument("--target", help="target variable (default night_lst)")
    parser.add_argument("--factors", help="comma-separated factor variables")
    parser.add_argument("--threshold", help="'median' (default) or a fixed slope")
    parser.add_argument("--alpha", help="significance level (default 0.01)")
    parser.add_argument("--breaks-k", dest="breaks_k", help="natural-breaks classes (default 5)")
    parser.add_argument("--ridge", help="ridge stabiliser lambda (default 0)")
    parser.add_argument("--standardize", action="store_const", const="true", default=None,
                        help="z-score each year across regions before testing")
    parser.add_argument("--perms", help="permutations for the cross-check (default 9999; 0 = off)")
    parser.add_argument("--seed", help="permutation seed (default 42)")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--formats", help=f"comma-separated subset of {','.join(FORMATS)}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="heatpanel",
        description="Trend grouping, correlation and Hotelling T² screening of panel data.",
    )
    parser.add_argument("--version", action="version", version=f"heatpanel {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "validate": "check a panel file",
        "trends": "per-region OLS trends of the target",
        "classify": "increasing / non-increasing grouping",
        "correlate": "per-region Pearson correlations",
        "breaks": "natural breaks of each factor's correlations",
        "causal": "Hotelling T² test per factor",
        "run": "full pipeline",
    }
    for name, text in helps.items():
        _common(sub.add_parser(name, help=text, description=text))
    return parser


def config_from_args(args):
    settings = {}
    if args.config:
        settings.update(read_config_file(args.config))
    for key, (field_name, parse) in _KEYS.items():
        raw = getattr(args, key, None)
        if raw is None:
            continue
        try:
            settings[field_name] = parse(raw)
        except ValueError as exc:
            raise BadConfig(f"bad value for --{key.replace('_', '-')}: {exc}") from exc
    return PipelineConfig(**settings)


def _setup_logging():
    level = os.environ.get("HEATPANEL_LOG", "warn").strip().lower()
    levels = {"error": logging.ERROR, "warn": logging.WARNING, "warning": logging.WARNING,
              "info": logging.INFO, "debug": logging.DEBUG}
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(levels.get(level, logging.WARNING))
    log.propagate = False


def _exit_code(exc):
    cause = exc.cause if isinstance(exc, PipelineError) else exc
    return EXIT_INPUT if isinstance(cause, InputError) else EXIT_RUNTIME


def _validate_cmd(config):
    if config.panel_path is None:
        raise BadConfig("--panel is required")
    report = validate(read_panel(config.panel_path))
    for issue in report.issues:
        log.log(logging.ERROR if issue.severity == "error" else logging.WARNING,
                "%s: %s", issue.location, issue.message)
    print(f"{'ok' if report.ok else 'invalid'}: {len(report.errors)} error(s), "
          f"{len(report.warnings)} warning(s)")
    return EXIT_OK if report.ok else EXIT_INPUT


def main(argv=None):
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        if args.command == "validate":
            return _validate_cmd(config)
        report = run_pipeline(config, stages=_STAGE_FOR[args.command])
        if args.command == "run":
            if config.output_dir is None:
                raise BadConfig("--out is required for run")
            for path in emit_report(report, config.formats, config.output_dir):
                log.info("wrote %s", path)
            return EXIT_OK
        names = _FILES_FOR[args.command]
        files = render_files(report, ("csv",))
        if config.output_dir is None:
            for name in names:
                sys.stdout.write(files[name])
        else:
            written = emit_report(report, ("csv",), config.output_dir)
            log.info("wrote %s", ", ".join(str(p) for p in written))
        return EXIT_OK
    except HeatPanelError as exc:
        log.error("%s", exc)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
