"""
Command Line Interface

Spec
----
This package is the single entry point of laurentcf.

Responsibilities:
1.  Register subcommands and build the argument parser from the registry.
2.  Resolve the run configuration from flags, ``LAURENTCF_*`` variables and defaults.
3.  Render results as human text, JSON (exact rationals as ``{"num", "den"}``) or CSV.
4.  Map validation errors to exit code 2 with a message naming the flag.

Public Interfaces:
- `dispatch`: Run one command line, return the exit code.
- `RunConfig`: Validated run configuration.
- `register_command`: Decorator to define a subcommand.
"""

import argparse
import logging
import sys
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Type

import pandas as pd

from laurentcf import config
from laurentcf.algebra.field_poly import FieldSpec
from laurentcf.errors import ConfigError, LaurentCFError, ParseError
from laurentcf.utils.encoding import dumps, to_jsonable

logger = logging.getLogger(__name__)

OUTPUT_MODES = ("human", "json", "csv")

# exit codes
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

_COMMAND_REGISTRY: Dict[str, Type] = {}


def register_command(name: Optional[str] = None):
    """
    Decorator to register a subcommand class.

    Usage:
        @register_command("measure")
        class MeasureCommand:
            help = "..."

            @staticmethod
            def add_arguments(parser): ...

            @staticmethod
            def run(args, run): ...

    If name is not provided, it will be derived from the class name.
    """

    def decorator(cls: Type):
        command_name = name or cls.__name__.lower().replace("command", "")
        if command_name in _COMMAND_REGISTRY:
            raise ValueError(
                f"command '{command_name}' is already registered: {_COMMAND_REGISTRY[command_name]}"
            )
        _COMMAND_REGISTRY[command_name] = cls
        return cls

    return decorator


def get_registered_commands() -> Dict[str, Type]:
    return _COMMAND_REGISTRY.copy()


@dataclass
class RunConfig:
    """Options shared by every subcommand.

    ``parse`` reads a comma-separated ``key=value`` list::

        run-spec  ::=  option ("," option)*
        option    ::=  key "=" value
        key       ::=  "q" | "k" | "output" | "seed" | "precision" | "budget"

    Examples
    --------
    >>> RunConfig.parse("q=3,k=2,output=json")
    RunConfig(q=3, k=2, output='json', seed=0, precision=None, budget=10000000)
    >>> RunConfig.parse("q=4")
    Traceback (most recent call last):
    ...
    laurentcf.errors.ConfigError: --q: 4 is not prime
    """

    q: int = 2
    k: int = 1
    output: str = "human"
    seed: int = 0
    precision: Optional[int] = None
    budget: int = 10_000_000

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        try:
            FieldSpec(self.q)
        except ValueError as exc:
            raise ConfigError(f"{self.q} is not prime", "--q") from exc
        if self.k < 1:
            raise ConfigError(f"must be >= 1, got {self.k}", "--k")
        if self.output not in OUTPUT_MODES:
            raise ConfigError(f"must be one of {OUTPUT_MODES}, got {self.output!r}", "--output")
        if self.precision is not None and self.precision < 1:
            raise ConfigError(f"must be >= 1, got {self.precision}", "--precision")
        if self.budget < 1:
            raise ConfigError(f"must be >= 1, got {self.budget}", "--budget")

    @classmethod
    def from_config(cls) -> "RunConfig":
        """Defaults from the config store, which reads ``LAURENTCF_BUDGET`` and friends."""
        precision = config.get("laurentcf.precision")
        return cls(
            output=str(config.get("laurentcf.output")),
            seed=int(config.get("laurentcf.seed")),
            precision=None if precision is None else int(precision),
            budget=int(config.get("laurentcf.budget")),
        )

    @classmethod
    def parse(cls, raw: Optional[str]) -> "RunConfig":
        values: Dict[str, Any] = {}
        for token in (t.strip() for t in (raw or "").split(",")):
            if not token:
                continue
            key, sep, value = token.partition("=")
            key = key.strip().lower()
            if not sep or key not in cls.__dataclass_fields__:
                raise ConfigError(f"bad option {token!r}", "--run")
            value = value.strip()
            if key == "output":
                values[key] = value
            elif key == "precision" and value.lower() in ("", "none", "auto"):
                values[key] = None
            else:
                try:
                    values[key] = int(value)
                except ValueError as exc:
                    raise ConfigError(f"not an integer: {value!r}", f"--{key}") from exc
        return cls(**values)


@dataclass
class CommandOutput:
    """What a command produced: a JSON payload, a text rendering and optional report rows."""

    payload: Dict[str, Any]
    text: str
    rows: Optional[List[Any]] = None


def render(out: CommandOutput, mode: str) -> str:
    """Text for one output mode; CSV has one line per report row, or the flattened payload."""
    if mode == "json":
        return dumps(out.payload)
    if mode == "csv":
        if out.rows is not None:
            rows = [to_jsonable(r.as_dict() if hasattr(r, "as_dict") else r) for r in out.rows]
        else:
            rows = [to_jsonable(out.payload)]
        return pd.json_normalize(rows).to_csv(index=False)
    return out.text


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_mutually_exclusive_group()
    group.add_argument("--json", dest="output", action="store_const", const="json", help="JSON output")
    group.add_argument("--csv", dest="output", action="store_const", const="csv", help="CSV output")
    group.add_argument("--output", dest="output", help="one of human, json, csv")
    common.add_argument("--out", metavar="PATH", help="write the output to PATH instead of stdout")
    common.add_argument("--budget", type=int, help="enumeration cap (default LAURENTCF_BUDGET)")
    return common


def build_parser() -> argparse.ArgumentParser:
    from laurentcf import VERSION

    from . import commands  # noqa: F401  registers the subcommands

    parser = argparse.ArgumentParser(
        prog="laurentcf",
        description="Continued fractions and metric theory over F_q((z^-1)).",
    )
    parser.add_argument("--version", action="version", version=f"laurentcf {VERSION}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="count", default=0, help="more logging")
    verbosity.add_argument("--quiet", action="store_true", help="errors only")
    sub = parser.add_subparsers(dest="command", metavar="<command>")
    sub.required = True
    common = _common_parser()
    for name, cls in sorted(_COMMAND_REGISTRY.items()):
        p = sub.add_parser(name, help=cls.help, description=cls.help, parents=[common])
        cls.add_arguments(p)
        p.set_defaults(handler=cls)
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    if args.quiet:
        level = logging.ERROR
    elif args.verbose >= 2:
        level = logging.DEBUG
    elif args.verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, str(config.get("laurentcf.log.level")).upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def resolve_run(args: argparse.Namespace) -> RunConfig:
    run = RunConfig.from_config()
    overrides = {}
    for key in ("q", "k", "output", "seed", "precision", "budget"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    for key, value in overrides.items():
        setattr(run, key, value)
    run.validate()
    return run


def dispatch(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, run the command and write its output; returns the exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    _configure_logging(args)
    try:
        run = resolve_run(args)
        out = args.handler.run(args, run)
    except ConfigError as exc:
        print(f"laurentcf {args.command}: error: {exc}", file=stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"laurentcf {args.command}: error: {exc}", file=stderr)
        return EXIT_USAGE
    except LaurentCFError as exc:
        logger.debug("command %s failed", args.command, exc_info=True)
        print(f"laurentcf {args.command}: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_FAILURE
    text = render(out, run.output)
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK


__all__ = [
    "RunConfig",
    "CommandOutput",
    "dispatch",
    "register_command",
    "get_registered_commands",
    "build_parser",
    "render",
]
