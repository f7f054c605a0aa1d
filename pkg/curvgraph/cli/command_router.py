import argparse

from ..core.exceptions import UsageError
from .commands import corpus, curvature, ends, gh, harmonic

OUTPUT_FORMATS = ("json", "csv")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class CommandParser(argparse.ArgumentParser):
    """Raises UsageError instead of printing usage and exiting; sub-parsers inherit the class."""

    def error(self, message: str):
        raise UsageError(message, {"usage": self.format_usage().strip()})


def build_parser() -> argparse.ArgumentParser:
    parser = CommandParser(
        prog="curvgraph",
        description="Discrete curvature, harmonic functions and ends of weighted graphs.",
    )
    parser.add_argument("--json-errors", action="store_true", help="Report errors as JSON on stderr")
    parser.add_argument("--log-level", choices=LOG_LEVELS, default=None)
    parser.add_argument("--ledger-url", default=None, help="SQLAlchemy URL of the run ledger")
    parser.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS, default="json")
    parser.add_argument(
        "--csv", dest="output_format", action="store_const", const="csv", default=argparse.SUPPRESS,
        help="Shorthand for --format csv",
    )
    parser.add_argument("--out", default=None, help="Report path; stdout when omitted")
    parser.add_argument("--budget", type=int, default=None, help="Vertex budget per materialized ball")
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--seed", type=int, default=0)

    groups = parser.add_subparsers(dest="group", metavar="GROUP")
    groups.required = True

    # one module per command group, each registering its own sub-commands
    curvature.register(groups)
    harmonic.register(groups)
    ends.register(groups)
    gh.register(groups)
    corpus.register(groups)
    return parser
