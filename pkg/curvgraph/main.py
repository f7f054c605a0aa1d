import json
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from .cli.command_router import build_parser
from .core.config import settings
from .core.database import get_engine, get_session_scope
from .core.exceptions import CurvGraphError, UsageError
from .crud import crud_run
from .models import RunStatusEnum
from .schemas import RunConfig
from .services.reporting import emit_report

logger = logging.getLogger(__name__)

USAGE_EXIT = 2


def _configure_logging(level: Optional[str]) -> None:
    logging.basicConfig(
        level=(level or settings.LOG_LEVEL).upper(),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _report_error(error: dict, json_errors: bool) -> None:
    if json_errors:
        sys.stderr.write(json.dumps(error, default=str, sort_keys=False) + "\n")
    else:
        sys.stderr.write(f"curvgraph: {error['error']}: {error['detail']}\n")


def _build_config(args) -> RunConfig:
    return RunConfig(
        group=args.group,
        command=args.command,
        output_format=args.output_format,
        out=args.out,
        budget=args.budget if args.budget is not None else settings.BUDGET,
        workers=args.workers if args.workers is not None else settings.WORKERS,
        seed=args.seed,
        json_errors=args.json_errors,
        tol=getattr(args, "tol", None),
        eps=getattr(args, "eps", None),
        margin=getattr(args, "margin", None),
        stall_eps=getattr(args, "stall_eps", None),
        schedule=getattr(args, "schedule", None),
        indices=getattr(args, "indices", None),
    )


def _start_ledger(config: RunConfig, argv: List[str], ledger_url: Optional[str]):
    engine = get_engine(ledger_url)
    if engine is None:
        return None, None
    with get_session_scope(engine) as db:
        run = crud_run.create_run(db, command=f"{config.group} {config.command}", arguments=json.dumps(argv))
        crud_run.update_run_status(db, run.id, RunStatusEnum.processing)
        run_id = run.id
    logger.info(f"Ledger run {run_id} started.")
    return engine, run_id


def _finish_ledger(engine, run_id, exit_code: int, report_path: Optional[str], error: Optional[str]) -> None:
    if engine is None:
        return
    status = {0: RunStatusEnum.success, 1: RunStatusEnum.refused}.get(exit_code, RunStatusEnum.failed)
    with get_session_scope(engine) as db:
        crud_run.update_run_status(db, run_id, status, exit_code=exit_code, report_path=report_path, error_message=error)


def run(argv: Optional[List[str]] = None) -> int:
    """Parse, validate, dispatch and report. Returns the process exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        json_errors = "--json-errors" in argv
        if not json_errors:
            sys.stderr.write(e.payload["usage"] + "\n")
        _report_error(e.to_dict(), json_errors)
        return e.exit_code
    except SystemExit as e:
        return int(e.code or 0)

    _configure_logging(args.log_level)
    try:
        config = _build_config(args)
    except ValidationError as e:
        detail = "; ".join(f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors())
        _report_error({"error": "ConfigError", "detail": detail, "payload": {}}, args.json_errors)
        return USAGE_EXIT

    engine, run_id = _start_ledger(config, argv, args.ledger_url)
    saved_budget, saved_workers = settings.BUDGET, settings.WORKERS
    settings.BUDGET, settings.WORKERS = config.budget, config.workers
    exit_code, error_text = 0, None
    try:
        result = args.handler(args, config)
        extra = None
        labels = getattr(args, "vertex_labels", None)
        if labels is not None:
            extra = {"vertex_labels": labels}
        text = emit_report(result, config.output_format, config.out, extra=extra)
        if not config.out:
            sys.stdout.write(text)
    except CurvGraphError as e:
        exit_code, error_text = e.exit_code, e.detail
        if exit_code == 1:
            logger.warning(f"{config.group} {config.command}: verdict failure: {e.detail}")
        else:
            logger.error(f"{config.group} {config.command} failed: {e.detail}")
        _report_error(e.to_dict(), config.json_errors)
    finally:
        settings.BUDGET, settings.WORKERS = saved_budget, saved_workers
        _finish_ledger(engine, run_id, exit_code, config.out, error_text)
    return exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
