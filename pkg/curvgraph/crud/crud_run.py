from typing import List, Optional

from sqlalchemy.orm import Session

from ..models.run import Run, RunStatusEnum


def create_run(db: Session, command: str, arguments: str) -> Run:
    db_run = Run(command=command, arguments=arguments, status=RunStatusEnum.pending)
    db.add(db_run)
    db.commit()
    db.refresh(db_run)
    return db_run


def get_run(db: Session, run_id: int) -> Optional[Run]:
    return db.query(Run).filter(Run.id == run_id).first()


def list_runs(db: Session, command: Optional[str] = None) -> List[Run]:
    query = db.query(Run)
    if command is not None:
        query = query.filter(Run.command == command)
    return query.order_by(Run.id).all()


def update_run_status(
    db: Session,
    run_id: int,
    status: RunStatusEnum,
    exit_code: Optional[int] = None,
    report_path: Optional[str] = None,
    error_message: Optional[str] = None,
) -> Optional[Run]:
    db_run = get_run(db, run_id)
    if db_run:
        db_run.status = status
        if exit_code is not None:
            db_run.exit_code = exit_code
        if report_path is not None:
            db_run.report_path = report_path
        if error_message is not None:
            db_run.error_message = error_message
        db.add(db_run)
        db.commit()
        db.refresh(db_run)
    return db_run
