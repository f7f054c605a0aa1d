import enum

from sqlalchemy import Column, Integer, String, Enum as SQLEnum, DateTime, func, TEXT
from sqlalchemy.orm import declarative_base

Base = declarative_base()


class RunStatusEnum(str, enum.Enum):
    pending = "pending"
    processing = "processing"
    success = "success"
    refused = "refused"   # verdict failure, exit code 1
    failed = "failed"


class Run(Base):
    __tablename__ = "runs"

    id = Column(Integer, primary_key=True, index=True, autoincrement=True)
    command = Column(String(64), nullable=False, index=True)
    arguments = Column(TEXT, nullable=False)
    status = Column(SQLEnum(RunStatusEnum), nullable=False, default=RunStatusEnum.pending)
    exit_code = Column(Integer, nullable=True)
    report_path = Column(String(1024), nullable=True)
    error_message = Column(TEXT, nullable=True)
    created_at = Column(DateTime, default=func.now())
    updated_at = Column(DateTime, default=func.now(), onupdate=func.now())

    def __repr__(self):
        return f"<Run(id={self.id}, command='{self.command}', status='{self.status.value}')>"
