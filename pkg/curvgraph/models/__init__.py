from .run import Base, Run, RunStatusEnum

__all__ = [
    "Base",
    "Run",
    "RunStatusEnum",
]
