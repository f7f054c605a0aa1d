from . import crud_run

__all__ = ["crud_run"]
