from contextlib import contextmanager
from typing import Optional

from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import sessionmaker

from ..core.config import settings

_engines = {}


def get_engine(url: Optional[str] = None) -> Optional[Engine]:
    """Engine for the run ledger, or None when no ledger URL is configured."""
    url = url or settings.LEDGER_URL
    if not url:
        return None
    if url not in _engines:
        # SQLite connections are shared with the worker threads
        if url.startswith("sqlite"):
            engine = create_engine(url, connect_args={"check_same_thread": False})
        else:
            engine = create_engine(url)
        init_db(engine)
        _engines[url] = engine
    return _engines[url]


def init_db(engine_to_init: Engine):
    # Import Base here so the models are registered before create_all
    from ..models import Base
    Base.metadata.create_all(bind=engine_to_init)


@contextmanager
def get_session_scope(engine: Engine):
    """Provide a transactional scope around a series of operations."""
    session_factory = sessionmaker(autocommit=False, autoflush=False, bind=engine)
    db = session_factory()
    try:
        yield db
        db.commit()
    except Exception:
        db.rollback()
        raise
    finally:
        db.close()
