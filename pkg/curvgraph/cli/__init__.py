from .command_router import build_parser

__all__ = ["build_parser"]
