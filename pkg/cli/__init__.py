from .commands import build_parser, dispatch
