from . import ast, parser, printer, semantics  # noqa: F401
