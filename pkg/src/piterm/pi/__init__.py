from . import ast, parser, printer, semantics, types  # noqa: F401
