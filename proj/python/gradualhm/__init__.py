from ._gradualhm import (
    IllTyped,
    Session,
    StuckError,
    SyntaxError,
    TypeError,
    check_property,
    eval_term,
    generate,
    infer,
    parse,
    properties,
    run,
    term_precision,
    translate,
    type_precision,
    typecheck,
    vocabulary,
)

__all__ = [
    "IllTyped",
    "Session",
    "StuckError",
    "SyntaxError",
    "TypeError",
    "check_property",
    "eval_term",
    "generate",
    "infer",
    "parse",
    "properties",
    "run",
    "term_precision",
    "translate",
    "type_precision",
    "typecheck",
    "vocabulary",
]
