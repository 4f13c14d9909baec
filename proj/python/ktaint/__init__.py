"""Python bindings for the ktaint analyzer."""

from ._core import (
    ParseError,
    SpecError,
    __version__,
    check,
    classify,
    map_type,
    normalize_type,
    option_flags,
    report_sarif,
    report_text,
    transform_spec,
    validate_sarif,
)

__all__ = [
    "ParseError",
    "SpecError",
    "__version__",
    "check",
    "classify",
    "map_type",
    "normalize_type",
    "option_flags",
    "report_sarif",
    "report_text",
    "transform_spec",
    "validate_sarif",
]
