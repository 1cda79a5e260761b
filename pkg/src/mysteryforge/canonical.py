"""Byte-stable text encoding used for fixtures, game files and golden tests.

The canonical form is JSON with three extra guarantees on top of what the
stdlib encoder gives us:

* mapping keys appear in the insertion order the model layer chose
  (the documented field order), never re-sorted;
* every float is printed with exactly six decimal places, so two runs that
  compute the same value emit the same bytes;
* output is UTF-8 with LF line endings and a single trailing newline.

Producers are responsible for sorting lists by their documented sort keys
before handing structures to :func:`canonical_dumps`.
"""

import json

INDENT = "  "


def _emit(value, depth: int) -> str:
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, float):
        if value == 0.0:  # avoid "-0.000000"
            value = 0.0
        return format(value, ".6f")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    pad = INDENT * (depth + 1)
    close_pad = INDENT * depth
    if isinstance(value, dict):
        if not value:
            return "{}"
        parts = []
        for key, item in value.items():
            if not isinstance(key, str):
                raise TypeError(f"canonical keys must be strings, got {key!r}")
            parts.append(f"{pad}{json.dumps(key, ensure_ascii=False)}: {_emit(item, depth + 1)}")
        return "{\n" + ",\n".join(parts) + "\n" + close_pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        parts = [f"{pad}{_emit(item, depth + 1)}" for item in value]
        return "[\n" + ",\n".join(parts) + "\n" + close_pad + "]"
    raise TypeError(f"type {type(value).__name__} has no canonical form")


def canonical_dumps(value) -> str:
    """Render a structure to its canonical text form (trailing newline included)."""
    return _emit(value, 0) + "\n"


def canonical_bytes(value) -> bytes:
    return canonical_dumps(value).encode("utf-8")


def canonical_loads(text):
    """Inverse of canonical_dumps; plain JSON parsing."""
    return json.loads(text)
