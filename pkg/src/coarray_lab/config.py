"""Flat key-value experiment configuration files.

Grammar (one assignment per line):

    # full-line or trailing comments start with '#'
    key = value
    key = [value, value, ...]

Keys match ``[A-Za-z_][A-Za-z0-9_]*``. Scalar values are parsed as, in order:
integer, float, boolean (``true``/``false``), quoted string (single or double
quotes), bare string (anything else, e.g. ``2/P``). Arrays are single-line,
comma separated and non-empty. Blank lines are ignored.
"""

from __future__ import annotations

import re

from .errors import ConfigError

__all__ = ["parse_config_text", "load_config_file"]

_KEY_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_INT_RE = re.compile(r"^[+-]?\d+$")


def _strip_comment(line):
    out = []
    quote = None
    for ch in line:
        if quote:
            out.append(ch)
            if ch == quote:
                quote = None
        elif ch in ("'", '"'):
            quote = ch
            out.append(ch)
        elif ch == "#":
            break
        else:
            out.append(ch)
    return "".join(out).strip()


def _parse_scalar(token, lineno):
    tok = token.strip()
    if not tok:
        raise ConfigError(f"line {lineno}: empty value")
    if _INT_RE.match(tok):
        return int(tok)
    try:
        return float(tok)
    except ValueError:
        pass
    if tok in ("true", "false"):
        return tok == "true"
    if len(tok) >= 2 and tok[0] == tok[-1] and tok[0] in ("'", '"'):
        return tok[1:-1]
    if "," in tok or "[" in tok or "]" in tok or "=" in tok:
        raise ConfigError(f"line {lineno}: malformed value {token!r}")
    return tok


def parse_config_text(text):
    """Parse configuration text into a dict, raising ConfigError on bad input."""
    result = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not _KEY_RE.match(key):
            raise ConfigError(f"line {lineno}: invalid key {key!r}")
        if key in result:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if value.startswith("["):
            if not value.endswith("]"):
                raise ConfigError(f"line {lineno}: unterminated array")
            body = value[1:-1].strip()
            if not body:
                raise ConfigError(f"line {lineno}: empty array")
            result[key] = [_parse_scalar(tok, lineno) for tok in body.split(",")]
        else:
            result[key] = _parse_scalar(value, lineno)
    return result


def load_config_file(path):
    """Read and parse a configuration file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config_text(text)


def format_config(mapping):
    """Render a mapping back to the flat key-value grammar."""
    lines = []
    for key, value in mapping.items():
        if isinstance(value, (list, tuple)):
            body = ", ".join(_format_scalar(v) for v in value)
            lines.append(f"{key} = [{body}]")
        else:
            lines.append(f"{key} = {_format_scalar(value)}")
    return "\n".join(lines) + "\n"


def _format_scalar(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return f'"{value}"'
    return repr(value)
