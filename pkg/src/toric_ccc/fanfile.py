"""JSON fan files: {"rays": [[...], ...], "max_cones": [[...], ...], "labels": [...]}."""

from __future__ import annotations

import json
import re
from pathlib import Path

from .fan import Fan, FanError


class FanFileError(ValueError):
    pass


def _key_line(text: str, key: str) -> str:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    if not m:
        return ""
    return f"line {text.count(chr(10), 0, m.start()) + 1}: "


def _int_rows(text: str, data: dict, key: str) -> list[list[int]]:
    where = _key_line(text, key)
    rows = data.get(key)
    if not isinstance(rows, list):
        raise FanFileError(f"{where}field {key!r} must be a list of integer lists")
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise FanFileError(f"{where}{key}[{i}] must be a list")
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, int):
                raise FanFileError(f"{where}{key}[{i}][{j}] = {x!r} is not an integer")
    return rows


def parse_fan_text(text: str) -> Fan:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FanFileError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise FanFileError("top level must be a JSON object")
    unknown = sorted(set(data) - {"rays", "max_cones", "labels"})
    if unknown:
        raise FanFileError(f"{_key_line(text, unknown[0])}unknown field {unknown[0]!r}")
    for key in ("rays", "max_cones"):
        if key not in data:
            raise FanFileError(f"missing field {key!r}")
    rays = _int_rows(text, data, "rays")
    cones = _int_rows(text, data, "max_cones")
    labels = data.get("labels")
    if labels is not None:
        where = _key_line(text, "labels")
        if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels):
            raise FanFileError(f"{where}labels must be a list of strings")
        if len(labels) != len(rays):
            raise FanFileError(f"{where}{len(labels)} labels for {len(rays)} rays")
    try:
        return Fan(tuple(map(tuple, rays)), tuple(map(tuple, cones)),
                   tuple(labels) if labels is not None else None)
    except FanError as exc:
        field = "max_cones" if "cone" in str(exc) else "rays"
        raise FanFileError(f"{_key_line(text, field)}{exc}") from None


parse_fan_file = parse_fan_text


def load_fan(path: str | Path) -> Fan:
    return parse_fan_text(Path(path).read_text(encoding="utf-8"))


def serialize_fan(f: Fan) -> str:
    def rows(xs):
        return "[" + ", ".join("[" + ", ".join(str(v) for v in x) + "]" for x in xs) + "]"

    lines = [f'  "rays": {rows(f.rays)}', f'  "max_cones": {rows(f.max_cones)}']
    if f.labels is not None:
        lines.append(f'  "labels": {json.dumps(list(f.labels))}')
    return "{\n" + ",\n".join(lines) + "\n}\n"
