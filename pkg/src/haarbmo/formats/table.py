"""
Human-readable table output.
"""
from typing import Any, List, Optional, Sequence, Tuple

from colorama import Fore, Style

Row = Tuple[str, Any]


def _flatten(data: Any, prefix: str = "") -> List[Row]:
    rows: List[Row] = []
    if isinstance(data, dict):
        for key, value in data.items():
            name = f"{prefix}.{key}" if prefix else str(key)
            if isinstance(value, dict):
                rows.extend(_flatten(value, name))
            else:
                rows.append((name, value))
    else:
        rows.append((prefix or "value", data))
    return rows


def _cell(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, list):
        if value and all(isinstance(v, list) and len(v) == 2 and all(isinstance(x, int) for x in v) for v in value):
            return " ".join(f"I({n},{k})" for n, k in value)
        return f"[{len(value)} items]" if len(value) > 6 else str(value)
    return str(value)


def render(title: str, data: Any, status: Optional[bool] = None, colour: bool = True) -> str:
    """
    Render a JSON-shaped report as two aligned columns.

    Args:
        title: Heading line.
        data: The report (nested dicts are flattened with dotted keys).
        status: When given, a HOLDS/FAILS line is appended, green or red.
        colour: Emit ANSI colours.
    """
    rows = [(name, _cell(value)) for name, value in _flatten(data)]
    width = max((len(name) for name, _ in rows), default=0)
    lines = [title, "-" * max(len(title), width + 2)]
    lines.extend(f"{name.ljust(width)}  {value}" for name, value in rows)
    if status is not None:
        word = "HOLDS" if status else "FAILS"
        if colour:
            word = f"{Fore.GREEN if status else Fore.RED}{word}{Style.RESET_ALL}"
        lines.append(word)
    return "\n".join(lines) + "\n"


def render_parts(title: str, parts: Sequence[Sequence[Sequence[int]]], constants: Sequence[str]) -> str:
    lines = [title]
    for number, (part, constant) in enumerate(zip(parts, constants), start=1):
        lines.append(f"  part {number}: [[.]] = {constant}, {len(part)} intervals")
    return "\n".join(lines) + "\n"
