"""Collects one line per acceptance criterion for the terminal summary."""
from __future__ import annotations

LINES: list[str] = []


def record(number: int, ok: bool, text: str) -> str:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}"
    LINES.append(line)
    print(line)
    return line
