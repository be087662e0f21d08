"""
console.py

Terminal status helpers for the CLI and batch scripts.
Library modules never print; they raise or warn and let these helpers report.
"""

import sys
from typing import Dict, Optional

# ─────────────────────────────────────────────────────────────────────────────
# MARKERS
# ─────────────────────────────────────────────────────────────────────────────
_MARKERS: Dict[str, str] = {
    "pass": "✓",
    "warning": "⚠️",
    "critical": "❌",
    "info": "📊",
}

BANNER_WIDTH = 80


def status(body: str, kind: str = "info", stream=None) -> None:
    """One status line; critical messages go to stderr."""
    if stream is None:
        stream = sys.stderr if kind == "critical" else sys.stdout
    print(f"{_MARKERS.get(kind, '•')} {body}", file=stream)


def section(title: str, step: Optional[str] = None) -> None:
    heading = f"{step}: {title}" if step else title
    print("\n" + "=" * BANNER_WIDTH)
    print(heading)
    print("=" * BANNER_WIDTH)


def key_values(pairs: Dict[str, object], indent: int = 2) -> None:
    width = max((len(k) for k in pairs), default=0)
    for key, value in pairs.items():
        print(f"{' ' * indent}{key:<{width}} : {value}")
