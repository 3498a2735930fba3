import json
import sys
from pathlib import Path
from typing import Any, Dict, Optional

SCHEMA_VERSION = "v1"


def schema_id(command: str) -> str:
    return f"mzi.{command}.{SCHEMA_VERSION}"


def render_json(command: str, result: Dict[str, Any]) -> str:
    """Report envelope; sorted keys and no wall-clock fields, so reruns are byte-identical."""
    envelope = {"schema": schema_id(command), "command": command, "result": result}
    return json.dumps(envelope, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_report(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
