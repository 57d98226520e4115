"""JSON schemas for the diagram format and the command outputs.

The files under schema/ at the repository root are written by `linkobs schema --out schema`.
"""

import json
from pathlib import Path
from typing import Any

from pydantic import BaseModel, TypeAdapter

from .diagram import LinkDiagram
from .obstruct import ObstructionReport


def schema_models() -> dict[str, type[BaseModel]]:
    """File stem -> model. Nested models land in each schema's $defs."""
    from .cli import InvariantsReport

    return {
        "link_diagram": LinkDiagram,
        "invariants_report": InvariantsReport,
        "obstruction_report": ObstructionReport,
    }


def json_schema(model: type[BaseModel]) -> dict[str, Any]:
    schema = TypeAdapter(model).json_schema()
    # Lets data files point at their schema.
    schema.setdefault("properties", {})["$schema"] = {"type": "string"}
    return schema


def write_schemas(out_dir: Path | str) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for stem, model in schema_models().items():
        path = out / f"{stem}_schema.json"
        with open(path, "w") as f:
            json.dump(json_schema(model), f, indent=2, ensure_ascii=False)
            f.write("\n")
        written.append(path)
    return written
