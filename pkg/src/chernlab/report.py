"""JSON report bundles and TSV tables.

Schema::

    {version, seed, field,
     instances: [{name, ring, results: [{kind, inputs, values, provenance, verdict}]}]}

Every number is emitted as a decimal string so that exact integers and
rationals survive serialization.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__

FALSIFYING = {"fails", "inconsistent"}


def stringify(value):
    """Recursively turn numbers into decimal strings (bools and None kept)."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, dict):
        return {str(k): stringify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [stringify(v) for v in value]
    return str(value)


@dataclass
class Result:
    kind: str
    inputs: dict
    values: dict
    provenance: str = "computed"
    verdict: str = "n/a"

    def as_dict(self) -> dict:
        return {"kind": self.kind, "inputs": stringify(self.inputs),
                "values": stringify(self.values), "provenance": self.provenance,
                "verdict": self.verdict}


@dataclass
class Instance:
    name: str
    ring: str
    results: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"name": self.name, "ring": self.ring,
                "results": [r.as_dict() for r in self.results]}


@dataclass
class ReportBundle:
    seed: int
    field: str
    instances: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)   # file stem -> TSV text
    exit_code: int = 0

    def instance(self, name: str, ring: str) -> Instance:
        for inst in self.instances:
            if inst.name == name:
                return inst
        inst = Instance(name, ring)
        self.instances.append(inst)
        return inst

    def add(self, name: str, ring: str, result: Result):
        self.instance(name, ring).results.append(result)
        if result.verdict in FALSIFYING:
            self.flag(5)

    def flag(self, code: int):
        self.exit_code = max(self.exit_code, code)

    def results(self):
        for inst in self.instances:
            yield from inst.results

    def as_dict(self) -> dict:
        return {"version": __version__, "seed": str(self.seed), "field": self.field,
                "instances": [i.as_dict() for i in self.instances]}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2) + "\n"

    def write_json(self, path):
        Path(path).write_text(self.to_json())

    def write_tsv(self, directory):
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        for stem, text in self.tables.items():
            (d / f"{stem}.tsv").write_text(text)

    def summary(self) -> str:
        lines = []
        for inst in self.instances:
            lines.append(f"[{inst.name}] {inst.ring}")
            for r in inst.results:
                v = stringify(r.values)
                if "relation" in v:
                    vals = f"{v['lhs']} {v['relation']} {v['rhs']}"
                else:
                    vals = ", ".join(f"{k}={x}" for k, x in v.items()
                                     if not isinstance(x, (dict, list)))
                lines.append(f"  {r.kind:<34} {r.verdict:<24} {vals}")
        return "\n".join(lines) + ("\n" if lines else "")
