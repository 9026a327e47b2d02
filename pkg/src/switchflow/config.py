"""Experiment configuration: one JSON document per reproducible run.

Blocks: ``graph`` (switching rules), ``system`` (box, step, fields),
``analysis`` (grid and chain parameters), ``run`` (seed, output, tolerance).
The resolved configuration is embedded verbatim in every output file.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .chains import CONSTRAINED, FREE
from .fields import VectorField, field_from_config
from .flow import SwitchedSystem
from .graph import DirectedGraph, ValidationError, require_valid


@dataclass(frozen=True)
class AnalysisConfig:
    cells: tuple[int, ...]
    eps: float
    m: int = 1
    mode: str = FREE
    q: int = 1
    max_work: int = 2_000_000
    references: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        if self.eps <= 0:
            raise ValidationError("analysis.eps must be positive")
        if self.mode not in (FREE, CONSTRAINED):
            raise ValidationError(f"analysis.mode must be {FREE!r} or {CONSTRAINED!r}")


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    out: str = "out"
    tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.tol <= 0:
            raise ValidationError("run.tol must be positive")


@dataclass(frozen=True)
class ExperimentConfig:
    graph: DirectedGraph
    system: SwitchedSystem
    analysis: AnalysisConfig | None
    run: RunConfig
    raw: dict = field(repr=False, compare=False, default_factory=dict)

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        if "graph" not in doc or "system" not in doc:
            raise ValidationError("config needs 'graph' and 'system' blocks")
        graph = require_valid(DirectedGraph.from_json_dict(doc["graph"]))

        sysdoc = doc["system"]
        box = tuple((float(lo), float(hi)) for lo, hi in sysdoc["box"])
        dim = len(box)
        raw_fields = sysdoc["fields"]
        if len(raw_fields) != graph.n:
            raise ValidationError(
                f"system.fields has {len(raw_fields)} entries but the graph "
                f"has {graph.n} vertices")
        fields: tuple[VectorField, ...] = tuple(
            field_from_config(sp, dim) for sp in raw_fields)
        system = SwitchedSystem(
            graph=graph, box=box, step=float(sysdoc["h"]), fields=fields,
            substeps=int(sysdoc.get("substeps", 20)),
            clamp=bool(sysdoc.get("clamp", False)))

        analysis = None
        if "analysis" in doc:
            a = doc["analysis"]
            cells = a["cells"]
            if isinstance(cells, int):
                cells = [cells] * dim
            refs = tuple((float(lo), float(hi)) for lo, hi in a.get("references", []))
            analysis = AnalysisConfig(
                cells=tuple(int(c) for c in cells), eps=float(a["eps"]),
                m=int(a.get("m", 1)), mode=a.get("mode", FREE),
                q=int(a.get("q", 1)), max_work=int(a.get("max_work", 2_000_000)),
                references=refs)
            if len(analysis.cells) != dim:
                raise ValidationError("analysis.cells must give one count per axis")

        r = doc.get("run", {})
        run = RunConfig(seed=int(r.get("seed", 0)), out=str(r.get("out", "out")),
                        tol=float(r.get("tol", 1e-10)))
        return cls(graph, system, analysis, run, raw=doc)

    @classmethod
    def from_file(cls, path: str | Path) -> "ExperimentConfig":
        try:
            doc = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config {path}: invalid JSON at line "
                                  f"{exc.lineno} column {exc.colno}: {exc.msg}") from exc
        return cls.from_dict(doc)

    def resolved(self) -> dict:
        """Fully resolved configuration for provenance headers."""
        doc: dict = {
            "graph": {
                "vertices": self.graph.n,
                "edges": sorted([list(e) for e in self.graph.edges]),
            },
            "system": {
                "box": [list(b) for b in self.system.box],
                "h": self.system.step,
                "substeps": self.system.substeps,
                "clamp": self.system.clamp,
                "fields": self.raw.get("system", {}).get("fields"),
            },
            "run": {"seed": self.run.seed, "out": self.run.out, "tol": self.run.tol},
        }
        if self.graph.labels:
            doc["graph"]["labels"] = list(self.graph.labels)
        if self.analysis is not None:
            doc["analysis"] = {
                "cells": list(self.analysis.cells),
                "eps": self.analysis.eps,
                "m": self.analysis.m,
                "mode": self.analysis.mode,
                "q": self.analysis.q,
                "max_work": self.analysis.max_work,
                "references": [list(r) for r in self.analysis.references],
            }
        return doc

    def provenance_json(self) -> str:
        return json.dumps(self.resolved(), sort_keys=True, separators=(",", ":"))
