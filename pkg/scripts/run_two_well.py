#!/usr/bin/env python3
"""Chain components of the two-well switched system, both switching rules.

Complete graph: the unit interval and the upper fixed point come out as the
two persistent components.  Cycle graph with two-cell links: the forced
alternation breaks the unit interval apart; single-cell links restore it.
"""
import json
import pathlib
import subprocess
import sys

HERE = pathlib.Path(__file__).resolve().parent


def run(config: pathlib.Path, extra=()):
    cmd = [sys.executable, "-m", "switchflow.cli", "--config", str(config),
           *extra, "chain-sets"]
    print("+", " ".join(cmd))
    subprocess.run(cmd, check=True)


def main():
    run(HERE / "configs" / "two_well_complete.json")
    run(HERE / "configs" / "two_well_cycle.json")

    # cycle rule again with single-cell links: free per-link switching
    doc = json.loads((HERE / "configs" / "two_well_cycle.json").read_text())
    doc["analysis"]["m"] = 1
    doc["run"]["out"] = "out/two_well_cycle_m1"
    tmp = HERE / "configs" / "_two_well_cycle_m1.json"
    tmp.write_text(json.dumps(doc, indent=2))
    try:
        run(tmp)
    finally:
        tmp.unlink()

    for out in ("out/two_well_complete", "out/two_well_cycle", "out/two_well_cycle_m1"):
        summary = pathlib.Path(out) / "chain_summary.json"
        if summary.exists():
            doc = json.loads(summary.read_text())
            print(f"{out}: {doc['component_count']} components")
            for comp in doc["components"][:3]:
                print(f"  cells={comp['cell_count']} "
                      f"range=[{comp.get('center_min'):.4f}, {comp.get('center_max'):.4f}]")


if __name__ == "__main__":
    main()
