#!/usr/bin/env python3
"""Signal-space demos: graph structure report, metric queries, stitching."""
import pathlib
import subprocess
import sys

HERE = pathlib.Path(__file__).resolve().parent
CONFIG = HERE / "configs" / "two_well_complete.json"


def run(*args):
    cmd = [sys.executable, "-m", "switchflow.cli", "--config", str(CONFIG), *args]
    print("+", " ".join(cmd))
    subprocess.run(cmd, check=True)


def main():
    run("analyze-graph")
    run("metric", "--kind", "omega", "--check-isometry",
        "--a", "left=(A) core=[] right=(A)",
        "--b", "left=(B) core=[] right=(B)")
    run("metric", "--kind", "delta",
        "--a", "left=(A B) core=[] right=(A B) tau=0.0",
        "--b", "left=(A B) core=[] right=(A B) tau=0.05")
    run("stitch-demo", "--links", "4", "--window", "5")
    run("simulate", "--x0", "0.5", "--signal", "left=(B) core=[] right=(B)",
        "--t-end", "3.0", "--sample-dt", "0.1")


if __name__ == "__main__":
    main()
