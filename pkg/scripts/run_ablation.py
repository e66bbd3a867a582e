#!/usr/bin/env python3
"""Ablation sweeps: adjacency variant, layer count, or embedding width.

The adjacency-variant axis retrains the model with (a) the plain 0/1 edge
adjacency, (b) the degree-scaled variant, (c) the weight-scaled variant,
and (d) both variants fused, on one shared dataset.  Defaults follow the
desk-scale GNM setup.
"""

import argparse
import sys
from pathlib import Path

from ebcrank.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--axis", default="adjacency-variant",
                    choices=["adjacency-variant", "layers", "dims"])
    ap.add_argument("--family", default="gnm", choices=["gnp", "gnm", "ws"])
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--root", default="runs")
    ap.add_argument("--values")
    args = ap.parse_args()

    root = Path(args.root) / f"ablation_{args.family}_{args.seed}"
    dataset = root / "dataset"
    if not (dataset / "manifest.json").exists():
        cli_main(["gen", "--out", str(dataset), "--family", args.family,
                  "--seed", str(args.seed)])
        cli_main(["exact", "--dataset", str(dataset)])
    extra = ["--values", args.values] if args.values else []
    return cli_main(["ablate", "--dataset", str(dataset), "--axis", args.axis,
                     "--out", str(root), *extra])


if __name__ == "__main__":
    sys.exit(main())
