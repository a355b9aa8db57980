"""Shared command-line handling for the experiment scripts."""
import argparse
from pathlib import Path


def parse_out(description: str) -> Path:
    parser = argparse.ArgumentParser(description=description)
    parser.add_argument("--out", type=Path, default=Path("results"), help="output directory (default: results/)")
    out = parser.parse_args().out
    out.mkdir(parents=True, exist_ok=True)
    return out
