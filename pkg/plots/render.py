#!/usr/bin/env python3
"""Render estimator CSV output into comparison figures.

Usage: render.py --kind {ler|footprint|volume-bars} --in data.csv --out fig.png
Output format follows the extension (PNG and SVG supported). Runs
headless; exits 1 on schema mismatch or empty input without writing.
"""

import argparse
import sys

try:
    from plotlib import SchemaError, render
except ImportError:  # invoked as a module from elsewhere
    from plots.plotlib import SchemaError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--kind", required=True, choices=("ler", "footprint", "volume-bars"))
    parser.add_argument("--in", dest="csv_in", required=True)
    parser.add_argument("--out", required=True)
    args = parser.parse_args(argv)
    try:
        render(args.csv_in, args.kind, args.out)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
