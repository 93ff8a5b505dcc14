"""floqplot CLI: `floqplot plot --spec spec.json`."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .render import PlotSpec, RenderError, render


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="floqplot", description="render floqsim outputs as figures"
    )
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("plot", help="render one plot spec")
    p.add_argument("--spec", required=True, help="plot spec JSON path")
    args = ap.parse_args(argv)
    try:
        spec = PlotSpec.from_json(Path(args.spec).read_text())
        out = render(spec)
        print(out)
        return 0
    except (RenderError, OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}))
        return 1


if __name__ == "__main__":
    sys.exit(main())
