#!/usr/bin/env python3
"""Write the full numeric-constants report (values, enclosures, quoted targets)."""

import argparse
import json
import sys

from subring_census.verify import QUOTED_CONSTANTS, compute_constant


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=None, help="path for the JSON report")
    args = parser.parse_args()

    entries = []
    for name, (quoted, tol, kind) in QUOTED_CONSTANTS.items():
        value = compute_constant(name)
        limit = tol * abs(quoted) if kind == "rel" else tol
        entries.append(
            {
                "id": name,
                "value": value.value,
                "bound": value.bound,
                "quoted": quoted,
                "tolerance": tol,
                "kind": kind,
                "passed": abs(value.value - quoted) <= limit,
            }
        )
        state = "ok" if entries[-1]["passed"] else "FAIL"
        print(f"{name:28s} {value.value:.10g}  +-{value.bound:.2e}  quoted {quoted} [{state}]")
    text = json.dumps({"entries": entries}, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    return 0 if all(e["passed"] for e in entries) else 1


if __name__ == "__main__":
    sys.exit(main())
