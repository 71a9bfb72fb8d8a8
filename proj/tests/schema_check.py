#!/usr/bin/env python3
"""Validate g2surj run and batch output against schema/report.json."""

import json
import subprocess
import sys
from pathlib import Path

import jsonschema

ROOT = Path(__file__).resolve().parent.parent
SCHEMA = json.loads((ROOT / "schema" / "report.json").read_text())
VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)
DATA = ROOT / "tests" / "data"


def check(doc, where):
    errors = sorted(VALIDATOR.iter_errors(doc), key=lambda e: list(e.path))
    for e in errors:
        print(f"{where}: {'/'.join(map(str, e.path))}: {e.message}")
    if "summary" not in doc:
        for key in ("possibly_nonsurjective", "likely_nonsurjective"):
            if doc[key] != sorted(doc[key]):
                print(f"{where}: {key} is not sorted")
                return False
        if not set(doc["likely_nonsurjective"]) <= set(doc["possibly_nonsurjective"]):
            print(f"{where}: likely set is not a subset of the possible set")
            return False
    return not errors


def main():
    tool = sys.argv[1]
    records = [
        line for line in (DATA / "curves.csv").read_text().splitlines()
        if line and not line.startswith("#")
    ]
    hecke = ["--hecke-data", str(DATA / "hecke_fixture.csv")]
    ok = True
    for record in records:
        proc = subprocess.run([tool, "run", record, "--verbose", *hecke],
                              capture_output=True, text=True, check=False)
        ok &= check(json.loads(proc.stdout), record.split(",")[0])

    # Without Hecke data and with a malformed line, to cover the error shapes.
    batch_input = "\n".join(records + ["not,a,record"]) + "\n"
    proc = subprocess.run([tool, "batch", "-", "--parallel", "2"], input=batch_input,
                          capture_output=True, text=True, check=False)
    lines = proc.stdout.splitlines()
    if len(lines) != len(records) + 2:
        print(f"batch: expected {len(records) + 2} lines, got {len(lines)}")
        ok = False
    kinds = set()
    for i, line in enumerate(lines, 1):
        doc = json.loads(line)
        ok &= check(doc, f"batch line {i}")
        kinds.update(e["kind"] for e in doc.get("errors", []))
    for kind in ("ParseError", "EndomorphismSuspected", "MissingHeckeData"):
        if kind not in kinds:
            print(f"batch: no {kind} produced")
            ok = False

    print("schema check", "passed" if ok else "FAILED")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
