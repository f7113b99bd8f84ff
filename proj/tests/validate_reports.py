"""Runs small versions of every subcommand and validates the reports."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

RUNS = [
    ["scaling", "--p", "4..64"],
    ["scaling", "--construction", "vertical-lines", "--p", "1..16"],
    ["scaling", "--construction", "multiscale", "--Q0", "0..2", "--Q1", "0..2", "--budget", "2"],
    ["pyramid", "--P", "2", "--phi", "8", "--samples", "200"],
    ["flatdist", "--N", "2", "--bruteforce"],
    ["flatdist", "--N", "4"],
    ["crofton", "--lines", "2000", "--curves", "3", "--degree", "1..3"],
    ["sublevel", "--polys", "2", "--samples", "2000"],
    ["continuity", "--trials", "3", "--raster", "32"],
    ["coverage", "--family", "parallel", "--trials", "5", "--max-points", "4"],
    ["coverage", "--family", "antipodal", "--trials", "3"],
    ["pack", "--p", "10..100", "--trials", "10"],
]


def main():
    exe, schema_path = sys.argv[1], sys.argv[2]
    schema = json.loads(Path(schema_path).read_text())
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        outputs = []
        for i, args in enumerate(RUNS):
            out = Path(tmp) / f"r{i}.json"
            proc = subprocess.run([exe, *args, "--seed", "3", "--out", str(out)], capture_output=True, text=True)
            if proc.returncode != 0:
                print(f"FAIL {' '.join(args)}: exit {proc.returncode}\n{proc.stderr}")
                failures += 1
                continue
            outputs.append(str(out))
        agg = Path(tmp) / "agg.json"
        proc = subprocess.run([exe, "report", "--inputs", ",".join(outputs), "--out", str(agg)],
                              capture_output=True, text=True)
        if proc.returncode != 0:
            print(f"FAIL report: exit {proc.returncode}\n{proc.stderr}")
            failures += 1
        else:
            outputs.append(str(agg))
        for path in outputs:
            report = json.loads(Path(path).read_text())
            errors = list(validator.iter_errors(report))
            name = report.get("experiment", path)
            for e in errors:
                print(f"FAIL {name}: {'/'.join(map(str, e.path))}: {e.message}")
            failures += bool(errors)
            if not errors:
                print(f"ok {name}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
