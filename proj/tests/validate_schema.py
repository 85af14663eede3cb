"""Validates CLI reports against docs/report.schema.json."""
import json
import subprocess
import sys

import jsonschema

cli, schema_path = sys.argv[1], sys.argv[2]
with open(schema_path) as fh:
    schema = json.load(fh)

runs = [
    ["--family", "H2", "--n", "1,2"],
    ["--family", "H2", "--r", "2", "--n", "1,1,1,1", "--no-telemetry"],
    ["--family", "br8"],
    ["--family", "psl", "--n", "6"],
    ["--family", "W", "--m", "1", "--n", "1"],
    ["--family", "model", "--model", "almost_abelian", "--ideal-dim", "3", "--action", "flip"],
    ["--family", "H2", "--n", "2,2", "--time-limit", "0.000001"],
]
for args in runs:
    proc = subprocess.run([cli, "analyze", *args], capture_output=True, text=True)
    if proc.returncode not in (0, 3):
        sys.exit(f"{args}: exit {proc.returncode}\n{proc.stderr}")
    jsonschema.validate(json.loads(proc.stdout), schema)
    print("valid:", " ".join(args))
