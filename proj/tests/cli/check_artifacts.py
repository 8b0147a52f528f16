#!/usr/bin/env python3
"""Run every kppfront subcommand on small configs and check what lands on disk.

usage: check_artifacts.py KPPFRONT_BINARY SCHEMA_DIR WORK_DIR
"""

import csv
import hashlib
import json
import math
import shutil
import subprocess
import sys
from pathlib import Path

import jsonschema

SMALL = {
    "eigen": """
[reaction]
kind = "illustration"
alpha = 0.3
L = 5
theta = -2
[grid]
X = 30
nx = 149
ny = 6
[speed]
c = 1
[eigen]
R = [10, 20, 30]
""",
    "eigen_no_cstar": """
[reaction]
kind = "constant"
r0 = -1
[grid]
nx = 99
""",
    "front": """
[speed]
c_fraction = 0.5
[front]
uniqueness = true
""",
    "evolve": """
[evolve]
horizon = 60
[speed]
c_fraction = 0.5
""",
    "evolve_short": """
[evolve]
horizon = 2
initial = "bump"
bump_height = 0.01
[speed]
c_fraction = 0.5
""",
    "illustrate": """
[illustrate]
dynamic = false
nx = 299
""",
    "symmetry": """
[grid]
X = 30
nx = 399
ny = 3
""",
    "concentrate": """
[strip]
X = 10
nx = 99
[concentrate]
n_max = 2
""",
    "pulsate": """
[grid]
X = 20
nx = 199
[periodic]
steps = 16
""",
    "pulsate_fast": """
[speed]
c = 4
[periodic]
steps = 16
""",
    "sweep": """
[grid]
X = 20
nx = 199
[sweep]
points = 3
horizon = 50
""",
    "bad_key": """
[grid]
nx = 99
bogus = 3
""",
    "duplicate_key": """
[grid]
nx = 99
nx = 101
""",
}

# (label, subcommand, config, expected exit code)
RUNS = [
    ("eigen", "eigen", "eigen", 0),
    ("eigen_no_cstar", "eigen", "eigen_no_cstar", 0),
    ("front", "front", "front", 0),
    ("evolve", "evolve", "evolve", 0),
    ("evolve_short", "evolve", "evolve_short", 3),
    ("illustrate", "illustrate", "illustrate", 0),
    ("symmetry", "symmetry", "symmetry", 0),
    ("concentrate", "concentrate", "concentrate", 0),
    ("pulsate", "pulsate", "pulsate", 0),
    ("pulsate_fast", "pulsate", "pulsate_fast", 2),
    ("sweep", "sweep", "sweep", 0),
    ("bad_key", "front", "bad_key", 1),
    ("duplicate_key", "front", "duplicate_key", 1),
]

failures = []


def check(ok, what):
    if not ok:
        failures.append(what)
        print("  FAIL", what)


def run(binary, sub, config, out):
    cmd = [binary, sub, "--out", str(out), "--workers", "1"]
    if config is not None:
        cmd[2:2] = ["--config", str(config)]
    return subprocess.run(cmd, capture_output=True, text=True, timeout=600)


def check_csv(path, headers):
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    check(len(rows) >= 2, f"{path.name}: no data rows")
    if not rows:
        return
    variants = [h for name, h in headers.items() if name.split(" ")[0] == path.name]
    check(rows[0] in variants, f"{path.name}: header {rows[0]} not in {variants}")
    width = len(rows[0])
    for k, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            check(False, f"{path.name}:{k}: {len(row)} cells, expected {width}")
            return
        for name, cell in zip(rows[0], row):
            if name == "outcome":
                check(cell in ("persistence", "extinction", "undecided"), f"{path.name}:{k}: outcome {cell!r}")
            else:
                try:
                    check(math.isfinite(float(cell)), f"{path.name}:{k}: non-finite {name}")
                except ValueError:
                    check(False, f"{path.name}:{k}: {name} = {cell!r} is not a number")
                    return


def check_outputs(out, schemas, headers):
    files = sorted(p for p in out.iterdir())
    check(any(p.name == "manifest.json" for p in files), f"{out.name}: no manifest.json")
    check(not any(p.name.startswith(".") for p in files), f"{out.name}: temporary files left behind")
    for p in files:
        if p.suffix == ".json":
            schema = schemas.get(p.stem)
            check(schema is not None, f"{p.name}: no schema")
            if schema is not None:
                try:
                    jsonschema.validate(json.loads(p.read_text()), schema)
                except jsonschema.ValidationError as e:
                    check(False, f"{out.name}/{p.name}: {e.message}")
        elif p.suffix == ".csv":
            check_csv(p, headers)
    manifest = json.loads((out / "manifest.json").read_text())
    listed = {a["name"] for a in manifest["artifacts"]}
    check(listed == {p.name for p in files} - {"manifest.json"}, f"{out.name}: manifest lists {sorted(listed)}")
    for a in manifest["artifacts"]:
        data = (out / a["name"]).read_bytes()
        check(a["bytes"] == len(data), f"{out.name}/{a['name']}: byte count")
        check(a["sha256"] == hashlib.sha256(data).hexdigest(), f"{out.name}/{a['name']}: digest")
    return manifest


def main():
    if len(sys.argv) != 4:
        print(__doc__, file=sys.stderr)
        return 2
    binary, schema_dir, work = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
    shutil.rmtree(work, ignore_errors=True)
    work.mkdir(parents=True)
    schemas = {p.name[: -len(".schema.json")]: json.loads(p.read_text()) for p in schema_dir.glob("*.schema.json")}
    headers = {k: v for k, v in json.loads((schema_dir / "csv_headers.json").read_text()).items() if not k.startswith("$")}
    for schema in schemas.values():
        jsonschema.Draft202012Validator.check_schema(schema)

    for name, text in SMALL.items():
        (work / f"{name}.toml").write_text(text.lstrip())

    for label, sub, config, code in RUNS:
        print(f"{label}: kppfront {sub}")
        out = work / f"out_{label}"
        r = run(binary, sub, work / f"{config}.toml", out)
        check(r.returncode == code, f"{label}: exit {r.returncode}, expected {code}; stderr: {r.stderr.strip()}")
        if code in (0, 3):
            if out.is_dir():
                manifest = check_outputs(out, schemas, headers)
                check(manifest["command"] == sub, f"{label}: manifest command {manifest['command']}")
            else:
                check(False, f"{label}: no output directory")
        else:
            check(not out.exists() or not any(out.iterdir()), f"{label}: partial outputs left in {out}")
            check(r.stderr.strip() != "", f"{label}: no message on stderr")

    doc = json.loads((work / "out_eigen_no_cstar" / "eigen.json").read_text())
    check(doc["c_star"] is None, "c_star should be null when lambda0 >= 0")
    doc = json.loads((work / "out_evolve_short" / "evolve.json").read_text())
    check(doc["outcome"] == "undecided", f"short evolve outcome {doc['outcome']}")
    r = run(binary, "front", work / "bad_key.toml", work / "unused")
    check("grid.bogus" in r.stderr, f"bad key not named: {r.stderr.strip()}")

    print("rerun: front")
    again = work / "out_front_again"
    r = run(binary, "front", work / "front.toml", again)
    check(r.returncode == 0, "rerun failed")
    for p in sorted((work / "out_front").iterdir()):
        check(p.read_bytes() == (again / p.name).read_bytes(), f"rerun differs in {p.name}")

    r = subprocess.run([binary, "front", "--no-such-flag"], capture_output=True, text=True)
    check(r.returncode == 1, f"bad flag exit {r.returncode}")
    r = subprocess.run([binary, "front", "--config", str(work / "missing.toml"), "--out", str(work / "m")],
                       capture_output=True, text=True)
    check(r.returncode == 1, f"missing config exit {r.returncode}")

    print(f"{len(failures)} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
