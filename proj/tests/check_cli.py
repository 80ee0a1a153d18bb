# Copyright 2026 The qeffort Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""End-to-end checks of the qeffort CLI.

usage: check_cli.py CLI SOURCE_DIR OUT_DIR

Every sample problem must validate against the problem schema, run with exit
status 0, produce byte-identical output on a second run with the same seed,
and (for JSON output) validate against the report schema. Malformed problems
must exit 2 and numerical failures 3.
"""

import json
import math
import pathlib
import subprocess
import sys

import jsonschema

failures = []


def check(cond, msg):
    if not cond:
        failures.append(msg)
        print("FAIL:", msg)


def run(cli, problem, *flags):
    return subprocess.run([cli, str(problem), *flags], capture_output=True)


def main():
    cli, src, out = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
    out.mkdir(parents=True, exist_ok=True)
    problem_schema = json.loads((src / "schemas/problem.schema.json").read_text())
    report_schema = json.loads((src / "schemas/report.schema.json").read_text())
    jsonschema.Draft202012Validator.check_schema(problem_schema)
    jsonschema.Draft202012Validator.check_schema(report_schema)
    problem_validator = jsonschema.Draft202012Validator(problem_schema)
    report_validator = jsonschema.Draft202012Validator(report_schema)

    reports = {}
    for path in sorted((src / "problems").glob("*.json")):
        problem = json.loads(path.read_text())
        errors = list(problem_validator.iter_errors(problem))
        check(not errors, f"{path.name} violates the problem schema: {errors[:1]}")
        first = run(cli, path, "--seed", "42")
        second = run(cli, path, "--seed", "42")
        check(first.returncode == 0, f"{path.name} exit {first.returncode}: {first.stderr.decode()}")
        check(first.stdout == second.stdout, f"{path.name} output is not deterministic")
        text = first.stdout.decode()
        check(b"\r" not in first.stdout, f"{path.name} output contains CR")
        fmt = problem.get("output", {}).get("format", "json")
        if fmt == "json":
            report = json.loads(text)
            errors = list(report_validator.iter_errors(report))
            check(not errors, f"{path.name} report violates the report schema: {errors[:1]}")
            reports[path.stem] = report
        else:
            lines = text.split("\n")
            check(len(lines) > 2 and lines[-1] == "", f"{path.name} CSV is empty or not LF-terminated")
            width = lines[0].count(",")
            check(all(l.count(",") == width for l in lines[1:-1]), f"{path.name} CSV rows are ragged")
            reports[path.stem] = lines
        print(f"ok {path.name}")

    fig1 = reports["fig1_effort"]
    check(abs(fig1["alpha_line_integral"] - math.pi / 2) < 1e-6, "fig1 alpha")
    check(abs(fig1["area_swept"] - math.pi / 4) < 1e-6, "fig1 area")
    check(all(abs(b["area"] - math.pi / 4) < 1e-6 for b in fig1["basis_areas"]), "fig1 areas per basis")
    check(abs(reports["fig2_area"]["total"] - math.pi / 4) < 1e-6, "fig2 area")
    table = reports["gate_table"]
    check(table[0] == "gate,difficulty", "gate table header")
    check(table[1] == "X,3.1415926535897931", f"gate table first row {table[1]}")
    check(reports["evolve_diag30"]["windings"] == [1, 0], "diag(3,0) windings")
    check(abs(reports["difficulty_inverter"]["effort_bound"] - 5 * math.pi) < 1e-12, "inverter bound")
    check(reports["ml_check"]["violations"] == 0, "ml-check violations")
    check(reports["berry_interpolated"][0] == "channel,phi,alpha,beta_residual", "berry CSV header")

    # Determinism across seeds is not required, but the seed must be honoured.
    a = run(cli, src / "problems/ml_check.json", "--seed", "1").stdout
    b = run(cli, src / "problems/ml_check.json", "--seed", "2").stdout
    check(a != b, "ml-check ignores --seed")

    # Writing to a file.
    target = out / "gate_table.csv"
    problem = {"task": "gate-table", "output": {"format": "csv", "path": str(target)}}
    pfile = out / "gate_table_problem.json"
    pfile.write_text(json.dumps(problem))
    r = run(cli, pfile, "--quiet")
    check(r.returncode == 0 and r.stdout == b"" and target.read_text().startswith("gate,difficulty\n"),
          "file output")

    # Validation failures exit 2 with a diagnostic.
    for path in sorted((src / "problems/invalid").glob("*.json")):
        r = run(cli, path)
        check(r.returncode == 2, f"{path.name} exit {r.returncode}, expected 2")
        check(len(r.stderr) > 0, f"{path.name} printed no diagnostic")
        print(f"ok {path.name}: {r.stderr.decode().strip()}")
    r = run(cli, src / "problems/invalid/non_hermitian.json")
    check(b"[0][1]" in r.stderr, "non-Hermitian diagnostic names the entry")
    check(run(cli, out / "missing.json").returncode == 2, "missing file exits 2")
    check(run(cli, src / "problems/levitin.json", "--step", "-1").returncode == 2, "bad flag exits 2")

    # Numerical failure exits 3.
    r = run(cli, src / "problems/evolve_time_ordering.json", "--step", "1e-13")
    check(r.returncode == 3, f"step underflow exit {r.returncode}, expected 3")

    # Step override reaches the integrator.
    coarse = json.loads(run(cli, src / "problems/evolve_diag30.json", "--step", "0.05").stdout)
    check(abs(coarse["max_step"] - 0.05) < 1e-15, "--step override")

    if failures:
        print(f"{len(failures)} check(s) failed")
        return 1
    print("all CLI checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
