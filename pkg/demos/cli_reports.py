"""
Driving the command-line front end from Python and reading its reports.

The same reports come out of ``weylcov <command> ...`` on the shell.
"""
import json

from weylcov.cli import dumps, run

for argv in (["mub", "--dim", "5"],
             ["bound", "t2", "--dim", "2", "--p", "0.5", "--samples", "1", "--state", "maxent"],
             ["decompose", "two-pauli", "--p", "0.2"],
             ["mub", "--dim", "4"]):
    status, report = run(argv)
    print(f"$ weylcov {' '.join(argv)}  -> exit {status}, pass={report['pass']}, "
          f"max_violation={report['max_violation']:.2e}, error={report['error']}")

status, report = run(["bound", "t3", "--p", "0.25", "--samples", "3", "--seed", "7"])
print(json.dumps(json.loads(dumps(report))["cases"][0]["outputs"], indent=1)[:400])
