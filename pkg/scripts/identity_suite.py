"""Run the identity suites through the CLI entry point and print a one-line summary per suite.

Usage: python scripts/identity_suite.py [extra verify-identities flags]
"""
import contextlib
import io
import json
import sys

from lmoments.cli import main as cli_main


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli_main(["verify-identities", *argv])
    record = json.loads(buf.getvalue())
    for row in record["result"]["identities"]:
        flag = "ok  " if row["passed"] else "FAIL"
        print(f"{flag} {row['identity']:<40} max_residual={row['max_residual']:.2e} tol={row['tolerance']:.0e}")
    print(f"exit code {code}, {record['runtime']['seconds']:.1f}s")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
