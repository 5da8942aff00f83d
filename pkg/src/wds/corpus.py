"""Batch runs over a directory of cases with expected-output sidecars.

A case ``NAME.case.json`` holds ``{"argv": [...]}``: a command line for
:func:`wds.cli.run`.  Paths in ``argv`` that start with ``./`` are taken
relative to the case directory.  The sidecar ``NAME.expected.json`` holds a
fragment of the report's ``result``: every key present must match and
absent keys are ignored.  Lists must have the same length, and their items
are matched the same way.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path


def thread_count() -> int:
    raw = os.environ.get("WDS_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = os.cpu_count() or 1
    return max(1, n)


def match(expected, actual, path="result") -> list[str]:
    """Differences between an expected fragment and the actual value."""
    if isinstance(expected, dict):
        if not isinstance(actual, dict):
            return [f"{path}: expected an object, got {json.dumps(actual)}"]
        diffs = []
        for k in sorted(expected):
            if k not in actual:
                diffs.append(f"{path}.{k}: missing")
            else:
                diffs.extend(match(expected[k], actual[k], f"{path}.{k}"))
        return diffs
    if isinstance(expected, list) and isinstance(actual, list) and len(expected) == len(actual):
        diffs = []
        for i, (e, a) in enumerate(zip(expected, actual)):
            diffs.extend(match(e, a, f"{path}[{i}]"))
        return diffs
    if expected != actual:
        return [f"{path}: expected {json.dumps(expected)}, got {json.dumps(actual)}"]
    return []


def run_case(directory: Path, name: str) -> dict:
    from .cli import run

    try:
        case = json.loads((directory / f"{name}.case.json").read_text())
        expected = json.loads((directory / f"{name}.expected.json").read_text())
        argv = [str(directory / a[2:]) if isinstance(a, str) and a.startswith("./") else a
                for a in case["argv"]]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        return {"name": name, "status": "error", "diffs": [f"{type(exc).__name__}: {exc}"]}
    report, code = run(argv)
    if code != 0:
        return {"name": name, "status": "error", "diffs": report["diagnostics"]}
    diffs = match(expected, report["result"])
    return {"name": name, "status": "fail" if diffs else "pass", "diffs": diffs,
            "input_digest": report["input_digest"]}


def corpus_run(directory, threads: int | None = None) -> dict:
    directory = Path(directory)
    names = sorted(p.name[: -len(".case.json")] for p in directory.glob("*.case.json"))
    threads = thread_count() if threads is None else max(1, threads)
    if threads == 1 or len(names) < 2:
        cases = [run_case(directory, n) for n in names]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            cases = list(pool.map(lambda n: run_case(directory, n), names))
    summary = {s: sum(c["status"] == s for c in cases) for s in ("pass", "fail", "error")}
    summary["total"] = len(cases)
    return {"cases": cases, "summary": summary}
