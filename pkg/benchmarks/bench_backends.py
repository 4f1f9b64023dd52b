"""Compare the compiled core against the pure-Python fallback.

Three configurations, each in a fresh interpreter so selection happens at import:
``compiled`` (Cython kernels + gmpy2 rationals), ``gmpy2-only``
(``NUMGROUPS_KERNEL=python``) and ``python`` (``NUMGROUPS_PURE_PYTHON=1``).

    python3 benchmarks/bench_backends.py [--repeat 3] [--json]
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import subprocess
import sys

WORKLOADS = {
    "certify-picard": """
from numgroups.specfile import load_bundled
from numgroups.decider import certify
certify(load_bundled("picard"))
""",
    "conjugates-picard-x20": """
import random
from numgroups._backend import QQ
from numgroups.specfile import load_bundled
from numgroups.decider import certify
from numgroups.linhull import SquareMatrix
spec = load_bundled("picard"); K = spec.field; rng = random.Random(1); done = 0
while done < 20:
    V = SquareMatrix(K, [[QQ(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(2)] for _ in range(2)])
    if V.det():
        certify(spec.conjugate(V)); done += 1
""",
    "witness-search-hecke7": """
from numgroups.specfile import load_bundled
from numgroups.decider import trace_witness_search
trace_witness_search(load_bundled("hecke7"), 8)
""",
    "closure-half-24-rounds": """
from numgroups._backend import QQ
from numgroups.exactfield import rational_field
from numgroups.fricke import pi_lambda
from numgroups.oklattice import EuclideanOK, lattice_closure
Q = rational_field()
lattice_closure(pi_lambda(Q, QQ(1, 2)).generators, EuclideanOK(Q), 24)
""",
}

TIMER = """
import time, sys
t0 = time.perf_counter()
exec(compile(sys.stdin.read(), "<workload>", "exec"))
from numgroups._backend import BACKEND, KERNEL
print(f"{KERNEL}+{BACKEND}", time.perf_counter() - t0)
"""


CONFIGS = {
    "compiled": {},
    "gmpy2-only": {"NUMGROUPS_KERNEL": "python"},
    "python": {"NUMGROUPS_PURE_PYTHON": "1"},
}


def run_once(code: str, config: str) -> tuple[str, float]:
    env = {k: v for k, v in os.environ.items() if not k.startswith("NUMGROUPS_")}
    env.update(CONFIGS[config])
    proc = subprocess.run(
        [sys.executable, "-c", TIMER], input=code, capture_output=True, text=True, env=env, check=True
    )
    backend, seconds = proc.stdout.split()
    return backend, float(seconds)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--json", action="store_true")
    parser.add_argument("--only", choices=sorted(WORKLOADS))
    args = parser.parse_args(argv)

    results = {}
    for name, code in WORKLOADS.items():
        if args.only and name != args.only:
            continue
        row = {}
        for label in CONFIGS:
            runs = [run_once(code, label) for _ in range(args.repeat)]
            row[label] = {"backend": runs[0][0], "median_s": statistics.median(t for _, t in runs)}
        row["speedup"] = row["python"]["median_s"] / row["compiled"]["median_s"]
        results[name] = row

    if args.json:
        print(json.dumps(results, indent=2))
        return 0
    print(f"{'workload':<26}" + "".join(f"{c:>12}" for c in CONFIGS) + f"{'speedup':>10}")
    for name, row in results.items():
        times = "".join(f"{row[c]['median_s']:>11.3f}s" for c in CONFIGS)
        print(f"{name:<26}{times}{row['speedup']:>9.2f}x")
    print("backends: " + ", ".join(f"{c} = {row[c]['backend']}" for c in CONFIGS))
    return 0


if __name__ == "__main__":
    sys.exit(main())
