#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Runs a raw multiplication microbenchmark and a full fundamental-class
computation on the S3 sextic, once per backend.  The pure path is forced
in a subprocess via PADICLFC_FORCE_PURE.
"""

import json
import os
import subprocess
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

SNIPPET = r"""
import json, time
from padiclfc import backend
from padiclfc.local_field import LocalField
from padiclfc.lfc import lfc_main, working_field

L = working_field(LocalField(3, 1, [[3],[0],[0],[0],[0],[0],[1]], 20), 6)
x = L.one() + L.pi()
y = x
t0 = time.time()
for _ in range(20000):
    y = y * x
t_mul = time.time() - t0

t0 = time.time()
cocycle = lfc_main(L, 6)
t_lfc = time.time() - t0
print(json.dumps({
    "compiled": backend.HAVE_COMPILED,
    "mul_20k": t_mul,
    "lfc_s3_k6": t_lfc,
}))
"""


def run(force_pure):
    env = dict(os.environ)
    if force_pure:
        env["PADICLFC_FORCE_PURE"] = "1"
    else:
        env.pop("PADICLFC_FORCE_PURE", None)
    out = subprocess.run([sys.executable, "-c", SNIPPET], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    pure = run(force_pure=True)
    fast = run(force_pure=False)
    print(f"{'':<16}{'pure':>12}{'selected':>12}{'speedup':>10}")
    for key in ("mul_20k", "lfc_s3_k6"):
        ratio = pure[key] / fast[key] if fast[key] else float("inf")
        print(f"{key:<16}{pure[key]:>11.3f}s{fast[key]:>11.3f}s"
              f"{ratio:>9.2f}x")
    if not fast["compiled"]:
        print("note: compiled extension unavailable; both runs were pure")


if __name__ == "__main__":
    main()
