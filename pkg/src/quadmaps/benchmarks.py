"""Backend benchmark: one full sample-a-quadrangulation-and-measure-its-
radius pipeline per size, timed under the compiled kernels and under the
pure-Python fallback (in subprocesses, since the backend is fixed at
import time)."""

from __future__ import annotations

import os
import subprocess
import sys
import time


def _time_pipeline(n: int, repeats: int) -> float:
    from .experiments import sample_radius_row

    best = float("inf")
    for rep in range(repeats):
        t0 = time.perf_counter()
        sample_radius_row(n, seed=12345 + rep)
        best = min(best, time.perf_counter() - t0)
    return best


def _worker(n: int, repeats: int) -> None:
    print(f"{_time_pipeline(n, repeats):.6f}")


def _spawn(n: int, repeats: int, pure: bool) -> float:
    env = dict(os.environ)
    if pure:
        env["QUADMAPS_PURE"] = "1"
    else:
        env.pop("QUADMAPS_PURE", None)
    out = subprocess.run(
        [sys.executable, "-m", "quadmaps.benchmarks", str(n), str(repeats)],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return float(out.stdout.strip().splitlines()[-1])


def run_benchmark(sizes, repeats: int = 3, pure_max: int = 100_000) -> list[dict]:
    from ._backend import backend_name

    rows = []
    print(f"{'n':>10}  {'compiled (s)':>14}  {'pure (s)':>14}  {'speedup':>8}")
    for n in sizes:
        compiled = _spawn(n, repeats, pure=False)
        pure = _spawn(n, repeats, pure=True) if n <= pure_max else None
        speed = (pure / compiled) if pure else float("nan")
        rows.append({"n": n, "compiled": compiled, "pure": pure, "speedup": speed})
        pure_s = f"{pure:14.4f}" if pure is not None else f"{'skipped':>14}"
        print(f"{n:>10}  {compiled:14.4f}  {pure_s}  {speed:8.1f}")
    if backend_name() != "compiled":
        print("note: extension not importable here; 'compiled' column used the fallback")
    return rows


if __name__ == "__main__":
    _worker(int(sys.argv[1]), int(sys.argv[2]) if len(sys.argv) > 2 else 3)
