"""Compare the numba-compiled kernels against the pure-numpy fallback.

Runs representative solves in a subprocess per backend (the backend is fixed
at import time) and reports wall times.

    python benchmarks/bench_backends.py
"""

import json
import os
import subprocess
import sys

CASES = """
import json, time
from floquet_barrier.backend import BACKEND
from floquet_barrier.potentials import (DriveField, ParticleSpec, dt_reduced,
    rectangular_ev_nm, truncated_coulomb_mev_fm)
from floquet_barrier.solver import SolverSettings, solve_scattering

el = ParticleSpec(511e3, 1.0)
rect = rectangular_ev_nm(6.0, 0.2, 0.0)
coul = truncated_coulomb_mev_fm()

# warm-up (compilation on the numba backend)
solve_scattering(0.3, rect, DriveField(1e7, 0.12), el, 2)

cases = {
    "rect static": lambda: solve_scattering(3.0, rect, DriveField(0.0, 0.12), el, 0),
    "rect driven N=12": lambda: solve_scattering(
        0.28, rect, DriveField(2e8, 0.12), el, 12, n_max=24),
    "coulomb static E=6keV": lambda: solve_scattering(
        6e3, coul, DriveField(0.0, 6e3), dt_reduced(), 0,
        SolverSettings(rel_tol=1e-10, abs_tol=1e-12)),
    "coulomb driven N=8": lambda: solve_scattering(
        6e3, coul, DriveField(1.8e17, 6e3), dt_reduced(), 8,
        SolverSettings(rel_tol=1e-8, abs_tol=1e-10)),
}
out = {}
for name, fn in cases.items():
    t0 = time.perf_counter()
    res = fn()
    out[name] = {"seconds": time.perf_counter() - t0, "steps": res.n_steps,
                 "t_total": res.total_transmission}
print(json.dumps({"backend": BACKEND, "cases": out}))
"""


def run(backend: str) -> dict:
    env = dict(os.environ, FLOQUET_BARRIER_BACKEND=backend)
    proc = subprocess.run(
        [sys.executable, "-c", CASES], env=env, capture_output=True, text=True,
        check=True,
    )
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main() -> None:
    results = {b: run(b) for b in ("numba", "numpy")}
    print(f"{'case':28s} {'numba [s]':>12s} {'numpy [s]':>12s} {'speedup':>9s}")
    for name in results["numba"]["cases"]:
        tn = results["numba"]["cases"][name]["seconds"]
        tp = results["numpy"]["cases"][name]["seconds"]
        print(f"{name:28s} {tn:12.3f} {tp:12.3f} {tp / tn:8.1f}x")
        # identical physics on both backends (deterministic per backend)
        dn = results["numba"]["cases"][name]["t_total"]
        dp = results["numpy"]["cases"][name]["t_total"]
        rel = abs(dn - dp) / max(abs(dn), 1e-300)
        if rel > 1e-9:
            raise SystemExit(f"backend mismatch on {name}: {dn} vs {dp}")


if __name__ == "__main__":
    main()
