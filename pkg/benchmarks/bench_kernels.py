"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

from sukit import kernels
from sukit.constructions import medvedev
from sukit.formula import axiom, variables
from sukit.frame import enumerate_s4_frames, random_s4_frame, upset_masks
from sukit.semantics import compile_program
from sukit.strong_union import dup_masks


def _validity_workload():
    su = axiom("su")
    order = sorted(variables(su))
    program = compile_program(su, order)
    jobs = []
    for n in (3, 4):
        for F in enumerate_s4_frames(n):
            ups = tuple(upset_masks(F))
            jobs.append((F.succ, F.pred, program, [ups] * len(order), F.full))
    return jobs


def _su2_workload():
    frames = list(enumerate_s4_frames(5)) + [medvedev(5).frame]
    frames += [random_s4_frame(7, s) for s in range(500)]
    return [(F.succ, F.pred, dup_masks(F), 2) for F in frames]


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernels.BACKEND != "cython":
        print("compiled kernels unavailable; only the Python backend can be timed")
    workloads = {
        "su validity, all frames with 3-4 points": (_validity_workload(), kernels.refute),
        "su2 check, 5-point frames + Medvedev(5) + 500 random": (_su2_workload(), kernels.su_n_failure),
    }
    backends = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])
    for label, (jobs, fn) in workloads.items():
        times = {}
        results = {}
        for b in backends:
            times[b] = _time(lambda: [fn(*job, backend=b) for job in jobs], args.repeat)
            results[b] = [fn(*job, backend=b) is None for job in jobs]
        line = f"{label} ({len(jobs)} jobs): " + ", ".join(f"{b} {t * 1000:.1f} ms" for b, t in times.items())
        if len(backends) == 2:
            assert results["python"] == results["cython"], "backends disagree"
            line += f", speedup x{times['python'] / times['cython']:.1f}"
        print(line)


if __name__ == "__main__":
    main()
