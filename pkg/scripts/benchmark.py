"""Wall-clock time of the full pipeline on a large synthetic network.

    python scripts/benchmark.py --nodes 100000 --refs 10 --snapshots
"""
import argparse
import time

from seminalrank.pipeline import evaluate, rank_all
from seminalrank.registry import CORE_SET
from seminalrank.synth import SynthParams, generate_synthetic


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=100_000)
    ap.add_argument("--refs", type=int, default=10)
    ap.add_argument("--snapshots", action="store_true")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    t0 = time.perf_counter()
    res = generate_synthetic(SynthParams(n_nodes=args.nodes, refs_per_node=args.refs, n_seminal=50))
    print(f"generate  N={res.network.N} E={res.network.E}  {time.perf_counter() - t0:.1f}s")
    for lab in CORE_SET:
        t0 = time.perf_counter()
        sv = rank_all(res.network, [lab])[lab]
        print(f"{lab:<6} {time.perf_counter() - t0:6.2f}s  iterations={sv.iterations}")
    t0 = time.perf_counter()
    evaluate(res.network, res.seminal, CORE_SET)
    print(f"pipeline (16 variants + evaluation)  {time.perf_counter() - t0:.1f}s")
    if args.snapshots:
        t0 = time.perf_counter()
        evaluate(res.network, res.seminal, CORE_SET, snapshots=True, workers=args.workers)
        print(f"pipeline with yearly snapshots  {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
