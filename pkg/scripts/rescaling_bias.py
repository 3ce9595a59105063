"""sigma/sigma0 of each metric before and after age rescaling on synthetic networks.

    python scripts/rescaling_bias.py --seeds 0 1 2 --nodes 20000
"""
import argparse

from seminalrank.evaluation import AgeGrouping, bias_profile
from seminalrank.pipeline import rank_all
from seminalrank.synth import SynthParams, generate_synthetic

BASES = ["C", "P", "T", "L", "H", "CI", "SLC", "HITS"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    ap.add_argument("--nodes", type=int, default=20_000)
    ap.add_argument("--aging-days", type=float, default=3650.0)
    ap.add_argument("--window", type=int, default=None)
    args = ap.parse_args()

    print("seed\tmetric\traw\trescaled")
    for seed in args.seeds:
        res = generate_synthetic(SynthParams(n_nodes=args.nodes, aging_days=args.aging_days, seed=seed))
        scores = rank_all(res.network, BASES + ["R" + b for b in BASES], window=args.window)
        g = AgeGrouping.build(res.network.N, 40)
        for b in BASES:
            raw = bias_profile(scores[b], g).ratio
            resc = bias_profile(scores["R" + b], g).ratio
            print(f"{seed}\t{b}\t{raw:.2f}\t{resc:.2f}")


if __name__ == "__main__":
    main()
