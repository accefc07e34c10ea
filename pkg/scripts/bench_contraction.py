"""Compare greedy and carving-guided contraction times on seeded random circuits."""

import argparse
import random
import statistics
import time

from algtn import decomp as dc
from algtn import generators as gen
from algtn import network as nw
from algtn.convert import convert


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--circuits", type=int, default=20)
    ap.add_argument("--qubits", type=int, default=10)
    ap.add_argument("--gates", type=int, default=40)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    times = {"greedy": [], "carving": []}
    widths = []
    for _ in range(args.circuits):
        N = convert(gen.random_circuit(rng, args.qubits, args.gates, 4, min_qubits=2))
        G = nw.build_graph(N)
        cd = dc.carving_decomposition(G)
        widths.append(dc.carving_width(G, cd))
        for name, kw in (("greedy", {"order": nw.greedy_path(N)}), ("carving", {"decomposition": cd})):
            t = time.perf_counter()
            nw.contract_all(N, **kw)
            times[name].append(time.perf_counter() - t)
    print(f"circuits={args.circuits} median carving width={statistics.median(widths)}")
    for name, ts in times.items():
        print(f"{name:8} median {statistics.median(ts) * 1e3:8.2f} ms  max {max(ts) * 1e3:8.2f} ms")


if __name__ == "__main__":
    main()
