"""Finite-section rates S_n/n against the quadrature rate for a Toeplitz mixture."""

import argparse
import csv
import sys

import numpy as np

from gchain import Band, ToeplitzMixtureSpec, entropy_sequence, kms_rate


def parse_weights(text):
    return {int(j): float(p) for j, p in (item.split(":") for item in text.split(","))}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lam", type=float, default=0.7)
    ap.add_argument("--b", type=float, default=0.2)
    ap.add_argument("--weights", type=parse_weights, default={1: 1.0}, help="J:P[,J:P...]")
    ap.add_argument("--n-max", type=int, default=256)
    args = ap.parse_args()

    A, B = args.lam * np.eye(2), args.b * np.diag([1.0, -1.0])
    spec = ToeplitzMixtureSpec(A, [Band(j, p, B) for j, p in args.weights.items()])
    q = kms_rate(A, B, args.weights)
    trace = entropy_sequence(spec, args.n_max)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["n", "rate", "gap", "n_times_gap"])
    n = 1
    while n <= args.n_max:
        gap = trace.rates[n - 1] - q.estimate
        out.writerow([n, f"{trace.rates[n - 1]:.17g}", f"{gap:.6e}", f"{n * gap:.6f}"])
        n *= 2
    print(f"# kms rate {q.estimate:.15f}, indicator {q.error_indicator:.1e}", file=sys.stderr)


if __name__ == "__main__":
    main()
