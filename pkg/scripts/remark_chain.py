"""Tridiagonal chain lam=0.7, b=0.24: validity, pair verdicts and entropy rate."""

import argparse

import numpy as np

from gchain import BandedSpec, FamilyParams, banded_is_g_chain, chain_pair_verdicts, kms_rate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lam", type=float, default=0.7)
    ap.add_argument("--b", type=float, default=0.24)
    ap.add_argument("--max-gap", type=int, default=5)
    args = ap.parse_args()

    params = FamilyParams(args.lam, args.b, {1: 1.0})
    spec = BandedSpec(args.lam * np.eye(2), args.b * np.diag([1.0, -1.0]), 1)
    crit = banded_is_g_chain(spec.A, spec.B)
    print(f"validity bound b < {params.validity_bound:.6f}: {params.is_valid_chain}; "
          f"endpoint test: {crit.ok}")
    pairs = [(1, 1 + d) for d in range(1, args.max_gap + 1)]
    for v in chain_pair_verdicts(params, pairs):
        print(f"pair {v.pair}: c={v.c:.4f} window=({v.window[0]:.4f}, {v.window[1]:.4f}) "
              f"{v.verdict.value} margin={v.margin:.3e}")
    q = kms_rate(spec.A, spec.B, {1: 1.0})
    print(f"entropy rate {q.estimate:.12f} (indicator {q.error_indicator:.1e})")


if __name__ == "__main__":
    main()
