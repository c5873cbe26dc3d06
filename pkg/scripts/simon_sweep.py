"""Sweep the cross coupling c of Gamma(lam, c) and compare Simon's test with the window."""

import argparse

import numpy as np

from gchain import lemma52_window, lemma_gamma, simon_test


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lam", type=float, default=0.7)
    ap.add_argument("--points", type=int, default=25)
    args = ap.parse_args()

    hi = np.sqrt(args.lam ** 2 - 0.25)
    print("c,window,simon,margin")
    for c in np.linspace(0, hi, args.points + 2)[1:-1]:
        w = lemma52_window(args.lam, c)
        res = simon_test(lemma_gamma(args.lam, c))
        print(f"{c:.6f},{w.verdict.value},{res.verdict.value},{res.margin:.3e}")


if __name__ == "__main__":
    main()
