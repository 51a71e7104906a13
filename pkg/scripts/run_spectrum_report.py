#!/usr/bin/env python3
"""Summarize the spectral problem for a parameter set.

Prints the calibrated measure, the bracket threshold, the first secular
roots of every eigenvalue family with their asymptote deviations, and the
orthonormality quality of the resulting basis.
"""

import argparse
import math

import numpy as np

from stringmass.model import ModelParams, calibrate
from stringmass.mufunc import GridSpec
from stringmass.spectrum import (
    asymptote_error,
    build_spectrum,
    detect_threshold,
    gram_matrix,
    zero_mode_defect,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mu0", type=float, default=1.5)
    ap.add_argument("--mu1", type=float, default=0.8)
    ap.add_argument("--w2", type=float, default=2.0)
    ap.add_argument("--w02", type=float, default=2.5)
    ap.add_argument("--w12", type=float, default=1.2)
    ap.add_argument("--n-modes", type=int, default=32)
    args = ap.parse_args()

    params = ModelParams(args.mu0, args.mu1, args.w2, args.w02, args.w12)
    cal = calibrate(params)
    print(f"parameters : {params}")
    print(f"alpha      : ({cal.alpha0:.12g}, {cal.alpha1:.12g})")
    print(f"A          : ({cal.a0:.12g}, {cal.a1:.12g})  "
          f"branches ({cal.branch0:+d}, {cal.branch1:+d})")
    print(f"zero-mode defect : {zero_mode_defect(params):.3e}")
    n0, _ = detect_threshold(params)
    print(f"bracket threshold n0 : {n0}")

    spec = build_spectrum(params, cal, n_neg=args.n_modes)
    print(f"\n{'n':>4} {'class':>6} {'omega':>14} {'lambda':>14} "
          f"{'g':>12} {'asym err':>10}")
    for m in spec.modes[: args.n_modes]:
        err = (f"{asymptote_error(m.omega, params):10.2e}"
               if m.kind == "neg" else "         -")
        print(f"{m.n:4d} {m.kind:>6} {m.omega:14.8f} {m.lam:14.6f} "
              f"{m.g:12.5g} {err}")
    if spec.nonphysical_omegas:
        print(f"flagged non-physical roots (omega^2 >= w2): "
              f"{spec.nonphysical_omegas}")

    G = gram_matrix(spec, GridSpec(4096), min(30, len(spec.modes)))
    off = G - np.diag(np.diag(G))
    print(f"\nGram matrix ({G.shape[0]} modes, n_grid=4096): "
          f"max off-diagonal {np.max(np.abs(off)):.2e}, "
          f"max diagonal deviation {np.max(np.abs(np.diag(G) - 1.0)):.2e}")
    c = 1.0 / params.mu0 + 1.0 / params.mu1
    print(f"root asymptote: omega_k ~ k*pi + {c:.6g}/(k*pi)")
    print(f"large-n frequency spacing -> pi = {math.pi:.6f}")


if __name__ == "__main__":
    main()
