#!/usr/bin/env python3
"""Reproduce the non-factorization diagnostic for the boundary indicator.

Builds the oscillatory spectrum, computes the one-particle coefficients of
the left boundary-atom indicator, fits their decay law and the logarithmic
growth of the partial sums, and prints the divergence verdict together with
the predicted slope 4*alpha0/(mu0*pi).
"""

import argparse
import json
import math

import numpy as np

from stringmass.fock import factorization_diagnostic
from stringmass.model import ModelParams, calibrate
from stringmass.spectrum import build_spectrum


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mu0", type=float, default=1.5)
    ap.add_argument("--mu1", type=float, default=0.8)
    ap.add_argument("--w2", type=float, default=2.0)
    ap.add_argument("--w02", type=float, default=2.5)
    ap.add_argument("--w12", type=float, default=1.2)
    ap.add_argument("--n-max", type=int, default=500,
                    help="number of oscillatory modes in the partial sums")
    ap.add_argument("--json-out", type=str, default=None,
                    help="optional path for the full JSON report")
    args = ap.parse_args()

    params = ModelParams(args.mu0, args.mu1, args.w2, args.w02, args.w12)
    cal = calibrate(params)
    spec = build_spectrum(params, cal, n_neg=args.n_max + 20)
    report = factorization_diagnostic(spec, cal, args.n_max)

    coeffs = np.abs(report.coefficients)
    ns = np.arange(1, args.n_max + 1)
    lo = args.n_max // 10
    slope, intercept = np.polyfit(np.log(ns[lo:]), np.log(coeffs[lo:]), 1)
    pref = math.exp(intercept)
    expected_pref = 2.0 * math.sqrt(cal.alpha0) / math.sqrt(
        params.mu0 * math.pi)

    print(f"parameters        : {params}")
    print(f"alpha0            : {cal.alpha0:.12g}")
    print(f"coefficient decay : n^{slope:.4f}  (expected n^-0.5)")
    print(f"prefactor         : {pref:.6g}  (expected {expected_pref:.6g})")
    print(f"partial-sum slope : {report.log_slope:.6g} per ln N "
          f"(expected {report.expected_slope:.6g})")
    print(f"octave increments : {report.slope_lo:.6g} -> {report.slope_hi:.6g}")
    print(f"verdict           : {report.verdict}")
    print("interpretation    : the indicator has finite mu-norm "
          f"(alpha0 = {cal.alpha0:.6g}) but non-square-summable one-particle "
          "coefficients, so the one-particle space does not factor through "
          "the boundary atoms.")

    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(report.to_json() + "\n")
        print(f"report written    : {args.json_out}")


if __name__ == "__main__":
    main()
