"""``ptsim`` command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings

import numpy as np

from .analysis import ClippedRangeWarning, SweepRecord, sample_shots, sweep_alpha
from .linalg import adjoint
from .protocol import (
    AliceBit,
    Normalization,
    bob_marginal,
    bob_state,
    joint_probabilities,
    phases,
    protocol_time,
    run_protocol,
)
from .pt_core import (
    BrokenSymmetryError,
    TrivialHamiltonianError,
    evolution_operator,
    hermitian_counterpart,
    make_hamiltonian,
    metric_operator,
)
from .verify import run_checks

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def fmt(x):
    """12 significant digits, no forced exponent."""
    x = float(x)
    if x == 0:
        x = 0.0  # drop the sign of negative zero
    return f"{x:.12g}"


def fmt_complex(z):
    z = complex(z)
    return f"{fmt(z.real)}{'+' if z.imag >= 0 else '-'}{fmt(abs(z.imag))}j"


def fmt_matrix(m, indent="  "):
    return "\n".join(indent + "[" + ", ".join(fmt_complex(z) for z in row) + "]"
                     for row in np.asarray(m))


def _fixed12(x):
    s = f"{x:.12f}"
    return s[1:] if s.startswith("-") and float(s) == 0 else s


def _alpha(args, value):
    return math.radians(value) if args.degrees else value


def cmd_demo(args, out):
    alpha = _alpha(args, args.alpha)
    norm = Normalization(args.normalization)
    h = make_hamiltonian(args.s, alpha)
    h.require_unbroken()
    tau = protocol_time(h)
    ph = phases(alpha)
    print(f"alpha = {fmt(alpha)} rad, s = {fmt(h.s)}, normalization = {norm.value}", file=out)
    print("H =", file=out)
    print(fmt_matrix(h.matrix), file=out)
    print(f"tau = pi / delta_e = {fmt(tau)}", file=out)
    print("U(tau) =", file=out)
    print(fmt_matrix(evolution_operator(h, tau)), file=out)
    print(f"phi_plus = {fmt(ph.phi_plus)}", file=out)
    print(f"phi_minus = {fmt(ph.phi_minus)}", file=out)
    print(f"epsilon = {fmt(ph.epsilon)}", file=out)
    marg = {}
    for bit in AliceBit:
        state = run_protocol(h, bit, norm)
        marg[bit] = bob_marginal(joint_probabilities(state, bit))
        print(f"Bob's reduced state, A_{bit.value}:", file=out)
        print(fmt_matrix(bob_state(state)), file=out)
    for bit in AliceBit:
        p, q = marg[bit]
        print(f"P(b=+y | A_{bit.value}) = {fmt(p)}, P(b=-y | A_{bit.value}) = {fmt(q)}", file=out)
    gap = marg[AliceBit.PLUS][0] - marg[AliceBit.MINUS][0]
    print(f"gap {_fixed12(gap)}", file=out)
    if abs(gap) <= 1e-12:
        print("Hermitian: no-signaling holds", file=out)
    else:
        print("no-signaling violated: Bob's statistics depend on Alice's choice", file=out)
    return EXIT_OK


def _sweep_rows(records):
    return [[fmt(getattr(r, k)) for k in SweepRecord.FIELDS] for r in records]


def write_sweep(records, kind, out):
    if kind == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(SweepRecord.FIELDS)
        w.writerows(_sweep_rows(records))
    else:
        data = [{k: float(v) for k, v in zip(SweepRecord.FIELDS, row)}
                for row in _sweep_rows(records)]
        json.dump(data, out, indent=2)
        out.write("\n")


def cmd_sweep(args, out):
    lo = _alpha(args, args.alpha_start)
    hi = _alpha(args, args.alpha_end)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ClippedRangeWarning)
        records = sweep_alpha(lo, hi, args.steps, Normalization(args.normalization), args.s)
    for w in caught:
        print(f"ptsim: note: {w.message}", file=sys.stderr)
    write_sweep(records, args.format, out)
    return EXIT_OK


def cmd_verify(args, out):
    results = run_checks(args.tol)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name:<{width}}  value={r.value:.3e}  ({r.criterion})", file=out)
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} invariants passed at tol={args.tol:g}", file=out)
    return EXIT_OK if failed == 0 else EXIT_FAIL


def cmd_metric(args, out):
    alpha = _alpha(args, args.alpha)
    h = make_hamiltonian(args.s, alpha)
    eta = metric_operator(h)
    rho = eta.sqrt()
    hp = hermitian_counterpart(h, eta)
    print(f"alpha = {fmt(alpha)} rad, s = {fmt(h.s)}", file=out)
    print("eta (trace 2) =", file=out)
    print(fmt_matrix(eta.eta), file=out)
    print("eigenvalues(eta) = " + ", ".join(fmt(x) for x in np.linalg.eigvalsh(eta.eta)), file=out)
    print("rho = eta^(1/2) =", file=out)
    print(fmt_matrix(rho), file=out)
    print("h' = rho H rho^-1 =", file=out)
    print(fmt_matrix(hp), file=out)
    res_eta = np.max(np.abs(adjoint(h.matrix) @ eta.eta - eta.eta @ h.matrix))
    res_herm = np.max(np.abs(hp - adjoint(hp)))
    print(f"residual |H^dag eta - eta H| = {res_eta:.3e}", file=out)
    print(f"residual |h' - h'^dag| = {res_herm:.3e}", file=out)
    return EXIT_OK


def cmd_sample(args, out):
    alpha = _alpha(args, args.alpha)
    h = make_hamiltonian(args.s, alpha)
    norm = Normalization(args.normalization)
    bit = AliceBit(args.bit)
    est = sample_shots(h, bit, args.shots, args.seed, norm)
    exact = bob_marginal(joint_probabilities(run_protocol(h, bit, norm)))
    print(f"alpha = {fmt(alpha)} rad, s = {fmt(h.s)}, bit = {bit.value}", file=out)
    print(f"shots = {est.shots}", file=out)
    print(f"seed = {est.seed}", file=out)
    print(f"p_hat_plus = {fmt(est.p_hat_plus)}", file=out)
    print(f"p_hat_minus = {fmt(est.p_hat_minus)}", file=out)
    print(f"stderr = {fmt(est.stderr)}", file=out)
    print(f"exact p_plus = {fmt(exact[0])}", file=out)
    print(f"exact p_minus = {fmt(exact[1])}", file=out)
    return EXIT_OK


def _positive_int(text):
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return n


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--degrees", action="store_true",
                        help="read angle flags in degrees (output stays in radians)")
    common.add_argument("--s", type=float, default=1.0, help="energy scale (default 1)")
    common.add_argument("--normalization", choices=[n.value for n in Normalization],
                        default=Normalization.CONVENTIONAL.value)
    common.add_argument("--output", default=None, help="output path (default stdout)")

    parser = argparse.ArgumentParser(
        prog="ptsim",
        description="Signaling with a local PT-symmetric qubit on one half of a Bell pair.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("demo", parents=[common], help="run the protocol once and report")
    p.add_argument("--alpha", type=float, required=True)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("sweep", parents=[common], help="tabulate the protocol over alpha")
    p.add_argument("--alpha-start", type=float, required=True)
    p.add_argument("--alpha-end", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", parents=[common], help="run the invariant battery")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("metric", parents=[common], help="metric operator and Hermitian counterpart")
    p.add_argument("--alpha", type=float, required=True)
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("sample", parents=[common], help="finite-shot emulation of Bob's measurement")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--bit", choices=[b.value for b in AliceBit], default="plus")
    p.add_argument("--shots", type=_positive_int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    buf = io.StringIO()
    try:
        code = args.func(args, buf)
    except (BrokenSymmetryError, TrivialHamiltonianError, ValueError) as exc:
        print(f"ptsim {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = buf.getvalue()
    if args.output is None:
        sys.stdout.write(text)
    else:
        try:
            with open(args.output, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"ptsim {args.command}: cannot write {args.output}: {exc.strerror}",
                  file=sys.stderr)
            return EXIT_USAGE
    return code


if __name__ == "__main__":
    sys.exit(main())
