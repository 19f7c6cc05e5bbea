"""Command-line interface.

Exit codes: 0 success / convertible / witness found, 1 negative verdict,
2 input error, 3 inconclusive.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import sys
from pathlib import Path

import numpy as np

from . import io
from .config import Config, Tolerances
from .conversion import nielsen_locc_check, unital_convertible
from .errors import InconclusiveError, WorkConvError
from .states import FreeSet, Hamiltonian, two_level_hamiltonian
from .thermo import delta, delta_mu_assisted
from .verify import SUITES, run_suite
from .witness import SamplingPlan, measure_report, witness_search

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3

SWEEP_COLUMNS = ("parameter", "w", "w_inf", "delta", "delta_mu_assisted")


class UsageError(WorkConvError):
    pass


def _config(args) -> Config:
    return Config(kBT=args.kbt if args.kbt is not None else 1.0, epsilon=args.eps,
                  delta_max=args.emax, omega=args.omega,
                  tol=Tolerances(verdict=args.tol), seed=args.seed, threads=args.threads)


def _emit(text: str, out: str | None = None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def cmd_delta(args) -> int:
    cfg = _config(args)
    rho = io.parse_state(io.load_json(args.state))
    h = io.parse_hamiltonian(io.load_json(args.hamiltonian), kBT=args.kbt)
    if rho.dim != h.dim:
        raise io.InputError(f"state is {rho.dim}-dimensional, Hamiltonian {h.dim}-dimensional")
    report = delta(rho, h, cfg.tol)
    _emit(io.dumps(report.to_dict()), args.out)
    return EXIT_OK


def cmd_convert(args) -> int:
    cfg = _config(args)
    rho = io.parse_state(io.load_json(args.rho))
    sigma = io.parse_state(io.load_json(args.sigma))
    if rho.dim != sigma.dim:
        raise io.InputError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    v = unital_convertible(rho, sigma, cfg.omega, cfg.kBT, cfg.tol, certificate=args.certificate)
    _emit(io.dumps(v.to_dict(certificate=args.certificate)), args.out)
    return EXIT_OK if v.convertible else EXIT_NEGATIVE


def cmd_nielsen(args) -> int:
    cfg = _config(args)
    psi = io.parse_bipartite(io.load_json(args.psi))
    phi = io.parse_bipartite(io.load_json(args.phi))
    if psi.local_dim != phi.local_dim:
        raise io.InputError(f"local dimension mismatch: {psi.local_dim} vs {phi.local_dim}")
    v = nielsen_locc_check(psi, phi, cfg.omega, cfg.kBT, cfg.tol)
    _emit(io.dumps(v.to_dict()), args.out)
    return EXIT_OK if v.convertible else EXIT_NEGATIVE


def _free_set(arg: str, d: int) -> FreeSet:
    if arg == "max-mixed":
        return FreeSet.maximally_mixed(d)
    return io.parse_free_set(io.load_json(arg))


def cmd_witness(args) -> int:
    cfg = _config(args)
    rho = io.parse_state(io.load_json(args.rho))
    free = _free_set(args.free_set, rho.dim)
    if free.dim != rho.dim:
        raise io.InputError(f"free set is {free.dim}-dimensional, state {rho.dim}-dimensional")
    res = witness_search(rho, free, cfg.epsilon, cfg.delta_max, max_iter=args.max_iter,
                         kBT=cfg.kBT, tol=cfg.tol)
    out = res.to_dict()
    if res.found:
        out["hamiltonian"] = io.hamiltonian_to_json(res.hamiltonian)
        if args.out:
            Path(args.out).write_text(io.dumps(io.hamiltonian_to_json(res.hamiltonian)),
                                      encoding="utf-8", newline="\n")
            out["hamiltonian_file"] = args.out
    sys.stdout.write(io.dumps(out))
    if res.status == "inconclusive":
        return EXIT_INCONCLUSIVE
    return EXIT_OK if res.found else EXIT_NEGATIVE


def cmd_measure(args) -> int:
    cfg = _config(args)
    rho = io.parse_state(io.load_json(args.rho))
    plan = SamplingPlan(n_random=args.samples, seed=cfg.seed, spread_floor=args.spread_floor)
    res = measure_report(rho, cfg.epsilon, cfg.delta_max, plan, cfg.kBT)
    out = {"eps": cfg.epsilon, "emax": cfg.delta_max, **res.to_dict()}
    _emit(io.dumps(out), args.out)
    return EXIT_OK


def _sweep_hamiltonians(family: str, grid: list, d: int, cfg: Config):
    for x in grid:
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise io.InputError(f"grid values must be numbers, got {x!r}", "grid")
        if family == "hk":
            if float(x) != int(x) or not (0 <= int(x) <= d - 2):
                raise io.InputError(f"hk grid values must be integers in [0, {d - 2}], got {x!r}",
                                    "grid")
            yield int(x), two_level_hamiltonian(d, int(x), cfg.omega, cfg.kBT)
        elif family == "diag0x":
            if x < 0:
                raise io.InputError(f"diag0x grid values must be non-negative, got {x!r}", "grid")
            e = np.full(d, float(x))
            e[0] = 0.0
            yield x, Hamiltonian.diagonal(e, kBT=cfg.kBT)
        else:
            raise io.InputError(f"unknown family {family!r} (expected 'hk' or 'diag0x')", "family")


def cmd_sweep(args) -> int:
    cfg = _config(args)
    spec_path = Path(args.spec)
    spec = io.load_json(spec_path)
    for key in ("state", "family", "grid"):
        if key not in spec:
            raise io.InputError(f"missing field {key!r}", str(spec_path))
    family, grid = spec["family"], spec["grid"]
    if family not in ("hk", "diag0x"):
        raise io.InputError(f"unknown family {family!r} (expected 'hk' or 'diag0x')", "family")
    if not isinstance(grid, list):
        raise io.InputError("grid must be a list", "grid")
    if "omega" in spec:
        cfg = cfg.with_(omega=float(spec["omega"]))
    state_path = Path(spec["state"])
    if not state_path.is_absolute():
        state_path = spec_path.parent / state_path
    rho = io.parse_state(io.load_json(state_path), "state")
    rows = []
    for param, h in _sweep_hamiltonians(family, grid, rho.dim, cfg):
        r = delta(rho, h, cfg.tol)
        rows.append((param, r.w, r.w_inf, r.delta, delta_mu_assisted(rho, h, cfg.tol)))
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([repr(v) for v in row])
    out = args.out or spec.get("out")
    if out and not Path(out).is_absolute() and not args.out:
        out = str(spec_path.parent / out)
    _emit(buf.getvalue(), out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES + ('all',))}")
    if args.n == 0:
        print("warning: n = 0, every property passes vacuously", file=sys.stderr)
    results = run_suite(args.suite, args.n, args.seed, Tolerances(verdict=args.tol),
                        corrupt=args.corrupt_tolerance)
    failed = 0
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        failed += not r.ok
        print(f"{r.suite}.{r.name}: {r.passed}/{r.total} {status}")
    print(f"{len(results) - failed}/{len(results)} properties passed")
    return EXIT_NEGATIVE if failed else EXIT_OK


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--kbt", type=float, default=None, help="temperature k_B T (default 1, or the file's)")
    p.add_argument("--eps", type=float, default=0.0, help="lower energy bound")
    p.add_argument("--emax", type=float, default=1.0, help="upper energy bound")
    p.add_argument("--omega", type=float, default=1.0, help="energy of the two-level family")
    p.add_argument("--tol", type=float, default=1e-10, help="one-sided verdict tolerance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None, help="write the primary output to this file")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="workconv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("delta", parents=[common], help="work report for a state and Hamiltonian")
    p.add_argument("state")
    p.add_argument("hamiltonian")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("convert", parents=[common], help="unital / mixed-unitary convertibility")
    p.add_argument("rho")
    p.add_argument("sigma")
    p.add_argument("--certificate", action="store_true", help="embed the mixed-unitary certificate")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("nielsen", parents=[common], help="pure-state LOCC convertibility")
    p.add_argument("psi")
    p.add_argument("phi")
    p.set_defaults(func=cmd_nielsen)

    p = sub.add_parser("witness", parents=[common], help="search for a resource-witnessing Hamiltonian")
    p.add_argument("rho")
    p.add_argument("free_set", help="free-set JSON file, or 'max-mixed'")
    p.add_argument("--max-iter", type=int, default=500)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("measure", parents=[common], help="work-extraction resource measure")
    p.add_argument("rho")
    p.add_argument("--samples", type=int, default=64, help="random spectra in the sampling plan")
    p.add_argument("--spread-floor", type=float, default=1e-6,
                   help="exclude Hamiltonians with smaller spectral spread")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("sweep", parents=[common], help="CSV of work quantities along a Hamiltonian family")
    p.add_argument("spec")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", parents=[common], help="run seeded property suites")
    p.add_argument("suite", help=f"one of {', '.join(SUITES)}, all")
    p.add_argument("-n", type=int, default=100, help="random instances per property")
    p.add_argument("--corrupt-tolerance", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InconclusiveError as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (WorkConvError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
