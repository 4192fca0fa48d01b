"""``anet``: generate, verify and certify almost nets.

Exit codes: 0 pass, 1 verification failure, 2 usage or format error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__, _kernels
from .generator import (
    NetParams,
    ParameterError,
    RetriesExhausted,
    derive_params,
    generate_array,
    generate_verified,
    perturb,
    theorem_eps,
)
from .gf_poly import FieldError, IrreducibleBasis, check_prime, count_irreducibles, enumerate_irreducibles
from .lower_bound import certificate_check, extract_window, gram_matrix
from .pointfile import PointFile, PointFileError, read_pointfile, write_pointfile
from .radix_map import PrecisionError
from .verifier import VerifyReport, epsilon_observed, perfect_net_check, structural_selftest

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit_csv(path: str | None, text: str) -> None:
    if path is None:
        return
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_gen(args) -> int:
    params = derive_params(args.q, args.d, args.m, args.n, args.t, args.seed)
    comments = {}
    if args.verified is not None:
        result = generate_verified(params, args.verified, args.max_retries)
        points, params = result.points, result.params
        comments.update(
            attempts=result.attempts,
            eps_obs=repr(result.report.eps_obs),
            target_eps=repr(args.verified),
            min_count=result.report.min_count,
            max_count=result.report.max_count,
        )
    else:
        points = generate_array(params)
    extra = args.perturb_digits if args.perturb else 0
    if extra:
        points = perturb(points, extra, params.seed)
    header = {
        "m": params.m,
        "n": params.n,
        "t": params.t,
        "seed": params.seed,
        "perturb_digits": extra,
        "basis": ";".join(p.to_text() for p in params.basis()),
        "version": __version__,
    }
    write_pointfile(args.out, PointFile(points, header, comments))
    if args.floats:
        np.savetxt(args.floats, points.to_floats(), delimiter=",", fmt="%.17g")
    summary = {
        "out": args.out,
        "N": len(points),
        "q": params.q,
        "d": params.d,
        "m": params.m,
        "n": params.n,
        "t": params.t,
        "seed": params.seed,
        "D": points.D,
        "eps_theorem": repr(params.eps_theorem),
        "eps_internal": repr(params.eps_internal),
        "M": params.M,
        "below_theorem_regime": params.below_theorem_regime,
        **comments,
    }
    print("\n".join(f"{k}={v}" for k, v in summary.items()))
    _emit_csv(args.csv, ",".join(summary) + "\n" + ",".join(map(str, summary.values())) + "\n")
    return EXIT_OK


def _header_int(pf: PointFile, key: str, given):
    if given is not None:
        return given
    v = pf.get_int(key)
    if v is None:
        raise UsageError(f"--{key} not given and not present in the file header")
    return v


def cmd_verify(args) -> int:
    pf = read_pointfile(args.input)
    ps = pf.points
    n = _header_int(pf, "n", args.n)
    m = args.m if args.m is not None else _header_int(pf, "m", None)
    report = epsilon_observed(ps, ps.q, ps.d, n, m, threads=args.threads)
    threshold = args.threshold if args.threshold is not None else theorem_eps(ps.q, ps.d, m)
    passed = report.eps_obs <= threshold
    print(report.to_text())
    print(f"threshold={threshold!r}")
    print(f"passed={passed}")
    if not passed:
        print(f"worst box {report.worst_box} deviates by eps={report.eps_obs!r}", file=sys.stderr)
    _emit_csv(
        args.csv,
        VerifyReport.csv_header() + ",threshold,passed\n" + report.to_csv_row() + f",{threshold!r},{passed}\n",
    )
    return EXIT_OK if passed else EXIT_FAIL


def cmd_check_net(args) -> int:
    pf = read_pointfile(args.input)
    ps = pf.points
    size = args.block_size or len(ps)
    if len(ps) % size:
        raise UsageError(f"{len(ps)} points do not split into blocks of {size}")
    failures = 0
    rows = ["block,ok,violation,count"]
    for b in range(len(ps) // size):
        res = perfect_net_check(ps[b * size : (b + 1) * size], ps.q, ps.d, args.level, args.mu)
        rows.append(f"{b},{res.ok},{res.violation or ''},{'' if res.count is None else res.count}")
        if not res.ok:
            failures += 1
            print(f"block {b}: box {res.violation} holds {res.count}, expected {args.mu}")
    print(f"blocks={len(ps) // size}\nfailures={failures}\npassed={failures == 0}")
    _emit_csv(args.csv, "\n".join(rows) + "\n")
    return EXIT_OK if failures == 0 else EXIT_FAIL


def cmd_cert(args) -> int:
    pf = read_pointfile(args.input)
    ps = pf.points
    if not 1 <= args.k <= ps.d / 2:
        raise UsageError(f"k must satisfy 1 <= k <= d/2 = {ps.d / 2}")
    n = _header_int(pf, "n", args.n)
    m = args.m if args.m is not None else pf.get_int("m")
    window = extract_window(ps, ps.q, ps.d, n, args.k)
    cert = gram_matrix(window)
    result = certificate_check(cert, args.eps, m)
    csv = cert.entries_csv()
    if args.csv is None:
        sys.stdout.write(csv)
    else:
        _emit_csv(args.csv, csv)
    print(f"s_count={cert.s_count}")
    print(result.summary())
    return EXIT_OK if result.passed else EXIT_FAIL


def cmd_irreducibles(args) -> int:
    check_prime(args.q)
    count = args.count if args.count is not None else count_irreducibles(args.q, args.t)
    polys = enumerate_irreducibles(args.q, args.t, count)
    for p in polys:
        print(p.to_text())
    _emit_csv(args.csv, "index,poly\n" + "".join(f"{i},{p.to_text()}\n" for i, p in enumerate(polys)))
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selfcheck import arithmetic_suite

    check_prime(args.q)
    t = args.t
    if t is None:
        from .generator import default_block_size

        t = default_block_size(args.q, max(args.d, 2))
    if count_irreducibles(args.q, t) < args.d:
        raise ParameterError(f"fewer than {args.d} irreducibles of degree {t} over GF({args.q})")
    params = NetParams(args.q, args.d, 1, args.n, t, args.seed)
    report = structural_selftest(params, trials=args.trials)
    items = arithmetic_suite(args.q, t, IrreducibleBasis.standard(args.q, t, args.d), args.seed) + report.items
    for item in items:
        print(f"{'PASS' if item.passed else 'FAIL'} {item.name}: {item.detail}")
    ok = all(i.passed for i in items)
    print(f"passed={ok}")
    _emit_csv(args.csv, "item,passed,detail\n" + "".join(f"{i.name},{i.passed},{i.detail}\n" for i in items))
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="anet", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({_kernels.BACKEND} kernels)")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a translate net")
    g.add_argument("--q", type=int, required=True)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--t", type=int, default=None, help="digit-block size override")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--verified", type=float, default=None, metavar="TARGET_EPS",
                   help="retry seeds until the exact eps is at most TARGET_EPS")
    g.add_argument("--max-retries", type=int, default=5)
    g.add_argument("--perturb", action="store_true", help="append random digits to separate points")
    g.add_argument("--perturb-digits", type=int, default=16)
    g.add_argument("--floats", default=None, metavar="PATH", help="also write float coordinates as CSV")
    g.add_argument("--csv", default=None, metavar="PATH")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="exact eps over all basic boxes of volume q^-n")
    v.add_argument("input")
    v.add_argument("--n", type=int, default=None)
    v.add_argument("--m", type=float, default=None)
    v.add_argument("--threshold", type=float, default=None)
    v.add_argument("--threads", type=int, default=None)
    v.add_argument("--csv", default=None, metavar="PATH")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("check-net", help="perfect-net check, optionally per block")
    c.add_argument("input")
    c.add_argument("--level", type=int, required=True, help="box volume exponent n'")
    c.add_argument("--mu", type=int, required=True, help="required count per box")
    c.add_argument("--block-size", type=int, default=None)
    c.add_argument("--csv", default=None, metavar="PATH")
    c.set_defaults(func=cmd_check_net)

    r = sub.add_parser("cert", help="Gram-matrix certificate")
    r.add_argument("input")
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--eps", type=float, required=True)
    r.add_argument("--n", type=int, default=None)
    r.add_argument("--m", type=float, default=None)
    r.add_argument("--csv", default=None, metavar="PATH")
    r.set_defaults(func=cmd_cert)

    i = sub.add_parser("irreducibles", help="list monic irreducibles in lexicographic order")
    i.add_argument("--q", type=int, required=True)
    i.add_argument("--t", type=int, required=True)
    i.add_argument("--count", type=int, default=None)
    i.add_argument("--csv", default=None, metavar="PATH")
    i.set_defaults(func=cmd_irreducibles)

    s = sub.add_parser("selftest", help="structural and arithmetic self-tests")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--t", type=int, default=None)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--csv", default=None, metavar="PATH")
    s.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RetriesExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, ParameterError, FieldError, PointFileError, PrecisionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
