"""Command-line entry point: ``python3 -m zerocycles <subcommand> ...``.

Every subcommand builds one JSON report; ``--format`` only changes how
that report is printed, and ``--emit`` writes it to a file.

Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 resource
guard tripped.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
import time
from fractions import Fraction

from . import arithmetic, degeneration, densities, gm, homology, series, shellability
from .colored_partitions import ColoredSet, codim, enumerate_partitions, has_top
from .errors import InvalidInputError, NoTopElementError, ResourceLimitError
from .poset import partition_lattice

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_GUARD = 0, 1, 2, 3


# --- argument helpers ----------------------------------------------------------


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _hodge(text: str) -> dict:
    """``"p,q,i,h;p,q,i,h;..."``"""
    out = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        vals = _int_list(part)
        if len(vals) != 4:
            raise argparse.ArgumentTypeError(f"Hodge entries are p,q,i,h; got {part!r}")
        p, q, i, h = vals
        out[(p, q, i)] = out.get((p, q, i), 0) + h
    return out


def _carrier(args) -> ColoredSet:
    sizes = args.sizes
    if args.colors is not None and args.colors != len(sizes):
        raise InvalidInputError(f"--colors {args.colors} does not match {len(sizes)} sizes")
    return ColoredSet(tuple(sizes))


def _space(args) -> series.ManifoldData:
    if args.space is not None:
        if args.space not in series.NAMED:
            raise InvalidInputError(f"unknown space {args.space!r}; choose from {sorted(series.NAMED)}")
        return series.NAMED[args.space]
    if args.dim is None or args.betti is None:
        raise InvalidInputError("give --space, or both --dim and --betti")
    return series.ManifoldData(args.dim, tuple(args.betti), args.hodge, name="X")


def _add_colored(p):
    p.add_argument("--colors", type=int, default=None, help="number of colors m")
    p.add_argument("--sizes", type=_int_list, required=True, help="color class sizes d_1,...,d_m")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--limit", type=int, default=None, help="raise the |D| enumeration guard")


def _add_space(p, m=True):
    p.add_argument("--space", default=None, help=f"named space: {', '.join(series.NAMED)}")
    p.add_argument("--dim", type=int, default=None, help="real dimension of X")
    p.add_argument("--betti", type=_int_list, default=None, help="b_0,b_1,...")
    p.add_argument("--hodge", type=_hodge, default=None, help="p,q,i,h;...")
    if m:
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
    p.add_argument("--order", type=int, default=12, help="report coefficients through this degree")


def _dims_json(dims: dict) -> dict:
    return {str(k): v for k, v in sorted(dims.items())}


def _series_json(s: series.TruncatedSeries) -> dict:
    out = s.to_json()
    out["pretty"] = s.pretty()
    if s.arity == 1:
        out["list"] = s.coefficient_list()
    return out


def _frac(x) -> str:
    return arithmetic.fraction_str(Fraction(x))


# --- subcommands -------------------------------------------------------------------


def cmd_lattice(args) -> dict:
    D = _carrier(args)
    parts = enumerate_partitions(D, args.n, limit=args.limit)
    P = partition_lattice(D, args.n, limit=args.limit)
    ranks: dict = {}
    for I in parts:
        ranks[codim(I)] = ranks.get(codim(I), 0) + 1
    result = {
        "carrier": D.to_json(),
        "n": P.elements[0].n,
        "size": len(P),
        "cover_relations": len(P.hasse_edges()),
        "has_top": has_top(D, args.n),
        "codim_counts": _dims_json(ranks),
    }
    if args.elements:
        result["elements"] = [str(I) for I in P.elements]
    if args.dot:
        result["dot"] = P.to_dot()
    return {"status": "ok", "result": result}


def cmd_shell_verify(args) -> dict:
    D = _carrier(args)
    if len(D) > (args.limit or 10):
        raise ResourceLimitError("shell-verify limit |D|", len(D), args.limit or 10)
    lab = shellability.labelled_lattice(D, args.n)
    if args.corrupt:
        P = lab.poset
        ups = [j for j in P.upper_covers[P.bottom]]
        if len(ups) < 2:
            raise InvalidInputError("lattice too small to corrupt")
        lab = lab.swapped((P.elements[P.bottom], P.elements[ups[0]]), (P.elements[P.bottom], P.elements[ups[1]]))
    report = shellability.verify_el(D, args.n, lab)
    return {"status": "pass" if report.passed else "fail", "result": report.to_json()}


def cmd_homology(args) -> dict:
    D = _carrier(args)
    if not has_top(D, args.n):
        raise NoTopElementError(f"the n-equals poset of {D} with n={args.n} has no top element")
    P = partition_lattice(D, args.n, limit=args.limit)
    result: dict = {}
    status = "ok"
    if args.method in ("oracle", "both"):
        ranks, torsion = homology.integral_homology(P)
        result["oracle"] = _dims_json(ranks)
        result["torsion"] = {str(k): v for k, v in torsion.items()}
    if args.method in ("falling", "both"):
        result["falling"] = _dims_json(shellability.homology_via_falling_chains(P))
    if args.method == "both":
        status = "pass" if result["oracle"] == result["falling"] and not result["torsion"] else "fail"
    return {"status": status, "result": result}


def cmd_gm(args) -> dict:
    D = _carrier(args)
    spec = gm.ArrangementSpec(D, args.n, args.ambient_dim)
    result = {"ordered": _dims_json(gm.ordered_cohomology_dims(spec, method=args.method))}
    if args.invariants:
        result["invariants"] = _dims_json(gm.invariant_dims(spec, limit=args.limit))
        if all(d >= spec.n for d in D.sizes):
            result["local_prediction"] = _dims_json(gm.expected_local_dims(D.m, spec.n, spec.N))
    return {"status": "ok", "result": result}


def cmd_density(args) -> dict:
    X = _space(args)
    params = densities.DensityParams(args.m, args.n, X)
    prec = args.order + 1
    if args.degrees is not None:
        if args.mode == "density":
            s = densities.density_finite(params, args.degrees, prec)
        else:
            s = densities.poincare_Z_finite(params, args.degrees, prec)
    else:
        s = densities.limiting_density(params, prec) if args.mode == "density" else densities.limiting_poincare(params, prec)
    return {"status": "ok", "result": {"mode": args.mode, "degrees": args.degrees, "series": _series_json(s)}}


def cmd_euler_gf(args) -> dict:
    params = densities.DensityParams(args.m, args.n, _space(args))
    prec = args.order + 1
    closed = densities.euler_gf(params, prec)
    result = {"chi": params.X.euler_characteristic, "series": _series_json(closed)}
    status = "ok"
    if args.assembled:
        assembled = densities.assembled_euler_gf(params, prec)
        result["assembled"] = _series_json(assembled)
        status = "pass" if assembled == closed else "fail"
    return {"status": status, "result": result}


def cmd_hd_limit(args) -> dict:
    params = densities.DensityParams(args.m, args.n, _space(args))
    s = densities.hd_limit(params, args.order + 1)
    result = {"series": _series_json(s)}
    if args.degrees is not None:
        result["finite_ratio"] = _series_json(densities.hd_ratio_finite(params, args.degrees, args.order + 1))
    return {"status": "ok", "result": result}


def cmd_coincide(args) -> dict:
    X = _space(args)
    pairs = []
    if args.finite_degree is not None:
        facs = densities.factorizations(args.product)
        first = facs[0]
        for m, n in facs[1:]:
            pairs.append(((first[0], first[1], (args.finite_degree,) * first[0]), (m, n, (args.finite_degree,) * m)))
    report = densities.coincidence_report(args.product, X, pairs, args.order + 1)
    return {"status": "pass" if report.exact_agreement else "fail", "result": report.to_json()}


def cmd_degeneration(args) -> dict:
    if (args.ring is None) == (args.builtin is None):
        raise InvalidInputError("give exactly one of --ring and --builtin")
    if args.ring is not None:
        try:
            ring = degeneration.load_ring(args.ring)
        except (OSError, ValueError, TypeError) as exc:
            if isinstance(exc, InvalidInputError):
                raise
            raise InvalidInputError(f"cannot read ring file: {exc}") from None
    else:
        if args.builtin not in degeneration.BUILTIN_RINGS:
            raise InvalidInputError(f"unknown ring {args.builtin!r}; choose from {sorted(degeneration.BUILTIN_RINGS)}")
        ring = degeneration.BUILTIN_RINGS[args.builtin]()
    kappa = degeneration.kappa_element(ring, args.mn)
    restricted = degeneration.restrict_tensor(ring, kappa)
    result = {
        "mn": args.mn,
        "kappa": degeneration.render_tensor(ring, kappa),
        "restricted": degeneration.render_tensor(ring, restricted, [nm for nm, _ in ring.target]),
        "degenerates": not restricted,
    }
    return {"status": "ok", "result": result}


def cmd_arith(args) -> dict:
    rows = []
    if args.mode == "int":
        bounds = args.bounds or [10**k for k in range(1, 7)]
        s = args.m * args.n
        enc = arithmetic.zeta_inverse(s, "int")
        for B in bounds:
            count = arithmetic.nprime_count_integers(args.m, args.n, B)
            ratio = Fraction(count, B**args.m)
            rows.append({
                "bound": B,
                "count": count,
                "ratio": _frac(ratio),
                "ratio_float": float(ratio),
                "zeta_inverse": str(enc),
                "error": float(enc.distance(float(ratio))),
            })
    else:
        if args.q is None or args.degrees is None:
            raise InvalidInputError("fq mode needs --q and --degrees")
        z = arithmetic.zeta_inverse(args.m * args.n, "q", q=args.q)
        good, total = arithmetic.nprime_count_fq(args.q, args.n, args.degrees, budget=args.limit)
        if len(args.degrees) != args.m:
            raise InvalidInputError(f"expected {args.m} degrees, got {len(args.degrees)}")
        ratio = Fraction(good, total)
        rows.append({
            "degrees": ",".join(map(str, args.degrees)),
            "count": good,
            "total": total,
            "ratio": _frac(ratio),
            "zeta_inverse": _frac(z),
            "error": _frac(abs(ratio - z)),
        })
    return {"status": "ok", "result": {"mode": args.mode, "rows": rows}}


def cmd_verify_all(args) -> dict:
    """Oracle-equivalence matrix over all small colored lattices."""
    matrix = []
    ok = True
    for m, n in ((1, 2), (1, 3), (2, 1), (2, 2), (3, 1)):
        for sizes in size_vectors(m, args.max_size):
            D = ColoredSet(sizes)
            if not has_top(D, n) or len(D) < 2:
                continue
            t0 = time.perf_counter()
            row = {"m": m, "n": n, "sizes": list(sizes)}
            lab = shellability.labelled_lattice(D, n)
            row["el"] = shellability.verify_el(D, n, lab).passed
            row["homology"], row["torsion_free"] = interval_equivalence(lab)
            P = lab.poset
            row["kunneth"] = all(homology.kunneth_rank_check(D, n, I) for I in P.elements)
            row["seconds"] = round(time.perf_counter() - t0, 3)
            ok &= row["el"] and row["homology"] and row["torsion_free"] and row["kunneth"]
            matrix.append(row)
    return {"status": "pass" if ok else "fail", "result": {"rows": matrix}}


def size_vectors(m: int, max_size: int):
    """Every ``(d_1, ..., d_m)`` with positive entries and sum at most ``max_size``."""
    for sizes in itertools.product(range(1, max_size + 1), repeat=m):
        if sum(sizes) <= max_size:
            yield sizes


def interval_equivalence(lab) -> tuple[bool, bool]:
    """Falling-chain homology vs integral oracle on every interval (orbit representatives)."""
    P = lab.poset
    seen: dict = {}
    ok = True
    torsion_free = True
    for b in range(len(P)):
        counts = shellability.falling_counts(lab, b)
        for a, fall in counts.items():
            key = interval_type(P.elements[a], P.elements[b])
            fall_dims = shellability.homology_from_counts(fall)
            if key not in seen:
                ranks, torsion = homology.integral_homology(P.subposet(P.interval_indices(a, b)))
                seen[key] = ranks
                torsion_free &= not torsion
            ok &= seen[key] == fall_dims
    return ok, torsion_free


def interval_type(I, J) -> tuple:
    """Invariant of ``[I, J]`` under the color-preserving symmetric group.

    For each block of ``J``, the sorted color-count vectors of the blocks
    of ``I`` inside it; the multiset of these is the key.
    """
    D = I.carrier
    inside: dict = {}
    where = J.block_of
    for block in I.blocks:
        inside.setdefault(where[block[0]], []).append(D.color_counts(block))
    return tuple(sorted(tuple(sorted(v)) for v in inside.values()))


COMMANDS = {
    "lattice": cmd_lattice,
    "shell-verify": cmd_shell_verify,
    "homology": cmd_homology,
    "gm": cmd_gm,
    "density": cmd_density,
    "euler-gf": cmd_euler_gf,
    "hd-limit": cmd_hd_limit,
    "coincide": cmd_coincide,
    "degeneration": cmd_degeneration,
    "arith": cmd_arith,
    "verify-all": cmd_verify_all,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zerocycles", description="Colored n-equals lattices and spaces of 0-cycles.")
    parser.add_argument("--format", choices=("json", "csv", "pretty"), default="pretty")
    parser.add_argument("--emit", metavar="PATH", default=None, help="also write the JSON report here")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lattice", help="enumerate an n-equals partition lattice")
    _add_colored(p)
    p.add_argument("--elements", action="store_true", help="list all elements")
    p.add_argument("--dot", action="store_true", help="include the Hasse diagram in DOT")

    p = sub.add_parser("shell-verify", help="check the EL-labelling on every interval")
    _add_colored(p)
    p.add_argument("--corrupt", action="store_true", help="swap two bottom edge labels first")

    p = sub.add_parser("homology", help="reduced homology of the proper part")
    _add_colored(p)
    p.add_argument("--method", choices=("oracle", "falling", "both"), default="both")

    p = sub.add_parser("gm", help="cohomology of the arrangement complement")
    _add_colored(p)
    p.add_argument("--ambient-dim", type=int, required=True, help="N, for X = R^N")
    p.add_argument("--invariants", action="store_true", help="also the unordered (S_D-invariant) part")
    p.add_argument("--method", choices=("falling", "oracle"), default="falling")

    p = sub.add_parser("density", help="homological densities and Poincaré series")
    _add_space(p)
    p.add_argument("--degrees", type=_int_list, default=None, help="finite d_1,...,d_m (default: the limit)")
    p.add_argument("--mode", choices=("density", "poincare"), default="density")

    p = sub.add_parser("euler-gf", help="Euler characteristic generating function")
    _add_space(p)
    p.add_argument("--assembled", action="store_true", help="also sum E2 Euler characteristics and compare")

    p = sub.add_parser("hd-limit", help="limiting Hodge–Deligne ratio")
    _add_space(p)
    p.add_argument("--degrees", type=_int_list, default=None, help="also the finite ratio at d")

    p = sub.add_parser("coincide", help="compare densities across factorizations of mn")
    _add_space(p, m=False)
    p.add_argument("--product", type=int, required=True, help="the value of mn")
    p.add_argument("--finite-degree", type=int, default=None, help="also compare finite ratios at d_i = K")

    p = sub.add_parser("degeneration", help="the E2 degeneration criterion for a ring file")
    p.add_argument("--ring", default=None, help="RingData JSON file")
    p.add_argument("--builtin", default=None, help=f"one of {', '.join(degeneration.BUILTIN_RINGS)}")
    p.add_argument("--mn", type=int, required=True)

    p = sub.add_parser("arith", help="relatively n-prime densities over Z or F_q[t]")
    p.add_argument("mode", choices=("int", "fq"))
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bounds", type=_int_list, default=None, help="int mode: bounds B")
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--degrees", type=_int_list, default=None)
    p.add_argument("--limit", type=int, default=None, help="fq enumeration budget")

    p = sub.add_parser("verify-all", help="oracle-equivalence matrix for |D| <= max-size")
    p.add_argument("--max-size", type=int, default=6)
    return parser


# --- output -------------------------------------------------------------------------


def _flatten(prefix: str, value, out: list):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, value if not isinstance(value, list) else json.dumps(value)))


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False)
    rows = report["result"].get("rows") if isinstance(report.get("result"), dict) else None
    if fmt == "csv":
        buf = io.StringIO()
        if rows:
            fields = list(rows[0])
            writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
            writer.writeheader()
            for r in rows:
                writer.writerow({k: json.dumps(v) if isinstance(v, list) else v for k, v in r.items()})
        else:
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["key", "value"])
            flat: list = []
            _flatten("", report, flat)
            writer.writerows(flat)
        return buf.getvalue().rstrip("\n")
    lines = [f"{report['command']}: {report['status']}"]
    if rows:
        fields = list(rows[0])
        table = [[str(r[f]) for f in fields] for r in rows]
        widths = [max(len(f), *(len(t[i]) for t in table)) for i, f in enumerate(fields)]
        lines.append("  ".join(f.ljust(w) for f, w in zip(fields, widths)))
        for t in table:
            lines.append("  ".join(c.ljust(w) for c, w in zip(t, widths)))
    else:
        for key, value in report["result"].items():
            if isinstance(value, dict) and "pretty" in value:
                value = value["pretty"]
            elif isinstance(value, (dict, list)):
                value = json.dumps(value, ensure_ascii=False)
            lines.append(f"  {key}: {value}")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = COMMANDS[args.command](args)
    except ResourceLimitError as exc:
        print(f"error: resource guard '{exc.guard}' tripped: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except InvalidInputError as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    report = {"command": args.command, **report}
    if args.emit:
        with open(args.emit, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True, ensure_ascii=False)
            fh.write("\n")
    print(render(report, args.format))
    return EXIT_FAIL if report["status"] == "fail" else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
