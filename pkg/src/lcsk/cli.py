"""Command-line front end: ``lcsk <command> <spec-file> [options]``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .conformal_maps import (
    PARTIAL_CONV,
    SHIFTED_CONV,
    VerifierReport,
    solve_biderivations,
    solve_centroid,
    solve_commuting,
    verify_centralizer_residual,
    verify_centroid_form,
    verify_commuting_in_centroid,
    verify_current_decomposition,
    verify_polarization,
    verify_swap_identity,
)
from .current import quotient_poly_algebra, tensor_current
from .lcs import AlgebraError, center, check_jacobi, check_skew, is_perfect
from .report import RunReport, digest, render_report
from .specfile import SpecError, parse_spec

COMMANDS = ("check", "center", "centroid", "bider", "commuting", "current", "verify-all")
DEFAULT_BOUNDS = {"deg_d": 3, "deg_l": 3}

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lcsk", description="Exact checks and solvers for Lie conformal superalgebras.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("spec", help="algebra specification file (.lcs)")
    p.add_argument("--deg-d", type=int, help="degree bound in d (default: file, else 3)")
    p.add_argument("--deg-l", type=int, help="degree bound in the spectral parameter (default: file, else 3)")
    p.add_argument("--tensor", type=int, metavar="N", help="tensor with Q[t]/(t^N)")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.add_argument("--convention", choices=(PARTIAL_CONV, SHIFTED_CONV), default=PARTIAL_CONV)
    return p


def _bounds(args, spec) -> dict:
    out = dict(DEFAULT_BOUNDS)
    out.update({k: v for k, v in spec.bounds.items() if k in out})
    for key in ("deg_d", "deg_l"):
        val = getattr(args, key)
        if val is not None:
            out[key] = val
    for key, val in out.items():
        if val < 0:
            raise UsageError(f"--{key.replace('_', '-')} must be non-negative")
    out["convention"] = args.convention
    return out


def _coefficients(args, spec):
    if args.tensor is not None:
        if args.tensor < 1:
            raise UsageError("--tensor must be at least 1")
        return quotient_poly_algebra(args.tensor)
    return spec.coefficient_algebra()


def _family_report(name: str, fam) -> VerifierReport:
    rep = VerifierReport(name)
    rep.details.update(dimension=fam.dimension, even=len(fam.even), odd=len(fam.odd))
    rep.details["basis"] = [m.render() for m in fam.maps]
    for ctx, r in fam.violations:
        rep.fail(ctx, r)
    return rep


def _gate(alg, results: list) -> bool:
    skew, jac = check_skew(alg), check_jacobi(alg)
    results += [skew, jac]
    if skew.passed and jac.passed:
        return True
    gate = VerifierReport("solver-gate")
    gate.fail("axioms", f"{alg.name} is not a Lie conformal superalgebra; solvers refused")
    results.append(gate)
    return False


def run(command: str, spec_text: str, args) -> RunReport:
    spec = parse_spec(spec_text)
    L = spec.to_algebra()
    A = _coefficients(args, spec)
    target = tensor_current(L, A) if A is not None else L
    b = _bounds(args, spec)
    if args.tensor is not None:
        b["tensor"] = args.tensor
    dd, dl, conv = b["deg_d"], b["deg_l"], b["convention"]
    report = RunReport(command, digest(spec_text), target.name, b)
    res = report.results

    if command == "check":
        res += [check_skew(target), check_jacobi(target)]
        return report
    if not _gate(target, res):
        return report

    if command == "center":
        z = center(target, dd)
        rep = VerifierReport("center")
        rep.details.update(dimension=z.dimension, basis=[e.render() for e in z.elements], note=z.note())
        perf = is_perfect(target, dd)
        rep.details["perfect"] = perf.perfect
        if perf.witness:
            rep.details["perfect_witness"] = perf.witness
        res.append(rep)
    elif command == "centroid":
        res.append(_family_report("centroid", solve_centroid(target, dd, conv, dl)))
    elif command == "bider":
        res.append(_family_report("biderivations", solve_biderivations(target, dd, dl)))
    elif command == "commuting":
        res.append(_family_report("commuting", solve_commuting(target, dd, conv, dl)))
    elif command == "current":
        if A is None:
            raise UsageError("current needs --tensor N or a [coefficients] section")
        if not _gate(L, res):
            return report
        bider = solve_biderivations(target, dd, dl)
        res.append(_family_report("biderivations", bider))
        res.append(verify_current_decomposition(L, A, dd, dl, bider=bider))
    elif command == "verify-all":
        _verify_all(target, L, A, dd, dl, conv, res)
    return report


def _verify_all(target, L, A, dd, dl, conv, res) -> None:
    z = center(target, dd)
    zrep = VerifierReport("center")
    zrep.details.update(dimension=z.dimension, deg_d=dd)
    res.append(zrep)
    perf = is_perfect(target, dd)
    prep = VerifierReport("perfect")
    prep.details["perfect"] = perf.perfect
    if not perf:
        prep.not_applicable(f"{perf.witness} is outside the derived submodule")
    res.append(prep)

    cent = solve_centroid(target, dd)
    bider = solve_biderivations(target, dd, dl)
    res.append(verify_centroid_form(target, dd, dl, cent=cent, bider=bider))
    for idx, phi in enumerate(bider.maps):
        for rep in (verify_swap_identity(phi), verify_centralizer_residual(phi, center_space=z)):
            rep.name += f" [biderivation {idx}]"
            res.append(rep)

    comm_cent = cent if conv == PARTIAL_CONV else solve_centroid(target, dd, conv, dl)
    comm = solve_commuting(target, dd, conv, dl)
    res.append(verify_commuting_in_centroid(target, dd, conv, comm=comm, cent=comm_cent))
    for idx, psi in enumerate(comm.maps):
        rep = verify_polarization(psi)
        rep.name += f" [commuting {idx}]"
        res.append(rep)

    if A is not None:
        if check_skew(L).passed and check_jacobi(L).passed:
            res.append(verify_current_decomposition(L, A, dd, dl, bider=bider))
        else:
            res.append(VerifierReport("current-decomposition").not_applicable("base algebra fails the axioms"))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    try:
        text = Path(args.spec).read_text()
    except OSError as exc:
        print(f"lcsk: cannot read {args.spec}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = run(args.command, text, args)
    except (SpecError, AlgebraError) as exc:
        print(f"lcsk: {args.spec}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"lcsk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.buffer.write(render_report(report, args.format))
    sys.stdout.flush()
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
