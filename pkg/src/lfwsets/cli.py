"""Command-line front end.

Exit codes: 0 PASS, 1 FAIL, 2 usage or parse error, 3 precondition refusal.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from typing import Sequence

from . import catalog, oracle, verifiers
from .errors import DomainError, LfwError, PreconditionError, SetFileError
from .report import refusal_dict, render_json, render_text, verdict_dict
from .setfile import SetFile, print_setfile, read_setfile
from .verdict import Verdict

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_REFUSED = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _names(text: str | None, sf: SetFile) -> list[str]:
    if text is None:
        return list(sf.sets)
    return [n.strip() for n in text.split(",") if n.strip()]


def _load(path: str) -> SetFile:
    sf = read_setfile(path)
    for w in sf.warnings:
        print(f"warning: {path}: {w}", file=sys.stderr)
    return sf


def _figure_path(args, stem: str) -> str:
    return os.path.join(args.figures, f"{stem}.png")


# ---------------------------------------------------------------------------
# subcommand bodies; each returns (Verdict, oracle-dict or None, figures)


def _family_figures(args, family, names, stem) -> list[str]:
    if not args.figures:
        return []
    from . import plotting

    out = [plotting.plot_family(family, names, _figure_path(args, f"{stem}-family"), title=stem)]
    if all(not S.has_zero_ball() for S in family):
        out.append(plotting.plot_tiling(family, names, _figure_path(args, f"{stem}-tiling")))
    return out


def _verify(args):
    sf = _load(args.file)
    figures: list[str] = []
    if args.what == "scaling-set":
        name = args.set or (args.sets.split(",")[0] if args.sets else None)
        if name is None:
            if len(sf.sets) != 1:
                raise DomainError("scaling-set needs --set NAME")
            name = next(iter(sf.sets))
        S = sf.family([name])[0]
        v = verifiers.check_parseval_scaling_set(S) if args.parseval else verifiers.check_scaling_set(S)
        if args.figures:
            from . import plotting

            figures = [
                plotting.plot_family([S], [name], _figure_path(args, "scaling-set"), title=name),
                plotting.plot_step(v.quantities["multiplicity"], _figure_path(args, "multiplicity"),
                                   title="translation multiplicity on D"),
            ]
        return v, None, figures
    names = _names(args.sets, sf)
    family = sf.family(names)
    if args.what == "framelet-set":
        v = verifiers.check_parseval_multiframelet_set(family)
    elif args.what == "wavelet-set":
        v = verifiers.check_multiwavelet_set(family)
    else:
        v = verifiers.check_mra(family, force_order=args.force_order)
    figures = _family_figures(args, family, names, args.what)
    if args.figures and args.what == "mra":
        from . import plotting

        figures.append(plotting.plot_step(v.quantities["dimension_function"],
                                          _figure_path(args, "dimension-function"), title="dimension function"))
    return v, None, figures


def _dimension(args):
    sf = _load(args.file)
    names = _names(args.sets, sf)
    family = sf.family(names)
    v = verifiers.check_dim_integral_identity(family)
    v.name = "dimension_function"
    dim = verifiers.dimension_function(family)
    v.quantities["dimension_function"] = dim
    if args.emit_steps:
        v.quantities["steps"] = verifiers.dimension_steps(family)
    figures = []
    if args.figures:
        from . import plotting

        figures.append(plotting.plot_step(dim, _figure_path(args, "dimension-function"), title="dimension function"))
    return v, None, figures


def _equiv(args):
    sf = _load(args.file)
    left = sf.family(_names(args.left, sf))
    right = sf.family(_names(args.right, sf))
    v = verifiers.check_superwavelet_equivalence(left, right)
    return v, None, []


def _oracle_frame_sum(args):
    sf = _load(args.file)
    names = _names(args.sets, sf)
    family = sf.family(names)
    rng = random.Random(args.seed)
    ratios, worst = [], 0.0
    v = Verdict("oracle_frame_sum")
    for trial in range(args.trials):
        g = oracle.random_test_function(sf.params, rng)
        fs = oracle.frame_sum(family, g)
        ratios.append(fs.value / fs.norm2)
        worst = max(worst, fs.relative_error)
        if fs.relative_error > args.tol and not any(w.get("clause") == "frame-sum" for w in v.witnesses):
            v.witnesses.append({"clause": "frame-sum", "trial": trial, "seed": args.seed})
    v.add("frame-sum", worst <= args.tol, f"max relative error vs |g|^2 over {args.trials} trials")
    v.add("bessel-bound", all(r <= 1 + args.tol for r in ratios), "frame_sum <= |g|^2")
    if not v.clause("bessel-bound").passed:
        v.witnesses.append({"clause": "bessel-bound", "trial": next(i for i, r in enumerate(ratios) if r > 1 + args.tol),
                            "seed": args.seed})
    v.quantities["trials"] = args.trials
    v.quantities["seed"] = args.seed
    v.notes.append("frame sums are floating point; set-level verdicts stay exact")
    info = {"tol": args.tol, "max_relative_error": worst,
            "min_ratio": min(ratios, default=None), "max_ratio": max(ratios, default=None)}
    figures = []
    if args.figures:
        from . import plotting

        figures.append(plotting.plot_ratios(ratios, _figure_path(args, "frame-sum-ratios"),
                                            "frame sum / |g|^2", "ratio"))
    return v, info, figures


def _oracle_calderon(args):
    sf = _load(args.file)
    names = _names(args.sets, sf)
    family = sf.family(names)
    params = sf.params
    rng = random.Random(args.seed)
    v = Verdict("oracle_calderon")
    bad_c, bad_s = [], []
    shifts = [1, params.q + 1]
    for _ in range(args.samples):
        xi = oracle.random_point(params, rng)
        c = oracle.calderon_sum_at(family, xi)
        if c != 1:
            bad_c.append({"clause": "calderon", "xi": xi, "value": c})
        for t in shifts:
            s = oracle.shift_sum_at(family, xi, t)
            if s != 0:
                bad_s.append({"clause": "shift-sum", "xi": xi, "t": t, "value": s})
    v.add("calderon", not bad_c, f"sum_m sum_j 1_W(P^-j xi) = 1 at {args.samples} points")
    v.add("shift-sum", not bad_s, f"shift sums vanish for t in {shifts}")
    v.witnesses.extend(bad_c[:5] + bad_s[:5])
    v.quantities["samples"] = args.samples
    v.quantities["calderon_failures"] = len(bad_c)
    v.quantities["shift_failures"] = len(bad_s)
    return v, None, []


def _catalog(args):
    entry = catalog.build(args.name, args.p, args.c)
    sf = SetFile(entry.params, dict(zip(entry.set_names(), entry.family)))
    text = print_setfile(sf)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return None, None, []


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--figures", metavar="DIR", help="write PNG figures into DIR")

    parser = _Parser(prog="lfwsets", description="Verify wavelet, framelet and scaling sets in F_q((t)).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    verify = sub.add_parser("verify", help="run a set-level verifier")
    vsub = verify.add_subparsers(dest="what", required=True, parser_class=_Parser)
    for what in ("framelet-set", "wavelet-set", "scaling-set", "mra"):
        p = vsub.add_parser(what, parents=[common])
        p.add_argument("file")
        p.add_argument("--sets", help="comma-separated set names (default: all)")
        if what == "scaling-set":
            p.add_argument("--set", help="name of the candidate set")
            p.add_argument("--parseval", action="store_true")
        if what == "mra":
            p.add_argument("--force-order", action="store_true",
                           help="evaluate the covering condition for orders other than q-1")
        p.set_defaults(run=_verify, label=f"verify {what}")

    p = sub.add_parser("dimension", parents=[common], help="dimension function of a tiling family")
    p.add_argument("file")
    p.add_argument("--sets")
    p.add_argument("--emit-steps", action="store_true")
    p.set_defaults(run=_dimension, label="dimension")

    p = sub.add_parser("equiv", parents=[common], help="super-wavelet equivalence of two families")
    p.add_argument("file")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(run=_equiv, label="equiv")

    orc = sub.add_parser("oracle", help="Fourier-side cross-checks")
    osub = orc.add_subparsers(dest="what", required=True, parser_class=_Parser)
    p = osub.add_parser("frame-sum", parents=[common])
    p.add_argument("file")
    p.add_argument("--sets")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(run=_oracle_frame_sum, label="oracle frame-sum")
    p = osub.add_parser("calderon", parents=[common])
    p.add_argument("file")
    p.add_argument("--sets")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=_oracle_calderon, label="oracle calderon")

    p = sub.add_parser("catalog", help="print a named construction as a set file")
    p.add_argument("name", choices=catalog.NAMES)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--c", type=int, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(run=_catalog, label="catalog", format="text", figures=None)
    return parser


def _emit(args, d: dict) -> None:
    sys.stdout.write(render_json(d) if args.format == "json" else render_text(d))


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        verdict, info, figures = args.run(args)
    except PreconditionError as e:
        _emit(args, refusal_dict(args.label, str(e)))
        return EXIT_REFUSED
    except (SetFileError, DomainError, OSError) as e:
        print(f"lfwsets: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except LfwError as e:
        print(f"lfwsets: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if verdict is None:
        return EXIT_PASS
    d = verdict_dict(verdict, args.label, info)
    if figures:
        d["figures"] = figures
    _emit(args, d)
    return EXIT_PASS if verdict.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
