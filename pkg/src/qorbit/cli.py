"""Command line entry point: ``qorbit verify|algebra|module``.

Every command writes one JSON report (stdout or ``--output``) and exits with
0 when every check passes, 1 when a check fails or a computation gives up,
and 2 on bad arguments.  Half-integers are given as ``p/q``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import __version__

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    series: str
    rank: int
    r2: int | None = None  # doubled r
    sigma4: int | None = None  # quadrupled sigma
    degree: int | None = None
    seed: int | None = None
    only: tuple | None = None
    lemmas: tuple | None = None
    force: bool = False
    max_dim: int | None = None
    max_degree: int | None = None
    output: str | None = None
    csv: str | None = None
    dump: bool = False

    @property
    def r(self):
        return None if self.r2 is None else Fraction(self.r2, 2)

    @property
    def sigma(self):
        return None if self.sigma4 is None else Fraction(self.sigma4, 4)

    def echo(self) -> dict:
        out = {k: v for k, v in asdict(self).items() if k not in ("output", "csv")}
        out["r"] = None if self.r is None else str(self.r)
        out["sigma"] = None if self.sigma is None else str(self.sigma)
        out["only"] = list(self.only) if self.only else None
        out["lemmas"] = list(self.lemmas) if self.lemmas else None
        return out


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _ids(text: str) -> tuple:
    return tuple(x.strip() for x in text.split(",") if x.strip())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qorbit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"qorbit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, need_r: bool):
        sp.add_argument("--series", required=True, choices=["B", "C", "D"])
        sp.add_argument("--rank", required=True, type=int)
        sp.add_argument("--r", type=_fraction, required=need_r, help="cell index, e.g. 1/2")
        sp.add_argument("--output", "-o", help="write the JSON report here")
        sp.add_argument("--csv", help="also write a one-row-per-check CSV summary")
        sp.add_argument("--dump", action="store_true", help="include matrices in the report")

    v = sub.add_parser("verify", help="run the R-matrix identity catalog")
    common(v, need_r=False)
    v.add_argument("--only", type=_ids, help="comma separated identity ids")
    v.add_argument("--seed", type=int, default=None)

    a = sub.add_parser("algebra", help="truncated quotient and lemma checks")
    common(a, need_r=True)
    a.add_argument("--deg", type=int, default=3, help="truncation degree")
    a.add_argument("--lemma", action="append", default=None, help="lemma id (repeatable)")

    m = sub.add_parser("module", help="build a module and extract its generators")
    common(m, need_r=True)
    m.add_argument("--sigma", type=_fraction, required=True)
    m.add_argument("--force", action="store_true", help="skip the admissibility check")
    m.add_argument("--max-dim", type=int, default=None)
    m.add_argument("--max-degree", type=int, default=None)
    return p


def make_config(ns) -> RunConfig:
    """Validate parsed arguments; raises :class:`UsageError`."""
    from .series_data import build_cell, build_series

    try:
        spec = build_series(ns.series, ns.rank)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None
    cfg = RunConfig(ns.command, ns.series, ns.rank, output=ns.output, csv=ns.csv, dump=ns.dump)
    if ns.r is not None:
        try:
            build_cell(spec, ns.r)
        except (ValueError, TypeError) as exc:
            raise UsageError(str(exc)) from None
        cfg.r2 = int(2 * ns.r)
    if ns.command == "verify":
        from .identity_catalog import CATALOG, DEFAULT_SEED

        cfg.seed = DEFAULT_SEED if ns.seed is None else ns.seed
        if ns.only:
            bad = [i for i in ns.only if i not in CATALOG]
            if bad:
                raise UsageError(f"unknown identity ids: {', '.join(bad)}")
            cfg.only = ns.only
    elif ns.command == "algebra":
        from .coordinate_algebra import LEMMAS

        if ns.deg < 0:
            raise UsageError("--deg must be >= 0")
        cfg.degree = ns.deg
        if ns.lemma:
            bad = [i for i in ns.lemma if i not in LEMMAS]
            if bad:
                raise UsageError(f"unknown lemma ids: {', '.join(bad)}")
            cfg.lemmas = tuple(ns.lemma)
    else:
        s4 = 4 * ns.sigma
        if s4.denominator != 1:
            raise UsageError(f"sigma={ns.sigma}: 4*sigma must be an integer")
        cfg.sigma4 = int(s4)
        cfg.force = ns.force
        cfg.max_dim, cfg.max_degree = ns.max_dim, ns.max_degree
        if not ns.force:
            from .chevalley import admissible_sigma

            rule = admissible_sigma(spec, build_cell(spec, ns.r))
            if not rule.admits(ns.sigma):
                raise UsageError(
                    f"sigma={ns.sigma} is not admissible for {spec.name} r={ns.r} "
                    f"(lattice {rule.to_json()['lattice']}); use --force to try anyway"
                )
    return cfg


# commands ----------------------------------------------------------------------------


def cmd_verify(cfg: RunConfig) -> tuple[dict, list]:
    from .identity_catalog import run_catalog
    from .series_data import build_cell, build_series

    spec = build_series(cfg.series, cfg.rank)
    cells = [cfg.r] if cfg.r is not None else list(spec.valid_r())
    results, seen = [], set()
    for r in cells:
        for chk in run_catalog(spec, build_cell(spec, r), cfg.seed, cfg.only):
            key = (chk.id, None if chk.cell is None or chk.id not in _cell_ids() else r)
            if key in seen:
                continue
            seen.add(key)
            item = chk.to_json()
            if chk.id not in _cell_ids():
                item["r"] = None
            if cfg.dump and not chk.passed:
                item["residual"] = chk.residual.dump()
            results.append(item)
    rows = [(f"{x['id']}" + (f"@r={x['r']}" if x["r"] else ""), x["status"], x["residual_entry_count"]) for x in results]
    report = {"checks": results, "passed": all(x["status"] == "pass" for x in results)}
    return report, rows


def _cell_ids():
    from .identity_catalog import CELL_IDS

    return CELL_IDS


def cmd_algebra(cfg: RunConfig) -> tuple[dict, list]:
    from .coordinate_algebra import LEMMAS, build_quotient, verify_lemma
    from .series_data import build_cell, build_series

    spec = build_series(cfg.series, cfg.rank)
    cell = build_cell(spec, cfg.r)
    qb = build_quotient(spec, cell, cfg.degree)
    report = qb.to_json()
    rows = [("unit_standard", "pass" if qb.is_standard(()) else "fail", 0)]
    lemmas = []
    for lid in cfg.lemmas or ():
        need = LEMMAS[lid][2]
        chk = verify_lemma(lid, spec, cell, max(need, cfg.degree))
        lemmas.append(chk.to_json())
        rows.append((f"lemma {lid}", chk.status, chk.residual_entry_count))
    report["lemmas"] = lemmas
    if cfg.dump:
        report["standard_monomials"] = qb.dump()
    report["passed"] = all(r[1] == "pass" for r in rows)
    return report, rows


def cmd_module(cfg: RunConfig) -> tuple[dict, list]:
    from .chevalley import representation_report
    from .module_action import DEFAULT_MAX_DIM, build_module
    from .series_data import build_cell, build_series

    spec = build_series(cfg.series, cfg.rank)
    cell = build_cell(spec, cfg.r)
    rep = build_module(spec, cell, cfg.sigma, max_dim=cfg.max_dim or DEFAULT_MAX_DIM, max_degree=cfg.max_degree)
    report = representation_report(rep)
    report["basis"] = rep.to_json()["basis"]
    if cfg.dump:
        labels = [str(x) for x in spec.labels]
        report["operators"] = {
            f"M[{labels[a]},{labels[b]}]": op.dump() for (a, b), op in sorted(rep.ops.items()) if not op.is_zero()
        }
    rows = [(k, v, 0 if v == "pass" else 1) for k, v in report["checks"].items()]
    return report, rows


COMMANDS = {"verify": cmd_verify, "algebra": cmd_algebra, "module": cmd_module}


def _failure_types():
    from .chevalley import DecompositionError, NonGenericError, NonMonomialCartanError
    from .coordinate_algebra import InconsistentConstantError, ResourceError, TrivialQuotientError
    from .module_action import (
        ModuleNotClosedError,
        RecursionInconsistentError,
        RecursionSingularError,
    )

    return (
        DecompositionError,
        NonGenericError,
        NonMonomialCartanError,
        InconsistentConstantError,
        ResourceError,
        TrivialQuotientError,
        ModuleNotClosedError,
        RecursionInconsistentError,
        RecursionSingularError,
    )


def _write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _csv_text(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["check", "status", "residual_entry_count"])
    w.writerows(rows)
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = make_config(ns)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"qorbit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    header = {"version": __version__, "config": cfg.echo(), "seed": cfg.seed}
    rows: list = []
    try:
        body, rows = COMMANDS[cfg.command](cfg)
        status = EXIT_OK if body.get("passed") else EXIT_FAIL
    except _failure_types() as exc:
        body = {"passed": False, "error": f"{type(exc).__name__}: {exc}"}
        print(f"qorbit: {exc}", file=sys.stderr)
        rows = [("error", "fail", 1)]
        status = EXIT_FAIL
    _write(json.dumps({**header, **body}, indent=2) + "\n", cfg.output)
    if cfg.csv:
        _write(_csv_text(rows), cfg.csv)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
