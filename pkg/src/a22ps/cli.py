"""Command line interface: ``a22ps dims | verify | conjecture | generators``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .engine import CacheCorruption, DimCache, dim_table
from .graded import Box, DimTable, TruncationError, default_box
from .presentation import (Convention, ExtraForm, IdealSpec, Weighting, check_inclusion_lemma,
                           check_psi_tau_lemma, check_tau_lemma, generators_json)

EXIT_OK, EXIT_MISMATCH, EXIT_CONFIG, EXIT_TRUNCATION, EXIT_CACHE = 0, 1, 2, 3, 4
CACHE_ENV = "A22PS_CACHE_DIR"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    target: str | None
    k: int
    i: int | None
    j: int
    convention: Convention
    extra_form: ExtraForm
    weighting: Weighting
    max_charge: int
    max_w4: int
    N: int
    cache_dir: str | None
    fmt: str
    jobs: int
    side: str = "presentation"

    @property
    def box(self) -> Box:
        return Box(self.max_charge, self.max_w4)

    def spec(self, i: int | None = None, extra_form: ExtraForm | None = None) -> IdealSpec:
        return IdealSpec(self.k, self.i if i is None else i, self.convention,
                         extra_form or self.extra_form, self.weighting)

    def cache(self) -> DimCache | None:
        return DimCache(self.cache_dir) if self.cache_dir else None

    def i_values(self) -> list[int]:
        return [self.i] if self.i is not None else list(range(self.k + 1))


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, required=True, help="level")
    common.add_argument("--i", type=int, default=None)
    common.add_argument("--j", type=int, default=0)
    common.add_argument("--convention", choices=[c.value for c in Convention], default=Convention.MNeg.value)
    common.add_argument("--extra-form", choices=[e.value for e in ExtraForm], default=ExtraForm.SumFamily.value)
    common.add_argument("--weighting", choices=[w.value for w in Weighting], default=Weighting.Tournament.value)
    common.add_argument("--max-charge", type=int, default=None)
    common.add_argument("--max-4w", type=int, default=None, dest="max_w4")
    common.add_argument("--N", type=int, default=16, help="q-order for series comparisons")
    common.add_argument("--cache-dir", default=None)
    common.add_argument("--format", choices=["json", "csv", "text"], default="json", dest="fmt")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--output", default=None, help="write the artifact here instead of stdout")

    p = argparse.ArgumentParser(prog="a22ps", description="Principal and virtual subspaces at level k.")
    sub = p.add_subparsers(dest="command", required=True)
    d = sub.add_parser("dims", parents=[common], help="graded dimension table")
    d.add_argument("--side", choices=["presentation", "module"], default="presentation")
    v = sub.add_parser("verify", parents=[common], help="run a verification")
    v.add_argument("target", choices=["presentation", "sequences", "recursions", "lemmas", "proposition"])
    c = sub.add_parser("conjecture", parents=[common], help="conjecture evidence")
    c.add_argument("target", choices=["nahm", "sequences"])
    sub.add_parser("generators", parents=[common], help="export the ideal generators as JSON")
    return p


def _config(ns: argparse.Namespace) -> RunConfig:
    if ns.k < 1:
        raise ConfigError("--k must be positive")
    i = ns.i
    if ns.command == "dims" and i is None:
        i = 0
    if i is not None and not 0 <= i <= ns.k:
        raise ConfigError(f"--i must lie in 0..{ns.k}")
    if ns.j < 0 or (i or 0) + ns.j > ns.k:
        raise ConfigError("need j >= 0 and i + j <= k")
    box = default_box(ns.k)
    max_charge = box.max_charge if ns.max_charge is None else ns.max_charge
    max_w4 = box.max_w4 if ns.max_w4 is None else ns.max_w4
    if ns.command == "conjecture" and ns.target == "nahm":
        from .qseries import conjecture_charge_bound
        max_charge = conjecture_charge_bound(ns.k, ns.N) if ns.max_charge is None else ns.max_charge
        max_w4 = ns.N if ns.max_w4 is None else ns.max_w4
    if max_charge < 1 or max_w4 < 1 or ns.N < 0 or ns.jobs < 1:
        raise ConfigError("bounds must be positive")
    return RunConfig(ns.command, getattr(ns, "target", None), ns.k, i, ns.j, Convention(ns.convention),
                     ExtraForm(ns.extra_form), Weighting(ns.weighting), max_charge, max_w4, ns.N,
                     ns.cache_dir or os.environ.get(CACHE_ENV) or None, ns.fmt, ns.jobs,
                     getattr(ns, "side", "presentation"))


def _pmap(func, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items))


# ---------------------------------------------------------------------------
# module-side tables with the cache

def module_table(k: int, i: int, j: int, box: Box, cache: DimCache | None = None) -> DimTable:
    from .module import module_descriptor, tensor_state
    descriptor = module_descriptor(k, i, j)
    entries = {}
    state = None
    for b in box.bidegrees():
        hit = cache.get(descriptor, b) if cache else None
        if hit is None:
            state = state or tensor_state(k, i, j, box)
            hit = state.dim(b)
            if cache:
                cache.put(descriptor, b, hit)
        entries[b] = hit
    return DimTable(descriptor, box, entries)


def _render_table(table: DimTable, fmt: str) -> str:
    if fmt == "csv":
        return table.to_csv()
    if fmt == "text":
        return table.to_text()
    return table.to_json() + "\n"


def _render_reports(name: str, cfg: RunConfig, reports: list[dict], status: str) -> str:
    payload = {"command": name, "k": cfg.k, "box": cfg.box.as_list(), "status": status, "reports": reports}
    if cfg.fmt == "text":
        lines = [f"{name} k={cfg.k} box={cfg.box.as_list()} status={status}"]
        for r in reports:
            label = ", ".join(f"{key}={r[key]}" for key in ("check", "i", "j", "convention") if r.get(key) is not None)
            lines.append(f"  {r['status']:>15}  {label}  mismatches={len(r.get('mismatches', []))}")
        return "\n".join(lines) + "\n"
    return json.dumps(payload, sort_keys=True, indent=1) + "\n"


# ---------------------------------------------------------------------------
# commands (top-level functions so they can run in worker processes)

def _presentation_job(args):
    cfg, i = args
    from .module import verify_presentation
    return verify_presentation(cfg.k, i, cfg.box, cfg.spec(i)).to_dict()


def _proposition_job(args):
    cfg, i = args
    sum_t = dim_table(cfg.spec(i, ExtraForm.SumFamily), cfg.box, cfg.cache())
    pow_t = dim_table(cfg.spec(i, ExtraForm.PowerForm), cfg.box, cfg.cache())
    diffs = [{"bidegree": list(b), "SumFamily": sum_t[b], "PowerForm": pow_t[b]}
             for b in cfg.box.bidegrees() if sum_t[b] != pow_t[b]]
    return {"check": "proposition", "i": i, "status": "fail" if diffs else "pass", "mismatches": diffs}


def cmd_dims(cfg: RunConfig) -> tuple[int, str]:
    if cfg.side == "module":
        table = module_table(cfg.k, cfg.i, cfg.j, cfg.box, cfg.cache())
    else:
        if cfg.j:
            raise ConfigError("the presentation side has no j parameter")
        table = dim_table(cfg.spec(), cfg.box, cfg.cache())
    return EXIT_OK, _render_table(table, cfg.fmt)


def cmd_verify(cfg: RunConfig) -> tuple[int, str]:
    t = cfg.target
    if t == "presentation":
        reports = _pmap(_presentation_job, [(cfg, i) for i in cfg.i_values()], cfg.jobs)
    elif t == "proposition":
        reports = _pmap(_proposition_job, [(cfg, i) for i in cfg.i_values()], cfg.jobs)
    elif t == "sequences":
        from .module import verify_sequence_one, verify_sequence_two
        reports = [verify_sequence_one(cfg.k, cfg.box).to_dict(), verify_sequence_two(cfg.k, cfg.box).to_dict()]
    elif t == "recursions":
        from .qseries import verify_recursions
        cache = cfg.cache()
        tables = [module_table(cfg.k, i, 0, cfg.box, cache) for i in (0, 1, cfg.k)]
        reports = [verify_recursions(cfg.k, *tables).to_dict()]
    else:
        reports = []
        for name, check in (("tau", check_tau_lemma), ("psi-tau", check_psi_tau_lemma),
                            ("inclusion", check_inclusion_lemma)):
            fails = check(cfg.k, cfg.box, cfg.convention, cfg.extra_form)
            reports.append({"check": f"lemma-{name}", "status": "fail" if fails else "pass", "mismatches": fails})
    status = "pass" if all(r["status"] == "pass" for r in reports) else "fail"
    return (EXIT_OK if status == "pass" else EXIT_MISMATCH), _render_reports(f"verify {t}", cfg, reports, status)


def cmd_conjecture(cfg: RunConfig) -> tuple[int, str]:
    if cfg.target == "nahm":
        from .qseries import check_conjecture
        table = module_table(cfg.k, 0, 0, cfg.box, cfg.cache())
        reports = [check_conjecture(cfg.k, table, cfg.N).to_dict()]
    else:
        from .module import verify_conjectured_sequence
        values = [cfg.i] if cfg.i is not None else list(range(cfg.k))
        if any(not 0 <= i <= cfg.k - 1 for i in values):
            raise ConfigError("conjectured sequences need 0 <= i <= k-1")
        reports = [verify_conjectured_sequence(cfg.k, i, cfg.box).to_dict() for i in values]
    status = "conjecture-pass" if all(r["status"] == "conjecture-pass" for r in reports) else "conjecture-fail"
    return EXIT_OK, _render_reports(f"conjecture {cfg.target}", cfg, reports, status)


def cmd_generators(cfg: RunConfig) -> tuple[int, str]:
    return EXIT_OK, generators_json(cfg.spec(cfg.i or 0), cfg.box) + "\n"


COMMANDS = {"dims": cmd_dims, "verify": cmd_verify, "conjecture": cmd_conjecture, "generators": cmd_generators}


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = _config(ns)
        code, text = COMMANDS[cfg.command](cfg)
    except (ConfigError, ValueError) as exc:
        if isinstance(exc, TruncationError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_TRUNCATION
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CacheCorruption as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CACHE
    if ns.output:
        with open(ns.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
