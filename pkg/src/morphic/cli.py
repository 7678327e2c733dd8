"""Command line entry point."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .blocks import BlockAnalyzer, Frame, collect_evolutions, origin_windows
from .classify import Params, classify
from .complexity import GUARD_RATIO, Tolerances, cross_check, factor_counts
from .errors import MorphicError, ParseError, RangeError, ValidationError, WindowTooSmall
from .normalize import normalize
from .orders import format_order, letter_profiles
from .words import MorphicSystem, apply_coding, generate_prefix, parse_system

DEFAULT_PREFIX = 200_000
DEFAULT_NS = (128, 256, 512, 1024)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    spec: Path
    prefix_len: int = DEFAULT_PREFIX
    window: int = 5
    horizon: int = 512
    ns: tuple[int, ...] = DEFAULT_NS
    out: Path | None = None
    fmt: str = "csv"
    json: bool = False
    k: int = 1
    emit: bool = False
    normalized: bool = False
    allow_short: bool = False
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self) -> None:
        if self.prefix_len < 1:
            raise UsageError("--prefix-len must be positive")
        if self.window < 3:
            raise UsageError("--window must be at least 3")
        if self.horizon < 1:
            raise UsageError("--horizon must be positive")
        if self.k < 1:
            raise UsageError("-k must be positive")
        if not self.ns or min(self.ns) < 1:
            raise UsageError("--ns needs positive lengths")


def _ns(text: str) -> tuple[int, ...]:
    try:
        return tuple(sorted({int(x) for x in text.split(",") if x.strip()}))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad length list: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="morphic", description="Subword complexity of morphic sequences.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("spec", type=Path)
        return p

    add("orders", "letter orders and periodicity")
    p = add("normalize", "alphabet augmentation and normalizing power")
    p.add_argument("--emit", action="store_true", help="print the normalized system")
    p = add("blocks", "k-block decomposition and evolutions")
    p.add_argument("-k", type=int, default=1)
    p.add_argument("--prefix-len", type=int, default=10_000)
    p.add_argument("--normalized", action="store_true", help="normalize before decomposing")
    p.add_argument("--json", action="store_true")
    p = add("classify", "predict the complexity class")
    p.add_argument("--horizon", type=int, default=512)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--prefix-len", type=int, default=DEFAULT_PREFIX)
    p.add_argument("--json", action="store_true")
    for name, help_ in (("measure", "count distinct factors of a prefix"), ("verify", "classify, measure, cross-check")):
        p = add(name, help_)
        p.add_argument("--prefix-len", type=int, default=DEFAULT_PREFIX)
        p.add_argument("--ns", type=_ns, default=DEFAULT_NS)
        p.add_argument("--allow-short", action="store_true", help=f"skip the {GUARD_RATIO}x prefix guard")
        if name == "measure":
            p.add_argument("--out", type=Path)
            p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
        else:
            p.add_argument("--horizon", type=int, default=512)
            p.add_argument("--window", type=int, default=5)
            p.add_argument("--tol-slope", type=float, default=0.2)
            p.add_argument("--tol-log", type=float, default=0.2)
            p.add_argument("--json", action="store_true")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    kw = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    if "tol_slope" in vars(args):
        kw["tolerances"] = Tolerances(args.tol_slope, args.tol_log)
    return RunConfig(**kw)


def _load(path: Path) -> MorphicSystem:
    try:
        source = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_system(source)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False, sort_keys=True)


# -- commands ---------------------------------------------------------------------


def cmd_orders(cfg: RunConfig, out) -> int:
    system = _load(cfg.spec)
    rows = [(system.names[p.letter], format_order(p.order), p.periodicity.value) for p in letter_profiles(system)]
    width = max(len("letter"), *(len(r[0]) for r in rows))
    print(f"{'letter':<{width}}  order  periodicity", file=out)
    for name, order, per in rows:
        print(f"{name:<{width}}  {order:<5}  {per}", file=out)
    return 0


def cmd_normalize(cfg: RunConfig, out) -> int:
    system = _load(cfg.spec)
    normed, report = normalize(system)
    if cfg.emit:
        out.write(normed.to_source())
        return 0
    flags = report.flags
    print(f"power: {report.power}", file=out)
    added = ", ".join(f"{normed.names[i]} ({kind})" for i, kind in report.added_letters) or "none"
    print(f"added letters: {added}", file=out)
    print(f"weakly 1-periodic: {flags.weakly_1_periodic}", file=out)
    print(f"strongly 1-periodic: {flags.strongly_1_periodic}", file=out)
    print(f"long images: {flags.long_images}", file=out)
    finals = [normed.render(w) for w in report.final_periods.sorted()]
    print(f"final periods: {' '.join(finals) or 'none'}", file=out)
    print(f"L: {report.final_periods.L}", file=out)
    return 0


def _occ(o) -> list[int]:
    return [o.start, o.end]  # an empty occurrence keeps its position as [i, i-1]


def cmd_blocks(cfg: RunConfig, out) -> int:
    system = _load(cfg.spec)
    if cfg.normalized:
        system, _ = normalize(system)
    profiles = letter_profiles(system)
    prefix = generate_prefix(system, cfg.prefix_len)
    frame = Frame.from_prefix(prefix, profiles)
    analyzer = BlockAnalyzer()
    evolutions = collect_evolutions(frame, cfg.k, analyzer)
    closure = origin_windows(system, profiles, cfg.k)
    render = system.render
    highs = frame.high(cfg.k)

    items = []
    for ev in sorted(evolutions, key=lambda e: e.origin.occurrence.start):
        o = ev.origin
        entry = {
            "id": ev.id,
            "origin": _occ(o.occurrence),
            "borders": [system.names[o.left_border], system.names[o.right_border]],
            "members": {str(s): render(w) for s, w in sorted(ev.abstract_members.items())},
            "case_left": ev.case_left.value if ev.case_left else None,
            "case_right": ev.case_right.value if ev.case_right else None,
            "anatomy": None,
        }
        try:
            anatomy = ev.stable_anatomy
        except MorphicError:
            anatomy = None
        if anatomy is not None:
            entry["anatomy"] = {
                "seq_no": anatomy.seq_no,
                "prime_kernels": len(anatomy.prime_kernels),
                "composite_kernels": len(anatomy.composite_kernels),
                "central_kernels": [render(frame.text[c.start:c.end + 1]) for c in anatomy.central_kernels],
            }
        items.append(entry)
    abstract = {ev.abstract_key for ev in evolutions}
    doc = {
        "k": cfg.k,
        "prefix_len": len(prefix.text),
        "high_letters": len(highs),
        "blocks": max(len(highs) - 1, 0),
        "evolutions_observed": len(evolutions),
        "evolutions_abstract": len(abstract),
        "evolutions_origin_closure": len(closure),
        "evolutions": items,
    }
    if cfg.json:
        print(_dump(doc), file=out)
        return 0
    print(f"k = {cfg.k}, prefix {doc['prefix_len']} letters, {doc['high_letters']} letters of order > k, "
          f"{doc['blocks']} complete blocks", file=out)
    print(f"evolutions: {doc['evolutions_observed']} observed ({doc['evolutions_abstract']} distinct), "
          f"{doc['evolutions_origin_closure']} by origin closure", file=out)
    for e in items:
        members = " | ".join(e["members"][s] or "ε" for s in sorted(e["members"], key=int)[:4])
        cases = f"{e['case_left'] or '?'}/{e['case_right'] or '?'}"
        line = f"  #{e['id']} {e['borders'][0]}..{e['borders'][1]} cases {cases}: {members}"
        if e["anatomy"]:
            line += f"  [{e['anatomy']['composite_kernels']} composite kernels, {len(e['anatomy']['central_kernels'])} central]"
        print(line, file=out)
    return 0


def _classify(cfg: RunConfig):
    system = _load(cfg.spec)
    normed, _ = normalize(system)
    return normed, classify(normed, Params(cfg.window, cfg.horizon, cfg.prefix_len))


def verdict_doc(system: MorphicSystem, verdict) -> dict:
    return {
        "class": verdict.cls.value,
        "exponent": verdict.exponent_text(),
        "fired_rule": verdict.rule_label,
        "k_star": verdict.k_star,
        "horizons": verdict.heuristic_horizons,
        "counterexample": (
            {"evolution": verdict.counterexample[0], "k": verdict.counterexample[1]} if verdict.counterexample else None
        ),
        "notes": list(verdict.notes),
        "evolutions": [
            {"k": s.k, "total": s.evolutions, "continuously_periodic": s.continuously_periodic, "failing": list(s.failing)}
            for s in verdict.levels
        ],
    }


def cmd_classify(cfg: RunConfig, out) -> int:
    system, verdict = _classify(cfg)
    doc = verdict_doc(system, verdict)
    if cfg.json:
        print(_dump(doc), file=out)
        return 0
    cls = doc["class"] + (f" {doc['exponent']}" if doc["exponent"] else "")
    print(f"class: {cls}", file=out)
    print(f"rule: {doc['fired_rule']}", file=out)
    print(f"k*: {doc['k_star'] if doc['k_star'] is not None else '-'}", file=out)
    for e in doc["evolutions"]:
        fail = f" failing: {', '.join(e['failing'])}" if e["failing"] else ""
        print(f"  k={e['k']}: {e['continuously_periodic']}/{e['total']} continuously periodic{fail}", file=out)
    for note in doc["notes"]:
        print(f"note: {note}", file=out)
    h = doc["horizons"]
    print(f"horizons: window {h['window']}, horizon {h['horizon']} (heuristic)", file=out)
    return 0


def _measure(cfg: RunConfig):
    system = _load(cfg.spec)
    if not cfg.allow_short and max(cfg.ns) * GUARD_RATIO > cfg.prefix_len:
        raise RangeError(f"max n = {max(cfg.ns)} needs --prefix-len >= {max(cfg.ns) * GUARD_RATIO}")
    prefix = generate_prefix(system, cfg.prefix_len)
    beta = apply_coding(system, prefix.text[:cfg.prefix_len])
    return factor_counts(beta, cfg.ns, allow_short=cfg.allow_short)


def cmd_measure(cfg: RunConfig, out) -> int:
    table = _measure(cfg)
    if cfg.fmt == "json":
        text = _dump({"prefix_len": table.prefix_len, "entries": [{"n": n, "p_n": p} for n, p in table.entries]}) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "p_n"])
        writer.writerows(table.entries)
        text = buf.getvalue()
    if cfg.out:
        cfg.out.write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return 0


def cmd_verify(cfg: RunConfig, out) -> int:
    system, verdict = _classify(cfg)
    table = _measure(cfg)
    report = cross_check(verdict, table, cfg.tolerances)
    if cfg.json:
        doc = {
            "verdict": verdict_doc(system, verdict),
            "table": [{"n": n, "p_n": p} for n, p in table.entries],
            "slope": report.fit.slope if report.fit else None,
            "criteria": [{"criterion": c, "passed": ok, "detail": d} for c, ok, d in report.criteria],
            "passed": report.passed,
        }
        print(_dump(doc), file=out)
    else:
        print(f"verdict: {report.verdict} ({verdict.rule_label})", file=out)
        print("measured: " + ", ".join(f"p_{n}={p}" for n, p in table.entries), file=out)
        if report.fit:
            print(f"slope: {report.fit.slope:.3f} over [{report.fit.range[0]}, {report.fit.range[1]}]", file=out)
        for c, ok, d in report.criteria:
            print(f"{'PASS' if ok else 'FAIL'}  {c}  ({d})", file=out)
        print("consistent" if report.passed else "MISMATCH", file=out)
    return 0 if report.passed else 1


COMMANDS = {
    "orders": cmd_orders,
    "normalize": cmd_normalize,
    "blocks": cmd_blocks,
    "classify": cmd_classify,
    "measure": cmd_measure,
    "verify": cmd_verify,
}


def dispatch(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return COMMANDS[args.command](_config(args), out)
    except (UsageError, ParseError, ValidationError, RangeError, WindowTooSmall) as exc:
        print(f"error: {exc}", file=err)
        return 2
    except MorphicError as exc:
        print(f"analysis failed: {type(exc).__name__}: {exc}", file=err)
        return 1


def main() -> None:
    sys.exit(dispatch())
