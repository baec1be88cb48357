"""
Command-line front end for the explicit-weakening kernel.

Subcommands: ``check``, ``subst``, ``compose``, ``normalize``, ``trace``,
``erase``, ``embed``, ``equiv`` and ``props``. Inputs are parsed and
typechecked before any engine operation runs, except that ``erase``,
``equiv`` and ``trace TERM CHAIN`` work on unchecked syntax when no
``--ctx``, ``--ty`` or ``--src`` is given. Printed terms keep the
annotations sealing puts on lambda application heads, so they check
again when piped back in. Results go to stdout (text or ``--json``);
structured logs go to stderr.

Exit codes:

- 0: success (``equiv``: the terms are equivalent)
- 1: domain error (syntax, type, scope) or ``equiv`` found a difference
- 2: usage error (bad flags, unreadable ``@file``, invalid settings)
- 3: ``props`` found a counterexample

CHANGELOG:
- 2026-10-19: Initial creation (STORY-013)
- 2026-10-19: Untyped trace for instantiation chains (STORY-014)

TODO:
- None
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Literal, TextIO

from pydantic import BaseModel, ValidationError

from kernel.src.classical import (
    embed,
    erase_raw,
    erase_term,
    parse_classical,
    print_classical,
)
from kernel.src.config import KernelSettings
from kernel.src.engine import (
    TraceStep,
    compose,
    instantiate_chain,
    instantiate_raw,
    normalize,
)
from kernel.src.errors import KernelError
from kernel.src.laws import LAW_NAMES, run_props
from kernel.src.logging_config import setup_logging
from kernel.src.parser import (
    parse_chain,
    parse_ctx,
    parse_subst,
    parse_term,
    parse_type,
)
from kernel.src.printer import (
    Style,
    print_ctx,
    print_subst,
    print_subst_judgement,
    print_term,
    print_term_judgement,
    print_ty,
)
from kernel.src.syntax import EMPTY, Ctx, Subst
from kernel.src.typecheck import (
    TypedSubst,
    TypedTerm,
    check_subst,
    check_term,
    infer_subst,
    infer_term,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_COUNTEREXAMPLE = 3

Command = Literal[
    "check",
    "subst",
    "compose",
    "normalize",
    "trace",
    "erase",
    "embed",
    "equiv",
    "props",
]


class UsageError(Exception):
    """Invalid combination of arguments or an unreadable input file."""


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------


class Invocation(BaseModel):
    """One parsed command line."""

    command: Command
    inputs: list[str]
    ctx: str | None = None
    ty: str | None = None
    src: list[str] = []
    mid: str | None = None
    dst: str | None = None
    fuse: bool = False
    json_output: bool = False
    unicode: bool = False
    step_limit: int | None = None
    seed: int | None = None
    cases: int | None = None
    size: int | None = None
    laws: list[str] = []
    log_level: str | None = None

    @property
    def style(self) -> Style:
        return "unicode" if self.unicode else "ascii"


class TermResult(BaseModel):
    term: str
    ctx: str
    ty: str


class SubstResult(BaseModel):
    subst: str
    src: str
    dst: str


class EraseResult(BaseModel):
    classical: str


class EquivResult(BaseModel):
    equivalent: bool
    left: str
    right: str


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    """Build the ``lambda-up`` argument parser."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", dest="json_output", action="store_true")
    common.add_argument("--unicode", action="store_true", help="Unicode output")
    common.add_argument("--log-level", dest="log_level", default=None)

    typing_flags = argparse.ArgumentParser(add_help=False)
    typing_flags.add_argument("--ctx", help='context, e.g. "[N, N -> N]"')
    typing_flags.add_argument("--ty", help="type; inferred when omitted")

    chain_flags = argparse.ArgumentParser(add_help=False)
    chain_flags.add_argument(
        "--src", action="append", default=[], help="source context, once per stage"
    )
    chain_flags.add_argument("--fuse", action="store_true")

    limit_flags = argparse.ArgumentParser(add_help=False)
    limit_flags.add_argument("--step-limit", dest="step_limit", type=int)

    parser = argparse.ArgumentParser(
        prog="lambda-up", description="Explicit-weakening lambda calculus kernel"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", parents=[common, typing_flags])
    check.add_argument("inputs", nargs=1, metavar="TEXT")
    check.add_argument("--src", action="append", default=[])
    check.add_argument("--dst")

    subst = sub.add_parser("subst", parents=[common, typing_flags, chain_flags])
    subst.add_argument("inputs", nargs=2, metavar=("TERM", "CHAIN"))

    comp = sub.add_parser("compose", parents=[common])
    comp.add_argument("inputs", nargs=2, metavar=("S", "T"))
    comp.add_argument("--src", action="append", default=[])
    comp.add_argument("--mid")
    comp.add_argument("--dst")

    norm = sub.add_parser("normalize", parents=[common, typing_flags, limit_flags])
    norm.add_argument("inputs", nargs=1, metavar="TERM")

    trace = sub.add_parser(
        "trace", parents=[common, typing_flags, chain_flags, limit_flags]
    )
    trace.add_argument("inputs", nargs="+", metavar="TERM [CHAIN]")

    erase = sub.add_parser("erase", parents=[common, typing_flags])
    erase.add_argument("inputs", nargs=1, metavar="TERM")

    emb = sub.add_parser("embed", parents=[common])
    emb.add_argument("inputs", nargs=1, metavar="CLASSICAL")
    emb.add_argument("--ctx", required=True)
    emb.add_argument("--ty", required=True)

    equiv = sub.add_parser("equiv", parents=[common, typing_flags])
    equiv.add_argument("inputs", nargs=2, metavar=("M", "N"))

    props = sub.add_parser("props", parents=[common])
    props.set_defaults(inputs=[])
    props.add_argument("--seed", type=int)
    props.add_argument("--cases", type=int)
    props.add_argument("--size", type=int)
    props.add_argument(
        "--law", dest="laws", action="append", default=[], choices=LAW_NAMES
    )
    return parser


def _read(arg: str) -> str:
    """Return ``arg``, or the UTF-8 contents of the file named by ``@path``."""
    if not arg.startswith("@"):
        return arg
    try:
        return Path(arg[1:]).read_text(encoding="utf-8").strip()
    except OSError as exc:
        raise UsageError(f"cannot read {arg[1:]}: {exc.strerror}") from exc


# ---------------------------------------------------------------------------
# Typing helpers
# ---------------------------------------------------------------------------


def _ctx(text: str | None) -> Ctx:
    return EMPTY if text is None else parse_ctx(_read(text))


def _typed_term(text: str, ctx: Ctx, ty_text: str | None) -> TypedTerm:
    raw = parse_term(_read(text))
    ty = infer_term(ctx, raw) if ty_text is None else parse_type(_read(ty_text))
    return check_term(ctx, ty, raw)


def _typed_chain(raws: list[Subst], srcs: list[str], dst: Ctx) -> list[TypedSubst]:
    """Seal ``σ1 ; … ; σn``: stage i maps ``src_i`` onto the previous source."""
    if len(srcs) > len(raws):
        raise UsageError(f"{len(srcs)} --src values for {len(raws)} substitution(s)")
    sealed = []
    for index, raw in enumerate(raws):
        src = parse_ctx(_read(srcs[index])) if index < len(srcs) else EMPTY
        sealed.append(check_subst(src, dst, raw))
        dst = src
    return sealed


def _instantiation(
    inv: Invocation, term_text: str, chain_text: str
) -> tuple[TypedTerm, list[TypedSubst]]:
    """Seal ``TERM`` and ``CHAIN``; ``--ctx`` defaults to the first stage's target."""
    raws = parse_chain(_read(chain_text))
    if inv.ctx is None:
        ctx = infer_subst(_ctx(inv.src[0] if inv.src else None), raws[0])
    else:
        ctx = _ctx(inv.ctx)
    m = _typed_term(term_text, ctx, inv.ty)
    return m, _typed_chain(raws, inv.src, m.ctx)


def _term_out(m: TypedTerm, inv: Invocation, out: TextIO) -> None:
    if inv.json_output:
        result = TermResult(
            term=print_term(m.term, inv.style),
            ctx=print_ctx(m.ctx, inv.style),
            ty=print_ty(m.ty, inv.style),
        )
        print(result.model_dump_json(), file=out)
    else:
        print(print_term(m.term, inv.style), file=out)


def _subst_out(s: TypedSubst, inv: Invocation, out: TextIO) -> None:
    if inv.json_output:
        result = SubstResult(
            subst=print_subst(s.subst, inv.style),
            src=print_ctx(s.src, inv.style),
            dst=print_ctx(s.dst, inv.style),
        )
        print(result.model_dump_json(), file=out)
    else:
        print(print_subst(s.subst, inv.style), file=out)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _check(inv: Invocation, out: TextIO) -> int:
    text = _read(inv.inputs[0])
    if inv.src or inv.dst is not None:
        if len(inv.src) > 1:
            raise UsageError("check takes a single --src")
        raw = parse_subst(text)
        src = _ctx(inv.src[0] if inv.src else None)
        dst = infer_subst(src, raw) if inv.dst is None else _ctx(inv.dst)
        s = check_subst(src, dst, raw)
        if inv.json_output:
            _subst_out(s, inv, out)
        else:
            print(print_subst_judgement(s.subst, s.src, s.dst, inv.style), file=out)
        return EXIT_OK
    m = _typed_term(text, _ctx(inv.ctx), inv.ty)
    if inv.json_output:
        _term_out(m, inv, out)
    else:
        print(print_term_judgement(m.term, m.ctx, m.ty, inv.style), file=out)
    return EXIT_OK


def _subst(inv: Invocation, out: TextIO) -> int:
    m, chain = _instantiation(inv, *inv.inputs)
    _term_out(instantiate_chain(m, chain, fuse=inv.fuse), inv, out)
    return EXIT_OK


def _compose(inv: Invocation, out: TextIO) -> int:
    if len(inv.src) > 1:
        raise UsageError("compose takes a single --src")
    left_raw = parse_subst(_read(inv.inputs[0]))
    right_raw = parse_subst(_read(inv.inputs[1]))
    src = _ctx(inv.src[0] if inv.src else None)
    mid = infer_subst(src, right_raw) if inv.mid is None else _ctx(inv.mid)
    dst = infer_subst(mid, left_raw) if inv.dst is None else _ctx(inv.dst)
    right = check_subst(src, mid, right_raw)
    left = check_subst(mid, dst, left_raw)
    _subst_out(compose(left, right), inv, out)
    return EXIT_OK


def _normalize(inv: Invocation, settings: KernelSettings, out: TextIO) -> int:
    m = _typed_term(inv.inputs[0], _ctx(inv.ctx), inv.ty)
    _term_out(normalize(m, settings.step_limit), inv, out)
    return EXIT_OK


def _trace(inv: Invocation, settings: KernelSettings, out: TextIO) -> int:
    if len(inv.inputs) > 2:
        raise UsageError("trace takes a term and at most one substitution chain")

    def sink(step: TraceStep) -> None:
        print(step.model_dump_json(), file=out)

    if len(inv.inputs) == 1:
        m = _typed_term(inv.inputs[0], _ctx(inv.ctx), inv.ty)
        normalize(m, settings.step_limit, trace=sink)
    elif inv.ctx is None and inv.ty is None and not inv.src:
        # untyped: the instantiation clauses never consult types
        term = parse_term(_read(inv.inputs[0]))
        chain = parse_chain(_read(inv.inputs[1]))
        instantiate_raw(term, chain, fuse=inv.fuse, trace=sink)
    else:
        m, typed_chain = _instantiation(inv, *inv.inputs)
        instantiate_chain(m, typed_chain, fuse=inv.fuse, trace=sink)
    return EXIT_OK


def _erase(inv: Invocation, out: TextIO) -> int:
    if inv.ctx is None and inv.ty is None:
        classical = erase_raw(parse_term(_read(inv.inputs[0])))
    else:
        classical = erase_term(_typed_term(inv.inputs[0], _ctx(inv.ctx), inv.ty))
    text = print_classical(classical)
    if inv.json_output:
        print(EraseResult(classical=text).model_dump_json(), file=out)
    else:
        print(text, file=out)
    return EXIT_OK


def _embed(inv: Invocation, out: TextIO) -> int:
    classical = parse_classical(_read(inv.inputs[0]))
    m = embed(classical, _ctx(inv.ctx), parse_type(_read(inv.ty or "")))
    _term_out(m, inv, out)
    return EXIT_OK


def _equiv(inv: Invocation, out: TextIO) -> int:
    left_text, right_text = inv.inputs
    if inv.ctx is None and inv.ty is None:
        left = erase_raw(parse_term(_read(left_text)))
        right = erase_raw(parse_term(_read(right_text)))
    else:
        ctx = _ctx(inv.ctx)
        m = _typed_term(left_text, ctx, inv.ty)
        n = _typed_term(right_text, ctx, print_ty(m.ty))
        left, right = erase_term(m), erase_term(n)
    result = EquivResult(
        equivalent=left == right,
        left=print_classical(left),
        right=print_classical(right),
    )
    if inv.json_output:
        print(result.model_dump_json(), file=out)
    else:
        print("equivalent" if result.equivalent else "not equivalent", file=out)
    return EXIT_OK if result.equivalent else EXIT_DOMAIN


def _props(inv: Invocation, settings: KernelSettings, out: TextIO) -> int:
    report = run_props(settings, inv.laws or None)
    if inv.json_output:
        print(report.model_dump_json(indent=2), file=out)
    else:
        print(report.render_text(), file=out)
    return EXIT_OK if report.ok else EXIT_COUNTEREXAMPLE


def execute(inv: Invocation, settings: KernelSettings, out: TextIO) -> int:
    """Dispatch one invocation; domain errors propagate to the caller."""
    match inv.command:
        case "check":
            return _check(inv, out)
        case "subst":
            return _subst(inv, out)
        case "compose":
            return _compose(inv, out)
        case "normalize":
            return _normalize(inv, settings, out)
        case "trace":
            return _trace(inv, settings, out)
        case "erase":
            return _erase(inv, out)
        case "embed":
            return _embed(inv, out)
        case "equiv":
            return _equiv(inv, out)
        case "props":
            return _props(inv, settings, out)
    raise UsageError(f"unknown command {inv.command}")


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def run(argv: list[str] | None = None, out: TextIO | None = None) -> int:
    """Run the CLI and return its exit code instead of exiting.

    Args:
        argv: Arguments without the program name; ``sys.argv[1:]`` if None.
        out: Destination for command output; ``sys.stdout`` if None.
    """
    out = sys.stdout if out is None else out
    try:
        namespace = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    try:
        inv = Invocation.model_validate(vars(namespace))
        overrides = {
            key: value
            for key, value in (
                ("seed", inv.seed),
                ("cases", inv.cases),
                ("size", inv.size),
                ("step_limit", inv.step_limit),
                ("log_level", inv.log_level),
            )
            if value is not None
        }
        settings = KernelSettings(**overrides)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    setup_logging(settings.log_level)
    try:
        return execute(inv, settings, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KernelError as exc:
        logger.warning(
            "%s failed: %s", inv.command, exc, extra={"error": type(exc).__name__}
        )
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
