"""Command-line entry point: ``ybco invariant|check|oracle --model ...``."""

from __future__ import annotations

import argparse
import os
import random
import re
import shlex
import sys
from dataclasses import dataclass, fields
from typing import Optional

from . import braid as braid_mod
from . import bracket as bracket_mod
from . import jones_alex as ja
from . import quandle as quandle_mod
from .eybo import Report, tau_deformation, verify_deformed
from .ring import QQ, QQi, RingElement, laurent, parse as parse_element, poly, render

VERBS = ("invariant", "check", "oracle")
SUITES = ("ybe", "cocycle", "enhance", "markov", "all")
FORMATS = ("text", "structured")
COCYCLES = ("chi", "zero")
FIXED_MODELS = ("tau-deform", "bracket", "jones", "alexander")
DEFAULT_SEED = 0
MARKOV_PAIRS = 50


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Command:
    verb: str
    model: str
    braid: Optional[str] = None
    morse: Optional[str] = None
    cocycle: str = "chi"
    deform: bool = False
    A: Optional[str] = None
    q: str = "q"
    B: str = "B"
    suite: str = "all"
    seed: int = DEFAULT_SEED
    format: str = "text"
    var: str = "h"


def _check_model(name: str) -> str:
    if name in FIXED_MODELS:
        return name
    if name.startswith("quandle:") and name[len("quandle:"):]:
        return name
    raise argparse.ArgumentTypeError(
        f"unknown model {name!r}; choose from {', '.join(FIXED_MODELS)} or quandle:<name>")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ybco", description=__doc__)
    p.add_argument("--batch", metavar="FILE", help="run one command per line of FILE")
    sub = p.add_subparsers(dest="verb")
    for verb in VERBS:
        s = sub.add_parser(verb)
        s.add_argument("--model", required=True, type=_check_model,
                       help="tau-deform, quandle:<F4|dihedral:n|table>, bracket, jones, alexander")
        s.add_argument("--braid", help="braid word, e.g. 'strands=2; 1 1 1'")
        s.add_argument("--morse", help="Morse word, e.g. 'cap:1 cap:1 x+:2 cup:1 cup:1'")
        s.add_argument("--cocycle", default="chi", choices=COCYCLES, help="quandle 2-cocycle (default chi)")
        s.add_argument("--deform", action="store_true", help="use the first-order bracket deformation")
        s.add_argument("--A", default=None, choices=("i", "generic"),
                       help="bracket parameter: symbolic (generic) or A = i; default i with --deform")
        s.add_argument("--q", default="q", help="transposition deformation parameter (default symbolic q)")
        s.add_argument("--B", default="B", help="bracket deformation parameter (default symbolic B)")
        s.add_argument("--suite", default="all", choices=SUITES, help="check suite (default all)")
        s.add_argument("--seed", type=int, default=DEFAULT_SEED,
                       help="RNG seed for randomized checks; YBCO_SEED overrides")
        s.add_argument("--format", default="text", choices=FORMATS)
        s.add_argument("--var", default="h", choices=("h", "t"),
                       help="render Jones/Alexander values in h or in t = h^2")
    return p


def parse(argv: list) -> Command:
    """Validate ``argv`` into a Command; raises UsageError naming the bad token."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        raise UsageError(f"could not parse arguments: {' '.join(argv)}") from exc
    if ns.batch is not None:
        if ns.verb is not None:
            raise UsageError("--batch cannot be combined with a verb")
        return Command(verb="batch", model="", braid=ns.batch)
    if ns.verb is None:
        raise UsageError("missing verb; choose from " + ", ".join(VERBS))
    if ns.braid is not None and ns.morse is not None:
        raise UsageError("--braid and --morse are mutually exclusive")
    if ns.deform and ns.model != "bracket":
        raise UsageError("--deform only applies to the bracket model")
    if ns.deform and ns.A == "generic":
        raise UsageError("the bracket deformation is only available at --A i")
    if ns.morse is not None and ns.model != "bracket":
        raise UsageError(f"--morse needs the bracket model, not {ns.model}")
    if ns.verb != "check" and ns.braid is None and ns.morse is None:
        raise UsageError(f"{ns.verb} needs --braid or --morse")
    if ns.seed < 0:
        raise UsageError(f"--seed must be non-negative, got {ns.seed}")
    return Command(ns.verb, ns.model, ns.braid, ns.morse, ns.cocycle, ns.deform, ns.A,
                   ns.q, ns.B, ns.suite, ns.seed, ns.format, ns.var)


def render_command(cmd: Command) -> list:
    """argv that parses back to ``cmd``."""
    if cmd.verb == "batch":
        return ["--batch", cmd.braid]
    out = [cmd.verb, "--model", cmd.model]
    defaults = Command(cmd.verb, cmd.model)
    for f in fields(Command):
        if f.name in ("verb", "model"):
            continue
        value = getattr(cmd, f.name)
        if value == getattr(defaults, f.name):
            continue
        if f.name == "deform":
            out.append("--deform")
        else:
            out.append(f"--{f.name}={value}")
    return out


# ---------------------------------------------------------------------------
# Model construction


def _seed(cmd: Command) -> int:
    env = os.environ.get("YBCO_SEED")
    if env is None:
        return cmd.seed
    try:
        return int(env)
    except ValueError as exc:
        raise UsageError(f"YBCO_SEED must be an integer, got {env!r}") from exc


def _braid(cmd: Command):
    if cmd.braid is None:
        raise UsageError(f"model {cmd.model} needs --braid")
    return braid_mod.parse_braid(cmd.braid)


def _tau(cmd: Command):
    if cmd.q == "q":
        ring = QQ.with_vars(poly("q"))
        return tau_deformation(ring, ring.gen("q"))
    return tau_deformation(QQ, parse_element(cmd.q, QQ))


def _quandle(cmd: Command):
    Q = quandle_mod.parse_quandle(cmd.model[len("quandle:"):])
    if cmd.cocycle == "chi":
        if Q != quandle_mod.alexander_quandle_F4():
            raise UsageError("the chi cocycle is defined on the F4 quandle only")
        psi = quandle_mod.chi_cocycle(Q)
    else:
        psi = quandle_mod.zero_cocycle(Q)
    return Q, psi


def _bracket(cmd: Command, verify: bool = True):
    spec = cmd.A or ("i" if cmd.deform else "generic")
    B = None
    if cmd.deform and cmd.B != "B":
        B = parse_element(cmd.B, QQi)
    return bracket_mod.build_bracket_model(cmd.deform, spec, B=B, verify=verify)


def _morse(cmd: Command):
    if cmd.morse is not None:
        return bracket_mod.parse_morse(cmd.morse), None
    b = _braid(cmd)
    return ja.braid_closure_morse(b), (b.positive, b.negative)


# ---------------------------------------------------------------------------
# Rendering


def render_in_t(x: RingElement) -> str:
    """Rewrite a Laurent element in h as one in t = h^2 (half powers allowed)."""
    if not x.ring.has(ja.HBAR) or x.ring.nvars != 1:
        return render(x)
    ring = x.ring.without(ja.HBAR).with_vars(laurent("s"))
    text = render(RingElement(ring, dict(x.terms)))

    def power(m):
        k = int(m.group(1)) if m.group(1) else 1
        if k % 2 == 0:
            return "t" if k == 2 else f"t^{k // 2}"
        return f"t^({k}/2)"

    return re.sub(r"s(?:\^(-?\d+))?", power, text)


def _value(x: RingElement, cmd: Command) -> str:
    return render_in_t(x) if cmd.var == "t" else render(x)


class Output:
    def __init__(self, cmd: Command):
        self.cmd = cmd
        self.pairs: list = []
        self.lines: list = []

    def put(self, key: str, value, primary: bool = False):
        self.pairs.append((key, str(value)))
        if primary:
            self.lines.append(str(value))

    def text(self) -> str:
        if self.cmd.format == "structured":
            return "\n".join(f"{k} = {v}" for k, v in self.pairs)
        return "\n".join(self.lines)


# ---------------------------------------------------------------------------
# Verbs


def _invariant(cmd: Command, out: Output) -> int:
    m = cmd.model
    out.put("verb", cmd.verb)
    out.put("model", m)
    if m == "tau-deform":
        b = _braid(cmd)
        out.put("value", render(braid_mod.trace_invariant(b, _tau(cmd))), primary=True)
    elif m.startswith("quandle:"):
        b = _braid(cmd)
        Q, psi = _quandle(cmd)
        base, D = quandle_mod.yb_from_quandle(Q, psi)
        value = braid_mod.trace_invariant(b, D)
        out.put("value", render(value), primary=True)
        out.put("colorings", len(quandle_mod.colorings(b, Q)))
    elif m == "bracket":
        w, signs = _morse(cmd)
        model = _bracket(cmd)
        phi_m, phi_w = bracket_mod.normalized_invariants(w, model, signs)
        out.put("value", render(phi_w), primary=True)
        out.put("unnormalized", render(phi_m))
    elif m == "jones":
        b = _braid(cmd)
        value = ja.jones_invariant(b)
        out.put("value", _value(value, cmd), primary=True)
        out.put("value_h", render(value))
        out.put("value_t", render_in_t(value))
    elif m == "alexander":
        b = _braid(cmd)
        scalar, is_scalar = ja.alexander_invariant(b)
        out.put("value", _value(scalar, cmd), primary=True)
        out.put("value_h", render(scalar))
        out.put("value_t", render_in_t(scalar))
        out.put("scalar", "yes" if is_scalar else "no")
        if not is_scalar:
            out.lines.append("warning: partial trace is not a multiple of the identity")
            return 1
    return 0


def _oracle(cmd: Command, out: Output) -> int:
    m = cmd.model
    out.put("verb", cmd.verb)
    out.put("model", m)
    if m == "tau-deform":
        raise UsageError("the transposition deformation has no independent oracle; use invariant")
    if m.startswith("quandle:"):
        b = _braid(cmd)
        Q, psi = _quandle(cmd)
        classical, quantum = quandle_mod.state_sum_invariants(b, Q, psi, check=False)
        out.put("value", render(quantum), primary=True)
        out.put("classical", render(classical))
    elif m == "bracket":
        w, signs = _morse(cmd)
        if cmd.deform:
            if cmd.B != "B":
                raise UsageError("the bracket oracle uses a symbolic B")
            value = bracket_mod.deformed_oracle(w, signs)
        else:
            if cmd.A == "i":
                raise UsageError("the undeformed bracket oracle is symbolic in A")
            value = bracket_mod.writhe_normalized_oracle(w, signs)
        out.put("value", render(value), primary=True)
    elif m == "jones":
        value = ja.oracle_jones(_braid(cmd))
        out.put("value", _value(value, cmd), primary=True)
    elif m == "alexander":
        value = ja.oracle_alexander(_braid(cmd))
        out.put("value", _value(value, cmd), primary=True)
    return 0


def _suite_of(name: str) -> str:
    n = name.split(":")[-1]
    if "cocycle" in n:
        return "cocycle"
    if any(k in n for k in ("ybe", "inverse", "decomposition", "singular")):
        return "ybe"
    return "enhance"


def _model_report(cmd: Command) -> Report:
    m = cmd.model
    if m == "tau-deform":
        return verify_deformed(_tau(cmd))
    if m.startswith("quandle:"):
        Q, psi = _quandle(cmd)
        return quandle_mod.lift_report(Q, psi)
    if m == "bracket":
        return _bracket(cmd, verify=False).verify()
    if m == "jones":
        return ja.jones_report()
    return ja.alexander_report()


def _markov_value(cmd: Command):
    m = cmd.model
    if m == "tau-deform":
        D = _tau(cmd)
        return lambda b: braid_mod.trace_invariant(b, D)
    if m.startswith("quandle:"):
        Q, psi = _quandle(cmd)
        _, D = quandle_mod.yb_from_quandle(Q, psi)
        return lambda b: braid_mod.trace_invariant(b, D)
    if m == "jones":
        return ja.jones_invariant
    if m == "alexander":
        return lambda b: ja.alexander_invariant(b)[0]
    raise UsageError("the markov suite needs a braid model, not bracket")


def _markov_report(cmd: Command) -> Report:
    rng = random.Random(_seed(cmd))
    value = _markov_value(cmd)
    rep = Report(f"markov {cmd.model}")
    small = cmd.model.startswith("quandle:")
    for k in range(MARKOV_PAIRS):
        b = braid_mod.random_braid(rng, 3 if small else 4, 5 if small else 6)
        move = braid_mod.random_move(rng, b)
        if cmd.model == "alexander" and b.strands == 2 and isinstance(move, braid_mod.DestabilizeIfPossible):
            move = braid_mod.StabilizePos()
        after = braid_mod.markov_transform(b, move)
        same = value(b) == value(after)
        rep.add_flag(f"markov-{k}", same, f"{braid_mod.format_braid(b)} / {type(move).__name__}")
    return rep


def _check(cmd: Command, out: Output) -> int:
    out.put("verb", cmd.verb)
    out.put("model", cmd.model)
    out.put("suite", cmd.suite)
    checks = []
    if cmd.suite != "markov":
        rep = _model_report(cmd)
        checks += [c for c in rep.checks if cmd.suite == "all" or _suite_of(c.name) == cmd.suite]
    if cmd.suite in ("markov", "all") and cmd.model != "bracket":
        checks += _markov_report(cmd).checks
    failed = required = 0
    for c in checks:
        out.put(c.name, "PASS" if c.passed else "FAIL")
        out.lines.append(c.line())
        if not c.informational:
            required += 1
            failed += not c.passed
    out.put("failed", failed)
    out.lines.append(f"{required - failed}/{required} required checks passed")
    return 1 if failed else 0


HANDLERS = {"invariant": _invariant, "check": _check, "oracle": _oracle}


def _module_of(exc: BaseException) -> str:
    return type(exc).__module__


def run(cmd: Command) -> tuple:
    """(exit status, output text)."""
    if cmd.verb == "batch":
        return _batch(cmd.braid)
    out = Output(cmd)
    try:
        status = HANDLERS[cmd.verb](cmd, out)
    except UsageError as exc:
        return 2, f"usage error: {exc}"
    except AssertionError as exc:
        return 3, f"internal assertion: {exc}"
    except (ValueError, ArithmeticError, TypeError) as exc:
        return 2, f"{_module_of(exc)}: {exc}"
    return status, out.text()


def _batch(path: str) -> tuple:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh]
    except OSError as exc:
        return 2, f"usage error: cannot read batch file: {exc}"
    status, chunks = 0, []
    for ln in lines:
        if not ln or ln.startswith("#"):
            continue
        try:
            cmd = parse(shlex.split(ln))
            if cmd.verb == "batch":
                raise UsageError("nested --batch")
            s, text = run(cmd)
        except UsageError as exc:
            s, text = 2, f"usage error: {exc}"
        chunks.append(text)
        status = max(status, s)
    return status, "\n".join(chunks)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cmd = parse(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    status, text = run(cmd)
    stream = sys.stderr if status in (2, 3) else sys.stdout
    if text:
        print(text, file=stream)
    return status


if __name__ == "__main__":
    sys.exit(main())
