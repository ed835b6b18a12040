"""Command-line interface.

Every subcommand is a thin adapter over library calls and prints one JSON
document ``{"status", "command", "result", "diagnostics"}`` (or bare text with
``--plain``).  Exit codes: 0 ok, 1 user error, 2 internal error, 3 budget
exceeded.
"""
from __future__ import annotations

import argparse
import json
import signal
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import affineinv, formsalg, sl2inv, sl3inv, syzygy
from .exactalg import QuadExt, format_rational
from .jets import (ALGEBRAS, Derivation, HorizontalForm, JetContext, JetError, JetFunction,
                   JetPoint, lie_check, parse_jet_name, tresse_frame)
from .polyalg import ParseError, RatFunc, UnknownVariable, expression_names, ratfunc_to_str

EXIT_OK, EXIT_USER, EXIT_INTERNAL, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class CommandResult:
    status: str
    command: str
    result: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)
    reason: str | None = None
    plain: str | None = None

    @property
    def exit_code(self) -> int:
        if self.status == "ok":
            return EXIT_OK
        if self.reason == "budget-exceeded":
            return EXIT_BUDGET
        if self.reason == "internal-error":
            return EXIT_INTERNAL
        return EXIT_USER

    def to_dict(self) -> dict:
        result = dict(self.result)
        if self.reason is not None:
            result.setdefault("reason", self.reason)
        return {"status": self.status, "command": self.command, "result": result,
                "diagnostics": list(self.diagnostics)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)


# ---------------------------------------------------------------------------
# rendering

def render(obj):
    """Exact, JSON-friendly text for library values."""
    if isinstance(obj, JetFunction):
        return str(obj.value)
    if isinstance(obj, RatFunc):
        return ratfunc_to_str(obj)
    if isinstance(obj, (int, Fraction)):
        return format_rational(obj)
    if isinstance(obj, QuadExt):
        a, b = render(obj.a), render(obj.b)
        return {"rational": a, "root_coefficient": b, "radicand": render(obj.radicand)}
    if isinstance(obj, (Derivation, HorizontalForm, affineinv.QuadDerivation, affineinv.QuadForm)):
        return [render(c) for c in obj.coefficients]
    if isinstance(obj, dict):
        return {str(k): render(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [render(v) for v in obj]
    return str(obj)


# ---------------------------------------------------------------------------
# input helpers

def split_top(text: str, seps: str = ",;") -> list[str]:
    """Split on separators outside brackets and parentheses."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if depth == 0 and ch in seps:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    tail = "".join(cur).strip()
    if tail:
        out.append(tail)
    return [p for p in out if p]


GROUP_VARS = {"sl2": 2, "aff2": 2, "sl3": 3}
BUILTINS = {"sl2": sl2inv.builtin, "aff2": affineinv.builtin, "sl3": sl3inv.builtin}


def infer_vars(text: str, default: int = 2) -> int:
    """Number of independent variables implied by the names in ``text``."""
    names = expression_names(text)
    lengths = {len(s) for s in map(parse_jet_name, names) if s is not None}
    if len(lengths) > 1:
        raise UsageError(f"mixed jet variables in {text!r}")
    if lengths:
        return lengths.pop()
    return 3 if "z" in names else default


def jet_expression(text: str, n: int | None = None) -> JetFunction:
    n = n or infer_vars(text)
    return JetContext(n, 0).parse(text)


def resolve(args, group: str | None = None):
    """The object named by ``--name`` or parsed from ``--expr``."""
    group = group or getattr(args, "group", None) or "sl2"
    if getattr(args, "name", None):
        try:
            return BUILTINS[group](args.name)
        except KeyError as e:
            raise LookupError(f"unknown {group} name {args.name!r}") from e
    if getattr(args, "expr", None):
        n = getattr(args, "vars", None) or (GROUP_VARS[group] if getattr(args, "group", None) else None)
        return jet_expression(args.expr, n)
    raise UsageError("one of --name or --expr is required")


def parse_point(text: str) -> dict:
    point = {}
    for item in split_top(text):
        if "=" not in item:
            raise UsageError(f"expected name=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            point[k.strip().replace(" ", "")] = Fraction(v.strip())
        except ValueError:
            raise UsageError(f"value for {k.strip()!r} is not rational: {v.strip()!r}") from None
    return point


def parse_form(text: str, degree: int | None, arity: int = 2) -> formsalg.Form:
    return formsalg.Form.parse(text, arity, degree)


def require_function(obj, what: str = "invariant") -> JetFunction:
    if not isinstance(obj, JetFunction):
        raise UsageError(f"{what} must be a scalar jet function")
    return obj


# ---------------------------------------------------------------------------
# subcommands

def cmd_eval(args, res: CommandResult):
    obj = resolve(args)
    res.result["expression"] = render(obj)
    if args.at or args.jet_of:
        f = require_function(obj)
        if args.jet_of:
            ctx = f.ctx
            base = [Fraction(b) for b in split_top(args.base or "")] or [Fraction(0)] * ctx.n
            if len(base) != ctx.n:
                raise UsageError(f"--base needs {ctx.n} coordinates")
            poly = RatFunc.from_poly(_indep_poly(args.jet_of, ctx))
            point = dict(JetPoint.of_polynomial(ctx, poly, base))
            if args.at:
                point.update(parse_point(args.at))
        else:
            point = parse_point(args.at)
        try:
            value = f.evaluate(point)
        except KeyError as e:
            raise UsageError(str(e).strip("'\"")) from None
        except ZeroDivisionError:
            raise ValueError("denominator vanishes at the point") from None
        res.result["value"] = render(value)
        res.plain = res.result["value"]
    else:
        res.plain = _plain(res.result["expression"])


def _indep_poly(text: str, ctx: JetContext):
    from .polyalg import VarTable, parse_expression
    r = parse_expression(text, VarTable(ctx.indep))
    if not r.is_polynomial():
        raise UsageError("--jet-of must be a polynomial in the independent variables")
    return r.num


def _plain(v) -> str:
    if isinstance(v, str):
        return v
    return json.dumps(v, ensure_ascii=False)


def cmd_restrict(args, res: CommandResult):
    f = require_function(resolve(args))
    phi = parse_form(args.form, args.degree, f.ctx.n)
    out = formsalg.restrict(f, phi)
    res.result["restriction"] = render(out)
    res.plain = res.result["restriction"]


def cmd_discriminant(args, res: CommandResult):
    phi = parse_form(args.form, args.degree)
    res.result["discriminant"] = render(formsalg.discriminant(phi))
    res.diagnostics.append("Discr(phi) = Res(phi_x, phi_y), Sylvester convention")
    res.plain = res.result["discriminant"]


def cmd_resultant(args, res: CommandResult):
    phi = parse_form(args.form1, args.degree1)
    psi = parse_form(args.form2, args.degree2)
    res.result["resultant"] = render(formsalg.sylvester_resultant(phi, psi))
    c = formsalg.resultant_convention_constant(phi.degree, psi.degree)
    res.diagnostics.append(f"Sylvester/bracket-product constant for ({phi.degree},{psi.degree}): "
                           f"{format_rational(c)}")
    res.plain = res.result["resultant"]


def cmd_lie_check(args, res: CommandResult):
    f = require_function(resolve(args, args.group))
    failed = lie_check(f, ALGEBRAS[args.group](), detail=True)
    res.result["group"] = args.group
    res.result["order"] = f.order
    res.result["invariant"] = not failed
    res.result["failing_generators"] = [X.name for X in failed]
    res.plain = "true" if not failed else "false"


def cmd_weight(args, res: CommandResult):
    f = require_function(resolve(args))
    if f.is_zero():
        raise ValueError("weight of the zero function is undefined")
    w = sl2inv.diagonal_weight(f, args.field)
    res.result["weight"] = w
    res.result["field"] = args.field
    res.plain = str(w)


def cmd_tresse(args, res: CommandResult):
    fs_text = split_top(args.invariants)
    n = args.vars or max(infer_vars(t) for t in fs_text + [args.apply])
    fs = [jet_expression(t, n) for t in fs_text]
    g = jet_expression(args.apply, n)
    frame = tresse_frame(fs)
    derivs = [D(g) for D in frame]
    res.result["derivatives"] = [render(d) for d in derivs]
    res.result["frame"] = [render(D) for D in frame]
    res.plain = "\n".join(res.result["derivatives"])


def cmd_syzygy_verify(args, res: CommandResult):
    if args.case == "cubic":
        R, values = syzygy.cubic_relation(), syzygy.cubic_values()
        res.diagnostics.append("Discr from the Sylvester resultant; constant to the printed "
                               "J1 restriction is 1")
    else:
        R, values = syzygy.quartic_relation(), syzygy.quartic_values()
    ok = syzygy.verify_relation(R, values)
    res.result["case"] = args.case
    res.result["relation"] = str(R)
    res.result["verified"] = ok
    res.plain = "verified" if ok else "not verified"
    if not ok:
        res.status, res.reason = "error", "relation-fails"


def cmd_syzygy_discover(args, res: CommandResult):
    deadline = time.monotonic() + args.timeout_seconds if args.timeout_seconds else None
    found = syzygy.discover_cubic(args.bound, not args.no_weights, deadline)
    target = syzygy.cubic_relation()
    res.result["bound"] = args.bound
    res.result["relations"] = [str(R) for R in found]
    res.result["matches_known"] = [R.poly == target.poly for R in found]
    res.plain = "\n".join(res.result["relations"])


def cmd_equiv(args, res: CommandResult):
    phi = parse_form(args.form1, args.degree)
    psi = parse_form(args.form2, args.degree)
    v = formsalg.sl2_equivalent(phi, psi)
    res.result.update(v.to_dict())
    res.diagnostics.extend(v.notes)
    res.result.pop("notes", None)
    res.result["verdict"] = res.result.pop("status")
    res.plain = v.status
    if v.status == "irregular":
        res.status, res.reason = "error", "irregular"


def cmd_sl3_generators(args, res: CommandResult):
    names = ("J1", "J2", "J3", "J4", "J5")
    res.result["generators"] = {k: render(v) for k, v in zip(names, sl3inv.sl3_generators())}
    res.plain = "\n".join(f"{k} = {v}" for k, v in res.result["generators"].items())


# ---------------------------------------------------------------------------
# argument parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_target(p, group_default=None):
    p.add_argument("--expr", help="jet expression, e.g. 'u[2,0]*u[0,2]-u[1,1]^2'")
    p.add_argument("--name", help="builtin name (see --group)")
    p.add_argument("--vars", type=int, choices=(1, 2, 3), help="number of independent variables")
    if group_default is not None:
        p.add_argument("--group", choices=sorted(BUILTINS), default=group_default,
                       help="namespace for --name")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="jetinv", description="Exact differential invariants of forms and curves.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--plain", action="store_true", help="print the bare result")
    common.add_argument("--timeout-seconds", type=float, default=None)
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", parents=[common], help="evaluate a named or parsed invariant")
    _add_target(p, "sl2")
    p.add_argument("--at", help="point, e.g. 'x=1,y=0,u[0,0]=2'")
    p.add_argument("--jet-of", help="evaluate on the jet of this polynomial")
    p.add_argument("--base", help="base point for --jet-of, e.g. '1,2'")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("restrict", parents=[common], help="restrict an invariant to a form")
    _add_target(p, "sl2")
    p.add_argument("--form", required=True)
    p.add_argument("--degree", type=int)
    p.set_defaults(func=cmd_restrict)

    p = sub.add_parser("discriminant", parents=[common])
    p.add_argument("--form", required=True)
    p.add_argument("--degree", type=int)
    p.set_defaults(func=cmd_discriminant)

    p = sub.add_parser("resultant", parents=[common])
    p.add_argument("--form1", required=True)
    p.add_argument("--form2", required=True)
    p.add_argument("--degree1", type=int)
    p.add_argument("--degree2", type=int)
    p.set_defaults(func=cmd_resultant)

    p = sub.add_parser("lie-check", parents=[common], help="check X^(k)(I) = 0")
    _add_target(p)
    p.add_argument("--group", choices=sorted(ALGEBRAS), required=True)
    p.set_defaults(func=cmd_lie_check)

    p = sub.add_parser("weight", parents=[common])
    _add_target(p, "sl2")
    p.add_argument("--field", choices=("scaling", "gamma"), default="scaling")
    p.set_defaults(func=cmd_weight)

    p = sub.add_parser("tresse", parents=[common], help="Tresse derivatives d g / d f_i")
    p.add_argument("--invariants", required=True, help="f1,f2[,f3]")
    p.add_argument("--apply", required=True)
    p.add_argument("--vars", type=int, choices=(1, 2, 3))
    p.set_defaults(func=cmd_tresse)

    p = sub.add_parser("syzygy", help="verify or discover relations")
    ssub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = ssub.add_parser("verify", parents=[common])
    q.add_argument("--case", choices=("cubic", "quartic"), required=True)
    q.set_defaults(func=cmd_syzygy_verify)
    q = ssub.add_parser("discover", parents=[common])
    q.add_argument("--bound", type=int, default=5)
    q.add_argument("--no-weights", action="store_true")
    q.set_defaults(func=cmd_syzygy_discover)

    p = sub.add_parser("equiv", parents=[common], help="SL2-equivalence of binary forms")
    p.add_argument("--degree", type=int, choices=(3, 4), required=True)
    p.add_argument("--form1", required=True)
    p.add_argument("--form2", required=True)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("sl3", help="SL3 invariants")
    ssub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = ssub.add_parser("generators", parents=[common])
    q.set_defaults(func=cmd_sl3_generators)
    return top


def _command_name(argv: Sequence[str]) -> str:
    words = [a for a in argv if not a.startswith("-")]
    if words[:1] in (["syzygy"], ["sl3"]):
        return " ".join(words[:2])
    return words[0] if words else ""


class _Alarm(Exception):
    pass


def _on_alarm(signum, frame):
    raise _Alarm()


def run_command(argv: Sequence[str]) -> CommandResult:
    """Run one command and return its result; never raises for bad input."""
    argv = list(argv)
    res = CommandResult("ok", _command_name(argv))
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        return CommandResult("error", res.command, {"message": str(e)}, [], "usage")
    res.command = args.command + (f" {args.action}" if getattr(args, "action", None) else "")
    timer = args.timeout_seconds and hasattr(signal, "SIGALRM")
    if timer:
        old = signal.signal(signal.SIGALRM, _on_alarm)
        signal.setitimer(signal.ITIMER_REAL, args.timeout_seconds)
    try:
        args.func(args, res)
    except (_Alarm, syzygy.BudgetExceeded):
        res = _fail(res, "budget-exceeded", f"time budget of {args.timeout_seconds}s exceeded")
    except UsageError as e:
        res = _fail(res, "usage", str(e))
    except ParseError as e:
        res = _fail(res, "parse-error", str(e))
    except (UnknownVariable, LookupError) as e:
        res = _fail(res, "unknown-name", str(e.args[0] if e.args else e))
    except formsalg.FormError as e:
        res = _fail(res, "invalid-form", str(e))
    except (JetError, ValueError, ZeroDivisionError) as e:
        res = _fail(res, "invalid-input", str(e))
    except Exception as e:  # pragma: no cover - reported, not hidden
        res = _fail(res, "internal-error", f"{type(e).__name__}: {e}")
    finally:
        if timer:
            signal.setitimer(signal.ITIMER_REAL, 0)
            signal.signal(signal.SIGALRM, old)
    return res


def _fail(res: CommandResult, reason: str, message: str) -> CommandResult:
    return CommandResult("error", res.command, {"message": message}, res.diagnostics, reason)


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    res = run_command(argv)
    if "--plain" in argv:
        if res.status == "ok":
            print(res.plain if res.plain is not None else res.to_json())
        else:
            print(f"error ({res.reason}): {res.to_dict()['result'].get('message', '')}",
                  file=sys.stderr)
    else:
        print(res.to_json())
    return res.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
