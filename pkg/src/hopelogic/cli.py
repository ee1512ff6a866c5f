"""Command-line front end.

Exit codes: 0 success / formula true / no countermodel, 1 formula false /
countermodel found / scenario failure, 2 usage, input or parse error,
3 a model that is not in KH.
"""
from __future__ import annotations

import argparse
import logging
import re
import sys
from dataclasses import dataclass, field

from . import checker, io, scenarios, update
from .dot import to_dot
from .kripke import KripkeModel, ModelError
from .syntax import FormulaSyntaxError, parse, to_text
from .translate import translate

OK, FALSE, USAGE, INVALID = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message, code=USAGE):
        super().__init__(message)
        self.code = code


@dataclass
class Config:
    seed: int = 0
    bounds_worlds: int = 4
    bounds_models: int = 20000
    cross_check: bool = False
    fmt: str = "human"
    trace: bool = False


@dataclass
class Workspace:
    """Models and update models loaded for one command, plus its settings."""

    config: Config = field(default_factory=Config)
    models: dict = field(default_factory=dict)
    updates: dict = field(default_factory=dict)

    def load_model(self, path) -> KripkeModel:
        try:
            m = io.load_model(path)
        except FileNotFoundError:
            raise CliError(f"{path}: no such file") from None
        except ModelError as exc:
            if exc.report is not None:
                raise CliError(f"{path}: {exc}", INVALID) from None
            raise CliError(f"{path}: {exc}") from None
        if path in self.models:
            raise CliError(f"model {path!r} loaded twice")
        self.models[path] = m
        return m

    def load_updates(self, paths, agents=None, props=None):
        for path in paths or ():
            try:
                U = io.load_update(path, agents, props, self.updates)
            except FileNotFoundError:
                raise CliError(f"{path}: no such file") from None
            if U.name in self.updates:
                raise CliError(f"update model name {U.name!r} used twice")
            self.updates[U.name] = U

    def parse(self, text, agents, props=None):
        return parse(text, agents, props, self.updates)


def _emit(ws: Workspace, human: str, structured: object, out=None):
    text = io.dump_json(structured) if ws.config.fmt == "structured" else human.rstrip("\n") + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_validate(ws: Workspace, args) -> int:
    try:
        doc = io.load_json(args.model)
    except FileNotFoundError:
        raise CliError(f"{args.model}: no such file") from None
    report = io.validate_dict(doc)
    structured = {
        "ok": report.ok,
        "violations": [
            {"condition": v.condition, "agent": v.agent, "witness": list(v.witness)} for v in report
        ],
    }
    _emit(ws, str(report), structured)
    return OK if report.ok else INVALID


def cmd_eval(ws: Workspace, args) -> int:
    M = ws.load_model(args.model)
    ws.load_updates(args.update, M.agents)
    phi = ws.parse(args.formula, M.agents)
    if args.world == "*":
        res = checker.valid_in_model(M, phi)
        if ws.config.cross_check:
            for w in M.worlds:
                checker.evaluate(M, w, phi, cross_check=True)
        human = "valid" if res else f"not valid (fails at {res.witness})"
        _emit(ws, human, {"valid": res.valid, "witness": res.witness})
        return OK if res else FALSE
    value = checker.evaluate(M, args.world, phi, cross_check=ws.config.cross_check)
    _emit(ws, "true" if value else "false", {"world": args.world, "value": value})
    return OK if value else FALSE


def cmd_update(ws: Workspace, args) -> int:
    M = ws.load_model(args.model)
    ws.load_updates(args.update, M.agents)
    if (args.public is None) == (args.with_model is None):
        raise CliError("give exactly one of --public or --with")
    if args.public is not None:
        vec = io.vector_from_list(args.public, M.agents, None, ws.updates)
        result = update.apply_public(M, vec)
    else:
        U = ws.updates.get(args.with_model)
        if U is None:
            raise CliError(f"unknown update model {args.with_model!r}; load it with --update")
        result = update.product(M, U)
    report = io.validate_dict(io.model_to_dict(result))
    if not report.ok:
        sys.stderr.write(f"updated model is not in KH:\n{report}\n")
        return INVALID
    doc = io.model_to_dict(result)
    text = io.dump_json(doc)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        if ws.config.fmt == "human":
            sys.stdout.write(f"wrote {len(result.worlds)} worlds to {args.output}\n")
    else:
        sys.stdout.write(text)
    return OK


def cmd_translate(ws: Workspace, args) -> int:
    agents = args.agents.split(",") if args.agents else None
    ws.load_updates(args.update, agents)
    if agents is None:
        first = next(iter(ws.updates.values()), None)
        agents = list(first.agents) if first else None
    if agents is None:
        agents = _guess_agents(args.formula)
    phi = ws.parse(args.formula, agents)
    static, trace = translate(phi, agents)
    lines = [to_text(static)]
    if ws.config.trace:
        lines += ["# trace"] + trace.lines()
    structured = {"formula": to_text(static)}
    if ws.config.trace:
        structured["trace"] = [
            {"rule": s.rule, "position": list(s.position), "before": s.before, "after": s.after} for s in trace
        ]
    _emit(ws, "\n".join(lines), structured)
    return OK


def _guess_agents(text):
    # agents named in modal operators, in sorted order
    return sorted(set(re.findall(r"(?:Kh|Hh|K|H|B)\{\s*([A-Za-z_]\w*|\d+)\s*\}", text)))


def cmd_countermodel(ws: Workspace, args) -> int:
    agents = args.agents.split(",") if args.agents else _guess_agents(args.formula) or ["a"]
    ws.load_updates(args.update, agents)
    phi = ws.parse(args.formula, agents)
    bounds = checker.SearchBounds(
        max_worlds=ws.config.bounds_worlds,
        max_models=ws.config.bounds_models,
        max_agents=max(3, len(agents)),
        seed=ws.config.seed,
    )
    res = checker.find_countermodel(phi, agents, None, bounds)
    if not res.found:
        human = (f"none within bounds ({res.examined} models examined, "
                 f"exhaustive up to {res.exhaustive_up_to} worlds)")
        _emit(ws, human, {"found": False, "examined": res.examined,
                          "exhaustive_up_to": res.exhaustive_up_to})
        return OK
    doc = io.model_to_dict(res.model)
    if args.output:
        io.dump_json(doc, args.output)
    human = f"countermodel at world {res.world}:\n{io.dump_json(doc)}"
    _emit(ws, human, {"found": True, "world": res.world, "model": doc, "examined": res.examined})
    return FALSE


def scenario_document(s: scenarios.Scenario) -> dict:
    return {
        "name": s.name,
        "summary": s.summary,
        "model": io.model_to_dict(s.model),
        "updates": {k: io.update_to_dict(U) for k, U in s.updates.items()},
        "assertions": [
            {"world": a.world, "formula": a.formula, "expected": a.expected, "tag": a.tag}
            for a in s.assertions
        ],
        "figures": [
            {
                "tag": f.tag,
                "public": list(f.public) if f.public is not None else None,
                "update_model": f.update_model,
                "expected_correct": {i: sorted(v) for i, v in f.expected_correct.items()},
            }
            for f in s.figures
        ],
    }


def cmd_scenario(ws: Workspace, args) -> int:
    if args.action == "list":
        rows = [f"{s.name:<20} {s.summary}" for s in scenarios.builtin_scenarios()]
        _emit(ws, "\n".join(rows), scenarios.scenario_names())
        return OK
    if args.action == "export":
        if not args.name:
            raise CliError("scenario export needs a name")
        s = _scenario(args.name)
        doc = scenario_document(s)
        if args.output:
            io.dump_json(doc, args.output)
        else:
            sys.stdout.write(io.dump_json(doc))
        return OK
    if args.all == bool(args.name):
        raise CliError("scenario run needs a name or --all")
    chosen = scenarios.builtin_scenarios() if args.all else [_scenario(args.name)]
    results = [s.run(cross_check=ws.config.cross_check) for s in chosen]
    human = []
    for r in results:
        human.append(f"== {r.name}: {'PASS' if r.ok else 'FAIL'}")
        human.append(r.table())
    passed = sum(r.ok for r in results)
    human.append(f"{passed}/{len(results)} scenarios passed")
    structured = [
        {"name": r.name, "ok": r.ok,
         "checks": [{"kind": o.kind, "tag": o.tag, "world": o.world, "ok": o.ok} for o in r.outcomes]}
        for r in results
    ]
    _emit(ws, "\n".join(human), structured)
    return OK if passed == len(results) else FALSE


def _scenario(name):
    try:
        return scenarios.scenario_by_name(name)
    except KeyError:
        raise CliError(f"unknown scenario {name!r}; try 'scenario list'") from None


def cmd_export_dot(ws: Workspace, args) -> int:
    M = ws.load_model(args.model)
    text = to_dot(M)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--bounds-worlds", type=int, default=4, help="largest model size to search")
    common.add_argument("--bounds-models", type=int, default=20000, help="model budget for the search")
    common.add_argument("--cross-check", action="store_true",
                        help="also evaluate through the static translation and compare")
    common.add_argument("--format", choices=("human", "structured"), default="human")
    common.add_argument("--trace", action="store_true", help="print translation rewrite steps")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="hopelogic", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check a model document against KH")
    s.add_argument("model")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("eval", parents=[common], help="evaluate a formula at a world ('*' for all)")
    s.add_argument("model")
    s.add_argument("world")
    s.add_argument("formula")
    s.add_argument("--update", action="append", metavar="FILE", help="update model document")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("update", parents=[common], help="apply a public update or an update model")
    s.add_argument("model")
    s.add_argument("--public", nargs="+", metavar="FORMULA", help="one hope update formula per agent")
    s.add_argument("--with", dest="with_model", metavar="NAME", help="name of a loaded update model")
    s.add_argument("--update", action="append", metavar="FILE", help="update model document")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_update)

    s = sub.add_parser("translate", parents=[common], help="rewrite into the static language")
    s.add_argument("formula")
    s.add_argument("--agents", help="comma separated agent order for public updates")
    s.add_argument("--update", action="append", metavar="FILE", help="update model document")
    s.set_defaults(func=cmd_translate)

    s = sub.add_parser("countermodel", parents=[common], help="bounded search for a falsifying model")
    s.add_argument("formula")
    s.add_argument("--agents", help="comma separated agents")
    s.add_argument("--update", action="append", metavar="FILE", help="update model document")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_countermodel)

    s = sub.add_parser("scenario", parents=[common], help="list, run or export built-in scenarios")
    s.add_argument("action", choices=("list", "run", "export"))
    s.add_argument("name", nargs="?")
    s.add_argument("--all", action="store_true")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_scenario)

    s = sub.add_parser("export-dot", parents=[common], help="Graphviz rendering of a model")
    s.add_argument("model")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    ws = Workspace(Config(
        seed=args.seed, bounds_worlds=args.bounds_worlds, bounds_models=args.bounds_models,
        cross_check=args.cross_check, fmt=args.format, trace=args.trace,
    ))
    try:
        return args.func(ws, args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except ModelError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return INVALID if exc.report is not None else USAGE
    except (FormulaSyntaxError, io.DocumentError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE
    except checker.CrossCheckError as exc:
        sys.stderr.write(f"cross-check failed: {exc}\n")
        return FALSE


if __name__ == "__main__":
    sys.exit(main())
