"""Command-line front door.

Exit codes: 0 success, 1 domain errors (violations, conflicts, type errors),
2 usage errors.  Machine output goes to stdout, diagnostics to stderr, and
--json switches both to canonical JSON.  The knowledge base is resolved from
--kb, then the LDA_KB environment variable, then ./kb/core.kb.json, then the
packaged seed.
"""

import argparse
import json
import os
import pathlib
import sys

from . import kb as kbmod
from . import ppbe as ppbemod
from .description import load_description_file, save_description
from .earley import parse_program
from .errors import KbValidationError, LdaError
from .interp import DEFAULT_FUEL, evaluate
from .printing import format_term
from .session import (Decision, apply_decision, decisions_from_json,
                      decisions_to_json, diagnostics, finalize, open_session, replay)
from .typecheck import typecheck


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_help(sys.stderr)
        return 2
    try:
        return args.func(args) or 0
    except KbValidationError as e:
        _emit_error(args, e)
        return 1
    except LdaError as e:
        _emit_error(args, e)
        return 1
    except FileNotFoundError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


def _emit_error(args, e):
    if getattr(args, "json", False):
        print(_dumps(e.to_json()), file=sys.stderr)
    else:
        print("error [%s]: %s" % (e.code, e.message), file=sys.stderr)
        for key, value in e.details.items():
            if value:
                print("  %s: %s" % (key, json.dumps(value, sort_keys=True, default=str)),
                      file=sys.stderr)


def _dumps(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _out(args, obj, human):
    if args.json:
        print(_dumps(obj))
    else:
        print(human, end="" if human.endswith("\n") else "\n")


def default_kb_path():
    env = os.environ.get("LDA_KB")
    if env:
        return env
    local = pathlib.Path("kb/core.kb.json")
    if local.exists():
        return str(local)
    return str(pathlib.Path(__file__).parent / "data" / "core.kb.json")


def _load_kb(args):
    return kbmod.load_kb_file(args.kb or default_kb_path())


def _build_parser():
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--json", action="store_true", help="canonical JSON output")
    shared.add_argument("--kb", help="knowledge base document path")
    shared.add_argument("--fuel", type=int, default=DEFAULT_FUEL,
                        help="evaluation premise budget")

    parser = argparse.ArgumentParser(prog="lda", parents=[shared],
                                     description="language design assistant workbench")
    groups = parser.add_subparsers(dest="group")

    g_kb = groups.add_parser("kb", help="browse and validate the knowledge base")
    kb_cmds = g_kb.add_subparsers(dest="cmd")
    p = kb_cmds.add_parser("list", parents=[shared])
    p.set_defaults(func=cmd_kb_list)
    p = kb_cmds.add_parser("query", parents=[shared])
    p.add_argument("--kind")
    p.add_argument("--text")
    p.add_argument("--related", metavar="ID:REL:DIR")
    p.set_defaults(func=cmd_kb_query)
    p = kb_cmds.add_parser("validate", parents=[shared])
    p.set_defaults(func=cmd_kb_validate)

    g_design = groups.add_parser("design", help="run design sessions over decision logs")
    d_cmds = g_design.add_subparsers(dest="cmd")
    p = d_cmds.add_parser("new", parents=[shared])
    p.add_argument("log")
    p.set_defaults(func=cmd_design_new)
    p = d_cmds.add_parser("apply", parents=[shared])
    p.add_argument("log")
    p.add_argument("--select", action=_Step, dest="steps")
    p.add_argument("--deselect", action=_Step, dest="steps")
    p.add_argument("--accept", action=_Step, dest="steps")
    p.add_argument("--set-param", action=_Step, dest="steps", metavar="C:P=V")
    p.add_argument("--rename", action=_Step, dest="steps", metavar="C:SLOT=NEW")
    p.set_defaults(func=cmd_design_apply)
    p = d_cmds.add_parser("check", parents=[shared])
    p.add_argument("log")
    p.set_defaults(func=cmd_design_check)
    p = d_cmds.add_parser("finalize", parents=[shared])
    p.add_argument("log")
    p.add_argument("--name", required=True)
    p.add_argument("--start", required=True)
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_design_finalize)

    g_run = groups.add_parser("run", help="drive the generated toolchain")
    r_cmds = g_run.add_subparsers(dest="cmd")
    for name, func in (("parse", cmd_run_parse), ("format", cmd_run_format),
                       ("typecheck", cmd_run_typecheck), ("eval", cmd_run_eval)):
        p = r_cmds.add_parser(name, parents=[shared])
        p.add_argument("--lang", required=True, help="compiled .desc.json")
        p.add_argument("file")
        p.set_defaults(func=func)

    g_ppbe = groups.add_parser("ppbe", help="prettyprinting by example")
    p_cmds = g_ppbe.add_subparsers(dest="cmd")
    p = p_cmds.add_parser("collect", parents=[shared])
    p.add_argument("--lang", required=True)
    p.add_argument("corpus", help="directory of .ex files")
    p.set_defaults(func=cmd_ppbe_collect)
    p = p_cmds.add_parser("infer", parents=[shared])
    p.add_argument("--lang", required=True)
    p.add_argument("corpus")
    p.add_argument("--overlay", metavar="OUT",
                   help="write the description with inferred rules filling gaps")
    p.set_defaults(func=cmd_ppbe_infer)

    p = groups.add_parser("serve", parents=[shared], help="HTTP session API")
    p.add_argument("--port", type=int, default=8675)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--snapshot-dir")
    p.set_defaults(func=cmd_serve)
    return parser


class _Step(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        steps = getattr(namespace, "steps", None) or []
        steps.append((option_string.lstrip("-"), values))
        namespace.steps = steps


# --- kb ------------------------------------------------------------------------

def cmd_kb_list(args):
    kb = _load_kb(args)
    rows = [{"id": c.id, "kind": c.kind, "description": c.description}
            for c in sorted(kb.concepts.values(), key=lambda c: c.id)]
    _out(args, rows, "\n".join("%-24s %-14s %s" % (r["id"], r["kind"], r["description"])
                               for r in rows))


def cmd_kb_query(args):
    kb = _load_kb(args)
    parts = []
    if args.kind:
        parts.append(kbmod.ByKind(args.kind))
    if args.text:
        parts.append(kbmod.ByText(args.text))
    if args.related:
        cid, rel, direction = (args.related.split(":") + ["outgoing"])[:3]
        parts.append(kbmod.RelatedTo(cid, rel, direction))
    if not parts:
        print("error: give at least one of --kind/--text/--related", file=sys.stderr)
        return 2
    query = parts[0]
    for part in parts[1:]:
        query = kbmod.And(query, part)
    ids = kbmod.query_kb(kb, query)
    _out(args, ids, "\n".join(ids))


def cmd_kb_validate(args):
    path = args.kb or default_kb_path()
    try:
        kb = kbmod.load_kb_file(path)
    except KbValidationError as e:
        _out(args, {"ok": False, "entries": e.breaches},
             "\n".join("%(path)s: %(message)s" % b for b in e.breaches))
        return 1
    report = kbmod.validate_kb(kb)
    _out(args, report.to_json(), "ok: %d concepts, no breaches" % len(kb.concepts))
    return 0


# --- design ----------------------------------------------------------------------

def _read_log(path):
    with open(path, encoding="utf-8") as f:
        return decisions_from_json(f.read())


def _write_log(path, log):
    with open(path, "w", encoding="utf-8") as f:
        f.write(decisions_to_json(log) + "\n")


def cmd_design_new(args):
    _write_log(args.log, [])
    _out(args, {"log": args.log, "decisions": 0}, "created %s" % args.log)


def _parse_step(kind, value, seq):
    if kind in ("select", "deselect", "accept"):
        action = "accept-consequence" if kind == "accept" else kind
        return Decision(seq, action, value)
    concept, _, rest = value.partition(":")
    key, _, val = rest.partition("=")
    if kind == "set-param":
        return Decision(seq, "set-param", concept, param=key, value=val)
    return Decision(seq, "rename-token", concept, slot=key, new=val)


def cmd_design_apply(args):
    kb = _load_kb(args)
    log = _read_log(args.log)
    session = replay(kb, log)
    updates = []
    for kind, value in (args.steps or []):
        decision = _parse_step(kind, value, len(session.log) + 1)
        update = apply_decision(session, decision)
        session = update.session
        updates.append(update.to_json())
    _write_log(args.log, session.log)
    report = diagnostics(session)
    payload = {"state-hash": session.state_hash, "updates": updates,
               "diagnostics": report.to_json()}
    _out(args, payload, _human_diagnostics(session, report))
    return 1 if report.violations else 0


def _human_diagnostics(session, report):
    lines = ["state-hash: %s" % session.state_hash]
    for kind, ids in sorted(report.selected_by_kind.items()):
        lines.append("selected %s: %s" % (kind, ", ".join(ids)))
    lines.append("pending: %s" % (", ".join(report.pending) or "(none)"))
    for v in report.violations:
        lines.append("violation [%s] %s" % (v.kind, v.message))
    for aid, message, severity in report.advice:
        lines.append("advice [%s] %s: %s" % (severity, aid, message))
    if not report.violations:
        lines.append("no violations")
    return "\n".join(lines)


def cmd_design_check(args):
    kb = _load_kb(args)
    session = replay(kb, _read_log(args.log))
    report = diagnostics(session)
    _out(args, {"state-hash": session.state_hash, "diagnostics": report.to_json()},
         _human_diagnostics(session, report))
    warned = any(severity == "warning" for _, _, severity in report.advice)
    return 1 if (report.violations or warned) else 0


def cmd_design_finalize(args):
    kb = _load_kb(args)
    session = replay(kb, _read_log(args.log))
    design = finalize(session, args.name, args.start)
    from .description import compile_design
    desc = compile_design(design)
    with open(args.out, "w", encoding="utf-8") as f:
        f.write(save_description(desc) + "\n")
    payload = {"name": design.name, "start": design.start,
               "blocks": [b.concept_id for b in design.blocks],
               "productions": [p.label for p in desc.grammar.productions],
               "out": args.out}
    _out(args, payload, "wrote %s: %d blocks, %d productions"
         % (args.out, len(design.blocks), len(desc.grammar.productions)))


# --- run --------------------------------------------------------------------------

def _load_program(args):
    desc = load_description_file(args.lang)
    with open(args.file, encoding="utf-8") as f:
        return desc, f.read()


def cmd_run_parse(args):
    desc, text = _load_program(args)
    term = parse_program(desc, text)
    _out(args, term.to_json(), _show_term(term))


def _show_term(term, depth=0):
    head = "  " * depth + term.label
    if term.payload is not None:
        head += " %r" % term.payload
    return "\n".join([head] + [_show_term(c, depth + 1) for c in term.children])


def cmd_run_format(args):
    desc, text = _load_program(args)
    formatted = format_term(desc, parse_program(desc, text))
    if args.json:
        print(_dumps({"formatted": formatted}))
    else:
        sys.stdout.write(formatted)


def cmd_run_typecheck(args):
    desc, text = _load_program(args)
    report = typecheck(desc, parse_program(desc, text))
    human = report.type if report.ok else "\n".join(
        "%d:%d %s" % (e.span[0][0], e.span[0][1], e.message) if e.span else e.message
        for e in report.errors)
    _out(args, report.to_json(), human)
    return 0 if report.ok else 1


def cmd_run_eval(args):
    desc, text = _load_program(args)
    value, store = evaluate(desc, parse_program(desc, text), fuel=args.fuel)
    payload = {"result": str(value), "output": [str(v) for v in store.output],
               "store": {k: str(v) for k, v in sorted(store.vars.items())}}
    _out(args, payload, "\n".join(str(v) for v in store.output) or "(no output)")


# --- ppbe --------------------------------------------------------------------------

def _read_corpus(path):
    directory = pathlib.Path(path)
    examples = []
    for f in sorted(directory.glob("*.ex")):
        examples.append((f.name, f.read_text(encoding="utf-8")))
    return examples


def cmd_ppbe_collect(args):
    desc = load_description_file(args.lang)
    observations = ppbemod.collect_layouts(desc, _read_corpus(args.corpus))
    payload = [{"label": ob.label, "instance": ob.instance,
                "components": [{"kind": c.kind, "ref": c.ref, "text": c.text,
                                "start": list(c.start), "end": list(c.end)}
                               for c in ob.components]}
               for ob in observations]
    _out(args, payload, "\n".join("%-8s %s" % (ob.label, ob.instance)
                                  for ob in observations))


def cmd_ppbe_infer(args):
    from . import boxes
    from .description import LanguageDescription, validate_description
    desc = load_description_file(args.lang, validate=args.overlay is None)
    observations = ppbemod.collect_layouts(desc, _read_corpus(args.corpus))
    result = ppbemod.infer_rules(observations)
    coverage = ppbemod.uncovered_labels(desc.grammar, observations)
    payload = {"rules": {label: boxes.print_box(b) for label, b in result.rules.items()},
               "conflicts": [c.to_json() for c in result.conflicts],
               "coverage-gaps": coverage}
    human = "\n".join("%s = %s" % (label, boxes.print_box(b))
                      for label, b in sorted(result.rules.items()))
    if coverage:
        human += "\n# coverage gaps: %s" % ", ".join(coverage)
    for c in result.conflicts:
        human += "\n# conflict %s (%s): %s" % (
            c.label, c.dimension,
            "; ".join("%s saw %s" % w for w in c.witnesses))
    _out(args, payload, human)
    if args.overlay:
        merged = dict(result.rules)
        merged.update(desc.formatting)      # hand-written rules win
        overlay = LanguageDescription(desc.name, desc.grammar, merged, desc.typing,
                                      desc.evaluation, desc.provenance)
        report = validate_description(overlay)
        if not report.ok:
            from .errors import DescriptionInvalid
            raise DescriptionInvalid(report.entries)
        with open(args.overlay, "w", encoding="utf-8") as f:
            f.write(save_description(overlay) + "\n")
    return 1 if result.conflicts else 0


# --- serve --------------------------------------------------------------------------

def cmd_serve(args):
    import uvicorn
    from .service import make_app
    kb = _load_kb(args)
    app = make_app(kb, snapshot_dir=args.snapshot_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")


if __name__ == "__main__":
    sys.exit(main())
