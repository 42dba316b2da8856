"""Command-line interface: ``idl <command> ...``.

Exit codes: 0 success / model, 1 negative verdict, 2 usage, parse or
resource error.  ``--format json`` prints one JSON object per line instead of
text.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .analysis import check_well_defining, check_well_founded, classify, split_theory, strata
from .embeddings import (
    import_abductive,
    import_deductive_db,
    import_logic_program,
    parse_abductive,
    parse_deductive_db,
    parse_fluent_spec,
    parse_logic_program,
)
from .engine import DEFAULT_MAX_NODES, check, enumerate_models, enumerate_models_naive
from .errors import IDLogicError
from .grounder import DEFAULT_MAX_RULES, ground_definition, ground_literal_oracle, render_ground_atom
from .parser import parse_formula, render_definition, render_formula, render_theory
from .selftest import literal_lists, run_selftest, sequential_wfm
from .structures import TruthValue, parse_structure, render_structure
from .transforms import clark_completion, compose, equivalence_countermodel, tautology_countermodel

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    max_rules: int = DEFAULT_MAX_RULES
    max_nodes: int = DEFAULT_MAX_NODES
    strict: bool = True
    format: str = "text"
    seed: int = 0

    def __post_init__(self):
        if self.max_rules <= 0 or self.max_nodes <= 0:
            raise ValueError("caps must be positive")
        if self.format not in ("text", "json"):
            raise ValueError(f"unknown output format {self.format!r}")


class Output:
    def __init__(self, config: RunConfig, stream=None):
        self.json = config.format == "json"
        self.stream = stream or sys.stdout

    def emit(self, text: str, record: dict) -> None:
        if self.json:
            print(json.dumps(record, sort_keys=True), file=self.stream)
        else:
            print(text, file=self.stream)


def _read(path: str) -> str:
    return Path(path).read_text()


def _theory(path: str):
    from .parser import parse_theory

    return parse_theory(_read(path))


def _structure(path: str):
    return parse_structure(_read(path))


def _fmt_set(items) -> str:
    return "{" + ", ".join(items) + "}"


# -- commands ----------------------------------------------------------------


def cmd_parse(args, config, out) -> int:
    text = _read(args.file)
    if args.file.endswith(".struct"):
        rendered = render_structure(parse_structure(text))
        out.emit(rendered.rstrip("\n"), {"kind": "structure", "text": rendered})
    else:
        from .parser import parse_theory

        t = parse_theory(text)
        t.validate()
        rendered = render_theory(t)
        out.emit(rendered.rstrip("\n"), {"kind": "theory", "text": rendered})
    return EXIT_OK


def cmd_ground(args, config, out) -> int:
    t = _theory(args.theory)
    s = _structure(args.structure).check_vocabulary(t.vocabulary)
    for i, d in enumerate(t.definitions, 1):
        if len(t.definitions) > 1 and not out.json:
            print(f"// definition {i}: {', '.join(d.defined)}", file=out.stream)
        if args.literal_oracle:
            lg = ground_literal_oracle(d, s, config.max_rules)
            for head, body in lg.rules:
                lits = sorted(("" if sign else "~") + render_ground_atom(a) for a, sign in body)
                head_text = render_ground_atom(head)
                out.emit(f"{head_text} <- {_fmt_set(lits)}.", {"definition": i, "head": head_text, "body": lits})
        else:
            g = ground_definition(d, s, config.max_rules)
            for r in g.rules:
                out.emit(str(r), {"definition": i, "head": render_ground_atom(r.head), "body": render_formula(r.body)})
    return EXIT_OK


def cmd_wfm(args, config, out) -> int:
    t = _theory(args.theory)
    w = sequential_wfm(t, _structure(args.structure), config.max_rules)
    lists = literal_lists(w, t.defined_predicates())
    for key in ("true", "false", "unknown"):
        out.emit(f"{key}: {_fmt_set(lists[key])}", {"value": key, "atoms": lists[key]})
    return EXIT_OK


def cmd_check(args, config, out) -> int:
    v = check(_theory(args.theory), _structure(args.structure), config.max_rules, config.strict)
    text = v.status if not v.reason else f"{v.status}: {v.reason}"
    out.emit(text, {"status": v.status, "reason": v.reason, "justified": v.justified})
    return EXIT_OK if v.status == "MODEL" else EXIT_NEGATIVE


def cmd_models(args, config, out) -> int:
    t = _theory(args.theory)
    template = _structure(args.template)
    search = enumerate_models_naive if args.naive else enumerate_models
    count = 0
    for m in search(t, template, config.max_nodes, config.max_rules):
        count += 1
        true = [str(a) for a in m.true_atoms(sorted(t.vocabulary.predicates))]
        if out.json:
            out.emit("", {"model": count, "true": true})
        else:
            print(f"// model {count}", file=out.stream)
            print(render_structure(m), end="", file=out.stream)
        if args.limit and count >= args.limit:
            break
    if not out.json:
        print(f"// {count} model(s)", file=out.stream)
    return EXIT_OK if count else EXIT_NEGATIVE


def cmd_classify(args, config, out) -> int:
    t = _theory(args.theory)
    s = _structure(args.structure).check_vocabulary(t.vocabulary) if args.structure else None
    for i, d in enumerate(t.definitions, 1):
        c = classify(d, args.order)
        record = {"definition": i, "defines": list(d.defined), "classes": c.flags(), "strata": strata(d)}
        text = f"definition {i} ({', '.join(d.defined)}): {' '.join(c.flags())}"
        if s is not None:
            wf = check_well_founded(d, s, config.max_rules)
            ok, witness = check_well_defining(d, [s], config.max_rules)
            unknown = [] if ok else [str(a) for a in witness.atoms(d.defined) if witness[a] is TruthValue.UNKNOWN]
            stuck = [str(a) for a in wf.stuck]
            record.update(
                {"well_founded": wf.ok, "layers": len(wf.layers), "stuck": stuck, "well_defining": ok, "unknown": unknown}
            )
            text += f"; well-founded: {f'yes ({len(wf.layers)} layers)' if wf.ok else 'no, stuck at ' + ', '.join(stuck)}"
            text += f"; well-defining: {'yes' if ok else 'no, unknown ' + ', '.join(unknown)}"
        out.emit(text, record)
    parts = split_theory(t)
    out.emit(
        f"split: {len(parts)} part(s)",
        {"split": [[list(d.defined) for d in p.definitions] for p in parts]},
    )
    return EXIT_OK


def cmd_complete(args, config, out) -> int:
    t = _theory(args.theory)
    for i, d in enumerate(t.definitions, 1):
        for f in clark_completion(d, t.vocabulary.predicates, t.vocabulary.names()).sentences:
            out.emit(render_formula(f), {"definition": i, "sentence": render_formula(f)})
    return EXIT_OK


def _select_definitions(t, spec: str | None) -> list:
    if not spec:
        return list(t.definitions)
    chosen = []
    for item in spec.split(","):
        item = item.strip()
        if item.isdigit():
            k = int(item)
            if not 1 <= k <= len(t.definitions):
                raise IDLogicError(f"no definition number {k}")
            chosen.append(t.definitions[k - 1])
        else:
            found = [d for d in t.definitions if item in d.defined]
            if not found:
                raise IDLogicError(f"no definition defines {item}")
            chosen.extend(d for d in found if d not in chosen)
    return chosen


def cmd_compose(args, config, out) -> int:
    t = _theory(args.theory)
    merged = compose(_select_definitions(t, args.defs))
    text = render_definition(merged)
    out.emit(text, {"definition": text})
    return EXIT_OK


def cmd_equiv(args, config, out) -> int:
    f = parse_formula(args.left)
    g = parse_formula(args.right)
    if args.kleene_iff:
        from .syntax import Iff

        counter = tautology_countermodel(Iff(f, g))
    else:
        counter = equivalence_countermodel(f, g)
    if counter is None:
        out.emit("equivalent", {"equivalent": True})
        return EXIT_OK
    shown = {render_formula(k): str(v) for k, v in counter.items()}
    text = "not equivalent; counter-assignment: " + ", ".join(f"{k} = {v}" for k, v in shown.items())
    out.emit(text, {"equivalent": False, "assignment": shown})
    return EXIT_NEGATIVE


def cmd_import(args, config, out) -> int:
    text = _read(args.file)
    if args.kind == "lp":
        rules, vocab = parse_logic_program(text)
        t = import_logic_program(rules, vocab)
    elif args.kind == "abd":
        t = import_abductive(parse_abductive(text))
    else:
        db, vocab = parse_deductive_db(text)
        t = import_deductive_db(db, vocab)
    rendered = render_theory(t)
    out.emit(rendered.rstrip("\n"), {"theory": rendered})
    return EXIT_OK


def cmd_sitcalc(args, config, out) -> int:
    rendered = render_theory(parse_fluent_spec(_read(args.file)).theory())
    out.emit(rendered.rstrip("\n"), {"theory": rendered})
    return EXIT_OK


def cmd_selftest(args, config, out) -> int:
    outcomes = run_selftest(config.seed, args.count, config.max_rules, config.max_nodes)
    for o in outcomes:
        text = f"{'ok  ' if o.ok else 'FAIL'} {o.name}" + (f"  ({o.detail})" if o.detail else "")
        out.emit(text, {"name": o.name, "ok": o.ok, "detail": o.detail})
    return EXIT_OK if all(o.ok for o in outcomes) else EXIT_NEGATIVE


# -- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-rules", type=int, default=argparse.SUPPRESS, help="cap on ground rules")
    common.add_argument("--max-nodes", type=int, default=argparse.SUPPRESS, help="cap on model-search nodes")
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS, help="output format")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for randomized checks")
    common.add_argument(
        "--lenient-sentences",
        action="store_true",
        default=argparse.SUPPRESS,
        help="accept axioms that are unknown (default: axioms must be true)",
    )

    parser = argparse.ArgumentParser(prog="idl", description="ID-logic toolkit", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse and pretty-print a theory or structure")
    p.add_argument("file")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("ground", parents=[common], help="print the grounding of each definition")
    p.add_argument("theory")
    p.add_argument("structure")
    p.add_argument("--literal-oracle", action="store_true", help="literal-set grounding (exponential)")
    p.set_defaults(func=cmd_ground)

    p = sub.add_parser("wfm", parents=[common], help="justified interpretation extending a structure")
    p.add_argument("theory")
    p.add_argument("structure")
    p.set_defaults(func=cmd_wfm)

    p = sub.add_parser("check", parents=[common], help="MODEL / NOT-MODEL / PARTIAL verdict")
    p.add_argument("theory")
    p.add_argument("structure")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("models", parents=[common], help="enumerate models completing a template")
    p.add_argument("theory")
    p.add_argument("template")
    p.add_argument("--limit", type=int, default=0, help="stop after N models")
    p.add_argument("--naive", action="store_true", help="use generate-and-test")
    p.set_defaults(func=cmd_models)

    p = sub.add_parser("classify", parents=[common], help="syntactic classes and, given a structure, well-foundedness")
    p.add_argument("theory")
    p.add_argument("--structure")
    p.add_argument("--order", help="order predicate for the relativized-definition check")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("complete", parents=[common], help="print Clark completion sentences")
    p.add_argument("theory")
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("compose", parents=[common], help="merge definitions into one")
    p.add_argument("theory")
    p.add_argument("--defs", help="comma-separated definition numbers (1-based) or defined predicates")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("equiv", parents=[common], help="three-valued equivalence of two formulas")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--kleene-iff", action="store_true", help="require LEFT <=> RIGHT to be true under all assignments")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("import", parents=[common], help="translate a logic program, abductive framework or database")
    p.add_argument("kind", choices=("lp", "abd", "ddb"))
    p.add_argument("file")
    p.set_defaults(func=cmd_import)

    p = sub.add_parser("sitcalc", parents=[common], help="frame definition from a fluent specification")
    p.add_argument("file")
    p.set_defaults(func=cmd_sitcalc)

    p = sub.add_parser("selftest", parents=[common], help="replay the corpus and the oracle checks")
    p.add_argument("--count", type=int, default=200, help="number of random definitions")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(
            max_rules=getattr(args, "max_rules", DEFAULT_MAX_RULES),
            max_nodes=getattr(args, "max_nodes", DEFAULT_MAX_NODES),
            strict=not getattr(args, "lenient_sentences", False),
            format=getattr(args, "format", "text"),
            seed=getattr(args, "seed", 0),
        )
    except ValueError as e:
        print(f"idl: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args, config, Output(config))
    except (IDLogicError, OSError) as e:
        print(f"idl: error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
