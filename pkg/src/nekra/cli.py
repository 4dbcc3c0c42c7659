"""Command-line surface.

Every subcommand reads JSON input files, runs one library operation, and
writes a single JSON document to stdout (keys sorted, so output is
byte-for-byte deterministic).  Exit codes: 0 success, 1 domain errors,
2 I/O or parse errors.  NEKRA_BUDGET overrides the word-problem budget.
"""

import argparse
import json
import os
import sys

from . import abelian, embed, groupfile, rovernek, ssgroup, virtend
from .errors import NekraError, NekraParseError, ParseError


def _budget() -> ssgroup.Budget:
    raw = os.environ.get("NEKRA_BUDGET")
    if raw is None:
        return ssgroup.DEFAULT_BUDGET
    try:
        return ssgroup.Budget(max_words=int(raw))
    except ValueError:
        raise ParseError(f"NEKRA_BUDGET must be an integer, got {raw!r}") from None


def _emit(doc, pretty: bool):
    if pretty:
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        print(json.dumps(doc, sort_keys=True))


def _vertex(text: str):
    if not text.strip():
        return ()
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(","))
    except ValueError:
        raise ParseError(f"bad vertex {text!r}: expected comma-separated integers") from None


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None


def parse_group(path: str) -> ssgroup.SSPresentation:
    return groupfile.group_from_dict(_load_json(path))


def _portrait_doc(p: ssgroup.Portrait):
    doc = {"perm": list(p.perm)}
    if p.children:
        doc["children"] = [_portrait_doc(c) for c in p.children]
    return doc


def cmd_act(args):
    G = parse_group(args.group)
    w = G.word(args.word)
    return {"vertex": list(ssgroup.act(G, w, _vertex(args.vertex)))}


def cmd_mul(args):
    G = parse_group(args.group)
    w = G.word(args.word) * G.word(args.other)
    rec = ssgroup.word_recursion(G, w)
    return {
        "word": ssgroup.word_tokens(G, w),
        "perm": list(rec.perm),
        "states": [ssgroup.word_tokens(G, s) for s in rec.states],
    }


def cmd_portrait(args):
    G = parse_group(args.group)
    p = ssgroup.portrait(G, G.word(args.word), args.depth)
    if args.figure:
        from . import figures
        figures.draw_portrait(p, args.figure)
    return _portrait_doc(p)


def cmd_istrivial(args):
    G = parse_group(args.group)
    return {"result": ssgroup.is_trivial_bounded(G, G.word(args.word), _budget())}


def cmd_abelianize(args):
    G = parse_group(args.group)
    return groupfile.finab_to_dict(abelian.abelianize_group(G))


def cmd_abelianize_v(args):
    G = parse_group(args.group)
    return groupfile.finab_to_dict(abelian.abelianize_V(G))


def cmd_find_m(args):
    G = parse_group(args.group)
    return {"m": abelian.find_even_m(G)}


def cmd_duplicate(args):
    G = parse_group(args.group)
    return groupfile.group_to_dict(abelian.duplicate(G, args.m))


def cmd_v_compose(args):
    G = parse_group(args.group)
    p = groupfile.velement_from_dict(G, _load_json(args.left))
    q = groupfile.velement_from_dict(G, _load_json(args.right))
    return groupfile.velement_to_dict(rovernek.v_compose(p, q))


def cmd_v_class(args):
    G = parse_group(args.group)
    e = groupfile.velement_from_dict(G, _load_json(args.element))
    Q = abelian.abelianize_V(G)
    c = rovernek.v_ab_class(e, Q)
    return {"class": list(c.coords), "zero": c.is_zero(),
            "quotient": groupfile.finab_to_dict(Q)}


def cmd_embed_bh(args):
    G = parse_group(args.group)
    result = embed.bh_pipeline(G)
    images = {name: result.embed(ssgroup.single(i))
              for i, name in enumerate(G.gen_names)}
    if args.figure:
        from . import figures
        figures.draw_pipeline(images, args.figure)
    doc = {
        "d_prime": result.d_prime,
        "m": result.m,
        "Q": groupfile.finab_to_dict(result.Q),
        "index_H": result.index_H,
        "transversal": ([[]] if result.kk is None else
                        [ssgroup.word_tokens(result.group, t)
                         for t in result.kk.transversal]),
        "generator_images": {name: groupfile.velement_to_dict(e)
                             for name, e in images.items()},
    }
    return doc


def cmd_virtend_state(args):
    spec = groupfile.spec_from_dict(_load_json(args.spec))
    e = groupfile.affine_from_dict(spec, _load_json(args.element))
    t = _vertex(args.transversal)
    t_out, state = virtend.affine_state(spec, e, t)
    return {"t_prime": list(t_out), "state": groupfile.affine_to_dict(state)}


def cmd_virtend_check(args):
    spec = groupfile.spec_from_dict(_load_json(args.spec))
    gens_doc = _load_json(args.affine)
    gens = {name: groupfile.affine_from_dict(spec, doc)
            for name, doc in gens_doc.items()}
    G = parse_group(args.group)
    report = virtend.crosscheck_symbolic(spec, gens, G, args.depth)
    return {
        "ok": report.ok,
        "checked": report.checked,
        "mismatches": [
            {"generator": name, "vertex": list(v),
             "affine": list(got), "symbolic": list(want)}
            for name, v, got, want in report.mismatches
        ],
    }


def cmd_relators(args):
    spec = groupfile.spec_from_dict(_load_json(args.spec))
    report = virtend.relator_verify(spec)
    return {
        "ok": report.ok,
        "relators": [{"family": fam, "relator": label, "identity": flag}
                     for fam, label, flag in report.results],
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nekra",
        description="Exact arithmetic for self-similar groups and "
                    "Rover-Nekrashevych embeddings.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true",
                        help="indent the JSON report")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, parents=[common], **kwargs)
        p.set_defaults(fn=fn)
        return p

    p = add("act", cmd_act, help="apply a word to a vertex")
    p.add_argument("-g", "--group", required=True)
    p.add_argument("-w", "--word", required=True)
    p.add_argument("-v", "--vertex", required=True)

    p = add("mul", cmd_mul, help="multiply two words and report the wreath recursion")
    p.add_argument("-g", "--group", required=True)
    p.add_argument("-w", "--word", required=True)
    p.add_argument("-u", "--other", required=True)

    p = add("portrait", cmd_portrait, help="depth-k portrait of a word")
    p.add_argument("-g", "--group", required=True)
    p.add_argument("-w", "--word", required=True)
    p.add_argument("-d", "--depth", type=int, required=True)
    p.add_argument("--figure", help="also render the portrait to this image file")

    p = add("istrivial", cmd_istrivial, help="bounded word-problem check")
    p.add_argument("-g", "--group", required=True)
    p.add_argument("-w", "--word", required=True)

    p = add("abelianize", cmd_abelianize, help="abelianization of G")
    p.add_argument("-g", "--group", required=True)

    p = add("abelianize-v", cmd_abelianize_v, help="abelianization of V_d(G)")
    p.add_argument("-g", "--group", required=True)

    p = add("find-m", cmd_find_m, help="smallest even duplication factor")
    p.add_argument("-g", "--group", required=True)

    p = add("duplicate", cmd_duplicate, help="m-fold duplicated presentation")
    p.add_argument("-g", "--group", required=True)
    p.add_argument("-m", type=int, required=True)

    p = add("v-compose", cmd_v_compose, help="compose two V-elements")
    p.add_argument("-g", "--group", required=True)
    p.add_argument("-e", "--left", required=True)
    p.add_argument("-f", "--right", required=True)

    p = add("v-class", cmd_v_class, help="abelianization class of a V-element")
    p.add_argument("-g", "--group", required=True)
    p.add_argument("-e", "--element", required=True)

    p = add("embed-bh", cmd_embed_bh, help="run the full embedding pipeline")
    p.add_argument("-g", "--group", required=True)
    p.add_argument("--figure", help="render the generator images to this image file")

    p = add("virtend-state", cmd_virtend_state, help="level-1 state of an affine element")
    p.add_argument("-s", "--spec", required=True)
    p.add_argument("-e", "--element", required=True)
    p.add_argument("-t", "--transversal", required=True,
                   help="comma-separated transversal letter, entries in 0..p-1")

    p = add("virtend-check", cmd_virtend_check,
            help="cross-check affine generators against a wreath-recursion file")
    p.add_argument("-s", "--spec", required=True)
    p.add_argument("-a", "--affine", required=True,
                   help="JSON file mapping generator names to affine elements")
    p.add_argument("-g", "--group", required=True)
    p.add_argument("-d", "--depth", type=int, default=6)

    p = add("relators", cmd_relators,
            help="verify the semidirect-product relator families")
    p.add_argument("-s", "--spec", required=True)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc = args.fn(args)
    except NekraError as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, args.pretty)
        return 1
    except (NekraParseError, OSError) as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, args.pretty)
        return 2
    _emit(doc, args.pretty)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
