"""Reading and writing the JSON file formats.

Group-definition files:
  { "degree": d, "generators": ["a", ...],
    "recursions": {name: {"perm": [images, 1-based], "states": [word, ...]}},
    "relators": [word, ...] }
where a word is an array of tokens, each "g" or "g^-1".

VElement files:
  { "domain": [[...], ...], "range": [[...], ...], "decorations": [word, ...] }

Virtual-endomorphism spec files: { "m": ..., "p": ..., "n": ... };
affine elements: { "a": [{"num": ..., "exp": ...}, ...], "gamma": [[...], ...] }.
"""

import json
from importlib import resources

from .errors import SchemaError
from .rovernek import VElement, make_velement
from .ssgroup import (SSPresentation, Word, WreathRecursion, word_from_tokens,
                      word_tokens)
from .virtend import AffineElem, RingElem, VirtEndSpec, make_affine


def _require(cond: bool, msg: str):
    if not cond:
        raise SchemaError(msg)


def group_from_dict(doc: dict) -> SSPresentation:
    _require(isinstance(doc, dict), "group file must be a JSON object")
    for key in ("degree", "generators", "recursions"):
        _require(key in doc, f"missing key {key!r}")
    d = doc["degree"]
    _require(isinstance(d, int) and d >= 2, "degree must be an integer >= 2")
    names = doc["generators"]
    _require(isinstance(names, list) and all(isinstance(x, str) for x in names),
             "generators must be a list of names")
    _require(len(set(names)) == len(names), "duplicate generator names")
    recs = doc["recursions"]
    _require(set(recs) == set(names), "recursions must cover exactly the generators")

    # a presentation without recursions, for word parsing only
    def parse_word(tokens, where):
        _require(isinstance(tokens, list), f"{where}: word must be a token array")
        syllables = []
        for tok in tokens:
            _require(isinstance(tok, str), f"{where}: token {tok!r} is not a string")
            name, sep, exp = tok.partition("^")
            _require(name in names, f"{where}: unknown generator {name!r}")
            try:
                k = int(exp) if sep else 1
            except ValueError:
                raise SchemaError(f"{where}: bad exponent in token {tok!r}") from None
            syllables.append((names.index(name), k))
        from .ssgroup import reduce_syllables
        return reduce_syllables(syllables)

    recursions = []
    for name in names:
        entry = recs[name]
        _require(isinstance(entry, dict) and "perm" in entry and "states" in entry,
                 f"recursion of {name!r} needs perm and states")
        perm = entry["perm"]
        _require(isinstance(perm, list) and sorted(perm) == list(range(1, d + 1)),
                 f"recursion of {name!r}: perm {perm!r} is not a bijection of 1..{d}")
        states = entry["states"]
        _require(isinstance(states, list) and len(states) == d,
                 f"recursion of {name!r}: expected {d} states")
        words = tuple(parse_word(s, f"state of {name!r}") for s in states)
        recursions.append(WreathRecursion(tuple(perm), words))
    relators = tuple(parse_word(r, "relator") for r in doc.get("relators", []))
    return SSPresentation(d, tuple(names), tuple(recursions), relators)


def group_to_dict(G: SSPresentation) -> dict:
    return {
        "degree": G.degree,
        "generators": list(G.gen_names),
        "recursions": {
            name: {
                "perm": list(rec.perm),
                "states": [word_tokens(G, s) for s in rec.states],
            }
            for name, rec in zip(G.gen_names, G.recursions)
        },
        "relators": [word_tokens(G, r) for r in G.relators],
    }


def load_group(path: str) -> SSPresentation:
    with open(path) as fh:
        return group_from_dict(json.load(fh))


def load_fixture(name: str) -> SSPresentation:
    text = resources.files("nekra.fixtures").joinpath(f"{name}.json").read_text()
    return group_from_dict(json.loads(text))


def velement_from_dict(G: SSPresentation, doc: dict) -> VElement:
    for key in ("domain", "range", "decorations"):
        _require(key in doc, f"missing key {key!r}")
    decs = [word_from_tokens(G, toks) for toks in doc["decorations"]]
    return make_velement(G, [tuple(v) for v in doc["domain"]],
                         [tuple(v) for v in doc["range"]], decs)


def velement_to_dict(e: VElement) -> dict:
    return {
        "domain": [list(v) for v in e.domain],
        "range": [list(v) for v in e.range_],
        "decorations": [word_tokens(e.group, w) for w in e.decorations],
    }


def spec_from_dict(doc: dict) -> VirtEndSpec:
    for key in ("m", "p", "n"):
        _require(key in doc and isinstance(doc[key], int), f"spec needs integer {key!r}")
    return VirtEndSpec(doc["m"], doc["p"], doc["n"])


def ringelem_from_dict(doc) -> RingElem:
    if isinstance(doc, int):
        return RingElem(doc, 0)
    _require(isinstance(doc, dict) and "num" in doc, "ring element needs num")
    return RingElem(doc["num"], doc.get("exp", 0))


def affine_from_dict(spec: VirtEndSpec, doc: dict) -> AffineElem:
    for key in ("a", "gamma"):
        _require(key in doc, f"affine element needs {key!r}")
    a = [ringelem_from_dict(x) for x in doc["a"]]
    gamma = [[ringelem_from_dict(x) for x in row] for row in doc["gamma"]]
    _require(len(a) == spec.n and len(gamma) == spec.n
             and all(len(row) == spec.n for row in gamma),
             f"affine element must have dimension {spec.n}")
    return make_affine(spec.ring, a, gamma)


def ringelem_to_dict(x: RingElem) -> dict:
    return {"num": x.num, "exp": x.exp}


def affine_to_dict(e: AffineElem) -> dict:
    return {
        "a": [ringelem_to_dict(x) for x in e.a],
        "gamma": [[ringelem_to_dict(x) for x in row] for row in e.gamma],
    }


def finab_to_dict(Q) -> dict:
    doc = {
        "factors": list(Q.invariant_factors),
        "rank": Q.free_rank,
        "images": {name: list(c.coords) for name, c in sorted(Q.gen_images.items())},
    }
    if Q.sign_image is not None:
        doc["sign_image"] = list(Q.sign_image.coords)
    return doc
