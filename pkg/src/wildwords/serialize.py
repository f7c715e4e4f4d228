"""JSON serialization for verdicts, certificates and band-system inputs.

Words travel as DSL text, cuts as small objects naming their kind and path,
and factor words of a band-system description as DSL strings.  The shipped
schemas under ``schemas/`` describe all three document kinds.
"""

from __future__ import annotations

import json
from importlib import resources

from .bands import BandSystemSpec, CancellationPattern, Commutator, Conjugate
from .deciders import (Certificate, DeleteInversePair, DeletePure,
                       GroupContext, Reduce, Swap, griffiths_h1,
                       griffiths_pi1, hawaiian_h1, hawaiian_word_group)
from .dsl import parse_word, print_word
from .errors import WildWordsError
from .positions import NEG_INF, POS_INF, Cut, SubwordLocator
from .words import TriVerdict, as_finite, lit

GROUP_NAMES = {
    "wp": hawaiian_word_group,
    "pi1y": griffiths_pi1,
    "h1z": hawaiian_h1,
    "h1y": griffiths_h1,
}

_TARGET_TO_NAME = {
    "wp": "wp",
    "pi1_griffiths": "pi1y",
    "h1_hawaiian": "h1z",
    "h1_griffiths": "h1y",
}


def context_by_name(name: str) -> GroupContext:
    if name not in GROUP_NAMES:
        raise WildWordsError(f"unknown group name {name!r}; expected one of "
                             f"{sorted(GROUP_NAMES)}")
    return GROUP_NAMES[name]()


def group_name(ctx: GroupContext) -> str:
    return _TARGET_TO_NAME[ctx.target]


# ---------------------------------------------------------------------------
# Verdicts


def _json_safe(value):
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, Certificate):
        return {"source": print_word(value.source),
                "target": print_word(value.target),
                "moves": [move_to_json(m) for m in value.moves]}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(str(_json_safe(v)) for v in value)
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    return str(value)


def verdict_to_json(v: TriVerdict) -> dict:
    return {
        "verdict": v.kind,
        "witness": _json_safe(v.witness),
        "bound": v.bound,
    }


# ---------------------------------------------------------------------------
# Cuts, locators, moves


def cut_to_json(c: Cut) -> dict:
    if c.kind == -1:
        return {"kind": "start"}
    if c.kind == 1:
        return {"kind": "end"}
    if c.kind == 3:
        return {"kind": "gap", "atom": c.path[0]}
    return {"kind": "at", "path": [list(step) for step in c.path],
            "after": c.after}


def cut_from_json(d: dict) -> Cut:
    kind = d.get("kind")
    if kind == "start":
        return NEG_INF
    if kind == "end":
        return POS_INF
    if kind == "gap":
        return Cut.gap(int(d["atom"]))
    if kind == "at":
        path = tuple(tuple(step) for step in d["path"])
        path = tuple((str(s[0]),) + tuple(int(x) for x in s[1:]) for s in path)
        return Cut(0, path, bool(d.get("after", False)))
    raise WildWordsError(f"bad cut {d!r}")


def locator_to_json(loc: SubwordLocator) -> dict:
    return {"lo": cut_to_json(loc.lo), "hi": cut_to_json(loc.hi)}


def locator_from_json(d: dict) -> SubwordLocator:
    return SubwordLocator(cut_from_json(d["lo"]), cut_from_json(d["hi"]))


def move_to_json(move) -> dict:
    if isinstance(move, DeletePure):
        return {"type": "delete_pure", "side": move.side,
                "family_kind": move.family_kind,
                "locator": locator_to_json(move.locator)}
    if isinstance(move, DeleteInversePair):
        return {"type": "delete_inverse_pair", "side": move.side,
                "first": locator_to_json(move.first),
                "second": locator_to_json(move.second)}
    if isinstance(move, Swap):
        return {"type": "swap", "side": move.side,
                "first": locator_to_json(move.first),
                "second": locator_to_json(move.second)}
    if isinstance(move, Reduce):
        return {"type": "reduce", "side": move.side}
    raise WildWordsError(f"unknown move {move!r}")


def move_from_json(d: dict):
    side = d.get("side", "source")
    kind = d.get("type")
    if kind == "delete_pure":
        return DeletePure(locator_from_json(d["locator"]), d["family_kind"], side)
    if kind == "delete_inverse_pair":
        return DeleteInversePair(locator_from_json(d["first"]),
                                 locator_from_json(d["second"]), side)
    if kind == "swap":
        return Swap(locator_from_json(d["first"]),
                    locator_from_json(d["second"]), side)
    if kind == "reduce":
        return Reduce(side)
    raise WildWordsError(f"unknown move type {kind!r}")


def certificate_to_json(cert: Certificate, ctx: GroupContext) -> dict:
    return {
        "group": group_name(ctx),
        "source": print_word(cert.source),
        "target": print_word(cert.target),
        "moves": [move_to_json(m) for m in cert.moves],
    }


def certificate_from_json(d: dict):
    ctx = context_by_name(d["group"])
    cert = Certificate(parse_word(d["source"]),
                       tuple(move_from_json(m) for m in d["moves"]),
                       parse_word(d["target"]))
    return cert, ctx


# ---------------------------------------------------------------------------
# Band-system descriptions


def _finite_from_text(text: str):
    return as_finite(parse_word(text))


def _finite_to_text(w) -> str:
    return print_word(lit(w))


def bandspec_to_json(spec: BandSystemSpec) -> dict:
    return {
        "w1": _finite_to_text(spec.w1),
        "conjugates": [{"theta": _finite_to_text(c.theta),
                        "eta": _finite_to_text(c.eta),
                        "kind": c.kind} for c in spec.conjugates],
        "commutators": [{"sigma": _finite_to_text(c.sigma),
                         "tau": _finite_to_text(c.tau)} for c in spec.commutators],
        "numerator": {
            "t": [_finite_to_text(t) for t in spec.t_parts],
            "u": [{"pieces": [_finite_to_text(p) for p in u.pieces],
                   "pairs": [list(pair) for pair in u.pairs]}
                  for u in spec.u_parts],
        },
    }


def bandspec_from_json(d: dict) -> BandSystemSpec:
    conj = tuple(Conjugate(_finite_from_text(c["theta"]),
                           _finite_from_text(c["eta"]),
                           c.get("kind", "p")) for c in d.get("conjugates", []))
    comm = tuple(Commutator(_finite_from_text(c["sigma"]),
                            _finite_from_text(c["tau"]))
                 for c in d.get("commutators", []))
    num = d.get("numerator", {})
    t_parts = tuple(_finite_from_text(t) for t in num.get("t", [""]))
    u_parts = tuple(CancellationPattern(
        tuple(_finite_from_text(p) for p in u["pieces"]),
        tuple((int(a), int(b)) for a, b in u["pairs"]))
        for u in num.get("u", []))
    return BandSystemSpec(_finite_from_text(d.get("w1", "")), conj, comm,
                          t_parts, u_parts)


# ---------------------------------------------------------------------------
# Schemas


def load_schema(name: str) -> dict:
    data = resources.files("wildwords").joinpath(f"schemas/{name}.schema.json")
    return json.loads(data.read_text())
