"""JSON encodings.  Rationals always travel as ``"num/den"`` strings."""

from __future__ import annotations

from collections.abc import Mapping
from fractions import Fraction
from typing import Any

from .amplitudes import AmpDist, CRat
from .errors import ParseError
from .measure import CarrierDist, CountableDist, GeometricTail, rat
from .report import CheckReport
from .scvx import INF, Constant, Geometric, Identity, Rule, SeqMap, SpaceHandle
from .stdspace import RefinementTree, Split


def format_rat(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s: Any) -> Fraction:
    if isinstance(s, bool) or isinstance(s, float):
        raise ParseError(f"expected an exact rational string, got {s!r}")
    try:
        return rat(s)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {s!r}") from exc


def _nat(x: Any) -> int:
    if not isinstance(x, int) or isinstance(x, bool) or x < 0:
        raise ParseError(f"expected a natural number, got {x!r}")
    return x


# distributions -------------------------------------------------------------


def dist_to_json(p: CountableDist) -> dict:
    doc: dict[str, Any] = {"weights": [[i, format_rat(w)] for i, w in p.weights]}
    if p.tail is not None:
        doc["tail"] = {"kind": "geometric", "start": p.tail.start, "ratio": format_rat(p.tail.ratio)}
    return doc


def dist_from_json(doc: Any) -> CountableDist:
    if not isinstance(doc, Mapping) or "weights" not in doc:
        raise ParseError("a distribution needs a 'weights' list")
    try:
        pairs = [(_nat(i), parse_rat(w)) for i, w in doc["weights"]]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad weights entry: {exc}") from exc
    tail = doc.get("tail")
    if tail is None:
        return CountableDist(pairs)
    if not isinstance(tail, Mapping) or tail.get("kind") != "geometric":
        raise ParseError("only geometric tails are supported")
    try:
        return CountableDist(pairs, GeometricTail(_nat(tail["start"]), parse_rat(tail["ratio"])))
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad tail: {exc}") from exc


def carrier_dist_to_json(P: CarrierDist) -> dict:
    return {"carrier": [[encode_value(x), format_rat(w)] for x, w in P.items()]}


def carrier_dist_from_json(doc: Any, space: SpaceHandle | None = None) -> CarrierDist:
    if not isinstance(doc, Mapping) or "carrier" not in doc:
        raise ParseError("a carrier distribution needs a 'carrier' list")
    try:
        return CarrierDist((decode_value(x, space), parse_rat(w)) for x, w in doc["carrier"])
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad carrier entry: {exc}") from exc


# amplitudes ----------------------------------------------------------------


def amp_to_json(p: AmpDist) -> dict:
    return {"amplitudes": [[i, format_rat(z.re), format_rat(z.im)] for i, z in p.entries]}


def amp_from_json(doc: Any) -> AmpDist:
    if not isinstance(doc, Mapping) or "amplitudes" not in doc:
        raise ParseError("an amplitude list needs an 'amplitudes' key")
    try:
        return AmpDist((_nat(i), CRat(parse_rat(re), parse_rat(im))) for i, re, im in doc["amplitudes"])
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad amplitude entry: {exc}") from exc


# trees ---------------------------------------------------------------------


def tree_to_json(tree: RefinementTree) -> dict:
    return {
        "points": list(tree.points),
        "splits": [
            {"atom": s.atom, "left": tree.ordered(s.left), "right": tree.ordered(s.right)}
            for s in tree.splits
        ],
    }


def _point(x: Any) -> Any:
    if isinstance(x, list):
        return tuple(_point(y) for y in x)
    return x


def split_from_json(doc: Any) -> Split:
    try:
        return Split(
            _nat(doc["atom"]),
            frozenset(_point(x) for x in doc["left"]),
            frozenset(_point(x) for x in doc["right"]),
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad split {doc!r}") from exc


def tree_from_json(doc: Any) -> RefinementTree:
    if not isinstance(doc, Mapping) or "points" not in doc:
        raise ParseError("a tree needs a 'points' list")
    points = tuple(_point(x) for x in doc["points"])
    splits = tuple(split_from_json(s) for s in doc.get("splits", []))
    return RefinementTree(points, splits)


# carrier values and sequences ------------------------------------------------


def encode_value(x: Any) -> Any:
    if x is INF:
        return "inf"
    if isinstance(x, bool):
        return x
    if isinstance(x, Fraction):
        return format_rat(x)
    if isinstance(x, CountableDist):
        return dist_to_json(x)
    if isinstance(x, CarrierDist):
        return carrier_dist_to_json(x)
    if isinstance(x, AmpDist):
        return amp_to_json(x)
    if isinstance(x, CRat):
        return [format_rat(x.re), format_rat(x.im)]
    if isinstance(x, SeqMap):
        return seq_to_json(x)
    if isinstance(x, Mapping):
        return {str(k): encode_value(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        return sorted((encode_value(v) for v in x), key=repr)
    if isinstance(x, (list, tuple)):
        return [encode_value(v) for v in x]
    if x is None or isinstance(x, (int, str)):
        return x
    return repr(x)


_RATIONAL_SPACES = {"unit_interval", "r_inf"}


def decode_value(obj: Any, space: SpaceHandle | None = None) -> Any:
    """Inverse of :func:`encode_value`, guided by the target space if given."""
    name = space.name if space else None
    if isinstance(obj, Mapping):
        if "weights" in obj:
            return dist_from_json(obj)
        if "carrier" in obj:
            return carrier_dist_from_json(obj)
        raise ParseError(f"cannot decode {obj!r}")
    if name == "coeq3":
        return str(obj)
    if obj == "inf":
        return INF
    if name in _RATIONAL_SPACES:
        return parse_rat(obj)
    if isinstance(obj, int) and not isinstance(obj, bool):
        return obj
    if isinstance(obj, str):
        return parse_rat(obj)
    raise ParseError(f"cannot decode {obj!r}")


def seq_to_json(a: SeqMap) -> dict:
    doc: dict[str, Any] = {str(i): encode_value(v) for i, v in sorted(a.table.items())}
    rule = a.default
    if isinstance(rule, Identity):
        doc["default"] = "identity"
    elif isinstance(rule, Constant):
        doc["default"] = {"rule": "constant", "value": encode_value(rule.value)}
    elif isinstance(rule, Geometric):
        doc["default"] = {"rule": "geometric", "coef": format_rat(rule.coef), "ratio": format_rat(rule.ratio)}
    elif isinstance(rule, Rule):
        raise ValueError(f"rule {rule.name!r} has no JSON form")
    return doc


def seq_from_json(doc: Any, space: SpaceHandle | None = None) -> SeqMap:
    if isinstance(doc, list):
        return SeqMap({i: decode_value(v, space) for i, v in enumerate(doc)})
    if not isinstance(doc, Mapping):
        raise ParseError("a sequence is a JSON object or list")
    table = {}
    default = None
    for k, v in doc.items():
        if k == "default":
            default = _rule_from_json(v, space)
            continue
        try:
            idx = int(k)
        except ValueError:
            raise ParseError(f"bad sequence key {k!r}") from None
        table[_nat(idx)] = decode_value(v, space)
    return SeqMap(table, default)


def _rule_from_json(doc: Any, space: SpaceHandle | None) -> Any:
    if doc == "identity":
        return Identity()
    if isinstance(doc, Mapping):
        kind = doc.get("rule")
        if kind == "constant":
            return Constant(decode_value(doc["value"], space))
        if kind == "geometric":
            return Geometric(parse_rat(doc["coef"]), parse_rat(doc["ratio"]))
    raise ParseError(f"unknown sequence rule {doc!r}")


def report_to_json(report: CheckReport) -> dict:
    return {
        "law": report.law,
        "subject": report.subject,
        "cases": report.cases,
        "failure_count": report.failure_count,
        "failures": encode_value(report.failures),
        "detail": encode_value(report.detail),
    }
