"""Problem files: YAML (or JSON) documents describing a module, a sequence and options.

Example::

    shape: {q: 1, n: [1]}
    module: {type: free}
    ring: Z
    sequence:
      - {poly: "3*x[1,0] - 2*x[1,1]", degree: [1]}
      - {poly: "x[1,0] + x[1,1]", degree: [1]}

``module`` may instead be ``{type: monomial_quotient, generators: ["x[1,0]*x[1,1]"]}``;
``ring`` is one of ``Z``, ``Q`` or ``Fp(p)``.  An optional ``interp`` block
``{points: [[z, w], ...], T: 2, degrees: [[2,2], [2,2], [2,2]]}`` feeds the
interpolation commands.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import yaml

from .arith import GF, QQ, ZZ, Ring, parse_rational
from .interp import EvalSpec, GroupPoint
from .koszul import PolySequence
from .modslice import ModuleSpec, MonomialIdeal
from .mpoly import BlockStructure, ParseError, parse_mpoly


class ProblemError(ValueError):
    """Malformed problem file (maps to the usage exit code)."""


@dataclass
class Problem:
    shape: BlockStructure
    module: ModuleSpec
    ring: Ring
    sequence: PolySequence | None
    interp: EvalSpec | None
    interp_degrees: list[tuple[int, ...]] | None
    budget_seconds: float | None


_FP = re.compile(r"^(?:Fp|GF|F)\((\d+)\)$")


def parse_ring(text) -> Ring:
    s = str(text).strip()
    if s in ("Z", "ZZ"):
        return ZZ
    if s in ("Q", "QQ"):
        return QQ
    m = _FP.match(s)
    if m:
        try:
            return GF(int(m.group(1)))
        except ValueError as exc:
            raise ProblemError(str(exc)) from None
    raise ProblemError(f"unknown ring {text!r}")


def _degree(value, q: int) -> tuple[int, ...]:
    if isinstance(value, int):
        value = [value]
    if not isinstance(value, (list, tuple)) or len(value) != q or not all(isinstance(x, int) and x >= 0 for x in value):
        raise ProblemError(f"malformed multidegree {value!r} (need {q} nonnegative integers)")
    return tuple(value)


def problem_from_dict(doc: dict) -> Problem:
    if not isinstance(doc, dict):
        raise ProblemError("problem file must be a mapping")
    try:
        sh = doc["shape"]
        n = sh["n"]
        n = [n] if isinstance(n, int) else list(n)
        if int(sh.get("q", len(n))) != len(n):
            raise ProblemError("shape.q does not match the length of shape.n")
        shape = BlockStructure(tuple(n))
    except (KeyError, TypeError) as exc:
        raise ProblemError(f"bad shape: {exc}") from None
    except ValueError as exc:
        raise ProblemError(f"bad shape: {exc}") from None
    ring = parse_ring(doc.get("ring", "Z"))

    mod = doc.get("module", {"type": "free"})
    kind = mod.get("type", "free")
    try:
        if kind == "free":
            module = ModuleSpec(shape)
        elif kind == "monomial_quotient":
            gens = [parse_mpoly(g, shape, ZZ) for g in mod.get("generators", [])]
            module = ModuleSpec(shape, MonomialIdeal.from_polys(shape, gens))
        else:
            raise ProblemError(f"unknown module type {kind!r}")
    except (ParseError, ValueError) as exc:
        raise ProblemError(f"bad module: {exc}") from None

    sequence = None
    if doc.get("sequence"):
        polys, degs = [], []
        for item in doc["sequence"]:
            if isinstance(item, str):
                item = {"poly": item}
            try:
                f = parse_mpoly(str(item["poly"]), shape, ring)
            except (ParseError, KeyError) as exc:
                raise ProblemError(f"bad polynomial: {exc}") from None
            if "degree" in item:
                d = _degree(item["degree"], shape.q)
            else:
                try:
                    d = f.multidegree()
                except ValueError as exc:
                    raise ProblemError(str(exc)) from None
            polys.append(f)
            degs.append(d)
        try:
            sequence = PolySequence(tuple(polys), tuple(degs))
        except ValueError as exc:
            raise ProblemError(str(exc)) from None

    spec = degrees = None
    if "interp" in doc:
        it = doc["interp"]
        if shape.n != (1, 1):
            raise ProblemError("interpolation problems live on P^1 x P^1 (n = [1, 1])")
        try:
            pts = tuple(GroupPoint(parse_rational(str(z)), parse_rational(str(w))) for z, w in it["points"])
            spec = EvalSpec(pts, int(it["T"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ProblemError(f"bad interp block: {exc}") from None
        degrees = [_degree(d, 2) for d in it.get("degrees", [])] or None

    budget = doc.get("budget_seconds")
    return Problem(shape, module, ring, sequence, spec, degrees, None if budget is None else float(budget))


def load_problem(path: str | Path) -> Problem:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ProblemError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ProblemError(f"cannot parse {path}: {exc}") from None
    return problem_from_dict(doc)
