"""Check records that can be serialized and re-evaluated from their own arguments."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List

from .geometry import Line, PlanePoint
from .lattice import MukaiVector

_CHECKS: Dict[str, Callable[[Dict[str, Any]], bool]] = {}


def register_check(name: str) -> Callable:
    def wrap(fn: Callable[[Dict[str, Any]], bool]) -> Callable:
        _CHECKS[name] = fn
        return fn

    return wrap


@dataclass
class Check:
    """One exact claim. `args` holds only plain data so it survives JSON."""

    name: str
    args: Dict[str, Any]
    holds: bool
    note: str = ""

    def recheck(self) -> bool:
        return evaluate(self.name, self.args)

    def to_json(self) -> Dict[str, Any]:
        out = {"check": self.name, "args": encode(self.args), "holds": self.holds}
        if self.note:
            out["note"] = self.note
        return out

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "Check":
        return cls(data["check"], decode(data["args"]), bool(data["holds"]), data.get("note", ""))


def make_check(name: str, note: str = "", **args: Any) -> Check:
    return Check(name, args, evaluate(name, args), note)


def evaluate(name: str, args: Dict[str, Any]) -> bool:
    try:
        fn = _CHECKS[name]
    except KeyError:
        raise KeyError(f"unknown check {name!r}") from None
    return bool(fn(args))


@dataclass
class Certificate:
    kind: str
    checks: List[Check] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.checks)

    def add(self, name: str, note: str = "", **args: Any) -> Check:
        chk = make_check(name, note, **args)
        self.checks.append(chk)
        return chk

    def extend(self, other: "Certificate") -> None:
        self.checks.extend(other.checks)

    def to_json(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "holds": self.holds,
            "data": encode(self.data),
            "checks": [c.to_json() for c in self.checks],
        }


# --- plain-data encoding -------------------------------------------------

def encode(value: Any) -> Any:
    from .brill_noether import RadicalValue

    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, float)):
        return value
    if isinstance(value, Fraction):
        return {"num": str(value.numerator), "den": str(value.denominator)}
    if isinstance(value, PlanePoint):
        return {"point": [encode(value.x), encode(value.y)]}
    if isinstance(value, MukaiVector):
        return {"mukai": [value.r, value.c, value.s]}
    if isinstance(value, Line):
        return {"line": [value.a, value.b, value.d]}
    if isinstance(value, RadicalValue):
        return {"radical": value.to_json()}
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if hasattr(value, "to_json"):
        return value.to_json()
    raise TypeError(f"cannot encode {type(value).__name__}")


def decode(value: Any) -> Any:
    from .brill_noether import RadicalValue

    if isinstance(value, list):
        return [decode(v) for v in value]
    if not isinstance(value, dict):
        return value
    keys = set(value)
    if keys == {"num", "den"}:
        return Fraction(int(value["num"]), int(value["den"]))
    if keys == {"point"}:
        x, y = value["point"]
        return PlanePoint(decode(x), decode(y))
    if keys == {"mukai"}:
        return MukaiVector(*value["mukai"])
    if keys == {"line"}:
        return Line(*value["line"])
    if keys == {"radical"}:
        return RadicalValue.from_json(value["radical"])
    return {k: decode(v) for k, v in value.items()}


def recheck_certificate(data: Dict[str, Any]) -> bool:
    """Re-evaluate every serialized check; True iff all hold and agree with the record."""
    from . import cases, walls  # noqa: F401  (register their checks)

    ok = True
    for entry in data.get("checks", []):
        chk = Check.from_json(entry)
        if chk.recheck() != chk.holds or not chk.holds:
            ok = False
    return ok and bool(data.get("checks"))


# --- elementary checks ----------------------------------------------------

@register_check("rational_lt")
def _lt(a: Dict[str, Any]) -> bool:
    return Fraction(a["left"]) < Fraction(a["right"])


@register_check("rational_le")
def _le(a: Dict[str, Any]) -> bool:
    return Fraction(a["left"]) <= Fraction(a["right"])


@register_check("rational_eq")
def _eq(a: Dict[str, Any]) -> bool:
    return Fraction(a["left"]) == Fraction(a["right"])
