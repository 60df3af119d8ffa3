"""Finite path-space markets, level-set indexing and JSON ingestion."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

__all__ = [
    "MarketError",
    "DomainError",
    "Path",
    "StaticOption",
    "Market",
    "Payoff",
    "LevelSetIndex",
    "parse_rational",
    "build_level_sets",
    "project_support",
    "load_market",
    "dump_market",
    "load_payoff",
    "dump_payoff",
    "save_report",
]


class MarketError(ValueError):
    """Malformed market or payoff input."""


class DomainError(Exception):
    """A well-formed question with no answer on this market."""


_RATIONAL = re.compile(r"^[+-]?(\d+(/\d+)?|\d+\.\d+)$")


def parse_rational(text, where: str = "value") -> Fraction:
    """Parse ``"3"``, ``"-2/6"`` or ``"1.5"`` exactly."""
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise MarketError(f"{where}: expected a rational string, got {text!r}")
    s = str(text).strip()
    if not _RATIONAL.match(s):
        raise MarketError(f"{where}: malformed rational {text!r}")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise MarketError(f"{where}: zero denominator in {text!r}") from None


@dataclass(frozen=True)
class Path:
    id: str
    prices: tuple  # d rows x (T+1) columns of Fraction

    def column(self, t: int) -> tuple:
        return tuple(row[t] for row in self.prices)

    def increment(self, t: int) -> tuple:
        return tuple(row[t] - row[t - 1] for row in self.prices)


@dataclass(frozen=True)
class StaticOption:
    id: str
    payoff: tuple
    cost: Fraction = Fraction(0)

    @property
    def adjusted(self) -> tuple:
        """Cost-adjusted payoff, phi - c."""
        return tuple(v - self.cost for v in self.payoff)


@dataclass(frozen=True, eq=False)
class Market:
    assets: int
    steps: int
    paths: tuple
    options: tuple = ()

    def __post_init__(self):
        if self.assets < 1 or self.steps < 1:
            raise MarketError("assets and steps must be positive")
        if not self.paths:
            raise MarketError("a market needs at least one path")
        ids = set()
        for p in self.paths:
            if p.id in ids:
                raise MarketError(f"duplicate path id {p.id!r}")
            ids.add(p.id)
            if len(p.prices) != self.assets or any(len(r) != self.steps + 1 for r in p.prices):
                raise MarketError(
                    f"path {p.id!r}: prices must be {self.assets} x {self.steps + 1}"
                )
        for o in self.options:
            if len(o.payoff) != len(self.paths):
                raise MarketError(f"option {o.id!r}: payoff length must equal number of paths")

    def __eq__(self, other):
        if not isinstance(other, Market):
            return NotImplemented
        return (self.assets, self.steps, self.paths, self.options) == (
            other.assets,
            other.steps,
            other.paths,
            other.options,
        )

    __hash__ = None

    @property
    def n_paths(self) -> int:
        return len(self.paths)

    @property
    def ids(self) -> list:
        return [p.id for p in self.paths]

    @cached_property
    def levels(self) -> "LevelSetIndex":
        return build_level_sets(self)

    def increments(self, t: int) -> list:
        return [p.increment(t) for p in self.paths]

    def restrict(self, members: Iterable[int]) -> "Market":
        """Sub-market on the given path indices (in market order)."""
        keep = sorted(set(members))
        return Market(
            self.assets,
            self.steps,
            tuple(self.paths[i] for i in keep),
            tuple(
                StaticOption(o.id, tuple(o.payoff[i] for i in keep), o.cost) for o in self.options
            ),
        )

    def without_options(self) -> "Market":
        return Market(self.assets, self.steps, self.paths, ())

    def with_options(self, options: Sequence[StaticOption]) -> "Market":
        return Market(self.assets, self.steps, self.paths, tuple(options))

    def permuted(self, order: Sequence[int]) -> "Market":
        return Market(
            self.assets,
            self.steps,
            tuple(self.paths[i] for i in order),
            tuple(StaticOption(o.id, tuple(o.payoff[i] for i in order), o.cost) for o in self.options),
        )

    def index_of(self, ids: Iterable[str]) -> set:
        pos = {pid: i for i, pid in enumerate(self.ids)}
        return {pos[i] for i in ids}


@dataclass(frozen=True)
class Payoff:
    values: tuple

    @classmethod
    def of(cls, values) -> "Payoff":
        return cls(tuple(Fraction(v) for v in values))

    def __len__(self):
        return len(self.values)

    def __add__(self, other):
        if isinstance(other, Payoff):
            return Payoff(tuple(a + b for a, b in zip(self.values, other.values)))
        return Payoff(tuple(a + other for a in self.values))

    def __neg__(self):
        return Payoff(tuple(-a for a in self.values))

    def __sub__(self, other):
        return self + (-other if isinstance(other, Payoff) else -other)

    def scale(self, lam) -> "Payoff":
        return Payoff(tuple(lam * a for a in self.values))

    def permuted(self, order) -> "Payoff":
        return Payoff(tuple(self.values[i] for i in order))


@dataclass(frozen=True)
class LevelSetIndex:
    """Partition of path indices by equal price prefix, for every time.

    ``groups[t]`` lists the groups at time ``t`` (tuples of path indices in
    market order, groups ordered by their first member); ``group_of[t][i]`` is
    the position of path ``i``'s group in ``groups[t]``.
    """

    groups: tuple
    group_of: tuple

    @property
    def steps(self) -> int:
        return len(self.groups) - 1

    def children(self, t: int, g: int) -> list:
        """Groups at ``t + 1`` contained in group ``g`` at ``t``."""
        out = []
        for c, members in enumerate(self.groups[t + 1]):
            if self.group_of[t][members[0]] == g:
                out.append(c)
        return out

    def parent(self, t: int, g: int) -> int:
        """Group at ``t - 1`` containing group ``g`` at ``t``."""
        return self.group_of[t - 1][self.groups[t][g][0]]


def build_level_sets(market: Market) -> LevelSetIndex:
    groups, group_of = [], []
    for t in range(market.steps + 1):
        keys = {}
        assign = []
        for p in market.paths:
            key = tuple(row[: t + 1] for row in p.prices)
            assign.append(keys.setdefault(key, len(keys)))
        members = [[] for _ in keys]
        for i, g in enumerate(assign):
            members[g].append(i)
        groups.append(tuple(tuple(m) for m in members))
        group_of.append(tuple(assign))
    return LevelSetIndex(tuple(groups), tuple(group_of))


def project_support(index: LevelSetIndex, d_next: Iterable[int], t: int) -> frozenset:
    """All paths sharing their time-``t`` prefix with some member of ``d_next``."""
    hit = {index.group_of[t][i] for i in d_next}
    return frozenset(i for g in sorted(hit) for i in index.groups[t][g])


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def _load_json(data):
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    if isinstance(data, str):
        try:
            return json.loads(data)
        except json.JSONDecodeError as e:
            raise MarketError(f"invalid JSON: {e}") from None
    return data


def load_market(data) -> Market:
    """Parse a market from JSON bytes/str or an already-decoded mapping."""
    doc = _load_json(data)
    if not isinstance(doc, Mapping):
        raise MarketError("market document must be a JSON object")
    for key in ("assets", "steps", "paths"):
        if key not in doc:
            raise MarketError(f"market: missing field {key!r}")
    d, T = doc["assets"], doc["steps"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise MarketError("market.assets must be a positive integer")
    if not isinstance(T, int) or isinstance(T, bool) or T < 1:
        raise MarketError("market.steps must be a positive integer")
    if not isinstance(doc["paths"], list) or not doc["paths"]:
        raise MarketError("market.paths must be a non-empty list")
    paths = []
    for k, p in enumerate(doc["paths"]):
        if not isinstance(p, Mapping):
            raise MarketError(f"paths[{k}] must be an object")
        pid = p.get("id")
        if not isinstance(pid, str):
            raise MarketError(f"paths[{k}]: missing or non-string 'id'")
        if "prices" not in p:
            raise MarketError(f"path {pid!r}: missing field 'prices'")
        rows = p["prices"]
        if not isinstance(rows, list) or len(rows) != d:
            raise MarketError(f"path {pid!r}: 'prices' must have {d} rows")
        parsed = []
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != T + 1:
                raise MarketError(f"path {pid!r}: prices row {i} must have {T + 1} entries")
            parsed.append(
                tuple(parse_rational(v, f"path {pid!r} prices[{i}][{t}]") for t, v in enumerate(row))
            )
        paths.append(Path(pid, tuple(parsed)))
    options = []
    raw_opts = doc.get("options", [])
    if not isinstance(raw_opts, list):
        raise MarketError("market.options must be a list")
    for k, o in enumerate(raw_opts):
        if not isinstance(o, Mapping) or not isinstance(o.get("id"), str):
            raise MarketError(f"options[{k}]: missing or non-string 'id'")
        oid = o["id"]
        pay = o.get("payoff")
        if not isinstance(pay, list) or len(pay) != len(paths):
            raise MarketError(f"option {oid!r}: 'payoff' must list one value per path")
        if "cost" not in o:
            raise MarketError(f"option {oid!r}: missing field 'cost'")
        options.append(
            StaticOption(
                oid,
                tuple(parse_rational(v, f"option {oid!r} payoff[{i}]") for i, v in enumerate(pay)),
                parse_rational(o["cost"], f"option {oid!r} cost"),
            )
        )
    return Market(d, T, tuple(paths), tuple(options))


def market_to_dict(market: Market) -> dict:
    return {
        "assets": market.assets,
        "steps": market.steps,
        "paths": [
            {"id": p.id, "prices": [[str(v) for v in row] for row in p.prices]}
            for p in market.paths
        ],
        "options": [
            {"id": o.id, "payoff": [str(v) for v in o.payoff], "cost": str(o.cost)}
            for o in market.options
        ],
    }


def dump_market(market: Market) -> bytes:
    return save_report(market_to_dict(market))


def load_payoff(data, market: Market) -> Payoff:
    """Parse ``{"values": [...]}`` or an ``{id: value}`` map."""
    doc = _load_json(data)
    if isinstance(doc, Mapping) and "values" in doc:
        vals = doc["values"]
        if not isinstance(vals, list) or len(vals) != market.n_paths:
            raise MarketError(f"payoff: 'values' must list {market.n_paths} entries")
        return Payoff(tuple(parse_rational(v, f"payoff values[{i}]") for i, v in enumerate(vals)))
    if isinstance(doc, Mapping):
        missing = [pid for pid in market.ids if pid not in doc]
        if missing:
            raise MarketError(f"payoff: no value for path {missing[0]!r}")
        extra = set(doc) - set(market.ids)
        if extra:
            raise MarketError(f"payoff: unknown path {sorted(extra)[0]!r}")
        return Payoff(tuple(parse_rational(doc[pid], f"payoff[{pid!r}]") for pid in market.ids))
    raise MarketError("payoff document must be a JSON object")


def dump_payoff(payoff: Payoff) -> bytes:
    return save_report({"values": [str(v) for v in payoff.values]})


def save_report(report) -> bytes:
    """Serialize a report (plain JSON types, rationals already stringified)."""
    return (json.dumps(report, indent=2, default=_default) + "\n").encode("utf-8")


def _default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")
