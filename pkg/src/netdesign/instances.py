"""Problem instances, feasibility predicates, text formats, and generators.

Three problem kinds share one vocabulary:

* flexible connectivity: pick edges so that after any q unsafe picks fail,
  the graph stays p-edge-connected,
* capacitated connectivity: pick capacitated edges so every nontrivial cut
  carries total capacity at least k,
* cut covering: pick links so every deficient cut of a base graph gains at
  least r incident links.

Vertices are 0..n-1.  Edge sets are frozensets of indices into the owning
instance's edge tuple.  Cuts are canonical: the stored side never contains
vertex 0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Union

from .config import exhaustive_limit
from .errors import InstanceTooLarge, ParseError
from .rational import Rat, ZERO, fmt_rat, parse_rat, rat

EdgeSet = frozenset[int]


class FgcEdge(NamedTuple):
    u: int
    v: int
    cost: Rat
    safe: bool


class CapEdge(NamedTuple):
    u: int
    v: int
    cost: Rat
    cap: int


class BaseEdge(NamedTuple):
    u: int
    v: int
    cap: Rat


class Link(NamedTuple):
    u: int
    v: int
    cost: Rat


@dataclass(frozen=True)
class Cut:
    """A nontrivial vertex bipartition, stored as the side avoiding vertex 0."""

    side: frozenset[int]
    weight: Rat

    def __post_init__(self):
        if not self.side or 0 in self.side:
            raise ValueError("cut side must be nonempty and exclude vertex 0")

    @property
    def mask(self) -> int:
        m = 0
        for v in self.side:
            m |= 1 << v
        return m

    def crosses(self, u: int, v: int) -> bool:
        return (u in self.side) != (v in self.side)

    def sorted_side(self) -> tuple[int, ...]:
        return tuple(sorted(self.side))


def canonical_side(side: Iterable[int], n: int) -> frozenset[int]:
    s = frozenset(side)
    if 0 in s:
        s = frozenset(range(n)) - s
    return s


def _check_endpoints(n: int, u: int, v: int, what: str):
    if not (0 <= u < n and 0 <= v < n):
        raise ValueError(f"{what} endpoint out of range: ({u}, {v}) with n={n}")
    if u == v:
        raise ValueError(f"{what} must not be a self-loop: ({u}, {v})")


@dataclass(frozen=True)
class FgcInstance:
    n: int
    edges: tuple[FgcEdge, ...]
    p: int
    q: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least two vertices")
        if self.p < 1 or self.q < 1:
            raise ValueError("require p >= 1 and q >= 1")
        for e in self.edges:
            _check_endpoints(self.n, e.u, e.v, "edge")
            if e.cost < 0:
                raise ValueError("edge costs must be nonnegative")

    @property
    def m(self) -> int:
        return len(self.edges)

    def all_edges(self) -> EdgeSet:
        return frozenset(range(self.m))

    def safe_ids(self) -> EdgeSet:
        return frozenset(i for i, e in enumerate(self.edges) if e.safe)

    def unsafe_ids(self) -> EdgeSet:
        return frozenset(i for i, e in enumerate(self.edges) if not e.safe)

    def cost_of(self, chosen: Iterable[int]) -> Rat:
        return sum((self.edges[i].cost for i in chosen), ZERO)


@dataclass(frozen=True)
class CapEcssInstance:
    n: int
    edges: tuple[CapEdge, ...]
    k: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least two vertices")
        if self.k < 1:
            raise ValueError("require k >= 1")
        for e in self.edges:
            _check_endpoints(self.n, e.u, e.v, "edge")
            if e.cost < 0:
                raise ValueError("edge costs must be nonnegative")
            if not (1 <= e.cap <= self.k):
                raise ValueError(f"capacity must lie in [1, k]: got {e.cap}")

    @property
    def m(self) -> int:
        return len(self.edges)

    def all_edges(self) -> EdgeSet:
        return frozenset(range(self.m))

    def cost_of(self, chosen: Iterable[int]) -> Rat:
        return sum((self.edges[i].cost for i in chosen), ZERO)


@dataclass(frozen=True)
class LinkCoverInstance:
    """Cover every deficient cut of the base graph with r links."""

    n: int
    base_edges: tuple[BaseEdge, ...]
    links: tuple[Link, ...]
    threshold: Rat
    r: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least two vertices")
        if self.r not in (1, 2):
            raise ValueError("cover multiplicity must be 1 or 2")
        if self.threshold < 0:
            raise ValueError("threshold must be nonnegative")
        for e in self.base_edges:
            _check_endpoints(self.n, e.u, e.v, "base edge")
            if e.cap < 0:
                raise ValueError("base capacities must be nonnegative")
        for f in self.links:
            _check_endpoints(self.n, f.u, f.v, "link")
            if f.cost < 0:
                raise ValueError("link costs must be nonnegative")

    @property
    def num_links(self) -> int:
        return len(self.links)

    def cost_of(self, chosen: Iterable[int]) -> Rat:
        return sum((self.links[i].cost for i in chosen), ZERO)


Instance = Union[FgcInstance, CapEcssInstance, LinkCoverInstance]


# ---------------------------------------------------------------------------
# feasibility


def _require_enumerable(n: int):
    limit = exhaustive_limit()
    if n > limit:
        raise InstanceTooLarge(f"cut enumeration needs n <= {limit}, got {n}")


def _cut_masks(n: int):
    """All canonical cut sides as bitmasks (bit v set iff vertex v on the side)."""
    for s in range(1, 1 << (n - 1)):
        yield s << 1


def _crossing_count(mask: int, pairs) -> int:
    c = 0
    for u, v in pairs:
        if ((mask >> u) ^ (mask >> v)) & 1:
            c += 1
    return c


def fgc_cut_ok(p: int, q: int, safe_count: int, unsafe_count: int) -> bool:
    """Per-cut survivability: q failures concentrate on this cut's unsafe picks."""
    return safe_count + max(0, unsafe_count - q) >= p


def feasible_fgc(inst: FgcInstance, chosen: EdgeSet) -> bool:
    _require_enumerable(inst.n)
    safe_pairs = [(e.u, e.v) for i, e in enumerate(inst.edges) if i in chosen and e.safe]
    unsafe_pairs = [(e.u, e.v) for i, e in enumerate(inst.edges) if i in chosen and not e.safe]
    for mask in _cut_masks(inst.n):
        s = _crossing_count(mask, safe_pairs)
        u = _crossing_count(mask, unsafe_pairs)
        if not fgc_cut_ok(inst.p, inst.q, s, u):
            return False
    return True


def feasible_capk(inst: CapEcssInstance, chosen: EdgeSet) -> bool:
    from .cuts import WeightedGraph, min_cut

    edges = [(e.u, e.v, rat(e.cap)) for i, e in enumerate(inst.edges) if i in chosen]
    value, _ = min_cut(WeightedGraph(inst.n, tuple(edges)))
    return value >= inst.k


def feasible_cover(inst: LinkCoverInstance, chosen: EdgeSet) -> bool:
    _require_enumerable(inst.n)
    link_pairs = [(f.u, f.v) for j, f in enumerate(inst.links) if j in chosen]
    for mask in _cut_masks(inst.n):
        base = ZERO
        for e in inst.base_edges:
            if ((mask >> e.u) ^ (mask >> e.v)) & 1:
                base += e.cap
        if base < inst.threshold and _crossing_count(mask, link_pairs) < inst.r:
            return False
    return True


# ---------------------------------------------------------------------------
# text format

_KIND_TOKENS = {"S": True, "U": False}


def _meaningful_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield lineno, body.split()


def _want_int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"expected integer {what}, got {tok!r}") from None


def _want_rat(tok: str, lineno: int, what: str) -> Rat:
    try:
        return parse_rat(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(lineno, f"expected rational {what}, got {tok!r}") from None


def parse(text: str) -> Instance:
    """Parse an instance file; the header keyword picks the problem kind."""
    lines = list(_meaningful_lines(text))
    if not lines:
        raise ParseError(0, "empty input")
    lineno, header = lines[0]
    keyword = header[0].upper()
    try:
        if keyword == "FGC":
            return _parse_fgc(lineno, header, lines[1:])
        if keyword == "CAPK":
            return _parse_capk(lineno, header, lines[1:])
        if keyword == "COVER":
            return _parse_cover(lineno, header, lines[1:])
    except ValueError as exc:
        raise ParseError(lineno, str(exc)) from None
    raise ParseError(lineno, f"unknown header keyword {header[0]!r}")


def _parse_fgc(h_lineno, header, rest) -> FgcInstance:
    if len(header) != 5:
        raise ParseError(h_lineno, "FGC header needs: FGC n m p q")
    n, m, p, q = (_want_int(t, h_lineno, "header field") for t in header[1:])
    if len(rest) != m:
        raise ParseError(h_lineno, f"expected {m} edge lines, found {len(rest)}")
    edges = []
    for lineno, toks in rest:
        if len(toks) != 5 or toks[0] != "E":
            raise ParseError(lineno, "edge line needs: E u v cost S|U")
        u = _want_int(toks[1], lineno, "endpoint")
        v = _want_int(toks[2], lineno, "endpoint")
        cost = _want_rat(toks[3], lineno, "cost")
        if toks[4] not in _KIND_TOKENS:
            raise ParseError(lineno, f"edge kind must be S or U, got {toks[4]!r}")
        edges.append(FgcEdge(u, v, cost, _KIND_TOKENS[toks[4]]))
    return FgcInstance(n=n, edges=tuple(edges), p=p, q=q)


def _parse_capk(h_lineno, header, rest) -> CapEcssInstance:
    if len(header) != 4:
        raise ParseError(h_lineno, "CAPK header needs: CAPK n m k")
    n, m, k = (_want_int(t, h_lineno, "header field") for t in header[1:])
    if len(rest) != m:
        raise ParseError(h_lineno, f"expected {m} edge lines, found {len(rest)}")
    edges = []
    for lineno, toks in rest:
        if len(toks) != 5 or toks[0] != "E":
            raise ParseError(lineno, "edge line needs: E u v cost cap")
        u = _want_int(toks[1], lineno, "endpoint")
        v = _want_int(toks[2], lineno, "endpoint")
        cost = _want_rat(toks[3], lineno, "cost")
        cap = _want_int(toks[4], lineno, "capacity")
        if cap < 1:
            raise ParseError(lineno, f"capacity must be positive, got {cap}")
        # capacity above k never helps: a cut is satisfied at k already
        edges.append(CapEdge(u, v, cost, min(cap, k)))
    return CapEcssInstance(n=n, edges=tuple(edges), k=k)


def _parse_cover(h_lineno, header, rest) -> LinkCoverInstance:
    if len(header) != 6:
        raise ParseError(h_lineno, "COVER header needs: COVER n m l lambda r")
    n = _want_int(header[1], h_lineno, "n")
    m = _want_int(header[2], h_lineno, "m")
    l = _want_int(header[3], h_lineno, "l")
    lam = _want_rat(header[4], h_lineno, "threshold")
    r = _want_int(header[5], h_lineno, "multiplicity")
    if len(rest) != m + l:
        raise ParseError(h_lineno, f"expected {m}+{l} lines, found {len(rest)}")
    base = []
    for lineno, toks in rest[:m]:
        if len(toks) != 4 or toks[0] != "E":
            raise ParseError(lineno, "base edge line needs: E u v cap")
        base.append(BaseEdge(
            _want_int(toks[1], lineno, "endpoint"),
            _want_int(toks[2], lineno, "endpoint"),
            _want_rat(toks[3], lineno, "capacity"),
        ))
    links = []
    for lineno, toks in rest[m:]:
        if len(toks) != 4 or toks[0] != "L":
            raise ParseError(lineno, "link line needs: L u v cost")
        links.append(Link(
            _want_int(toks[1], lineno, "endpoint"),
            _want_int(toks[2], lineno, "endpoint"),
            _want_rat(toks[3], lineno, "cost"),
        ))
    return LinkCoverInstance(n=n, base_edges=tuple(base), links=tuple(links),
                             threshold=lam, r=r)


def serialize(inst: Instance) -> str:
    out = []
    if isinstance(inst, FgcInstance):
        out.append(f"FGC {inst.n} {inst.m} {inst.p} {inst.q}")
        for e in inst.edges:
            out.append(f"E {e.u} {e.v} {fmt_rat(e.cost)} {'S' if e.safe else 'U'}")
    elif isinstance(inst, CapEcssInstance):
        out.append(f"CAPK {inst.n} {inst.m} {inst.k}")
        for e in inst.edges:
            out.append(f"E {e.u} {e.v} {fmt_rat(e.cost)} {e.cap}")
    elif isinstance(inst, LinkCoverInstance):
        out.append(f"COVER {inst.n} {len(inst.base_edges)} {inst.num_links} "
                   f"{fmt_rat(inst.threshold)} {inst.r}")
        for e in inst.base_edges:
            out.append(f"E {e.u} {e.v} {fmt_rat(e.cap)}")
        for f in inst.links:
            out.append(f"L {f.u} {f.v} {fmt_rat(f.cost)}")
    else:
        raise TypeError(f"not an instance: {inst!r}")
    return "\n".join(out) + "\n"


def format_solution(problem: str, cost: Rat, chosen: EdgeSet) -> str:
    lines = [f"SOL {problem} {fmt_rat(cost)}"]
    lines.extend(str(i) for i in sorted(chosen))
    return "\n".join(lines) + "\n"


def parse_solution(text: str) -> tuple[str, Rat, EdgeSet]:
    lines = list(_meaningful_lines(text))
    if not lines:
        raise ParseError(0, "empty solution")
    lineno, header = lines[0]
    if len(header) != 3 or header[0] != "SOL":
        raise ParseError(lineno, "solution header needs: SOL problem cost")
    cost = _want_rat(header[2], lineno, "cost")
    chosen = set()
    for lineno, toks in lines[1:]:
        if len(toks) != 1:
            raise ParseError(lineno, "one edge index per line")
        i = _want_int(toks[0], lineno, "edge index")
        if i in chosen:
            raise ParseError(lineno, f"duplicate index {i}")
        chosen.add(i)
    return header[1], cost, frozenset(chosen)


# ---------------------------------------------------------------------------
# generators


def _random_connected_pairs(rng: random.Random, n: int, m: int):
    """A spanning tree over a shuffled vertex order, then extra random pairs."""
    if m < n - 1:
        raise ValueError(f"need at least {n - 1} edges to connect {n} vertices")
    order = list(range(n))
    rng.shuffle(order)
    pairs = []
    for i in range(1, n):
        a = order[rng.randrange(i)]
        b = order[i]
        pairs.append((min(a, b), max(a, b)))
    for _ in range(m - (n - 1)):
        a = rng.randrange(n)
        b = rng.randrange(n - 1)
        if b >= a:
            b += 1
        pairs.append((min(a, b), max(a, b)))
    return pairs


def gen_fgc(seed: int, n: int, m: int, p: int, q: int,
            cost_max: int = 10, safe_fraction: float = 0.5) -> FgcInstance:
    rng = random.Random(seed)
    pairs = _random_connected_pairs(rng, n, m)
    edges = tuple(
        FgcEdge(u, v, rat(rng.randint(0, cost_max)), rng.random() < safe_fraction)
        for u, v in pairs
    )
    return FgcInstance(n=n, edges=edges, p=p, q=q)


def gen_capk(seed: int, n: int, m: int, k: int, cost_max: int = 10) -> CapEcssInstance:
    rng = random.Random(seed)
    pairs = _random_connected_pairs(rng, n, m)
    edges = tuple(
        CapEdge(u, v, rat(rng.randint(0, cost_max)), rng.randint(1, k))
        for u, v in pairs
    )
    return CapEcssInstance(n=n, edges=edges, k=k)
