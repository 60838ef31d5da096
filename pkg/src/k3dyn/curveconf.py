"""Configurations of smooth rational curves and their lattice models."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from . import exactla as la
from .errors import TooLarge, UnknownCurve, UnknownName, ValidationError


@dataclass(frozen=True)
class CurveConfig:
    """Named curves with self-intersections and pairwise intersection numbers.

    ``coincidences`` holds triples (A, B, C) asserting that A and B meet C in
    the same point.  Otherwise distinct curves meeting C are assumed to meet
    it at distinct points.
    """

    name: str
    names: tuple
    self_intersections: Mapping[str, int]
    intersections: Mapping[frozenset, int]
    coincidences: tuple = ()

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            raise ValidationError("curve names must be unique")
        known = set(self.names)
        for pair, m in self.intersections.items():
            if len(pair) != 2 or not pair <= known:
                raise ValidationError(f"intersection {sorted(pair)} references unknown curves")
            if m < 0:
                raise ValidationError(f"negative intersection number for {sorted(pair)}")
        for nm in self.self_intersections:
            if nm not in known:
                raise ValidationError(f"self-intersection given for unknown curve {nm}")
        for trip in self.coincidences:
            if len(trip) != 3 or not set(trip) <= known or len(set(trip)) != 3:
                raise ValidationError(f"bad coincidence triple {trip}")
            a, b, c = trip
            if self.meet(a, c) < 1 or self.meet(b, c) < 1:
                raise ValidationError(f"coincidence {trip}: both curves must meet {c}")

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownCurve(f"unknown curve {name!r}") from None

    def self_int(self, name: str) -> int:
        return self.self_intersections.get(name, -2)

    def meet(self, a: str, b: str) -> int:
        if a == b:
            return self.self_int(a)
        return self.intersections.get(frozenset((a, b)), 0)

    def neighbors(self, name: str) -> list[str]:
        self.index(name)
        return [b for b in self.names if b != name and self.meet(name, b) > 0]

    def same_point(self, a: str, b: str, c: str) -> bool:
        """True when a and b meet c at one common point."""
        return (a, b, c) in self.coincidences or (b, a, c) in self.coincidences

    def is_connected(self, subset: Optional[Sequence[str]] = None) -> bool:
        nodes = list(subset) if subset is not None else list(self.names)
        if not nodes:
            return False
        allowed = set(nodes)
        seen = {nodes[0]}
        stack = [nodes[0]]
        while stack:
            v = stack.pop()
            for w in nodes:
                if w not in seen and w in allowed and w != v and self.meet(v, w) > 0:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(allowed)


def make_config(name: str, names: Iterable[str], edges: Iterable[Sequence] = (),
                self_intersection: int = -2, self_overrides: Optional[Mapping[str, int]] = None,
                coincidences: Iterable[Sequence[str]] = ()) -> CurveConfig:
    names = tuple(names)
    selfs = {n: self_intersection for n in names}
    selfs.update(self_overrides or {})
    inter: dict[frozenset, int] = {}
    for e in edges:
        a, b = e[0], e[1]
        m = int(e[2]) if len(e) > 2 else 1
        if a == b:
            raise ValidationError(f"edge from {a} to itself")
        for c in (a, b):
            if c not in names:
                raise ValidationError(f"edge references unknown curve {c!r}")
        key = frozenset((a, b))
        if key in inter and inter[key] != m:
            raise ValidationError(f"conflicting intersection numbers for {a}, {b}")
        if m:
            inter[key] = m
    return CurveConfig(name, names, selfs, inter, tuple(tuple(t) for t in coincidences))


# ---------------------------------------------------------------------------
# builtin configurations
# ---------------------------------------------------------------------------

def _kummer_fig1() -> CurveConfig:
    names = ([f"E{i}" for i in range(1, 5)] + [f"F{i}" for i in range(1, 5)]
             + [f"C{i}{j}" for i in range(1, 5) for j in range(1, 5)])
    edges = []
    for i in range(1, 5):
        for j in range(1, 5):
            edges.append((f"C{i}{j}", f"F{i}"))
            edges.append((f"C{i}{j}", f"E{j}"))
    return make_config("kummer_fig1", names, edges)


def _most_algebraic_fig2() -> CurveConfig:
    idx = [(i, j) for i in range(1, 4) for j in range(1, 4)]
    names = ([f"F{i}" for i in range(1, 4)] + [f"G{i}" for i in range(1, 4)]
             + [f"E{i}{j}" for i, j in idx] + [f"E{i}{j}'" for i, j in idx])
    edges = []
    for i, j in idx:
        edges.append((f"F{i}", f"E{i}{j}'"))
        edges.append((f"E{i}{j}'", f"E{i}{j}"))
        edges.append((f"E{i}{j}", f"G{j}"))
    return make_config("most_algebraic_fig2", names, edges)


def _e8_thm51() -> CurveConfig:
    names = [f"C{i}" for i in range(1, 9)]
    pairs = [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (3, 8)]
    return make_config("e8_thm51", names, [(f"C{a}", f"C{b}") for a, b in pairs])


_BUILTINS = {
    "kummer_fig1": _kummer_fig1,
    "most_algebraic_fig2": _most_algebraic_fig2,
    "e8_thm51": _e8_thm51,
}

BUILTIN_NAMES = tuple(_BUILTINS)


def builtin(name: str) -> CurveConfig:
    try:
        return _BUILTINS[name]()
    except KeyError:
        raise UnknownName(f"no builtin configuration {name!r}; choose from {sorted(_BUILTINS)}") from None


def config_gram(cfg: CurveConfig) -> la.Mat:
    return tuple(tuple(cfg.meet(a, b) for b in cfg.names) for a in cfg.names)


# ---------------------------------------------------------------------------
# lattice model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Divisor:
    multiplicities: tuple  # ((curve, mult), ...) in insertion order

    def __init__(self, mults: "Mapping[str, int] | Iterable[tuple[str, int]]"):
        items = tuple(mults.items()) if isinstance(mults, Mapping) else tuple(mults)
        items = tuple((str(k), int(v)) for k, v in items if int(v) != 0)
        if not items:
            raise ValidationError("divisor has empty support")
        if any(v < 0 for _, v in items):
            raise ValidationError("divisor multiplicities must be nonnegative")
        if len({k for k, _ in items}) != len(items):
            raise ValidationError("repeated curve in divisor")
        object.__setattr__(self, "multiplicities", items)

    @property
    def support(self) -> list[str]:
        return [k for k, _ in self.multiplicities]

    def mult(self, name: str) -> int:
        return dict(self.multiplicities).get(name, 0)

    def as_dict(self) -> dict[str, int]:
        return dict(self.multiplicities)

    def __str__(self) -> str:
        return " + ".join(f"{m}{c}" if m != 1 else c for c, m in self.multiplicities)


@dataclass(frozen=True)
class LatticeModel:
    """Nondegenerate quotient of a curve span.

    ``lattice`` is the Gram matrix of ``basis_curves``; ``coords`` expresses
    every curve in that basis (entries may be non-integral).  ``span_basis``
    is a Z-basis, in model coordinates, of the lattice generated by all
    curve classes.
    """

    config: CurveConfig
    lattice: la.Lattice
    basis_curves: tuple
    coords: Mapping[str, la.Vec]
    span_basis: tuple = field(compare=False)

    @property
    def rank(self) -> int:
        return self.lattice.rank

    @property
    def gram(self) -> la.Mat:
        return self.lattice.gram

    @property
    def cone_rep(self) -> Optional[la.Vec]:
        return self.lattice.cone_rep

    def class_of(self, name: str) -> la.Vec:
        try:
            return self.coords[name]
        except KeyError:
            raise UnknownCurve(f"unknown curve {name!r}") from None

    def inner(self, x: Sequence, y: Sequence):
        return la.bilinear(self.gram, x, y)

    def in_span(self, x: Sequence) -> bool:
        """Is x an integer combination of curve classes?"""
        B = la.transpose(self.span_basis)
        return la.is_integral_vec(la.solve(B, x))

    def span_gram(self) -> la.Mat:
        return la.gram_of(self.gram, self.span_basis)

    def curve_matching(self, x: Sequence) -> Optional[str]:
        x = tuple(x)
        for nm in self.config.names:
            if self.coords[nm] == x:
                return nm
        return None


def lattice_model(cfg: CurveConfig) -> LatticeModel:
    G = config_gram(cfg)
    if la.rank(G) < 1:
        raise ValidationError("configuration Gram matrix has rank 0")
    basis: list[int] = []
    r = la.rank(G)
    for i in range(len(cfg.names)):
        if la.rank(tuple(G[j] for j in basis + [i])) > len(basis):
            basis.append(i)
            if len(basis) == r:
                break
    B = tuple(tuple(G[i][j] for j in basis) for i in basis)
    coords = {}
    for k, nm in enumerate(cfg.names):
        coords[nm] = la.solve(B, tuple(G[i][k] for i in basis))
    total = tuple(sum(col) for col in zip(*coords.values()))
    cone = total if la.bilinear(B, total, total) > 0 else None
    L = la.make_lattice(B, cone_rep=cone)
    span = tuple(la.lattice_basis(list(coords.values())))
    model = LatticeModel(cfg, L, tuple(cfg.names[i] for i in basis), coords, span)
    for a in cfg.names:
        for b in cfg.names:
            assert model.inner(coords[a], coords[b]) == cfg.meet(a, b)
    return model


def divisor_class(model: LatticeModel, d: Divisor) -> la.Vec:
    acc = (0,) * model.rank
    for name, m in d.multiplicities:
        acc = la.vadd(acc, model.class_of(name), m)
    return acc


# ---------------------------------------------------------------------------
# dual graph automorphisms
# ---------------------------------------------------------------------------

MAX_AUTOMORPHISM_CURVES = 32


def graph_isomorphisms(cfg: CurveConfig, nodes: Sequence[str],
                       fixed: Optional[Mapping[str, str]] = None,
                       weights: Optional[Mapping[str, int]] = None,
                       limit: Optional[int] = None) -> list[dict[str, str]]:
    """Backtracking search for permutations of ``nodes`` preserving all
    intersection numbers (and ``weights`` when given), extending ``fixed``."""
    nodes = list(nodes)
    n = len(nodes)
    pos = {v: i for i, v in enumerate(nodes)}
    M = [[cfg.meet(a, b) for b in nodes] for a in nodes]
    adj = [[j for j in range(n) if j != i and M[i][j] > 0] for i in range(n)]
    wt = [(weights or {}).get(v, 0) for v in nodes]
    inv = [(M[i][i], wt[i], tuple(sorted(M[i][j] for j in adj[i]))) for i in range(n)]

    img = [-1] * n
    used = [False] * n
    for v, w in (fixed or {}).items():
        i, j = pos[v], pos[w]
        if inv[i] != inv[j]:
            return []
        img[i] = j
        used[j] = True
    fixed_idx = [i for i in range(n) if img[i] >= 0]

    # BFS order so that most nodes have an already placed neighbour
    order: list[int] = []
    placed = set(fixed_idx)
    while len(placed) < n:
        start = next((i for i in range(n) if i not in placed and any(j in placed for j in adj[i])),
                     next(i for i in range(n) if i not in placed))
        queue = [start]
        while queue:
            i = queue.pop(0)
            if i in placed:
                continue
            placed.add(i)
            order.append(i)
            queue.extend(j for j in adj[i] if j not in placed)
    earlier = {}
    done = list(fixed_idx)
    for i in order:
        earlier[i] = list(done)
        done.append(i)

    results: list[dict[str, str]] = []

    def rec(k: int) -> bool:
        if k == len(order):
            results.append({nodes[i]: nodes[img[i]] for i in range(n)})
            return limit is not None and len(results) >= limit
        i = order[k]
        prev = earlier[i]
        anchor = next((a for a in prev if M[i][a] > 0), None)
        cands = adj[img[anchor]] if anchor is not None else range(n)
        Mi = M[i]
        for j in cands:
            if used[j] or inv[i] != inv[j]:
                continue
            Mj = M[j]
            if any(Mi[a] != Mj[img[a]] for a in prev):
                continue
            img[i] = j
            used[j] = True
            if rec(k + 1):
                return True
            used[j] = False
            img[i] = -1
        return False

    rec(0)
    return results


def dual_graph_automorphisms(cfg: CurveConfig) -> list[dict[str, str]]:
    """All permutations of the curves preserving self-intersections and every
    pairwise intersection number."""
    if len(cfg.names) > MAX_AUTOMORPHISM_CURVES:
        raise TooLarge(f"{len(cfg.names)} curves exceed the brute-force bound {MAX_AUTOMORPHISM_CURVES}")
    return graph_isomorphisms(cfg, cfg.names)


def compose(p: Mapping[str, str], q: Mapping[str, str]) -> dict[str, str]:
    """(p o q)(x) = p(q(x))."""
    return {x: p[q[x]] for x in q}


def invert(p: Mapping[str, str]) -> dict[str, str]:
    return {v: k for k, v in p.items()}
