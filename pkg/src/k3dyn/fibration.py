"""Elliptic fibrations on a lattice model: Kodaira fibers, sections,
vertical roots, the trivial lattice and the Shioda projection."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Optional, Sequence

from . import exactla as la
from .curveconf import CurveConfig, Divisor, LatticeModel, divisor_class, graph_isomorphisms, make_config
from .errors import (DisconnectedSupport, IrreducibleType, NotAFiber, NotASection, NotIsotropic,
                     SingularSystem, UnknownCurve)


# ---------------------------------------------------------------------------
# Kodaira types
# ---------------------------------------------------------------------------

AMBIGUOUS_I2_III = "I2|III"


@dataclass(frozen=True)
class KodairaType:
    """Kodaira fiber type.  ``tag`` is one of ``I<b>``, ``I<b>*``, ``II*``,
    ``III*``, ``IV*``, ``IV``, ``III`` or the marker ``I2|III`` for the
    two-component case lattice data cannot resolve."""

    tag: str

    @property
    def family(self) -> str:
        if self.tag in ("II*", "III*", "IV*", "IV", "III", AMBIGUOUS_I2_III):
            return self.tag
        return "I*" if self.tag.endswith("*") else "I"

    @property
    def b(self) -> Optional[int]:
        if self.family == "I":
            return int(self.tag[1:])
        if self.family == "I*":
            return int(self.tag[1:-1])
        return None

    @property
    def components(self) -> int:
        return len(self.multiplicities)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        """Standard multiplicity vector, sorted ascending."""
        fam = self.family
        if fam == "I":
            return (1,) * self.b
        if fam == "I*":
            return (1, 1, 1, 1) + (2,) * (self.b + 1)
        return {
            "IV*": (1, 1, 1, 2, 2, 2, 3),
            "III*": (1, 1, 2, 2, 2, 3, 3, 4),
            "II*": (1, 2, 2, 3, 3, 4, 4, 5, 6),
            "IV": (1, 1, 1),
            "III": (1, 1),
            AMBIGUOUS_I2_III: (1, 1),
        }[fam]

    @property
    def root_type(self) -> str:
        """Finite Dynkin type of the non-identity components."""
        fam = self.family
        if fam == "I":
            return f"A{self.b - 1}"
        if fam == "I*":
            return f"D{self.b + 4}"
        return {"IV*": "E6", "III*": "E7", "II*": "E8", "IV": "A2", "III": "A1",
                AMBIGUOUS_I2_III: "A1"}[fam]

    def __str__(self) -> str:
        return self.tag


@dataclass(frozen=True)
class ComponentGroup:
    invariants: tuple[int, ...]

    @property
    def order(self) -> int:
        return reduce(lambda a, b: a * b, self.invariants, 1)

    def __str__(self) -> str:
        if not self.invariants:
            return "trivial"
        return "x".join(f"Z/{n}" for n in self.invariants)


def component_group(t: KodairaType) -> ComponentGroup:
    """Group of multiplicity-one components of a reducible fiber."""
    fam = t.family
    if fam == "I":
        if t.b < 2:
            raise IrreducibleType(f"{t} is irreducible")
        return ComponentGroup((t.b,))
    if fam == "I*":
        return ComponentGroup((4,)) if t.b % 2 else ComponentGroup((2, 2))
    table = {"II*": (), "III*": (2,), "IV*": (3,), "IV": (3,), "III": (2,), AMBIGUOUS_I2_III: (2,)}
    return ComponentGroup(table[fam])


def fiber_template(tag: str) -> tuple[CurveConfig, Divisor]:
    """Synthetic configuration realizing the dual graph of a Kodaira type,
    together with its fiber divisor."""
    t = KodairaType(tag)
    fam = t.family
    edges: list[tuple] = []
    mult: dict[str, int] = {}
    coinc: list[tuple] = []
    if fam == "I":
        b = t.b
        names = [f"A{i}" for i in range(b)]
        if b == 2:
            edges = [("A0", "A1", 2)]
        else:
            edges = [(names[i], names[(i + 1) % b]) for i in range(b)]
        mult = {n: 1 for n in names}
    elif fam in ("III", AMBIGUOUS_I2_III):
        names = ["A0", "A1"]
        edges = [("A0", "A1", 2)]
        mult = {"A0": 1, "A1": 1}
    elif fam == "IV":
        names = ["A0", "A1", "A2"]
        edges = [("A0", "A1"), ("A1", "A2"), ("A0", "A2")]
        coinc = [("A1", "A2", "A0")]
        mult = {n: 1 for n in names}
    elif fam == "I*":
        b = t.b
        chain = [f"M{i}" for i in range(b + 1)]
        names = ["L0", "L1"] + chain + ["L2", "L3"]
        edges = [(chain[i], chain[i + 1]) for i in range(b)]
        edges += [("L0", chain[0]), ("L1", chain[0]), ("L2", chain[-1]), ("L3", chain[-1])]
        mult = {n: 2 for n in chain}
        mult.update({f"L{i}": 1 for i in range(4)})
    else:
        arms = {"IV*": (2, 2, 2), "III*": (1, 3, 3), "II*": (1, 2, 5)}[fam]
        names = ["Z"]
        centre = {"IV*": 3, "III*": 4, "II*": 6}[fam]
        mult = {"Z": centre}
        for a, length in enumerate(arms):
            prev = "Z"
            for k in range(length):
                nm = f"R{a}_{k}"
                names.append(nm)
                edges.append((prev, nm))
                prev = nm
        # null-vector multiplicities along each arm, read off from the standard tables
        arm_mults = {
            "IV*": [(2, 1), (2, 1), (2, 1)],
            "III*": [(2,), (3, 2, 1), (3, 2, 1)],
            "II*": [(3,), (4, 2), (5, 4, 3, 2, 1)],
        }[fam]
        for a, ms in enumerate(arm_mults):
            for k, m in enumerate(ms):
                mult[f"R{a}_{k}"] = m
    cfg = make_config(f"template_{tag}", names, edges, coincidences=coinc)
    return cfg, Divisor([(n, mult[n]) for n in names])


def _arm_lengths(cfg: CurveConfig, nodes: list[str], centre: str) -> list[int]:
    lengths = []
    for start in [w for w in nodes if w != centre and cfg.meet(centre, w) > 0]:
        prev, cur, n = centre, start, 1
        while True:
            nxt = [w for w in nodes if w not in (prev, cur) and cfg.meet(cur, w) > 0]
            if not nxt:
                break
            prev, cur, n = cur, nxt[0], n + 1
        lengths.append(n)
    return sorted(lengths)


def kodaira_classify(cfg: CurveConfig, d: Divisor) -> KodairaType:
    """Match a divisor's weighted dual graph against the affine ADE templates."""
    supp = d.support
    for c in supp:
        cfg.index(c)
        if cfg.self_int(c) != -2:
            raise NotAFiber(f"component {c} has self-intersection {cfg.self_int(c)}, not -2")
    if not cfg.is_connected(supp):
        raise DisconnectedSupport(f"support {supp} is disconnected")
    m = d.as_dict()
    for c in supp:
        if sum(m[x] * cfg.meet(c, x) for x in supp) != 0:
            raise NotAFiber(f"divisor {d} does not pair to zero with component {c}")
    if reduce(gcd, m.values()) != 1:
        raise NotAFiber(f"divisor {d} is a proper multiple of a fiber")
    n = len(supp)
    if n == 1:
        raise NotAFiber("single (-2)-curve cannot have square zero")
    edges = {(a, b): cfg.meet(a, b) for i, a in enumerate(supp) for b in supp[i + 1:] if cfg.meet(a, b)}
    deg = {c: sum(1 for w in supp if w != c and cfg.meet(c, w) > 0) for c in supp}
    if n == 2:
        if list(edges.values()) == [2]:
            return KodairaType(AMBIGUOUS_I2_III)
        raise NotAFiber("two-component divisor must meet with intersection number 2")
    if any(v != 1 for v in edges.values()):
        raise NotAFiber("tangential intersections occur only in two-component fibers")
    if all(v == 2 for v in deg.values()) and len(edges) == n:
        if n == 3:
            a, b, c = supp
            if cfg.same_point(a, b, c) or cfg.same_point(a, c, b) or cfg.same_point(b, c, a):
                return KodairaType("IV")
        return KodairaType(f"I{n}")
    if len(edges) != n - 1:
        raise NotAFiber("dual graph is neither a cycle nor a tree")
    branch = [c for c in supp if deg[c] >= 3]
    if len(branch) == 1 and deg[branch[0]] == 4 and n == 5:
        return KodairaType("I0*")
    if len(branch) == 2 and all(deg[c] == 3 for c in branch):
        return KodairaType(f"I{n - 5}*")
    if len(branch) == 1 and deg[branch[0]] == 3:
        arms = tuple(_arm_lengths(cfg, supp, branch[0]))
        tag = {(2, 2, 2): "IV*", (1, 3, 3): "III*", (1, 2, 5): "II*"}.get(arms)
        if tag:
            return KodairaType(tag)
    raise NotAFiber(f"dual graph of {d} matches no affine ADE template")


# ---------------------------------------------------------------------------
# fibers inside a lattice model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiberData:
    fiber_class: la.Vec
    divisor: Divisor
    kodaira: KodairaType
    component_classes: tuple  # ((name, mult), ...)

    @property
    def components(self) -> list[str]:
        return [c for c, _ in self.component_classes]


def fiber_check(model: LatticeModel, d: Divisor) -> FiberData:
    kt = kodaira_classify(model.config, d)
    F = divisor_class(model, d)
    if model.inner(F, F) != 0:
        raise NotIsotropic(f"class of {d} has square {model.inner(F, F)}")
    for c in d.support:
        if model.inner(F, model.class_of(c)) != 0:
            raise NotIsotropic(f"class of {d} is not orthogonal to component {c}")
    return FiberData(F, d, kt, d.multiplicities)


def fiber_from_divisor(model: LatticeModel, d: Divisor) -> FiberData:
    """Like :func:`fiber_check`, but reports NotIsotropic before classification."""
    F = divisor_class(model, d)
    if model.inner(F, F) != 0:
        raise NotIsotropic(f"class of {d} has square {model.inner(F, F)}")
    return fiber_check(model, d)


def sections_of(model: LatticeModel, fd: FiberData) -> list[str]:
    supp = set(fd.components)
    return [c for c in model.config.names
            if c not in supp and model.inner(model.class_of(c), fd.fiber_class) == 1]


# ---------------------------------------------------------------------------
# vertical roots
# ---------------------------------------------------------------------------

def dynkin_type(G: la.Mat, idx: Sequence[int]) -> str:
    """ADE type of a connected simply-laced Dynkin diagram given by a Gram
    matrix of simple roots (off-diagonal entries 0 or +-1)."""
    idx = list(idx)
    n = len(idx)
    adj = {i: [j for j in idx if j != i and G[i][j] != 0] for i in idx}
    if any(abs(G[i][j]) > 1 for i in idx for j in idx if i != j):
        raise ValueError("not a simply-laced diagram")
    branch = [i for i in idx if len(adj[i]) >= 3]
    if not branch:
        return f"A{n}"
    if len(branch) > 1 or len(adj[branch[0]]) != 3:
        raise ValueError("not a Dynkin diagram")
    c = branch[0]
    arms = []
    for s in adj[c]:
        prev, cur, k = c, s, 1
        while True:
            nxt = [w for w in adj[cur] if w != prev]
            if not nxt:
                break
            prev, cur, k = cur, nxt[0], k + 1
        arms.append(k)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return f"D{n}"
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return f"E{n}"
    raise ValueError("not a Dynkin diagram")


@dataclass(frozen=True)
class RootSystem:
    simple_roots: tuple  # model coordinates
    decomposition: tuple  # sorted ADE labels, e.g. ("E6", "E6")
    root_count: int  # number of roots (both signs)

    @property
    def rank(self) -> int:
        return len(self.simple_roots)


def _complete_basis(c: Sequence[int]) -> list[tuple[int, ...]]:
    """Integer vectors completing the primitive vector c to a basis of Z^k."""
    k = len(c)
    rows = [[c[i]] + [1 if j == i else 0 for j in range(k)] for i in range(k)]
    red, _ = la._row_echelon_int(rows, 1)
    U = [r[1:] for r in red]  # U c = (+-1, 0, ..., 0)
    Uinv = la.inverse(tuple(tuple(r) for r in U))
    cols = la.transpose(Uinv)
    assert all(abs(a) == abs(b) for a, b in zip(cols[0], c))
    return [tuple(int(x) for x in col) for col in cols[1:]]


def vertical_root_system(model: LatticeModel, F: Sequence) -> RootSystem:
    """Roots of F-perp / F inside the lattice generated by all curve classes."""
    F = tuple(F)
    if not any(F) or model.inner(F, F) != 0:
        raise NotIsotropic("fiber class must be a nonzero isotropic vector")
    S = model.span_basis
    St = la.transpose(S)
    Gs = model.span_gram()
    f = la.solve_any(St, F)
    if f is None:
        raise NotIsotropic("fiber class is not in the span of the curve classes")
    f0 = la.primitive(f)
    Ls = la.Lattice(Gs)
    K = la.orthogonal_complement(Ls, [f0])
    c = la.solve_any(la.transpose(tuple(K)), f0)
    assert c is not None and la.is_integral_vec(c)
    comp = _complete_basis([int(x) for x in c])
    Q = [tuple(sum(a * kv for a, kv in zip(w, col)) for col in zip(*K)) for w in comp]
    Gq = la.gram_of(Gs, Q)
    if not Gq:
        return RootSystem((), (), 0)
    roots = la.short_vectors(Gq, -2)
    lifted = [tuple(sum(r[i] * Q[i][k] for i in range(len(Q))) for k in range(len(S))) for r in roots]
    # span coordinates -> model coordinates
    model_roots = [la.mat_vec(St, v) for v in lifted]
    if not model_roots:
        return RootSystem((), (), 0)
    bound = 2 * max(abs(x) for r in roots for x in r) + 1
    weight = [bound ** i for i in range(len(Q))]
    pos = []
    for r, mr in zip(roots, model_roots):
        s = la.dot(r, weight)
        pos.append((tuple(r), mr) if s > 0 else (tuple(-x for x in r), la.vscale(mr, -1)))
    pos_set = {p[0] for p in pos}
    simple = []
    for r, mr in pos:
        decomposable = any(tuple(a - b for a, b in zip(r, s)) in pos_set for s, _ in pos if s != r)
        if not decomposable:
            simple.append((r, mr))
    simple.sort()
    sroots = tuple(mr for _, mr in simple)
    G = la.gram_of(model.gram, sroots)
    comps = _components(G)
    labels = tuple(sorted((dynkin_type(G, cmp) for cmp in comps), key=_ade_key))
    return RootSystem(sroots, labels, 2 * len(roots))


def _ade_key(label: str) -> tuple:
    return ("ADE".index(label[0]), int(label[1:]))


def _components(G: la.Mat) -> list[list[int]]:
    n = len(G)
    seen: set[int] = set()
    out = []
    for s in range(n):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in range(n):
                if w not in seen and G[v][w] != 0:
                    seen.add(w)
                    stack.append(w)
        out.append(sorted(comp))
    return out


# ---------------------------------------------------------------------------
# trivial lattice, Shioda projection, Mordell-Weil rank
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrivialLattice:
    fiber_class: la.Vec
    zero_section: str
    roots: RootSystem
    basis: tuple  # F, O, simple roots (model coordinates)
    gram: la.Mat


def _require_section(model: LatticeModel, fd: FiberData, name: str) -> None:
    try:
        model.class_of(name)
    except UnknownCurve:
        raise NotASection(f"{name!r} is not a curve of the configuration") from None
    if name not in sections_of(model, fd):
        raise NotASection(f"{name} is not a section of the fibration with fiber {fd.divisor}")


def trivial_lattice(model: LatticeModel, fd: FiberData, O: str,
                    roots: Optional[RootSystem] = None) -> TrivialLattice:
    _require_section(model, fd, O)
    roots = roots or vertical_root_system(model, fd.fiber_class)
    basis = (fd.fiber_class, model.class_of(O)) + roots.simple_roots
    G = la.gram_of(model.gram, basis)
    assert G[0][0] == 0 and G[0][1] == 1 and G[1][1] == -2
    if la.det(G) == 0:
        raise SingularSystem("trivial lattice Gram matrix is degenerate")
    return TrivialLattice(fd.fiber_class, O, roots, basis, G)


def shioda_project(model: LatticeModel, triv: TrivialLattice, P: str,
                   fd: Optional[FiberData] = None) -> la.Vec:
    """The vector in class(P) + span_Q(trivial lattice) orthogonal to the
    trivial lattice."""
    x = model.class_of(P)
    if model.inner(x, triv.fiber_class) != 1:
        raise NotASection(f"{P} meets the fiber class with multiplicity != 1")
    if fd is not None and P in fd.components:
        raise NotASection(f"{P} is a fiber component")
    rhs = tuple(-model.inner(b, x) for b in triv.basis)
    try:
        y = la.solve(triv.gram, rhs)
    except ZeroDivisionError:
        raise SingularSystem("trivial lattice Gram matrix is singular") from None
    phi = x
    for yi, b in zip(y, triv.basis):
        phi = la.vadd(phi, b, yi)
    return phi


def height(model: LatticeModel, phi: Sequence) -> Fraction:
    return Fraction(-model.inner(phi, phi))


def mw_rank(model: LatticeModel, fd: FiberData, O: str, roots: Optional[RootSystem] = None) -> int:
    triv = trivial_lattice(model, fd, O, roots)
    return model.rank - 2 - triv.roots.rank


# ---------------------------------------------------------------------------
# fibers made of configuration curves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VisibleFiber:
    """A connected set of vertical configuration curves; ``complete`` when
    its null-vector combination equals the fiber class."""

    components: tuple  # ((name, mult), ...)
    kodaira: Optional[KodairaType]
    complete: bool

    @property
    def names(self) -> list[str]:
        return [c for c, _ in self.components]


def visible_fibers(model: LatticeModel, F: Sequence) -> list[VisibleFiber]:
    cfg = model.config
    vert = [c for c in cfg.names
            if cfg.self_int(c) == -2 and model.inner(model.class_of(c), F) == 0]
    out = []
    remaining = list(vert)
    while remaining:
        comp, stack = [remaining[0]], [remaining[0]]
        seen = {remaining[0]}
        while stack:
            v = stack.pop()
            for w in vert:
                if w not in seen and cfg.meet(v, w) > 0:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comp = [c for c in cfg.names if c in seen]
        remaining = [c for c in remaining if c not in seen]
        G = tuple(tuple(cfg.meet(a, b) for b in comp) for a in comp)
        ker = la.kernel(G)
        kt, complete, mults = None, False, [(c, 0) for c in comp]
        if len(ker) == 1 and len(comp) > 1:
            m = la.sign_normalize(ker[0])
            if all(x > 0 for x in m):
                mults = list(zip(comp, m))
                d = Divisor(mults)
                cls = divisor_class(model, d)
                try:
                    kt = kodaira_classify(cfg, d)
                except NotAFiber:
                    kt = None
                complete = kt is not None and tuple(cls) == tuple(F)
        out.append(VisibleFiber(tuple(mults), kt, complete))
    return out


def meeting_component(model: LatticeModel, vf: VisibleFiber, section: str) -> str:
    x = model.class_of(section)
    hits = [c for c, m in vf.components if model.inner(x, model.class_of(c)) > 0]
    if len(hits) != 1 or model.inner(x, model.class_of(hits[0])) != 1:
        raise NotASection(f"{section} does not meet exactly one component of the fiber {vf.names}")
    return hits[0]


def translation_permutation(model: LatticeModel, vf: VisibleFiber, O: str, P: str) -> dict[str, str]:
    """Permutation of the components of a complete fiber induced by
    translation by P when O is the zero section.

    Multiplicity-one components are identified with the discriminant group
    of the root lattice spanned by the components missing O; translation
    adds the class of the component P meets.  The full permutation is the
    unique diagram automorphism extending that action.
    """
    cfg = model.config
    o = meeting_component(model, vf, O)
    p = meeting_component(model, vf, P)
    names = vf.names
    mult = dict(vf.components)
    if o == p:
        return {c: c for c in names}
    simple = [c for c in names if c != o]
    N = tuple(tuple(cfg.meet(a, b) for b in simple) for a in simple)
    ones = [c for c in names if mult[c] == 1]

    def weight(c: str) -> la.Vec:
        if c == o:
            return (0,) * len(simple)
        e = tuple(1 if s == c else 0 for s in simple)
        return la.solve(N, e)

    w = {c: weight(c) for c in ones}
    shift = {}
    for c in ones:
        target = la.vadd(w[c], w[p])
        hits = [d for d in ones if la.is_integral_vec(la.vadd(target, w[d], -1))]
        if len(hits) != 1:
            raise SingularSystem("component group law is ill-defined for this fiber")
        shift[c] = hits[0]
    autos = graph_isomorphisms(cfg, names, fixed=shift, weights=mult, limit=2)
    if len(autos) != 1:
        raise SingularSystem(f"component translation does not extend uniquely ({len(autos)} extensions)")
    return autos[0]
