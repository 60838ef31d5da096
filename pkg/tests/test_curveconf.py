import random

import networkx as nx
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from networkx.algorithms.isomorphism import GraphMatcher

from k3dyn import exactla as la
from k3dyn.curveconf import (Divisor, builtin, compose, config_gram, divisor_class, dual_graph_automorphisms,
                             invert, lattice_model, make_config)
from k3dyn.errors import TooLarge, UnknownCurve, UnknownName, ValidationError
from k3dyn.scenarios import parse_divisor

BUILTINS = ["kummer_fig1", "most_algebraic_fig2", "e8_thm51"]
D1 = "F1 + 2C14 + F2 + 2C24 + F3 + 2C34 + 3E4"
D_MOST = "G3 + 2E33 + 3E33' + 4F3 + 3E31' + 2E31 + G1 + 2E32'"


def nx_graph(cfg):
    g = nx.Graph()
    for c in cfg.names:
        g.add_node(c, s=cfg.self_int(c))
    for i, a in enumerate(cfg.names):
        for b in cfg.names[i + 1:]:
            if cfg.meet(a, b):
                g.add_edge(a, b, m=cfg.meet(a, b))
    return g


def test_builtin_neighbors():
    assert set(builtin("e8_thm51").neighbors("C3")) == {"C2", "C4", "C8"}
    assert set(builtin("kummer_fig1").neighbors("C14")) == {"F1", "E4"}
    assert set(builtin("most_algebraic_fig2").neighbors("E13")) == {"E13'", "G3"}


def test_builtin_shapes():
    k = builtin("kummer_fig1")
    assert len(k.names) == 24
    for i in range(1, 5):
        for j in range(1, 5):
            assert k.meet(f"C{i}{j}", f"F{i}") == 1 and k.meet(f"C{i}{j}", f"E{j}") == 1
    assert sum(1 for _ in k.intersections) == 32
    m = builtin("most_algebraic_fig2")
    assert len(m.names) == 24 and sum(1 for _ in m.intersections) == 27
    e8 = builtin("e8_thm51")
    edges = {tuple(sorted(p)) for p in e8.intersections}
    assert edges == {tuple(sorted((f"C{a}", f"C{b}"))) for a, b in
                     [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (3, 8)]}
    for name in BUILTINS:
        cfg = builtin(name)
        assert not cfg.coincidences
        assert cfg.is_connected()
        assert all(cfg.self_int(c) == -2 for c in cfg.names)


def test_builtin_unknown_name():
    with pytest.raises(UnknownName):
        builtin("enriques")


@pytest.mark.parametrize("name,rank,det", [("e8_thm51", 8, 1), ("kummer_fig1", 18, 0),
                                           ("most_algebraic_fig2", 20, 0)])
def test_config_gram_rank_and_det(name, rank, det):
    G = config_gram(builtin(name))
    S = sympy.Matrix(G)
    assert S.rank() == rank == la.rank(G)
    assert S.det() == det == la.det(G)
    assert S == S.T


@pytest.mark.parametrize("name,n_basis", [("e8_thm51", 8), ("kummer_fig1", 18), ("most_algebraic_fig2", 20)])
def test_lattice_model_reproduces_all_intersections(name, n_basis):
    cfg = builtin(name)
    model = lattice_model(cfg)
    assert model.rank == n_basis == len(model.basis_curves)
    assert la.det(model.gram) != 0
    for a in cfg.names:
        for b in cfg.names:
            assert model.inner(model.class_of(a), model.class_of(b)) == cfg.meet(a, b)
    sub = tuple(tuple(cfg.meet(a, b) for b in model.basis_curves) for a in model.basis_curves)
    assert sub == model.gram


def test_e8_model_is_standard(e8):
    assert e8.basis_curves == tuple(f"C{i}" for i in range(1, 9))
    for k, c in enumerate(e8.basis_curves):
        assert e8.class_of(c) == tuple(int(i == k) for i in range(8))
    assert abs(la.det(e8.gram)) == 1
    assert la.signature(e8.lattice).as_tuple() == (0, 8, 0)
    assert all(e8.gram[i][i] % 2 == 0 for i in range(8))


def test_span_basis_discriminants(kummer, most_alg):
    # the lattice generated by the curves, not just by the basis curves
    assert la.det(kummer.span_gram()) == -16
    assert la.det(most_alg.span_gram()) == -3


def test_dual_graph_automorphisms_e8_and_single_curve():
    assert dual_graph_automorphisms(builtin("e8_thm51")) == [{f"C{i}": f"C{i}" for i in range(1, 9)}]
    one = make_config("one", ["A"])
    assert dual_graph_automorphisms(one) == [{"A": "A"}]


@pytest.mark.parametrize("name,order", [("kummer_fig1", 1152), ("most_algebraic_fig2", 72), ("e8_thm51", 1)])
def test_automorphism_count_matches_networkx(name, order):
    cfg = builtin(name)
    auts = dual_graph_automorphisms(cfg)
    g = nx_graph(cfg)
    gm = GraphMatcher(g, g, node_match=lambda a, b: a["s"] == b["s"], edge_match=lambda a, b: a["m"] == b["m"])
    assert len(auts) == order == sum(1 for _ in gm.isomorphisms_iter())
    if name == "kummer_fig1":
        assert order >= 24 * 24


@pytest.mark.parametrize("name", BUILTINS)
def test_automorphisms_form_a_group(name):
    cfg = builtin(name)
    auts = dual_graph_automorphisms(cfg)
    keys = {tuple(sorted(p.items())) for p in auts}
    assert len(keys) == len(auts)
    rnd = random.Random(7)
    sample = auts if len(auts) < 80 else rnd.sample(auts, 40)
    for p in sample:
        assert tuple(sorted(invert(p).items())) in keys
        for q in sample[:10]:
            assert tuple(sorted(compose(p, q).items())) in keys
        for a in cfg.names:
            for b in cfg.names:
                assert cfg.meet(p[a], p[b]) == cfg.meet(a, b)


def test_automorphisms_too_large():
    cfg = make_config("chain", [f"X{i}" for i in range(33)], [(f"X{i}", f"X{i + 1}") for i in range(32)])
    with pytest.raises(TooLarge):
        dual_graph_automorphisms(cfg)


def test_divisor_classes(kummer, most_alg, e8):
    v = divisor_class(kummer, parse_divisor(D1))
    assert kummer.inner(v, v) == 0
    assert divisor_class(e8, Divisor({"C1": 1})) == (1, 0, 0, 0, 0, 0, 0, 0)
    d = divisor_class(most_alg, parse_divisor(D_MOST))
    assert most_alg.inner(d, d) == 0
    assert most_alg.inner(d, most_alg.class_of("E13")) == 1


def test_divisor_unknown_curve(e8):
    with pytest.raises(UnknownCurve):
        divisor_class(e8, Divisor({"Z9": 1}))


def test_divisor_validation():
    with pytest.raises(ValidationError):
        Divisor({"A": 0})
    with pytest.raises(ValidationError):
        Divisor({"A": -1})
    assert str(Divisor({"F1": 1, "C14": 2})) == "F1 + 2C14"


def test_config_validation():
    with pytest.raises(ValidationError):
        make_config("bad", ["A", "B"], [("A", "Z")])
    with pytest.raises(ValidationError):
        make_config("dup", ["A", "A"])
    with pytest.raises(ValidationError):
        make_config("coinc", ["A", "B", "C"], [("A", "C")], coincidences=[("A", "B", "C")])
    cfg = make_config("ok", ["A", "B", "C"], [("A", "C"), ("B", "C")], coincidences=[("A", "B", "C")])
    assert cfg.same_point("B", "A", "C") and not cfg.same_point("A", "C", "B")


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 7), st.data())
def test_random_configurations_model_round_trip(n, data):
    names = [f"X{i}" for i in range(n)]
    edges = [(names[i], names[j], data.draw(st.integers(0, 2)))
             for i in range(n) for j in range(i + 1, n)]
    cfg = make_config("rand", names, edges)
    G = config_gram(cfg)
    if la.rank(G) == 0:
        return
    model = lattice_model(cfg)
    assert model.rank == sympy.Matrix(G).rank()
    for a in names:
        for b in names:
            assert model.inner(model.class_of(a), model.class_of(b)) == cfg.meet(a, b)
