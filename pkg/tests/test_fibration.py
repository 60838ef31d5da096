from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from k3dyn import exactla as la
from k3dyn import fibration as fb
from k3dyn.curveconf import Divisor, lattice_model, make_config
from k3dyn.errors import DisconnectedSupport, IrreducibleType, NotAFiber, NotASection, NotIsotropic
from k3dyn.scenarios import KUMMER_FIBRATIONS, MOST_ALGEBRAIC_FIBRATIONS, parse_divisor

KUMMER = {label: parse_divisor(d) for label, d, _, _ in KUMMER_FIBRATIONS}
MOST = {label: parse_divisor(d) for label, d, _, _ in MOST_ALGEBRAIC_FIBRATIONS}

TEMPLATE_TAGS = ([f"I{b}" for b in range(3, 13)] + [f"I{b}*" for b in range(0, 9)]
                 + ["II*", "III*", "IV*", "IV"])


def u_model():
    # F with square 0 and a section O: Gram [[0,1],[1,-2]]
    cfg = make_config("u", ["F", "O"], [("F", "O")], self_overrides={"F": 0})
    model = lattice_model(cfg)
    fd = fb.FiberData(model.class_of("F"), Divisor({"F": 1}), fb.KodairaType("I1"), (("F", 1),))
    return model, fd


# --- classification ---------------------------------------------------------------

@pytest.mark.parametrize("label", ["f1", "f2", "f3"])
def test_kummer_divisors_are_iv_star(kummer, label):
    assert fb.kodaira_classify(kummer.config, KUMMER[label]).tag == "IV*"


@pytest.mark.parametrize("label", ["h", "f1", "f2"])
def test_most_algebraic_divisors_are_iii_star(most_alg, label):
    assert fb.kodaira_classify(most_alg.config, MOST[label]).tag == "III*"


def test_triangle_is_i3():
    cfg = make_config("tri", ["A", "B", "C"], [("A", "B"), ("B", "C"), ("A", "C")])
    assert fb.kodaira_classify(cfg, Divisor({"A": 1, "B": 1, "C": 1})).tag == "I3"


def test_triangle_through_one_point_is_iv():
    cfg = make_config("tri", ["A", "B", "C"], [("A", "B"), ("B", "C"), ("A", "C")],
                      coincidences=[("B", "C", "A")])
    assert fb.kodaira_classify(cfg, Divisor({"A": 1, "B": 1, "C": 1})).tag == "IV"


def test_two_components_give_the_ambiguity_marker():
    cfg, d = fb.fiber_template("I2")
    assert fb.kodaira_classify(cfg, d).tag == fb.AMBIGUOUS_I2_III


@pytest.mark.parametrize("tag", TEMPLATE_TAGS)
def test_template_round_trip(tag):
    cfg, d = fb.fiber_template(tag)
    kt = fb.kodaira_classify(cfg, d)
    assert kt.tag == tag
    assert sorted(m for _, m in d.multiplicities) == list(kt.multiplicities)
    assert kt.components == len(d.support)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(TEMPLATE_TAGS), st.randoms(use_true_random=False))
def test_classification_ignores_curve_order_and_names(tag, rnd):
    cfg, d = fb.fiber_template(tag)
    names = list(cfg.names)
    new = [f"X{k}" for k in range(len(names))]
    rnd.shuffle(new)
    ren = dict(zip(names, new))
    edges = [(ren[a], ren[b], cfg.meet(a, b)) for i, a in enumerate(names) for b in names[i + 1:]
             if cfg.meet(a, b)]
    coinc = [tuple(ren[x] for x in t) for t in cfg.coincidences]
    order = sorted(new)
    cfg2 = make_config("shuffled", order, edges, coincidences=coinc)
    items = [(ren[c], m) for c, m in d.multiplicities]
    rnd.shuffle(items)
    assert fb.kodaira_classify(cfg2, Divisor(items)).tag == tag


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(TEMPLATE_TAGS), st.integers(2, 4))
def test_multiples_and_perturbations_are_rejected(tag, k):
    cfg, d = fb.fiber_template(tag)
    with pytest.raises(NotAFiber):
        fb.kodaira_classify(cfg, Divisor([(c, k * m) for c, m in d.multiplicities]))
    first, m0 = d.multiplicities[0]
    with pytest.raises(NotAFiber):
        fb.kodaira_classify(cfg, Divisor([(first, m0 + 1)] + list(d.multiplicities[1:])))


def test_classifier_rejections(kummer):
    with pytest.raises(DisconnectedSupport):
        fb.kodaira_classify(kummer.config, Divisor({"E1": 1, "E2": 1}))
    with pytest.raises(NotAFiber):
        fb.kodaira_classify(kummer.config, Divisor({"E4": 1}))
    chain = make_config("chain", ["A", "B", "C"], [("A", "B"), ("B", "C")])
    with pytest.raises(NotAFiber):
        fb.kodaira_classify(chain, Divisor({"A": 1, "B": 1, "C": 1}))


def test_kodaira_type_table():
    assert fb.KodairaType("IV*").multiplicities == (1, 1, 1, 2, 2, 2, 3)
    assert fb.KodairaType("III*").multiplicities == (1, 1, 2, 2, 2, 3, 3, 4)
    assert fb.KodairaType("I5").components == 5
    assert fb.KodairaType("I3*").components == 8
    assert fb.KodairaType("II*").root_type == "E8"


# --- fiber data and sections ----------------------------------------------------------

def test_fiber_check_kummer_d3(kummer):
    fd = fb.fiber_check(kummer, KUMMER["f3"])
    assert fd.kodaira.tag == "IV*" and len(fd.components) == 7
    assert kummer.inner(fd.fiber_class, fd.fiber_class) == 0
    for c in fd.components:
        assert kummer.inner(fd.fiber_class, kummer.class_of(c)) == 0


def test_fiber_check_most_algebraic_d2(most_alg):
    fd = fb.fiber_check(most_alg, MOST["f2"])
    assert fd.kodaira.tag == "III*"
    assert dict(fd.component_classes)["G3"] == 4


def test_fiber_check_single_curve_is_not_isotropic(kummer):
    with pytest.raises(NotIsotropic):
        fb.fiber_from_divisor(kummer, Divisor({"E4": 1}))


def test_sections(kummer, most_alg):
    fd3 = fb.fiber_check(kummer, KUMMER["f3"])
    secs = fb.sections_of(kummer, fd3)
    assert {"C14", "C24"} <= set(secs)
    assert not set(secs) & set(fd3.components)
    fd1 = fb.fiber_check(most_alg, MOST["f1"])
    assert {"E11'", "E12'"} <= set(fb.sections_of(most_alg, fd1))


# --- roots, trivial lattice, Shioda projection ---------------------------------------------

def test_vertical_roots_kummer(kummer):
    fd = fb.fiber_check(kummer, KUMMER["f1"])
    roots = fb.vertical_root_system(kummer, fd.fiber_class)
    assert "E6" in roots.decomposition
    assert roots.decomposition == ("E6", "E6")
    assert roots.root_count == 144
    for r in roots.simple_roots:
        assert kummer.inner(r, r) == -2 and kummer.inner(r, fd.fiber_class) == 0


def test_vertical_roots_most_algebraic(most_alg):
    fd = fb.fiber_check(most_alg, MOST["h"])
    roots = fb.vertical_root_system(most_alg, fd.fiber_class)
    assert "E7" in roots.decomposition
    assert roots.decomposition == ("D10", "E7")


def test_vertical_roots_of_u_are_empty():
    model, fd = u_model()
    assert fb.vertical_root_system(model, fd.fiber_class).decomposition == ()
    with pytest.raises(NotIsotropic):
        fb.vertical_root_system(model, (0, 0))
    with pytest.raises(NotIsotropic):
        fb.vertical_root_system(model, model.class_of("O"))


def test_u_trivial_lattice_and_rank():
    model, fd = u_model()
    triv = fb.trivial_lattice(model, fd, "O")
    assert la.signature(triv.gram).as_tuple() == (1, 1, 0)
    assert triv.gram == ((0, 1), (1, -2))
    assert fb.mw_rank(model, fd, "O") == 0


def test_trivial_lattice_kummer_d3(kummer):
    fd = fb.fiber_check(kummer, KUMMER["f3"])
    triv = fb.trivial_lattice(kummer, fd, "C14")
    assert len(triv.basis) == 2 + triv.roots.rank
    assert la.det(triv.gram) != 0
    with pytest.raises(NotASection):
        fb.trivial_lattice(kummer, fd, "E4")


def test_trivial_lattice_most_algebraic_contains_e7(most_alg):
    fd = fb.fiber_check(most_alg, MOST["f1"])
    triv = fb.trivial_lattice(most_alg, fd, "E11'")
    # the non-identity components of the III* fiber lie in the root span
    basis = triv.basis
    O = most_alg.class_of("E11'")
    span = la.transpose(basis)
    missing_o = [c for c in fd.components if most_alg.inner(O, most_alg.class_of(c)) == 0]
    assert len(missing_o) == 7
    for c in missing_o:
        assert la.solve_any(span, most_alg.class_of(c)) is not None


def test_shioda_projection(kummer):
    fd = fb.fiber_check(kummer, KUMMER["f3"])
    triv = fb.trivial_lattice(kummer, fd, "C14")
    assert not any(fb.shioda_project(kummer, triv, "C14"))
    phi = fb.shioda_project(kummer, triv, "C24")
    assert any(phi)
    for b in triv.basis:
        assert kummer.inner(phi, b) == 0
    h = fb.height(kummer, phi)
    assert h > 0 and h == Fraction(8, 3)


@pytest.mark.parametrize("which,label", [("kummer", "f1"), ("kummer", "f2"), ("kummer", "f3"),
                                         ("most_alg", "h"), ("most_alg", "f1"), ("most_alg", "f2")])
def test_projection_of_every_section(request, which, label):
    model = request.getfixturevalue(which)
    d = (KUMMER if which == "kummer" else MOST)[label]
    fd = fb.fiber_check(model, d)
    secs = fb.sections_of(model, fd)
    O = secs[0]
    triv = fb.trivial_lattice(model, fd, O)
    rank = fb.mw_rank(model, fd, O, triv.roots)
    assert rank >= 1
    for P in secs:
        phi = fb.shioda_project(model, triv, P, fd)
        assert all(model.inner(phi, b) == 0 for b in triv.basis)
        h = fb.height(model, phi)
        assert h >= 0 and (h == 0) == (not any(phi))


def test_mw_ranks(kummer, most_alg):
    fd = fb.fiber_check(kummer, KUMMER["f1"])
    assert fb.mw_rank(kummer, fd, "C11") == 4
    fd = fb.fiber_check(most_alg, MOST["f1"])
    assert fb.mw_rank(most_alg, fd, "E11'") == 1


def test_component_groups():
    assert str(fb.component_group(fb.KodairaType("IV*"))) == "Z/3"
    assert str(fb.component_group(fb.KodairaType("III*"))) == "Z/2"
    assert str(fb.component_group(fb.KodairaType("II*"))) == "trivial"
    assert str(fb.component_group(fb.KodairaType("I3*"))) == "Z/4"
    assert str(fb.component_group(fb.KodairaType("I2*"))) == "Z/2xZ/2"
    assert fb.component_group(fb.KodairaType("I7")).order == 7
    with pytest.raises(IrreducibleType):
        fb.component_group(fb.KodairaType("I1"))


@pytest.mark.parametrize("tag,disc", [("IV*", 3), ("III*", 2), ("II*", 1), ("I4*", 4), ("I5", 5)])
def test_component_group_order_is_root_discriminant(tag, disc):
    cfg, d = fb.fiber_template(tag)
    # drop one multiplicity-one component; the rest span the finite root lattice
    drop = next(c for c, m in d.multiplicities if m == 1)
    simple = [c for c in d.support if c != drop]
    G = tuple(tuple(cfg.meet(a, b) for b in simple) for a in simple)
    assert abs(la.det(G)) == fb.component_group(fb.KodairaType(tag)).order == disc


def test_translation_permutation_of_a_visible_fiber(kummer):
    fd = fb.fiber_check(kummer, KUMMER["f3"])
    vfs = [v for v in fb.visible_fibers(kummer, fd.fiber_class) if v.complete]
    assert any(set(v.names) == set(fd.components) for v in vfs)
    vf = next(v for v in vfs if set(v.names) == set(fd.components))
    perm = fb.translation_permutation(kummer, vf, "C14", "C24")
    # both sections meet E4, so the fiber is fixed componentwise
    assert all(perm[c] == c for c in vf.names)
