import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from k3dyn import dynamics as dy
from k3dyn import exactla as la
from k3dyn import fibration as fb
from k3dyn.curveconf import Divisor, lattice_model, make_config
from k3dyn.errors import (ClassNotFixed, NotAnIsometry, NotASection, NotComponentStable, PreconditionViolated,
                          WrongArity)
from k3dyn.salem import PHI14, companion, is_pm_reciprocal, salem_certify
from k3dyn.scenarios import KUMMER_FIBRATIONS, parse_divisor

# U + <-2> + <-2>: a small hyperbolic lattice with isotropic e = (1,0,0,0)
H = ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, -2, 0), (0, 0, 0, -2))
H_CONE = (1, 1, 0, 0)
E = (1, 0, 0, 0)


def perp_vectors():
    # vectors orthogonal to E: second coordinate zero
    return st.tuples(st.integers(-5, 5), st.just(0), st.integers(-5, 5), st.integers(-5, 5))


def block_matrix():
    C = companion(PHI14)
    n = 8 + len(C)
    M = [[0] * n for _ in range(n)]
    for i in range(8):
        M[i][i] = 1
    for i, r in enumerate(C):
        for j, x in enumerate(r):
            M[8 + i][8 + j] = x
    return la.as_matrix(M)


def permutation_isometry(model, perm, label):
    """Isometry induced by a permutation of curves that preserves the Gram."""
    cols = [model.class_of(perm[c]) for c in model.basis_curves]
    return dy.make_isometry(model, la.transpose(la.as_matrix(cols)), label)


# --- isometries and transvections ---------------------------------------------------------------

def test_isometry_rejects_non_isometries():
    with pytest.raises(NotAnIsometry):
        dy.Isometry(((2, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)), "bad", H)
    minus = tuple(tuple(-x for x in r) for r in la.identity(4))
    dy.Isometry(minus, "-1", H)  # preserves the form
    with pytest.raises(NotAnIsometry):
        dy.Isometry(minus, "-1", H, H_CONE)  # but swaps the cone halves


def test_eichler_zero_direction_is_identity():
    assert dy.eichler(H, E, (0, 0, 0, 0)).is_identity()


def test_eichler_preconditions():
    with pytest.raises(PreconditionViolated):
        dy.eichler(H, (0, 0, 0, 0), (0, 0, 1, 0))
    with pytest.raises(PreconditionViolated):
        dy.eichler(H, (1, 1, 0, 0), (0, 0, 1, 0))
    with pytest.raises(PreconditionViolated):
        dy.eichler(H, E, (1, 1, 0, 0))


@settings(max_examples=200, deadline=None)
@given(perp_vectors())
def test_random_transvections_are_parabolic_isometries(a):
    T = dy.eichler(H, E, a, cone_rep=H_CONE)
    assert T.fixes(E)
    res = dy.spectral_radius(T)
    assert res.lambda_interval == (1, 1)
    assert res.classification == ("elliptic" if T.is_identity() else "parabolic")
    assert is_pm_reciprocal(la.char_poly(T.matrix))


@settings(max_examples=100, deadline=None)
@given(perp_vectors(), perp_vectors())
def test_transvection_additivity(a, b):
    lhs = dy.eichler(H, E, a) @ dy.eichler(H, E, b)
    assert lhs.matrix == dy.eichler(H, E, la.vadd(a, b)).matrix


def test_eichler_with_shioda_direction_moves_section(kummer, kummer_tr):
    fd = fb.fiber_check(kummer, parse_divisor(KUMMER_FIBRATIONS[2][1]))
    triv = fb.trivial_lattice(kummer, fd, "C14")
    phi = fb.shioda_project(kummer, triv, "C24")
    T = dy.eichler(kummer, fd.fiber_class, phi)
    assert T.fixes(fd.fiber_class)
    # C14 and C24 meet different components of the other IV* fiber, so the
    # transvection reaches C24 only up to a nonzero vertical correction
    diff = la.vadd(T(kummer.class_of("C14")), kummer.class_of("C24"), -1)
    assert any(diff)
    assert la.solve_any(la.transpose((fd.fiber_class,) + triv.roots.simple_roots), diff) is not None
    # the genuine translation is exact, and its cube is the integral transvection power
    tr = kummer_tr["f3"][1]
    assert tr.isometry(kummer.class_of("C14")) == kummer.class_of("C24")
    assert T.power(3).matrix == tr.isometry.power(3).matrix


def test_inverse_and_power(kummer_tr):
    T = kummer_tr["f1"][1].isometry
    assert (T @ T.inverse()).is_identity()
    assert T.power(-2).matrix == T.inverse().power(2).matrix
    assert T.power(0).is_identity()


# --- translations ------------------------------------------------------------------------------

def test_kummer_translation(kummer, kummer_tr):
    fd, tr = kummer_tr["f1"]
    T = tr.isometry
    assert tr.genuine and tr.power == 1
    assert T(kummer.class_of("C11")) == kummer.class_of("C12")
    assert T.fixes(fd.fiber_class)
    assert dy.integral_on_span(T, kummer)
    assert all(v == k for k, v in dy.component_permutation(T, kummer, fd).items())
    # the cube of the genuine translation is the integral transvection power
    assert tr.component_order == 3 == tr.eichler_power
    assert T.power(3).matrix == dy.eichler(kummer, fd.fiber_class, la.vscale(tr.phi, 3)).matrix


def test_kummer_translation_eichler_mode(kummer, kummer_tr):
    fd, _ = kummer_tr["f1"]
    tr = dy.translation_isometry(kummer, fd, "C11", "C12", mode="eichler")
    assert tr.power == 3 and not tr.genuine
    assert dy.integral_on_span(tr.isometry, kummer)
    roots = fb.vertical_root_system(kummer, fd.fiber_class)
    assert all(tr.isometry.fixes(r) for r in roots.simple_roots)


def test_most_algebraic_translation_fixes_fiber_d(most_alg, most_alg_tr):
    fd, tr = most_alg_tr["h"]
    T = tr.isometry
    assert T(most_alg.class_of("E13")) == most_alg.class_of("E23")
    for c in fd.components:
        assert T.fixes(most_alg.class_of(c))
    assert tr.component_order == 2 == tr.eichler_power


@pytest.mark.parametrize("label", ["f1", "f2", "f3"])
def test_translations_send_zero_section_to_section(kummer, kummer_tr, label):
    _, tr = kummer_tr[label]
    assert tr.isometry(kummer.class_of(tr.zero_section)) == kummer.class_of(tr.section)
    assert tr.height > 0


def test_translation_rejections(kummer, kummer_tr):
    fd, _ = kummer_tr["f1"]
    with pytest.raises(NotASection):
        dy.translation_isometry(kummer, fd, "C11", "C11")
    with pytest.raises(NotASection):
        dy.translation_isometry(kummer, fd, "C11", "E4")


# --- spectral radius -------------------------------------------------------------------------------

def test_identity_is_elliptic(e8):
    res = dy.spectral_radius(dy.identity_isometry(e8))
    assert res.lambda_interval == (1, 1) and res.classification == "elliptic"
    assert res.entropy_interval == (0, 0)


def test_finite_order_is_elliptic():
    swap = dy.Isometry(((0, 1), (1, 0)), "s", ((0, 1), (1, 0)))
    assert dy.spectral_radius(swap).classification == "elliptic"


def test_transvection_is_parabolic():
    T = dy.eichler(H, E, (0, 0, 1, 0))
    assert dy.spectral_radius(T).classification == "parabolic"


def test_salem_block_is_hyperbolic():
    res = dy.spectral_radius(block_matrix())
    lo, hi = res.lambda_interval
    assert Fraction("1.200026") < lo < hi < Fraction("1.200027")
    assert hi - lo <= Fraction(1, 10 ** 12)
    assert res.classification == "hyperbolic"
    assert res.dynamical_factor == PHI14
    cert = salem_certify(PHI14)
    assert max(lo, cert.lambda_interval[0]) <= min(hi, cert.lambda_interval[1])
    elo, ehi = res.entropy_interval
    assert abs(float(elo) - 0.182343659872) < 1e-11 and elo <= ehi


def test_spectral_radius_against_numpy(kummer_tr):
    T = kummer_tr["f1"][1].isometry @ kummer_tr["f2"][1].isometry
    res = dy.spectral_radius(T)
    M = np.array([[float(x) for x in r] for r in T.matrix])
    rho = max(abs(np.linalg.eigvals(M)))
    assert abs(float(res.lambda_interval[0]) - rho) < 1e-6 * rho


@pytest.mark.parametrize("word", [(0, 2), (0, 3), (0, 2, 2)])
def test_powers_multiply_lambda(kummer_tr, word):
    gens = [kummer_tr["f1"][1].isometry, kummer_tr["f2"][1].isometry]
    T = dy.evaluate_word(gens, word)
    lo, hi = dy.spectral_radius(T).lambda_interval
    for k in range(2, 5):
        klo, khi = dy.spectral_radius(T.power(k)).lambda_interval
        assert klo <= hi ** k and lo ** k <= khi
        elo, ehi = dy.entropy(T)
        kelo, kehi = dy.entropy(T.power(k))
        assert kelo <= k * ehi and k * elo <= kehi


def test_char_polys_of_isometries_are_reciprocal(kummer_tr, most_alg_tr):
    for table in (kummer_tr, most_alg_tr):
        gens = [tr.isometry for _, tr in table.values()]
        for T in gens + [gens[0] @ gens[1], gens[0] @ gens[1].inverse()]:
            assert is_pm_reciprocal(la.char_poly(T.matrix))


# --- word search ------------------------------------------------------------------------------------

def test_word_search_identity(e8):
    res = dy.word_search([dy.identity_isometry(e8)], 3)
    assert res.entropy.lambda_interval == (1, 1)


def test_word_search_kummer(kummer, kummer_tr):
    gens = [kummer_tr["f1"][1].isometry, kummer_tr["f2"][1].isometry]
    res = dy.word_search(gens, 4, model=kummer)
    assert res.entropy.is_hyperbolic and res.entropy.lambda_interval[0] > 1
    assert res.isometry.matrix == dy.evaluate_word(sorted(gens, key=lambda g: g.label), res.word).matrix


def test_word_search_is_invariant_under_generator_order(kummer, kummer_tr):
    a, b = kummer_tr["f1"][1].isometry, kummer_tr["f2"][1].isometry
    r1 = dy.word_search([a, b], 3, model=kummer)
    r2 = dy.word_search([b, a], 3, model=kummer)
    assert (r1.label, r1.entropy) == (r2.label, r2.entropy)


def test_word_search_threads_agree(kummer, kummer_tr):
    gens = [kummer_tr["f1"][1].isometry, kummer_tr["f2"][1].isometry]
    r1 = dy.word_search(gens, 3, model=kummer)
    r2 = dy.word_search(gens, 3, threads=2, model=kummer)
    assert (r1.label, r1.entropy) == (r2.label, r2.entropy)


def test_reduced_words_count():
    # 4 * 3^(k-1) reduced words of length k in two generators
    words = list(dy.reduced_words(2, 4))
    for k in range(1, 5):
        assert sum(1 for w in words if len(w) == k) == 4 * 3 ** (k - 1)


# --- free words --------------------------------------------------------------------------------------

def test_free_word_check_finds_a_relator():
    U = ((0, 1), (1, 0))
    swap = dy.Isometry(((0, 1), (1, 0)), "s", U)
    minus = dy.Isometry(((-1, 0), (0, -1)), "m", U)
    res = dy.free_word_check([swap, minus], 4)
    assert not res.free and res.relator is not None
    M = dy.evaluate_word([swap, minus], res.relator_word)
    assert M.is_identity()


def test_free_word_check_arity(kummer_tr):
    with pytest.raises(WrongArity):
        dy.free_word_check([kummer_tr["f1"][1].isometry], 4)


def test_free_word_check_kummer_short(kummer, kummer_tr):
    gens = [kummer_tr["f1"][1].isometry, kummer_tr["f2"][1].isometry]
    res = dy.free_word_check(gens, 5, model=kummer)
    assert res.free and res.words_checked == sum(4 * 3 ** (k - 1) for k in range(1, 6))


# --- fixed isotropic vectors -----------------------------------------------------------------------------

def test_single_transvection_fixes_its_centre(kummer, kummer_tr):
    for fd, tr in kummer_tr.values():
        res = dy.common_fixed_isotropic([tr.isometry])
        assert res.status == "found"
        assert res.vector == la.primitive(fd.fiber_class)


def test_kummer_pair_has_no_common_fixed_isotropic(kummer_tr):
    res = dy.common_fixed_isotropic([kummer_tr["f1"][1].isometry, kummer_tr["f2"][1].isometry])
    assert res.vector is None and res.status == "none-certified"


def test_no_generators():
    assert dy.common_fixed_isotropic([]).status == "no-generators"


# --- component permutations ---------------------------------------------------------------------------------

def test_component_permutation_identity_and_f3(kummer, kummer_tr):
    fd, tr = kummer_tr["f3"]
    ident = dy.identity_isometry(kummer)
    assert dy.component_permutation(ident, kummer, fd) == {c: c for c in fd.components}
    assert dy.component_permutation(tr.isometry, kummer, fd) == {c: c for c in fd.components}


def test_component_permutation_swaps_i2_components():
    cfg = make_config("i2", ["A0", "A1", "O", "P"], [("A0", "A1", 2), ("O", "A0"), ("P", "A1")])
    model = lattice_model(cfg)
    fd = fb.fiber_check(model, Divisor({"A0": 1, "A1": 1}))
    T = permutation_isometry(model, {"A0": "A1", "A1": "A0", "O": "P", "P": "O"}, "swap")
    assert dy.component_permutation(T, model, fd) == {"A0": "A1", "A1": "A0"}


def test_component_permutation_rejects_unstable(kummer, kummer_tr):
    fd3, _ = kummer_tr["f3"]
    fd1, tr1 = kummer_tr["f1"]
    # f1 moves components of D3 off the fiber, or does not fix its class
    with pytest.raises((NotComponentStable, PreconditionViolated)):
        dy.component_permutation(tr1.isometry, kummer, fd3)


# --- inertia certificates ------------------------------------------------------------------------------------

def test_kummer_generators_certify_e4(kummer, kummer_tr):
    r1 = dy.inertia_certificate(kummer_tr["f1"][1].isometry, kummer, "E4")
    assert r1.verdict == "inertia_certified" and set(r1.witness) == {"C14", "C24", "C34"}
    g = dy.inertia_certificate_group([kummer_tr["f1"][1].isometry, kummer_tr["f2"][1].isometry], kummer, "E4")
    assert g.verdict == "inertia_certified"


def test_kummer_f3_is_nontrivial_on_e4(kummer, kummer_tr):
    r = dy.inertia_certificate(kummer_tr["f3"][1].isometry, kummer, "E4")
    assert r.verdict == "nontrivial_on_curve" and r.witness == ("C14", "C24")


def test_most_algebraic_h_is_nontrivial_on_g3(most_alg, most_alg_tr):
    r = dy.inertia_certificate(most_alg_tr["h"][1].isometry, most_alg, "G3")
    assert r.verdict == "nontrivial_on_curve" and r.witness == ("E13", "E23")


def test_e8_identity_certificates(e8):
    ident = dy.identity_isometry(e8)
    assert dy.inertia_certificate(ident, e8, "C3").verdict == "inertia_certified"
    r = dy.inertia_certificate(ident, e8, "C8")
    assert r.verdict == "inconclusive" and r.witness == ("C3",)


def test_class_not_fixed(kummer, kummer_tr):
    with pytest.raises(ClassNotFixed):
        dy.inertia_certificate(kummer_tr["f1"][1].isometry, kummer, "C11")


def test_coincidences_block_certification():
    names = ["C", "A", "B", "D"]
    edges = [("A", "C"), ("B", "C"), ("D", "C")]
    plain = lattice_model(make_config("star", names, edges))
    assert dy.inertia_certificate(dy.identity_isometry(plain), plain, "C").verdict == "inertia_certified"
    merged = lattice_model(make_config("star", names, edges, coincidences=[("A", "B", "C")]))
    r = dy.inertia_certificate(dy.identity_isometry(merged), merged, "C")
    assert r.verdict == "inconclusive" and len(r.witness) == 2


def _transport(T, old, new):
    """Matrix of T in the model of a relabelled configuration."""
    L = la.transpose(la.as_matrix([new.class_of(c) for c in old.basis_curves]))
    return dy.make_isometry(new, la.mat_mul(la.mat_mul(L, T.matrix), la.inverse(L)), T.label)


@pytest.mark.parametrize("seed", [0, 1])
def test_certificate_verdicts_ignore_curve_order(kummer, kummer_tr, seed):
    cfg = kummer.config
    names = list(cfg.names)
    random.Random(seed).shuffle(names)
    edges = [tuple(sorted(p)) for p in cfg.intersections]
    shuffled = lattice_model(make_config("shuffled", names, edges))
    for label in ("f1", "f2", "f3"):
        T = kummer_tr[label][1].isometry
        T2 = _transport(T, kummer, shuffled)
        for c in shuffled.config.names:
            assert T2(shuffled.class_of(c)) == la.mat_vec(
                la.transpose(la.as_matrix([shuffled.class_of(b) for b in kummer.basis_curves])),
                T(kummer.class_of(c)))
        a = dy.inertia_certificate(T, kummer, "E4")
        b = dy.inertia_certificate(T2, shuffled, "E4")
        assert a.verdict == b.verdict and set(a.witness) == set(b.witness)
