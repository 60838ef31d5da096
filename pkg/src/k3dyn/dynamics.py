"""Isometry dynamics on a lattice model: transvections, Mordell-Weil
translations, spectral radius and entropy, word search, fixed isotropic
vectors, free-word checks and inertia certificates."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Optional, Sequence, Union

import mpmath
import numpy as np

from . import exactla as la
from . import salem
from .curveconf import LatticeModel
from .errors import (ClassNotFixed, NoIntegralPower, NotAnIsometry, NotASection, NotComponentStable,
                     PreconditionViolated, WrongArity)
from .fibration import (FiberData, RootSystem, meeting_component, sections_of, shioda_project,
                        translation_permutation, trivial_lattice, vertical_root_system, visible_fibers)
from .poly import Poly, poly_product

MAX_EICHLER_POWER = 24


# ---------------------------------------------------------------------------
# isometries
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Isometry:
    """Exact matrix acting on column coordinate vectors of a lattice with
    Gram matrix ``gram``; checked to preserve the form and, when a cone
    representative is known, the positive cone."""

    matrix: la.Mat
    label: str
    gram: la.Mat = field(repr=False)
    cone_rep: Optional[la.Vec] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        M = la.as_matrix(self.matrix)
        object.__setattr__(self, "matrix", M)
        if la.shape(M) != la.shape(self.gram) or la.shape(M)[0] != la.shape(M)[1]:
            raise NotAnIsometry("matrix and Gram matrix shapes differ")
        if la.mat_mul(la.mat_mul(la.transpose(M), self.gram), M) != la.as_matrix(self.gram):
            raise NotAnIsometry(f"{self.label}: M^T G M != G")
        h = self.cone_rep
        if h is not None:
            if la.bilinear(self.gram, la.mat_vec(M, h), h) <= 0:
                raise NotAnIsometry(f"{self.label}: swaps the two halves of the positive cone")

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def __call__(self, x: Sequence) -> la.Vec:
        return la.mat_vec(self.matrix, x)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return Isometry(la.mat_mul(self.matrix, other.matrix), f"{self.label}*{other.label}",
                        self.gram, self.cone_rep)

    def inverse(self) -> "Isometry":
        # M^-1 = G^-1 M^T G, valid because M^T G M = G
        G = self.gram
        inv = la.mat_mul(la.mat_mul(la.inverse(G), la.transpose(self.matrix)), G)
        return Isometry(inv, _inverse_label(self.label), G, self.cone_rep)

    def power(self, k: int) -> "Isometry":
        base = self if k >= 0 else self.inverse()
        M = la.identity(self.rank)
        for _ in range(abs(k)):
            M = la.mat_mul(M, base.matrix)
        return Isometry(M, f"({self.label})^{k}", self.gram, self.cone_rep)

    def fixes(self, x: Sequence) -> bool:
        return self(x) == tuple(x)

    def is_identity(self) -> bool:
        return self.matrix == la.identity(self.rank)


def _inverse_label(label: str) -> str:
    return label[:-3] if label.endswith("^-1") else f"{label}^-1"


def identity_isometry(model: LatticeModel, label: str = "id") -> Isometry:
    return Isometry(la.identity(model.rank), label, model.gram, model.cone_rep)


def make_isometry(model: LatticeModel, matrix: la.Mat, label: str) -> Isometry:
    return Isometry(matrix, label, model.gram, model.cone_rep)


def eichler_matrix(G: la.Mat, e: Sequence, a: Sequence) -> la.Mat:
    """Matrix of x -> x + (x,e) a - (x,a) e - 1/2 (a,a)(x,e) e."""
    n = len(G)
    Ge = la.mat_vec(G, e)  # (x,e) = Ge . x
    Ga = la.mat_vec(G, a)
    aa = Fraction(la.bilinear(G, a, a))
    cols = []
    for j in range(n):
        col = [Fraction(int(i == j)) + Ge[j] * a[i] - Ga[j] * e[i] - aa / 2 * Ge[j] * e[i]
               for i in range(n)]
        cols.append(col)
    return la.transpose(la.as_matrix(cols))


def eichler(model_or_gram: Union[LatticeModel, la.Mat], e: Sequence, a: Sequence,
            label: str = "E", cone_rep: Optional[la.Vec] = None) -> Isometry:
    """Eichler transvection with isotropic centre e and a orthogonal to e."""
    if isinstance(model_or_gram, LatticeModel):
        G, cone_rep = model_or_gram.gram, model_or_gram.cone_rep
    else:
        G = la.as_matrix(model_or_gram)
    e, a = tuple(e), tuple(a)
    if not any(e):
        raise PreconditionViolated("transvection centre must be nonzero")
    if la.bilinear(G, e, e) != 0:
        raise PreconditionViolated("transvection centre must be isotropic")
    if la.bilinear(G, e, a) != 0:
        raise PreconditionViolated("transvection direction must be orthogonal to the centre")
    return Isometry(eichler_matrix(G, e, a), label, G, cone_rep)


# ---------------------------------------------------------------------------
# curve-span coordinates
# ---------------------------------------------------------------------------

def span_change(model: LatticeModel) -> tuple[la.Mat, la.Mat]:
    """(B, B^-1) where the columns of B are the curve-span basis in model coordinates."""
    B = la.transpose(model.span_basis)
    return B, la.inverse(B)


def span_matrix(T: Isometry, model: LatticeModel) -> la.Mat:
    """Matrix of T in a Z-basis of the lattice generated by the curves."""
    B, Binv = span_change(model)
    return la.mat_mul(la.mat_mul(Binv, T.matrix), B)


def integral_on_span(T: Isometry, model: LatticeModel) -> bool:
    return la.is_integral_mat(span_matrix(T, model))


# ---------------------------------------------------------------------------
# Mordell-Weil translations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Translation:
    """Lattice action of translation by P on the fibration with fiber ``fd``.

    ``genuine`` is True when ``isometry`` is the action of the translation
    itself (power 1); otherwise it is E(F, n phi(P)), the action of a
    translation power that preserves every fiber component.
    """

    isometry: Isometry
    power: int
    genuine: bool
    eichler_power: int
    component_order: int
    phi: la.Vec
    height: Fraction
    zero_section: str
    section: str
    note: str = ""


def component_order(model: LatticeModel, roots: RootSystem, O: str, P: str) -> int:
    """Order of the class of P - O in the discriminant group of the vertical
    root lattice, i.e. in the product of all component groups."""
    if not roots.simple_roots:
        return 1
    N = la.gram_of(model.gram, roots.simple_roots)
    diff = la.vadd(model.class_of(P), model.class_of(O), -1)
    rhs = tuple(model.inner(r, diff) for r in roots.simple_roots)
    y = la.solve(N, rhs)
    return reduce(lcm, (Fraction(c).denominator for c in y), 1)


def _genuine_translation(model: LatticeModel, fd: FiberData, roots: RootSystem, O: str, P: str,
                         phi: la.Vec) -> Optional[la.Mat]:
    F = fd.fiber_class
    fibers = [vf for vf in visible_fibers(model, F) if vf.complete]
    covered = sum(len(vf.components) - 1 for vf in fibers)
    if covered != roots.rank:
        return None
    src, dst = [F, model.class_of(O)], [F, model.class_of(P)]
    for vf in fibers:
        perm = translation_permutation(model, vf, O, P)
        o = meeting_component(model, vf, O)
        for c in vf.names:
            if c != o:
                src.append(model.class_of(c))
                dst.append(model.class_of(perm[c]))
    perp = la.kernel(la.as_matrix(la.mat_vec(model.gram, v) for v in src))
    for x in perp:
        src.append(x)
        dst.append(la.vadd(x, F, -model.inner(x, phi)))
    S = la.transpose(la.as_matrix(src))
    D = la.transpose(la.as_matrix(dst))
    if la.rank(S) != model.rank:
        return None
    return la.mat_mul(D, la.inverse(S))


def translation_isometry(model: LatticeModel, fd: FiberData, O: str, P: str, mode: str = "auto",
                         roots: Optional[RootSystem] = None, label: Optional[str] = None,
                         max_power: int = MAX_EICHLER_POWER) -> Translation:
    """Lattice action of the Mordell-Weil translation by P (zero section O).

    ``mode="auto"`` returns the genuine translation when every vertical root
    is a visible fiber component and the result preserves the curve span;
    otherwise, and with ``mode="eichler"``, the smallest integral power
    E(F, n phi(P)) is returned.
    """
    if O == P:
        raise NotASection("translation needs two distinct sections")
    secs = sections_of(model, fd)
    for s in (O, P):
        if s not in secs:
            raise NotASection(f"{s} is not a section of the fibration with fiber {fd.divisor}")
    roots = roots or vertical_root_system(model, fd.fiber_class)
    triv = trivial_lattice(model, fd, O, roots)
    phi = shioda_project(model, triv, P, fd)
    height = Fraction(-model.inner(phi, phi))
    base = label or f"t[{P}/{O}]"
    order = component_order(model, roots, O, P)

    n_eichler, eich = None, None
    for n in range(1, max_power + 1):
        T = eichler(model, fd.fiber_class, la.vscale(phi, n), f"{base}^{n}")
        if integral_on_span(T, model):
            n_eichler, eich = n, T
            break

    if mode == "auto":
        M = _genuine_translation(model, fd, roots, O, P, phi)
        if M is not None:
            try:
                T = Isometry(M, base, model.gram, model.cone_rep)
            except NotAnIsometry:
                T = None
            if T is not None and integral_on_span(T, model) and T(model.class_of(O)) == model.class_of(P):
                note = "genuine translation"
                if n_eichler != order:
                    note += f"; integrality power {n_eichler} != component order {order}"
                return Translation(T, 1, True, n_eichler or 0, order, phi, height, O, P, note)
    elif mode != "eichler":
        raise ValueError(f"unknown translation mode {mode!r}")
    if eich is None:
        raise NoIntegralPower(f"no integral transvection power E(F, n phi({P})) with n <= {max_power}")
    note = "" if n_eichler == order else f"integrality power {n_eichler} != component order {order}"
    return Translation(eich, n_eichler, n_eichler == 1 and order == 1, n_eichler, order, phi, height,
                       O, P, note)


# ---------------------------------------------------------------------------
# spectral radius and entropy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EntropyResult:
    lambda_interval: tuple[Fraction, Fraction]
    entropy_interval: tuple[Fraction, Fraction]
    char_poly: Poly
    classification: str  # "elliptic" | "parabolic" | "hyperbolic"
    dynamical_factor: Poly  # char poly with cyclotomic factors removed
    cyclotomic_indices: tuple

    @property
    def is_hyperbolic(self) -> bool:
        return self.classification == "hyperbolic"


def _raw_to_fraction(raw: tuple) -> Fraction:
    p, q = mpmath.libmp.to_rational(raw)
    return Fraction(int(p), int(q))


def log_interval(lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Rational enclosure of [log lo, log hi] via interval arithmetic."""
    if lo == 1 and hi == 1:
        return Fraction(0), Fraction(0)
    iv = mpmath.iv
    saved, iv.prec = iv.prec, 128
    try:
        a = iv.log(iv.mpf(lo.numerator) / iv.mpf(lo.denominator))
        b = iv.log(iv.mpf(hi.numerator) / iv.mpf(hi.denominator))
        return _raw_to_fraction(a._mpi_[0]), _raw_to_fraction(b._mpi_[1])
    finally:
        iv.prec = saved


def spectral_radius(T: Union[Isometry, la.Mat], width: Fraction = salem.DEFAULT_WIDTH) -> EntropyResult:
    """Certified enclosure of the spectral radius.

    The dominant eigenvalue is assumed real, as it is for isometries of
    hyperbolic lattices and for Salem blocks; the largest real root in
    absolute value of the non-cyclotomic part is isolated by Sturm bisection.
    """
    M = T.matrix if isinstance(T, Isometry) else la.as_matrix(T)
    cp = la.char_poly(M)
    if not cp.is_integral():
        raise PreconditionViolated("characteristic polynomial is not integral")
    strip = salem.strip_cyclotomic(cp)
    rem = strip.remainder
    if rem.degree > 0:
        pos = salem.isolate_largest_root(rem, 1, width)
        neg = salem.isolate_largest_root(rem.compose_neg(), 1, width)
        cands = [e for e in (pos, neg) if e is not None]
        if not cands:
            raise PreconditionViolated("no real eigenvalue off the unit circle; dominant eigenvalue is not real")
        lam = max(cands, key=lambda e: e[0])
        kind = "hyperbolic"
    else:
        lam = (Fraction(1), Fraction(1))
        distinct = sorted(set(strip.indices))
        annihilator = poly_product([salem.cyclotomic(k) for k in distinct])
        kind = "elliptic" if _poly_at_matrix_is_zero(annihilator, M) else "parabolic"
    return EntropyResult(lam, log_interval(*lam), cp, kind, rem, strip.indices)


def _poly_at_matrix_is_zero(p: Poly, M: la.Mat) -> bool:
    n = len(M)
    acc = la.as_matrix([[0] * n for _ in range(n)])
    for c in reversed(p.coeffs):
        acc = la.mat_add(la.mat_mul(acc, M), la.identity(n), c)
    return not any(x for r in acc for x in r)


def entropy(T: Union[Isometry, la.Mat]) -> tuple[Fraction, Fraction]:
    return spectral_radius(T).entropy_interval


# ---------------------------------------------------------------------------
# words in generators
# ---------------------------------------------------------------------------

def _int_mat(M: la.Mat) -> tuple:
    return tuple(tuple(int(x) for x in r) for r in M)


def _imul(A: tuple, B: tuple) -> tuple:
    Bt = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in Bt) for r in A)


@dataclass(frozen=True)
class Letter:
    gen: int
    inverse: bool


def _letters(n: int) -> list[Letter]:
    return [Letter(i, inv) for i in range(n) for inv in (False, True)]


def reduced_words(n_gens: int, max_len: int):
    """Reduced words (tuples of letter indices) in shortlex order."""
    letters = _letters(n_gens)
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for k, L in enumerate(letters):
                if w and letters[w[-1]].gen == L.gen and letters[w[-1]].inverse != L.inverse:
                    continue
                nxt.append(w + (k,))
        yield from nxt
        frontier = nxt


def _word_label(word: Sequence[int], labels: Sequence[str]) -> str:
    letters = _letters(len(labels))
    parts = []
    for k in word:
        L = letters[k]
        parts.append(labels[L.gen] + ("^-1" if L.inverse else ""))
    return "*".join(parts) if parts else "id"


def _canonical_cyclic(word: tuple, n_gens: int) -> tuple:
    """Shortlex-least representative among rotations of the word and of its inverse."""
    inv = tuple(k ^ 1 for k in reversed(word))
    reps = [w[i:] + w[:i] for w in (word, inv) for i in range(len(w))]
    return min(reps)


def _cyclically_reduced(word: tuple) -> bool:
    return len(word) < 2 or (word[0] ^ 1) != word[-1]


@dataclass(frozen=True)
class WordResult:
    word: tuple  # letter indices; letter 2i is generator i, 2i+1 its inverse
    label: str
    isometry: Isometry
    entropy: EntropyResult
    words_explored: int
    distinct_elements: int
    generator_labels: tuple


def _entropy_job(M: tuple) -> EntropyResult:
    return spectral_radius(M)


def word_search(gens: Sequence[Isometry], max_len: int, threads: int = 1,
                model: Optional[LatticeModel] = None) -> WordResult:
    """Breadth-first search over reduced words for the largest certified
    spectral radius; ties go to the shortlex-least word."""
    if not gens:
        raise PreconditionViolated("word search needs at least one generator")
    if max_len < 1:
        raise PreconditionViolated("max_len must be at least 1")
    gens = sorted(gens, key=lambda g: g.label)
    labels = tuple(g.label for g in gens)
    if model is not None and all(integral_on_span(g, model) for g in gens):
        B, Binv = span_change(model)
        conj = lambda M: la.mat_mul(la.mat_mul(Binv, M), B)  # noqa: E731
        mats = [_int_mat(conj(g.matrix)) for g in gens]
        inv_mats = [_int_mat(conj(g.inverse().matrix)) for g in gens]
    else:
        den = la.common_denominator(x for g in gens for r in g.matrix for x in r)
        if den != 1:
            mats = None
        else:
            mats = [_int_mat(g.matrix) for g in gens]
            inv_mats = [_int_mat(g.inverse().matrix) for g in gens]
    if mats is None:
        raise PreconditionViolated("generators are not integral on any available basis")
    letter_mats = [m for pair in zip(mats, inv_mats) for m in pair]
    n = len(mats[0])
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))

    seen: dict[tuple, tuple] = {ident: ()}
    classes: dict[tuple, tuple] = {}
    explored = 0
    frontier = [((), ident)]
    for _ in range(max_len):
        nxt = []
        for w, M in frontier:
            for k, LM in enumerate(letter_mats):
                if w and (w[-1] ^ 1) == k:
                    continue
                explored += 1
                W = w + (k,)
                P = _imul(M, LM)
                if P in seen:
                    continue
                seen[P] = W
                nxt.append((W, P))
                if _cyclically_reduced(W):
                    key = _canonical_cyclic(W, len(gens))
                    classes.setdefault(key, P)
        frontier = nxt

    keys = sorted(classes, key=lambda w: (len(w), w))
    jobs = [classes[k] for k in keys]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(_entropy_job, jobs, chunksize=8))
    else:
        cache: dict[Poly, EntropyResult] = {}
        results = []
        for M in jobs:
            cp = la.char_poly(M)
            if cp not in cache:
                cache[cp] = spectral_radius(M)
            results.append(cache[cp])
    if not results:
        best_word, best_res = (), spectral_radius(ident)
    else:
        best = min(range(len(keys)), key=lambda i: (-results[i].lambda_interval[0], len(keys[i]), keys[i]))
        best_word, best_res = keys[best], results[best]
    iso = evaluate_word(gens, best_word)
    return WordResult(best_word, _word_label(best_word, labels), iso, best_res, explored, len(seen), labels)


def evaluate_word(gens: Sequence[Isometry], word: Sequence[int]) -> Isometry:
    """Product of the letters of ``word`` from left to right; ``gens`` must
    be given in the order used to build the word."""
    g0 = gens[0]
    acc = Isometry(la.identity(g0.rank), "id", g0.gram, g0.cone_rep)
    inverses = {}
    for k in word:
        i, inv = divmod(k, 2)
        if inv:
            if i not in inverses:
                inverses[i] = gens[i].inverse()
            g = inverses[i]
        else:
            g = gens[i]
        acc = acc @ g
    return Isometry(acc.matrix, _word_label(word, [g.label for g in gens]), g0.gram, g0.cone_rep)


# ---------------------------------------------------------------------------
# free-word check
# ---------------------------------------------------------------------------

SCREEN_PRIMES = (536870909, 536870879)


@dataclass(frozen=True)
class FreeWordResult:
    free: bool
    max_len: int
    words_checked: int
    relator: Optional[str] = None
    relator_word: Optional[tuple] = None


def free_word_check(gens: Sequence[Isometry], max_len: int,
                    model: Optional[LatticeModel] = None) -> FreeWordResult:
    """Check that no nontrivial reduced word of length <= max_len in two
    generators is the identity.  Products are screened modulo two large
    primes and every candidate is confirmed with exact arithmetic."""
    if len(gens) != 2:
        raise WrongArity(f"free_word_check needs exactly 2 generators, got {len(gens)}")
    labels = [g.label for g in gens]
    if model is not None and all(integral_on_span(g, model) for g in gens):
        mats = [span_matrix(g, model) for g in gens]
        inv = [span_matrix(g.inverse(), model) for g in gens]
    else:
        mats = [g.matrix for g in gens]
        inv = [g.inverse().matrix for g in gens]
    exact_letters = [m for pair in zip(mats, inv) for m in pair]
    den = la.common_denominator(x for M in exact_letters for r in M for x in r)
    n = len(mats[0])
    primes = [p for p in SCREEN_PRIMES if den % p]
    # scaled letters: den * M mod p; the word of length k is den^k * product
    mod_letters = []
    for p in primes:
        mod_letters.append([np.array([[int(Fraction(x) * den) % p for x in r] for r in M], dtype=np.int64)
                            for M in exact_letters])
    dinv = [pow(den, -1, p) for p in primes]

    checked = 0
    stack = [((), [np.eye(n, dtype=np.int64) for _ in primes])]
    while stack:
        w, ms = stack.pop()
        if len(w) == max_len:
            continue
        for k in range(4):
            if w and (w[-1] ^ 1) == k:
                continue
            W = w + (k,)
            new = []
            for pi, p in enumerate(primes):
                prod = (ms[pi] @ mod_letters[pi][k]) % p
                new.append(prod * dinv[pi] % p)
            checked += 1
            if all(np.array_equal(m, np.eye(n, dtype=np.int64)) for m in new):
                M = la.identity(n)
                for kk in W:
                    M = la.mat_mul(M, exact_letters[kk])
                if M == la.identity(n):
                    return FreeWordResult(False, max_len, checked, _word_label(W, labels), W)
            stack.append((W, new))
    return FreeWordResult(True, max_len, checked)


# ---------------------------------------------------------------------------
# common fixed isotropic vectors
# ---------------------------------------------------------------------------

ISOTROPIC_SEARCH_BOUND = 10 ** 6


@dataclass(frozen=True)
class FixedIsotropic:
    vector: Optional[la.Vec]
    fixed_rank: int
    restricted_signature: Optional[tuple]
    status: str  # "found" | "none-certified" | "none-found-within-bound" | "no-generators"
    bound: Optional[int] = None


def common_fixed_isotropic(gens: Sequence[Isometry]) -> FixedIsotropic:
    """Primitive isotropic vector fixed by every generator, on the boundary
    of the designated positive cone."""
    if not gens:
        return FixedIsotropic(None, 0, None, "no-generators")
    G = gens[0].gram
    h = gens[0].cone_rep
    n = len(G)
    rows = []
    for T in gens:
        D = la.mat_add(T.matrix, la.identity(n), -1)
        rows.extend(D)
    V = la.integer_kernel(la.as_matrix(rows)) if rows else [la.identity(n)[i] for i in range(n)]
    if not V:
        return FixedIsotropic(None, 0, (0, 0, 0), "none-certified")
    Q = la.gram_of(G, V)
    sig = la.signature(Q)
    k = len(V)

    def lift(c: Sequence) -> la.Vec:
        v = la.primitive(tuple(sum(ci * vi[j] for ci, vi in zip(c, V)) for j in range(n)))
        if h is not None and la.bilinear(G, v, h) < 0:
            v = la.vscale(v, -1)
        elif h is None:
            v = la.sign_normalize(v)
        return v

    if sig.positive == 0:
        if sig.zero == 0:
            return FixedIsotropic(None, k, sig.as_tuple(), "none-certified")
        rad = la.kernel(Q)
        return FixedIsotropic(lift(rad[0]), k, sig.as_tuple(), "found")
    # indefinite restriction: exhaustive search over a coefficient box holding
    # at most ISOTROPIC_SEARCH_BOUND vectors
    box = 0
    while (2 * box + 3) ** k <= ISOTROPIC_SEARCH_BOUND:
        box += 1
    for c in itertools.product(range(-box, box + 1), repeat=k):
        if any(c) and la.bilinear(Q, c, c) == 0:
            return FixedIsotropic(lift(c), k, sig.as_tuple(), "found", box)
    return FixedIsotropic(None, k, sig.as_tuple(), "none-found-within-bound", box)


# ---------------------------------------------------------------------------
# component permutations and certificates
# ---------------------------------------------------------------------------

def component_permutation(T: Isometry, model: LatticeModel, fd: FiberData) -> dict[str, str]:
    if not T.fixes(fd.fiber_class):
        raise PreconditionViolated(f"{T.label} does not fix the fiber class")
    classes = {c: model.class_of(c) for c in fd.components}
    perm = {}
    for c, x in classes.items():
        img = T(x)
        hits = [d for d, y in classes.items() if y == img]
        if len(hits) != 1:
            raise NotComponentStable(f"{T.label} sends {c} outside the fiber components")
        perm[c] = hits[0]
    return perm


@dataclass(frozen=True)
class CertResult:
    verdict: str  # "inertia_certified" | "nontrivial_on_curve" | "inconclusive"
    curve: str
    witness: tuple
    label: str = ""


def _distinct_points(model: LatticeModel, C: str, curves: Sequence[str]) -> list[str]:
    """One representative per intersection point with C."""
    cfg = model.config
    reps: list[str] = []
    for b in curves:
        if not any(cfg.same_point(a, b, C) or cfg.same_point(b, a, C) for a in reps):
            reps.append(b)
    return reps


def inertia_certificate(T: Isometry, model: LatticeModel, C: str) -> CertResult:
    """Decide from curve classes whether T restricts to the identity on C."""
    cfg = model.config
    x = model.class_of(C)
    if not T.fixes(x):
        raise ClassNotFixed(f"{T.label} moves the class of {C}")
    nbrs = [b for b in cfg.names if b != C and cfg.meet(b, C) == 1]
    fixed = [b for b in nbrs if T.fixes(model.class_of(b))]
    pts = _distinct_points(model, C, fixed)
    if len(pts) >= 3:
        return CertResult("inertia_certified", C, tuple(pts), T.label)
    for b1 in nbrs:
        img = T(model.class_of(b1))
        for b2 in nbrs:
            if b2 != b1 and img == model.class_of(b2) and len(_distinct_points(model, C, [b1, b2])) == 2:
                return CertResult("nontrivial_on_curve", C, (b1, b2), T.label)
    return CertResult("inconclusive", C, tuple(pts), T.label)


@dataclass(frozen=True)
class GroupCertResult:
    verdict: str
    curve: str
    per_generator: tuple  # CertResult per generator


def inertia_certificate_group(gens: Sequence[Isometry], model: LatticeModel, C: str) -> GroupCertResult:
    """Certify that the group generated by ``gens`` lies in the inertia group
    of C; since that group is a subgroup, it suffices to certify each
    generator.  Every word in the generators is then certified as well."""
    results = tuple(inertia_certificate(T, model, C) for T in gens)
    if results and all(r.verdict == "inertia_certified" for r in results):
        verdict = "inertia_certified"
    elif any(r.verdict == "nontrivial_on_curve" for r in results):
        verdict = "nontrivial_on_curve"
    else:
        verdict = "inconclusive"
    return GroupCertResult(verdict, C, results)
