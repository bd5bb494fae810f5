"""Fusion-tree bases of hom spaces and the local moves acting on them.

A vector in hom(c, w_1 ... w_n) is a dict mapping left-combed chains to
amplitudes.  A chain (c_1, ..., c_n) has c_1 = w_1, c_k in c_{k-1} x w_k and
c_n = c (the total charge, the unit for hom(1, w)).  Vertices are normalized
so that distinct chains are orthonormal.

Arcs (cups and caps) are the unnormalized duality maps: closing a loop of
label x gives d(x).  A strand is identified by (label, flow) where flow says
whether it runs downward; the object seen on a horizontal cut is the label
when it runs down and the dual label when it runs up.  Diagrams are read from
the top down: sources on top, targets at the bottom.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .anyons import AnyonModel

Chain = tuple
Vec = dict  # Chain -> complex


class UnknownLabel(KeyError):
    pass


class NonDualPair(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


# ---------------------------------------------------------------------------
# chains and bases


def _tables(model: AnyonModel) -> dict:
    """Sparse python-side copies of F and R, cached on the model."""
    cache = model._cache
    if "ftab" not in cache:
        ftab = {}
        for idx in np.argwhere(model.fsym != 0):
            a, b, c, d, e, f = (int(v) for v in idx)
            ftab.setdefault((a, b, c, d), {})[(e, f)] = complex(model.fsym[a, b, c, d, e, f])
        cache["ftab"] = ftab
        cache["rtab"] = {(int(a), int(b), int(c)): complex(model.rsym[a, b, c])
                         for a, b, c in np.argwhere(model.fusion > 0)}
        cache["prod"] = [[model.products(a, b) for b in range(model.rank)] for a in range(model.rank)]
    return cache


def fvalue(model: AnyonModel, a, b, c, d, e, f) -> complex:
    return _tables(model)["ftab"].get((a, b, c, d), {}).get((e, f), 0.0)


def fusion_chains(model: AnyonModel, word, total: int = 0) -> list[Chain]:
    """All admissible left-combed chains for `word` with the given total charge, sorted."""
    word = tuple(word)
    key = ("chains", word, total)
    cache = model._cache
    if key in cache:
        return cache[key]
    prod = _tables(model)["prod"]
    if not word:
        out = [()] if total == 0 else []
        cache[key] = out
        return out
    partial = [(word[0],)]
    for x in word[1:]:
        partial = [ch + (c,) for ch in partial for c in prod[ch[-1]][x]]
    out = sorted(ch for ch in partial if ch[-1] == total)
    cache[key] = out
    return out


def hom_dim(model: AnyonModel, word, total: int = 0) -> int:
    return len(fusion_chains(model, word, total))


@dataclass(frozen=True)
class HomBasis:
    word: tuple
    direction: str  # "out": hom(1, word); "in": hom(word, 1)
    trees: tuple

    def __len__(self):
        return len(self.trees)

    def index(self, chain) -> int:
        return self.trees.index(chain)


def hom_basis(model: AnyonModel, word, direction: str = "out") -> HomBasis:
    word = tuple(word)
    for x in word:
        if not (0 <= x < model.rank):
            raise UnknownLabel(x)
    if direction not in ("out", "in"):
        raise ValueError("direction is 'out' (from the unit) or 'in' (into the unit)")
    return HomBasis(word, direction, tuple(fusion_chains(model, word)))


def to_array(basis: HomBasis, vec: Vec) -> np.ndarray:
    out = np.zeros(len(basis), dtype=complex)
    for ch, amp in vec.items():
        if abs(amp) > 0:
            out[basis.index(ch)] += amp
    return out


def from_array(basis: HomBasis, arr) -> Vec:
    return {ch: complex(v) for ch, v in zip(basis.trees, arr) if v != 0}


def inner(u: Vec, v: Vec) -> complex:
    """Scalar v* o u (linear in u)."""
    return sum(amp * np.conj(v.get(ch, 0)) for ch, amp in u.items())


def clean(vec: Vec, eps: float = 1e-15) -> Vec:
    return {k: v for k, v in vec.items() if abs(v) > eps}


def add_into(acc: Vec, vec: Vec, scale: complex = 1.0) -> Vec:
    for k, v in vec.items():
        acc[k] = acc.get(k, 0) + scale * v
    return acc


# ---------------------------------------------------------------------------
# the associator expansion used by insertion and projection


def _expand(model: AnyonModel, c: int, uword: tuple, gchain: tuple) -> list:
    """Rewrite (c (u-tree g))_c' as left-combed chains starting from c.

    Returns (echain, coeff) pairs where echain lists the running charges after
    each letter of uword; its last entry is the overall total.
    """
    key = ("expand", c, uword, gchain)
    cache = model._cache
    if key in cache:
        return cache[key]
    ftab = _tables(model)["ftab"]
    L = len(uword)
    results = []
    prod = _tables(model)["prod"]
    for top in prod[c][gchain[-1]]:
        # walk k = L .. 2 peeling off the last letter
        partial = [((top,), 1.0 + 0j)]
        for k in range(L - 1, 0, -1):
            nxt = []
            gprev, uk, gk = gchain[k - 1], uword[k], gchain[k]
            for tail, coef in partial:
                ek = tail[0]
                for (e, f), val in ftab.get((c, gprev, uk, ek), {}).items():
                    if f == gk:
                        nxt.append(((e,) + tail, coef * np.conj(val)))
            partial = nxt
        # first letter: (c u_1)_{e_1} directly
        for tail, coef in partial:
            if tail[0] in prod[c][uword[0]]:
                results.append((tail, coef))
    cache[key] = results
    return results


def insert_vector(model: AnyonModel, word: tuple, state: Vec, pos: int,
                  uword: tuple, uvec: Vec) -> tuple[tuple, Vec]:
    """Tensor a vector of hom(1, uword) into the state between slots pos-1 and pos."""
    word = tuple(word)
    uword = tuple(uword)
    if not (0 <= pos <= len(word)):
        raise IndexOutOfRange(pos)
    new_word = word[:pos] + uword + word[pos:]
    if not uword:
        return new_word, {k: v * uvec.get((), 0) for k, v in state.items()}
    out: Vec = {}
    for ch, amp in state.items():
        c = ch[pos - 1] if pos > 0 else 0
        head, tail = ch[:pos], ch[pos:]
        for g, uamp in uvec.items():
            for echain, coef in _expand(model, c, uword, g):
                if echain[-1] != c:
                    continue
                key = head + echain + tail
                out[key] = out.get(key, 0) + amp * uamp * coef
    return new_word, out


def _covector_table(model, c, uword, ucov):
    """Map echain -> sum_g conj(T[e, g]) beta_g for covector beta on uword."""
    tab: dict = {}
    for g, beta in ucov.items():
        for echain, coef in _expand(model, c, uword, g):
            if echain[-1] == c:
                tab[echain] = tab.get(echain, 0) + np.conj(coef) * beta
    return tab


def apply_covector(model: AnyonModel, word: tuple, state: Vec, pos: int,
                   uword: tuple, ucov: Vec) -> tuple[tuple, Vec]:
    """Apply a covector sum_g beta_g t_g^dagger to slots pos .. pos+len(uword)-1."""
    word = tuple(word)
    uword = tuple(uword)
    L = len(uword)
    if pos < 0 or pos + L > len(word):
        raise IndexOutOfRange(pos)
    if word[pos:pos + L] != uword:
        raise ValueError(f"covector word {uword} does not match slots {word[pos:pos + L]}")
    new_word = word[:pos] + word[pos + L:]
    if L == 0:
        return new_word, {k: v * ucov.get((), 0) for k, v in state.items()}
    tables: dict = {}
    out: Vec = {}
    for ch, amp in state.items():
        c = ch[pos - 1] if pos > 0 else 0
        seg = ch[pos:pos + L]
        if seg[-1] != c:
            continue
        if c not in tables:
            tables[c] = _covector_table(model, c, uword, ucov)
        coef = tables[c].get(seg)
        if coef is None:
            continue
        key = ch[:pos] + ch[pos + L:]
        out[key] = out.get(key, 0) + amp * coef
    return new_word, out


def _braid_coeffs(model, a, x, y, d, sign):
    key = ("braid", a, x, y, d, sign)
    cache = model._cache
    if key in cache:
        return cache[key]
    t = _tables(model)
    ftab, rtab = t["ftab"], t["rtab"]
    left = ftab.get((a, x, y, d), {})
    right = ftab.get((a, y, x, d), {})
    out: dict = {}
    for (e, f), v1 in left.items():
        phase = rtab[(x, y, f)] if sign > 0 else 1 / rtab[(y, x, f)]
        for (e2, f2), v2 in right.items():
            if f2 == f:
                out.setdefault(e, {})
                out[e][e2] = out[e].get(e2, 0) + v1 * phase * np.conj(v2)
    cache[key] = out
    return out


def braid_state(model: AnyonModel, word: tuple, state: Vec, pos: int, sign: int) -> tuple[tuple, Vec]:
    """Exchange slots pos and pos+1.  sign=+1 multiplies the paired channel f by
    R[x, y, f]; sign=-1 applies the inverse exchange."""
    word = tuple(word)
    if not (0 <= pos < len(word) - 1):
        raise IndexOutOfRange(pos)
    x, y = word[pos], word[pos + 1]
    new_word = word[:pos] + (y, x) + word[pos + 2:]
    out: Vec = {}
    for ch, amp in state.items():
        a = ch[pos - 1] if pos > 0 else 0
        d = ch[pos + 1]
        row = _braid_coeffs(model, a, x, y, d, sign).get(ch[pos], {})
        for e2, coef in row.items():
            key = ch[:pos] + (e2,) + ch[pos + 1:]
            out[key] = out.get(key, 0) + amp * coef
    return new_word, out


# ---------------------------------------------------------------------------
# arcs with orientation


def primary(model: AnyonModel, label: int) -> int:
    return min(label, model.dual(label))


def seen(model: AnyonModel, label: int, down: bool) -> int:
    """Object read on a horizontal cut of a strand."""
    return label if down else model.dual(label)


def arc_phase(model: AnyonModel, label: int) -> complex:
    """Phase s making (cup flowing left-to-right, cap flowing left-to-right) a zig-zag identity."""
    p = primary(model, label)
    key = ("arcphase", p)
    if key in model._cache:
        return model._cache[key]
    pb = model.dual(p)
    d = model.dims[p]
    # spectator pair (pb, p); zig-zag the final p strand
    base = {(pb, 0): 1.0}
    w = (pb, p)
    w1, s1 = insert_vector(model, w, base, 2, (pb, p), {(pb, 0): math.sqrt(d)})
    w2, s2 = apply_covector(model, w1, s1, 1, (p, pb), {(p, 0): math.sqrt(d)})
    assert w2 == w
    z = s2.get((pb, 0), 0)
    phase = 1 / z
    model._cache[key] = phase
    return phase


def _arc_parts(model, label, left_to_right):
    """Normalize to the primary label; returns (p, flows_left_to_right)."""
    p = primary(model, label)
    if p != label:
        left_to_right = not left_to_right
    return p, left_to_right


def cup(model: AnyonModel, label: int, left_to_right: bool) -> tuple[tuple, Vec]:
    """A local maximum of a strand, as a vector of hom(1, pair)."""
    p, ltr = _arc_parts(model, label, left_to_right)
    pb = model.dual(p)
    d = math.sqrt(model.dims[p])
    if not ltr:
        return (p, pb), {(p, 0): d}
    return (pb, p), {(pb, 0): d * arc_phase(model, p)}


def cap(model: AnyonModel, label: int, left_to_right: bool) -> tuple[tuple, Vec]:
    """A local minimum of a strand, as a covector on the pair."""
    p, ltr = _arc_parts(model, label, left_to_right)
    pb = model.dual(p)
    d = math.sqrt(model.dims[p])
    if ltr:
        return (p, pb), {(p, 0): d}
    return (pb, p), {(pb, 0): d * np.conj(arc_phase(model, p))}


def braid_map(model: AnyonModel, word, position: int, sign: int) -> np.ndarray:
    """Matrix of the exchange at slots (position, position+1), 1-based, on hom(1, word)."""
    word = tuple(word)
    if not (1 <= position < len(word)):
        raise IndexOutOfRange(position)
    src = hom_basis(model, word)
    tgt_word = word[:position - 1] + (word[position], word[position - 1]) + word[position + 1:]
    tgt = hom_basis(model, tgt_word)
    M = np.zeros((len(tgt), len(src)), dtype=complex)
    for j, ch in enumerate(src.trees):
        _, out = braid_state(model, word, {ch: 1.0}, position - 1, sign)
        M[:, j] = to_array(tgt, out)
    return M


def bend_map(model: AnyonModel, word, position: int, kind: str,
             label: int | None = None, left_to_right: bool = False) -> np.ndarray:
    """Matrix of a cup inserted after slot `position` (0-based gap) or a cap
    removing slots position, position+1 (1-based)."""
    word = tuple(word)
    src = hom_basis(model, word)
    if kind == "cup":
        if label is None:
            raise ValueError("cup needs a label")
        pw, pv = cup(model, label, left_to_right)
        if not (0 <= position <= len(word)):
            raise IndexOutOfRange(position)
        tgt = hom_basis(model, word[:position] + pw + word[position:])
        M = np.zeros((len(tgt), len(src)), dtype=complex)
        for j, ch in enumerate(src.trees):
            _, out = insert_vector(model, word, {ch: 1.0}, position, pw, pv)
            M[:, j] = to_array(tgt, out)
        return M
    if kind == "cap":
        if not (1 <= position < len(word)):
            raise IndexOutOfRange(position)
        x, y = word[position - 1], word[position]
        if model.dual(x) != y:
            raise NonDualPair(f"slots hold {x}, {y}")
        # the pair (x, x̄) read as a strand of label x running left to right
        pw, pc = cap(model, x, True)
        if pw != (x, y):
            pw, pc = cap(model, y, False)
        tgt = hom_basis(model, word[:position - 1] + word[position + 1:])
        M = np.zeros((len(tgt), len(src)), dtype=complex)
        for j, ch in enumerate(src.trees):
            _, out = apply_covector(model, word, {ch: 1.0}, position - 1, pw, pc)
            M[:, j] = to_array(tgt, out)
        return M
    raise ValueError(kind)


# ---------------------------------------------------------------------------
# dual structure on hom(1, w) and hom(w, 1)


@dataclass(frozen=True)
class Morphism:
    """A vector of hom(1, word) ("out") or a covector of hom(word, 1) ("in").

    For "in", coeffs[g] is the weight of t_g^dagger.
    """
    word: tuple
    direction: str
    coeffs: dict

    def scaled(self, lam: complex) -> "Morphism":
        return Morphism(self.word, self.direction, {k: lam * v for k, v in self.coeffs.items()})


def star(model: AnyonModel, f: Morphism) -> Morphism:
    """Vertical reflection (anti-linear)."""
    flip = "in" if f.direction == "out" else "out"
    return Morphism(f.word, flip, {k: np.conj(v) for k, v in f.coeffs.items()})


def rho_pi(model: AnyonModel, f: Morphism) -> Morphism:
    """Rotation by pi, realized by bending every leg to the right around the box."""
    w = f.word
    n = len(w)
    rev = tuple(model.dual(x) for x in reversed(w))
    if f.direction == "in":
        # nested maxima to the right: each strand rises on the right and falls into the box
        word, state = (), {(): 1.0}
        for k in range(n):
            pw, pv = cup(model, w[k], False)
            word, state = insert_vector(model, word, state, k, pw, pv)
        word, state = apply_covector(model, word, state, 0, w, f.coeffs)
        assert word == rev
        return Morphism(rev, "out", clean(state))
    # vector: legs fall, turn right and climb; read off the covector on each basis tree
    coeffs = {}
    for g in fusion_chains(model, rev):
        word, state = insert_vector(model, (), {(): 1.0}, 0, w, f.coeffs)
        word, state = insert_vector(model, word, state, n, rev, {g: 1.0})
        for k in range(n):
            x = w[n - 1 - k]
            pw, pc = cap(model, x, True)
            word, state = apply_covector(model, word, state, n - 1 - k, pw, pc)
        val = state.get((), 0)
        if val != 0:
            coeffs[g] = val
    return Morphism(rev, "in", coeffs)


def theta(model: AnyonModel, f: Morphism) -> Morphism:
    """Horizontal reflection (anti-linear), computed by bending to the left."""
    w = f.word
    n = len(w)
    rev = tuple(model.dual(x) for x in reversed(w))
    if f.direction == "out":
        # f* has its legs on top; each strand climbs on the left and falls into the box
        cov = {k: np.conj(v) for k, v in f.coeffs.items()}
        word, state = (), {(): 1.0}
        for k in range(n):
            pw, pv = cup(model, w[n - 1 - k], True)
            word, state = insert_vector(model, word, state, k, pw, pv)
        word, state = apply_covector(model, word, state, n, w, cov)
        assert word == rev
        return Morphism(rev, "out", clean(state))
    return star(model, theta(model, star(model, f)))


def dual_structure(model: AnyonModel, f: Morphism, kind: str) -> Morphism:
    if kind == "theta":
        return theta(model, f)
    if kind == "rho_pi":
        return rho_pi(model, f)
    if kind == "star":
        return star(model, f)
    raise ValueError(f"unknown dual-structure kind {kind!r}")


# ---------------------------------------------------------------------------
# Frobenius reciprocity and the resolution of the identity


def _bend_weight(model: AnyonModel, z: int) -> complex:
    # amplitude of the arc that feeds the last leg back in as an input
    pw, pv = cup(model, z, True)
    return pv[(pw[0], 0)]


def frobenius_lift(model: AnyonModel, word, coeffs: Vec) -> tuple[int, Vec]:
    """Bend the last leg of a vector in hom(1, word) up into an input.

    Returns (input label, vector of hom(input, word[:-1])) where chains of
    the result end at the input label rather than at the unit.
    """
    word = tuple(word)
    if len(word) < 2:
        raise ValueError("need at least two legs")
    z = word[-1]
    zb = model.dual(z)
    k = _bend_weight(model, z)
    out = {}
    for ch, v in coeffs.items():
        if ch[-1] != 0 or ch[-2] != zb:
            raise ValueError(f"chain {ch} is not in hom(1, word)")
        out[ch[:-1]] = v / k
    return zb, out


def frobenius_unlift(model: AnyonModel, word, source: int, coeffs: Vec) -> Vec:
    """Inverse of frobenius_lift: `word` lists the outputs, `source` the input."""
    z = model.dual(source)
    k = _bend_weight(model, z)
    return {tuple(ch) + (0,): v * k for ch, v in coeffs.items()}


def resolution_of_identity(model: AnyonModel, x: int, y: int) -> list[tuple[int, Vec, float]]:
    """Terms (Z, lifted basis vector, d(Z)) whose weighted projectors sum to 1 on x*y."""
    terms = []
    for z in range(model.rank):
        for ch in fusion_chains(model, (x, y, z)):
            src, lifted = frobenius_lift(model, (x, y, z), {ch: 1.0})
            terms.append((z, lifted, float(model.dims[z])))
    return terms


def identity_residual(model: AnyonModel, x: int, y: int) -> float:
    """Max deviation of sum_Z d(Z) a a^dagger from the identity of x*y.

    x*y is written in the orthonormal basis of the direct sum over channels
    c of hom(c, (x, y)); a lifted vector with input c lives in block c.
    """
    chains = [ch for c in range(model.rank) for ch in fusion_chains(model, (x, y), c)]
    pos = {ch: i for i, ch in enumerate(chains)}
    acc = np.zeros((len(chains), len(chains)), dtype=complex)
    for _, lifted, w in resolution_of_identity(model, x, y):
        a = np.zeros(len(chains), dtype=complex)
        for ch, v in lifted.items():
            a[pos[ch]] = v
        acc += w * np.outer(a, a.conj())
    return float(np.abs(acc - np.eye(len(chains))).max()) if chains else 0.0
