"""Configuration spaces on an n x m lattice and the structure acting on them.

A basis element fixes a label on every site, one fusion tree per row (a vector
in hom(1, row word)) and one per column (a covector on the column word).  The
grid is stored row by row: grid[j][i] is the label at column i (0-based here,
1-based in user-facing text) and row j.

Maps between configuration spaces are kept as dense matrices together with a
flag saying whether they conjugate their input first.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

import numpy as np

from . import homspace as hs
from . import tangles as tg
from .anyons import AnyonModel


class SizeMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# the object gamma_m


@dataclass(frozen=True)
class GammaObject:
    m: int
    components: tuple  # (word, number of covector trees)
    dimension: float
    delta: float

    def words(self):
        return [w for w, _ in self.components]


def gamma(model: AnyonModel, m: int) -> GammaObject:
    if m < 1:
        raise ValueError("m must be at least 1")
    comps = []
    total = 0.0
    for word in itertools.product(range(model.rank), repeat=m):
        k = hs.hom_dim(model, word)
        if k:
            comps.append((word, k))
            total += k * float(np.prod([model.dims[x] for x in word]))
    return GammaObject(m, tuple(comps), total, model.global_dim ** ((m - 1) / 2))


def scale_factor(model: AnyonModel, m: int) -> float:
    """The square root of the global dimension raised to m - 1."""
    return model.global_dim ** ((m - 1) / 2)


# ---------------------------------------------------------------------------
# spaces and vectors


@dataclass(frozen=True)
class ConfBasisElement:
    grid: tuple  # rows of labels
    rows: tuple  # chains, one per row
    cols: tuple  # chains, one per column

    def column(self, i):
        return tuple(r[i] for r in self.grid)


class ConfSpace:
    def __init__(self, model: AnyonModel, n: int, m: int):
        if n < 0 or m < 1:
            raise SizeMismatch(f"bad lattice size {n}x{m}")
        self.model, self.n, self.m = model, n, m
        self.groups = []  # (grid, row chain lists, col chain lists, offset)
        basis = []
        colwords = gamma(model, m).words()
        for cols in itertools.product(colwords, repeat=n):
            grid = tuple(tuple(c[j] for c in cols) for j in range(m))
            rch = [hs.fusion_chains(model, r) for r in grid]
            if not all(rch):
                continue
            cch = [hs.fusion_chains(model, c) for c in cols]
            self.groups.append((grid, rch, cch, len(basis)))
            for pick in itertools.product(*rch, *cch):
                basis.append(ConfBasisElement(grid, pick[:m], pick[m:]))
        self.basis = basis
        self.index = {e: k for k, e in enumerate(basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vector(self, amps=None) -> "ConfVector":
        arr = np.zeros(self.dim, dtype=complex) if amps is None else np.asarray(amps, dtype=complex)
        return ConfVector(self, arr)

    def unit(self, k: int) -> "ConfVector":
        v = np.zeros(self.dim, dtype=complex)
        v[k] = 1
        return ConfVector(self, v)

    def trivial(self) -> "ConfVector":
        """The configuration with every site labelled by the unit."""
        e = ConfBasisElement(tuple((0,) * self.n for _ in range(self.m)),
                             tuple((0,) * self.n if self.n else () for _ in range(self.m)),
                             tuple((0,) * self.m for _ in range(self.n)))
        return self.unit(self.index[e])

    def random(self, rng) -> "ConfVector":
        v = rng.normal(size=self.dim) + 1j * rng.normal(size=self.dim)
        return ConfVector(self, v)

    def __repr__(self):
        return f"ConfSpace({self.model.name}, n={self.n}, m={self.m}, dim={self.dim})"


def conf_space(model: AnyonModel, n: int, m: int) -> ConfSpace:
    key = ("confspace", n, m)
    if key not in model._cache:
        model._cache[key] = ConfSpace(model, n, m)
    return model._cache[key]


def conf_basis(model: AnyonModel, n: int, m: int) -> list:
    return conf_space(model, n, m).basis


@dataclass
class ConfVector:
    space: ConfSpace
    amps: np.ndarray

    def __add__(self, other):
        _same(self.space, other.space)
        return ConfVector(self.space, self.amps + other.amps)

    def __sub__(self, other):
        _same(self.space, other.space)
        return ConfVector(self.space, self.amps - other.amps)

    def __mul__(self, lam):
        return ConfVector(self.space, self.amps * lam)

    __rmul__ = __mul__

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def inner(self, other) -> complex:
        """<self, other>, conjugate-linear in self."""
        _same(self.space, other.space)
        return complex(np.vdot(self.amps, other.amps))

    def support(self, tol=1e-12):
        return {self.space.basis[k]: complex(a) for k, a in enumerate(self.amps) if abs(a) > tol}


def _same(a: ConfSpace, b: ConfSpace):
    if a is not b and (a.n, a.m, a.model) != (b.n, b.m, b.model):
        raise SizeMismatch(f"{a} vs {b}")


@dataclass
class Operator:
    """x -> matrix @ x, or matrix @ conj(x) when antilinear."""
    src: ConfSpace
    dst: ConfSpace
    matrix: np.ndarray
    antilinear: bool = False

    def __call__(self, x: ConfVector) -> ConfVector:
        _same(x.space, self.src)
        a = np.conj(x.amps) if self.antilinear else x.amps
        return ConfVector(self.dst, self.matrix @ a)

    def __matmul__(self, other: "Operator") -> "Operator":
        _same(other.dst, self.src)
        inner = np.conj(other.matrix) if self.antilinear else other.matrix
        return Operator(other.src, self.dst, self.matrix @ inner, self.antilinear != other.antilinear)

    def power(self, k: int) -> "Operator":
        if self.src is not self.dst:
            raise SizeMismatch("power of a map between different spaces")
        if k < 0:
            if self.antilinear:
                raise ValueError("negative power of an antilinear map")
            return Operator(self.src, self.dst, np.linalg.matrix_power(np.linalg.inv(self.matrix), -k))
        out = Operator(self.src, self.dst, np.eye(self.src.dim, dtype=complex))
        for _ in range(k):
            out = self @ out
        return out


def _operator(src: ConfSpace, dst: ConfSpace, image, antilinear: bool) -> Operator:
    mat = np.zeros((dst.dim, src.dim), dtype=complex)
    for k, e in enumerate(src.basis):
        for f, c in image(e).items():
            mat[dst.index[f], k] += c
    return Operator(src, dst, mat, antilinear)


def _assemble(grid, row_images, col_images):
    """Tensor per-row and per-column images into basis-element coefficients."""
    out: dict = {}
    rows = [list(d.items()) for d in row_images]
    cols = [list(d.items()) for d in col_images]
    for pick in itertools.product(*rows, *cols):
        m = len(rows)
        coef = reduce(lambda a, b: a * b, (p[1] for p in pick), 1.0 + 0j)
        e = ConfBasisElement(grid, tuple(p[0] for p in pick[:m]), tuple(p[0] for p in pick[m:]))
        out[e] = out.get(e, 0) + coef
    return out


# ---------------------------------------------------------------------------
# single-row and single-column moves


def _memo(model, key, fn):
    cache = model._cache
    if key not in cache:
        cache[key] = fn()
    return cache[key]


def turn_row(model, word, chain):
    """Carry the first leg of a row vector over the top to the far right."""
    def run():
        x = word[0]
        w, s = (), {(): 1.0 + 0j}
        pw, pv = hs.cup(model, x, True)
        w, s = hs.insert_vector(model, w, s, 0, pw, pv)
        w, s = hs.insert_vector(model, w, s, 1, word, {chain: 1.0})
        pw, pc = hs.cap(model, x, False)
        w, s = hs.apply_covector(model, w, s, 0, pw, pc)
        assert w == tuple(word[1:]) + (x,)
        return hs.clean(s)
    return _memo(model, ("turn_row", word, chain), run)


def turn_column(model, word, chain):
    """Carry the last leg of a column covector round underneath to the front."""
    def run():
        x = word[-1]
        new = (x,) + tuple(word[:-1])
        out = {}
        for t in hs.fusion_chains(model, new):
            w, s = hs.insert_vector(model, (), {(): 1.0 + 0j}, 0, new, {t: 1.0})
            pw, pv = hs.cup(model, x, False)
            w, s = hs.insert_vector(model, w, s, len(new), pw, pv)
            w, s = hs.apply_covector(model, w, s, 1, word, {chain: 1.0})
            pw, pc = hs.cap(model, x, True)
            w, s = hs.apply_covector(model, w, s, 0, pw, pc)
            val = s.get((), 0)
            if abs(val) > 1e-15:
                out[t] = val
        return out
    return _memo(model, ("turn_column", word, chain), run)


def _reverse_strands(model, word, state, rightward_over: bool):
    """Reverse the strand order; every pair crosses once, the strand travelling
    right passes over (or under, when rightward_over is False)."""
    n = len(word)
    sign = tg.crossing_sign(rightward_over)
    for t in range(n - 1):
        for p in range(n - 1 - t):
            word, state = hs.braid_state(model, word, state, p, sign)
    return word, state


def mirror_row(model, word, chain):
    """Row part of the reflection that reverses the row order: reflect, then
    untwist the reversed legs with the leftward-moving strand on top."""
    def run():
        img = hs.theta(model, hs.Morphism(tuple(word), "out", {chain: 1.0}))
        w, s = img.word, dict(img.coeffs)
        w, s = _reverse_strands(model, w, s, rightward_over=True)
        assert w == tuple(model.dual(x) for x in word)
        return hs.clean(s)
    return _memo(model, ("mirror_row", word, chain), run)


def mirror_column(model, word, chain):
    """Column part of the reflection that reverses the column order."""
    def run():
        img = hs.theta(model, hs.Morphism(tuple(word), "in", {chain: 1.0}))
        target = tuple(model.dual(x) for x in word)
        out = {}
        for t in hs.fusion_chains(model, target):
            w, s = hs.insert_vector(model, (), {(): 1.0 + 0j}, 0, target, {t: 1.0})
            w, s = _reverse_strands(model, w, s, rightward_over=True)
            w, s = hs.apply_covector(model, w, s, 0, img.word, img.coeffs)
            val = s.get((), 0)
            if abs(val) > 1e-15:
                out[t] = val
        return out
    return _memo(model, ("mirror_column", word, chain), run)


def reflect(model, word, chain, direction):
    img = hs.theta(model, hs.Morphism(tuple(word), direction, {chain: 1.0}))
    return hs.clean(img.coeffs)


def _column_image(model, word, coeffs, fn):
    """Extend a per-tree column map linearly (fn antilinear callers conjugate)."""
    out = {}
    for ch, c in coeffs.items():
        for t, v in fn(model, word, ch).items():
            out[t] = out.get(t, 0) + c * v
    return out


# ---------------------------------------------------------------------------
# lattice symmetries


def _dual_grid(model, grid):
    return tuple(tuple(model.dual(x) for x in row) for row in grid)


def _rotate_columns(space: ConfSpace) -> Operator:
    model, n = space.model, space.n

    def image(e):
        grid = tuple(r[1:] + r[:1] for r in e.grid)
        rows = [turn_row(model, e.grid[j], e.rows[j]) for j in range(space.m)]
        cols = [{e.cols[(i + 1) % n]: 1.0} for i in range(n)]
        return _assemble(grid, rows, cols)
    return _operator(space, space, image, False)


def _mirror_columns(space: ConfSpace) -> Operator:
    model, n = space.model, space.n

    def image(e):
        grid = _dual_grid(model, tuple(tuple(reversed(r)) for r in e.grid))
        rows = [reflect(model, e.grid[j], e.rows[j], "out") for j in range(space.m)]
        cols = [mirror_column(model, e.column(n - 1 - i), e.cols[n - 1 - i]) for i in range(n)]
        return _assemble(grid, rows, cols)
    return _operator(space, space, image, True)


def _rotate_rows(space: ConfSpace) -> Operator:
    model, m = space.model, space.m

    def image(e):
        grid = e.grid[-1:] + e.grid[:-1]
        rows = [{e.rows[(j - 1) % m]: 1.0} for j in range(m)]
        cols = [turn_column(model, e.column(i), e.cols[i]) for i in range(space.n)]
        return _assemble(grid, rows, cols)
    return _operator(space, space, image, False)


def _mirror_rows(space: ConfSpace) -> Operator:
    model, m = space.model, space.m

    def image(e):
        grid = _dual_grid(model, tuple(reversed(e.grid)))
        rows = [mirror_row(model, e.grid[m - 1 - j], e.rows[m - 1 - j]) for j in range(m)]
        cols = [reflect(model, e.column(i), e.cols[i], "in") for i in range(space.n)]
        return _assemble(grid, rows, cols)
    return _operator(space, space, image, True)


_SYMMETRIES = {"rho1": _rotate_columns, "theta1": _mirror_columns,
               "rho2": _rotate_rows, "theta2": _mirror_rows}


def symmetry_operator(space: ConfSpace, kind: str) -> Operator:
    if kind not in _SYMMETRIES:
        raise ValueError(f"unknown lattice symmetry {kind!r}")
    key = ("sym", kind, space.n, space.m)
    return _memo(space.model, key, lambda: _SYMMETRIES[kind](space))


def lattice_symmetry(kind: str, x: ConfVector) -> ConfVector:
    return symmetry_operator(x.space, kind)(x)


# ---------------------------------------------------------------------------
# the pairing between the lattice and the dual lattice


def _site_dims(model, grid) -> float:
    return float(np.prod([model.dims[x] for row in grid for x in row])) if grid and grid[0] else 1.0


def _lattice_labels(prefix, space: ConfSpace, picks):
    """Strand labels and box payloads for a list of basis indices."""
    n, m = space.n, space.m
    elems = [space.basis[k] for k in picks]
    labels = {f"{prefix}{i + 1},{j}": np.array([e.grid[j][i] for e in elems], dtype=int)
              for j in range(m) for i in range(n)}
    payloads = {f"{prefix}row{j}": [e.rows[j] for e in elems] for j in range(m)}
    payloads.update({f"{prefix}col{i + 1}": [e.cols[i] for e in elems] for i in range(n)})
    dims = np.array([_site_dims(space.model, e.grid) for e in elems])
    return labels, payloads, dims


def ll_gram(space: ConfSpace) -> np.ndarray:
    """Matrix of the pairing on basis pairs (lattice index, dual-lattice index)."""
    model, n, m = space.model, space.n, space.m

    def run():
        if n == 0:
            return np.ones((1, 1), dtype=complex)
        N = space.dim
        rows, cols = np.divmod(np.arange(N * N), N)
        lb, pb, db = _lattice_labels("b", space, rows)
        lr, pr, dr = _lattice_labels("r", space, cols)
        vals = tg.evaluate_many(model, tg.ll_diagram(n, m), {**lb, **lr}, {**pb, **pr}, N * N)
        pre = model.global_dim ** ((1 - n) * (m - 1) / 2)
        return (pre * np.sqrt(db * dr) * vals).reshape(N, N)
    return _memo(model, ("gram", n, m), run)


def l_vector(space: ConfSpace) -> np.ndarray:
    """Values of the lattice functional on every basis element (blue network only)."""
    model, n, m = space.model, space.n, space.m

    def run():
        if n == 0:
            return np.ones(1, dtype=complex)
        N = space.dim
        lb, pb, db = _lattice_labels("b", space, np.arange(N))
        vals = tg.evaluate_many(model, tg.ll_diagram(n, m, with_red=False), lb, pb, N)
        return scale_factor(model, m) ** (1 - n) * np.sqrt(db) * vals
    return _memo(model, ("lvec", n, m), run)


def ll_form(x: ConfVector, y: ConfVector) -> complex:
    _same(x.space, y.space)
    return complex(x.amps @ ll_gram(x.space) @ y.amps)


def l_functional(x: ConfVector) -> complex:
    return complex(l_vector(x.space) @ x.amps)


def mu_element(model: AnyonModel, n: int, m: int) -> ConfVector:
    """Sum over the basis of conj(L(alpha)) alpha."""
    space = conf_space(model, n, m)
    return ConfVector(space, np.conj(l_vector(space)))


# ---------------------------------------------------------------------------
# duality maps and the string Fourier transform


def duality_operator(space: ConfSpace, sign: str) -> Operator:
    """plus: x -> sum_x' conj(LL(x, x')) x'; minus: y -> sum_x conj(LL(x, y)) x."""
    G = ll_gram(space)
    if sign in ("plus", "+"):
        return Operator(space, space, np.conj(G).T, True)
    if sign in ("minus", "-"):
        return Operator(space, space, np.conj(G), True)
    raise ValueError(f"duality sign is 'plus' or 'minus', not {sign!r}")


def duality_map(sign: str, x: ConfVector) -> ConfVector:
    return duality_operator(x.space, sign)(x)


def sft_operator(space: ConfSpace) -> Operator:
    """x -> sum_x' LL(x, theta2(x')) x'."""
    def run():
        G = ll_gram(space)
        T = symmetry_operator(space, "theta2").matrix  # theta2(e') = T[:, e'] for unit e'
        return Operator(space, space, (G @ T).T, False)
    return _memo(space.model, ("sft", space.n, space.m), run)


def sft(x: ConfVector) -> ConfVector:
    return sft_operator(x.space)(x)


def standard_basis(model: AnyonModel) -> list:
    """Unit vectors v_X of the 2 x 2 space, one per simple label.

    Rows are the normalized duality inclusions into X Xbar and Xbar X; the
    first column is the adjoint of the inclusion into X Xbar and the second
    column is its mirror image.
    """
    space = conf_space(model, 2, 2)
    out = []
    for x in range(model.rank):
        xb = model.dual(x)
        grid = ((x, xb), (xb, x))
        row0 = _inclusion(model, x)
        row1 = _inclusion(model, xb)
        col0 = {k: np.conj(v) for k, v in row0.items()}
        col1 = _column_image(model, (x, xb), {k: np.conj(v) for k, v in col0.items()}, mirror_column)
        v = space.vector()
        for e, c in _assemble(grid, [row0, row1], [col0, col1]).items():
            v.amps[space.index[e]] += c
        out.append(v)
    return out


def _inclusion(model, x):
    """Normalized cup onto (x, dual x), left leg carrying x downward."""
    pw, pv = hs.cup(model, x, False)
    assert pw == (x, model.dual(x))
    d = model.dims[x]
    return {k: v / np.sqrt(d) for k, v in pv.items()}


# ---------------------------------------------------------------------------
# contractions and products


def _row_contract(model, a_word, a_chain, c_word, c_chain, n, k):
    def run():
        w, s = hs.insert_vector(model, (), {(): 1.0 + 0j}, 0, a_word, {a_chain: 1.0})
        w, s = hs.insert_vector(model, w, s, len(w), c_word, {c_chain: 1.0})
        for t in range(k):
            pos = n + k - 1 - t
            pw, pc = hs.cap(model, w[pos], True)
            w, s = hs.apply_covector(model, w, s, pos, pw, pc)
        return hs.clean(s)
    return _memo(model, ("rowc", a_word, a_chain, c_word, c_chain, n, k), run)


def _column_pairing(model, b_word, b_chain, d_word, d_chain):
    """<mirror(d), b>, conjugate-linear in the first slot."""
    img = mirror_column(model, d_word, d_chain)
    return np.conj(img.get(b_chain, 0))


def wedge_operator_pairs(k, xs: ConfSpace, ys: ConfSpace):
    """Coefficient table (x index, y index) -> {result element: value} for the k-string contraction."""
    model = xs.model
    if xs.m != ys.m or xs.model is not ys.model:
        raise SizeMismatch("contraction needs the same model and m")
    n, l = xs.n - k, ys.n - k
    if n < 0 or l < 0:
        raise SizeMismatch(f"cannot contract {k} strings of sizes {xs.n}, {ys.n}")
    m = xs.m

    def run():
        table = {}
        by_front: dict = {}
        for fi, f in enumerate(ys.basis):
            front = tuple(tuple(model.dual(x) for x in reversed(r[:k])) for r in f.grid)
            by_front.setdefault(front, []).append(fi)
        for ei, e in enumerate(xs.basis):
            back = tuple(r[n:] for r in e.grid)
            for fi in by_front.get(back, []):
                f = ys.basis[fi]
                coef = 1.0 + 0j
                for s in range(1, k + 1):
                    bi, di = n + s - 1, k - s
                    coef *= _column_pairing(model, e.column(bi), e.cols[bi], f.column(di), f.cols[di])
                    if coef == 0:
                        break
                if abs(coef) < 1e-15:
                    continue
                grid = tuple(e.grid[j][:n] + f.grid[j][k:] for j in range(m))
                rows = [_row_contract(model, e.grid[j], e.rows[j], f.grid[j], f.rows[j], n, k)
                        for j in range(m)]
                cols = [{c: 1.0} for c in e.cols[:n] + f.cols[k:]]
                img = _assemble(grid, rows, cols)
                table[(ei, fi)] = {g: coef * v for g, v in img.items()}
        return table
    return _memo(model, ("wedge", k, xs.n, ys.n, m), run)


def contract_wedge(k: int, x: ConfVector, y: ConfVector) -> ConfVector:
    xs, ys = x.space, y.space
    table = wedge_operator_pairs(k, xs, ys)
    out = conf_space(xs.model, xs.n + ys.n - 2 * k, xs.m).vector()
    idx = out.space.index
    xa, ya = x.amps, y.amps
    for (ei, fi), img in table.items():
        c = xa[ei] * ya[fi]
        if c == 0:
            continue
        for g, v in img.items():
            out.amps[idx[g]] += c * v
    return out


def wedge_left_operator(k: int, fixed: ConfVector, ys: ConfSpace) -> Operator:
    """y -> fixed wedge_k y as a matrix."""
    table = wedge_operator_pairs(k, fixed.space, ys)
    dst = conf_space(ys.model, fixed.space.n + ys.n - 2 * k, ys.m)
    mat = np.zeros((dst.dim, ys.dim), dtype=complex)
    for (ei, fi), img in table.items():
        c = fixed.amps[ei]
        if c == 0:
            continue
        for g, v in img.items():
            mat[dst.index[g], fi] += c * v
    return Operator(ys, dst, mat)


def star_product(x: ConfVector, y: ConfVector) -> ConfVector:
    """Glue x and y along a gamma string through the four-box Frobenius element."""
    model, m = x.space.model, x.space.m
    if y.space.m != m:
        raise SizeMismatch("star product needs equal m")
    if x.space.n == 0 or y.space.n == 0:
        if x.space.n == 0:
            return y * x.amps[0]
        return x * y.amps[0]
    mu4 = mu_element(model, 4, m)
    t = contract_wedge(1, mu4, x)
    t = symmetry_operator(t.space, "rho1").power(2)(t)
    return contract_wedge(1, t, y) * scale_factor(model, m) ** 2


# ---------------------------------------------------------------------------
# elementary tangles


def _rotation(space, k):
    return symmetry_operator(space, "rho1").power(k)


def tangle_operator(model: AnyonModel, kind: str, k: int, n: int, m: int) -> Operator:
    """Matrix of an elementary tangle acting on the n-box space.

    inclusions map n boxes to n + 1, contractions map n + 1 boxes to n.
    """
    def run():
        delta = scale_factor(model, m)
        if kind == "rho":
            return _rotation(conf_space(model, n, m), 1)
        if kind not in ("iota", "phi"):
            raise ValueError(f"unknown tangle {kind!r}")
        if k < 0 or k > 2 * n + (1 if kind == "phi" else 0) + 1:
            raise IndexError(f"tangle index {k} out of range for n={n}")
        base, turns = k % 2, k // 2
        small, big = conf_space(model, n, m), conf_space(model, n + 1, m)
        if kind == "iota":
            if base == 0:
                op = wedge_left_operator(0, mu_element(model, 1, m), small)
            else:
                op = wedge_left_operator(1, mu_element(model, 3, m) * delta, small)
            if turns:
                op = _rotation(big, -turns) @ op @ _rotation(small, turns)
            return op
        if base == 0:
            op = wedge_left_operator(1, mu_element(model, 1, m), big)
        elif n == 0:
            op = wedge_left_operator(1, mu_element(model, 1, m), big)
        else:
            op = wedge_left_operator(2, mu_element(model, 3, m) * delta, big)
        if turns:
            op = _rotation(small, -turns) @ op @ _rotation(big, turns)
        return op
    return _memo(model, ("tangle", kind, k, n, m), run)


def elementary_tangle(kind: str, k: int, x: ConfVector) -> ConfVector:
    s = x.space
    n = s.n if kind in ("rho", "iota") else s.n - 1
    return tangle_operator(s.model, kind, k, n, s.m)(x)


# ---------------------------------------------------------------------------
# export


def export_matrix(model: AnyonModel, n: int, m: int, matrix, basis_names) -> str:
    lines = [f"model {model.name}", f"n {n}", f"m {m}",
             "basis " + " ".join(basis_names), f"rows {matrix.shape[0]}", f"cols {matrix.shape[1]}"]
    for row in np.asarray(matrix):
        lines.append(" ".join(f"[{_num(z.real)}, {_num(z.imag)}]" for z in row))
    return "\n".join(lines) + "\n"


def _num(v: float) -> str:
    v = 0.0 if abs(v) < 5e-15 else v
    return f"{v:.12e}"


def element_name(model: AnyonModel, e: ConfBasisElement) -> str:
    names = model.names
    grid = "/".join(",".join(names[x] for x in row) for row in e.grid)
    trees = "|".join(".".join(names[c] for c in ch) for ch in e.rows + e.cols)
    return f"{grid}:{trees}" if trees else grid
