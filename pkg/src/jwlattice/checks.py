"""Numerical certificates for the structural identities of the lattice model.

Each registered check evaluates one identity on a model and lattice size and
returns the worst residual it saw.  Statements quantified over a whole space
are checked on the full basis when the space (or pair space) has at most 64
elements, and on 32 seeded random vectors otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import anyons
from . import conf as cf
from . import homspace as hs
from . import tangles as tg

FULL_BASIS_LIMIT = 64
SAMPLES = 32
DEFAULT_BUDGET = 160  # largest space whose pairing matrix a check may build
WEDGE_BUDGET = 5000  # largest space touched only through contractions
NEGATIVE_MARGIN = 0.5


class UnknownCheck(KeyError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class CheckReport:
    check_id: str
    model: str
    n: int
    m: int
    residual: float
    threshold: float
    passed: bool
    details: str = ""
    negative: bool = False

    def record(self) -> str:
        return (f"check={self.check_id} model={self.model} n={self.n} m={self.m} "
                f"residual={self.residual:.6e} threshold={self.threshold:.1e} "
                f"pass={'true' if self.passed else 'false'} details=\"{self.details}\"")


@dataclass
class _Ctx:
    model: anyons.AnyonModel
    n: int
    m: int
    rng: np.random.Generator
    budget: int
    notes: list = field(default_factory=list)
    strategy: set = field(default_factory=set)

    def space(self, n, m=None, paired=True):
        sp = cf.conf_space(self.model, n, self.m if m is None else m)
        limit = self.budget if paired else WEDGE_BUDGET
        if sp.dim > limit:
            raise BudgetExceeded(f"Conf({n},{sp.m}) has {sp.dim} elements, limit {limit}")
        return sp

    def probe(self, dim):
        """Columns to test on: the identity, or normalized random vectors."""
        if dim <= FULL_BASIS_LIMIT:
            self.strategy.add("full basis")
            return np.eye(dim, dtype=complex)
        self.strategy.add(f"{SAMPLES} random vectors")
        v = self.rng.normal(size=(dim, SAMPLES)) + 1j * self.rng.normal(size=(dim, SAMPLES))
        return v / np.linalg.norm(v, axis=0)

    def pairs(self, da, db):
        """Index pairs (or coefficient pairs) for bilinear statements."""
        if da * db <= FULL_BASIS_LIMIT:
            self.strategy.add("full basis")
            eye_a, eye_b = np.eye(da, dtype=complex), np.eye(db, dtype=complex)
            return [(eye_a[:, i], eye_b[:, j]) for i in range(da) for j in range(db)]
        self.strategy.add(f"{SAMPLES} random vectors")
        out = []
        for _ in range(SAMPLES):
            x = self.rng.normal(size=da) + 1j * self.rng.normal(size=da)
            y = self.rng.normal(size=db) + 1j * self.rng.normal(size=db)
            out.append((x / np.linalg.norm(x), y / np.linalg.norm(y)))
        return out

    def note(self, text):
        self.notes.append(text)


@dataclass(frozen=True)
class Check:
    check_id: str
    statement: str
    run: Callable
    negative: bool = False


REGISTRY: dict[str, Check] = {}


def _register(check_id, statement, negative=False):
    def wrap(fn):
        REGISTRY[check_id] = Check(check_id, statement, fn, negative)
        return fn
    return wrap


# ---------------------------------------------------------------------------
# small helpers


def _gap(a: cf.Operator, b: cf.Operator, probe=None) -> float:
    if a.antilinear != b.antilinear:
        raise ValueError("comparing a linear with an antilinear map")
    diff = a.matrix - b.matrix
    if probe is not None:
        diff = diff @ probe
    return float(np.abs(diff).max()) if diff.size else 0.0


def _eye(space) -> cf.Operator:
    return cf.Operator(space, space, np.eye(space.dim, dtype=complex))


def _sym(space, kind):
    return cf.symmetry_operator(space, kind)


def _tangle(ctx, kind, k, n):
    return cf.tangle_operator(ctx.model, kind, k, n, ctx.m)


def _fmt(x: float) -> str:
    return f"{x:.2e}"


def _worst(parts: dict) -> float:
    return max(parts.values()) if parts else 0.0


def _summary(parts: dict) -> str:
    return ", ".join(f"{k}={_fmt(v)}" for k, v in parts.items())


def _splits(ctx, total):
    """Size pairs (a, b) with a + b = total, a, b >= 1, whose spaces fit the budget."""
    out = []
    for a in range(1, total):
        try:
            ctx.space(a), ctx.space(total - a)
        except BudgetExceeded:
            continue
        out.append((a, total - a))
    return out


def _anti_isometry_residual(ctx, space):
    D = cf.duality_operator(space, "plus")
    P = ctx.probe(space.dim)
    img = D.matrix @ np.conj(P)
    return float(np.abs(img.conj().T @ img - np.conj(P.conj().T @ P)).max()), D


# ---------------------------------------------------------------------------
# the pairing and the duality maps


@_register("duality.isometry", "the duality map induced by the lattice pairing is an anti-linear isometry")
def _duality_isometry(ctx):
    sp = ctx.space(ctx.n)
    r, D = _anti_isometry_residual(ctx, sp)
    scale = float(np.real(np.trace(D.matrix.conj().T @ D.matrix))) / max(sp.dim, 1)
    delta = cf.scale_factor(ctx.model, ctx.m)
    ctx.note(f"mean squared norm {scale:.12f}")
    if delta != 1.0 and scale > 0:
        ctx.note(f"fitted delta exponent {math.log(scale) / math.log(delta):.3e}")
    return r


@_register("duality.inverse", "the two duality maps are mutually inverse anti-linear maps")
def _duality_inverse(ctx):
    sp = ctx.space(ctx.n)
    P = ctx.probe(sp.dim)
    Dp, Dm = cf.duality_operator(sp, "plus"), cf.duality_operator(sp, "minus")
    comp = Dm @ Dp
    parts = {"inverse": _gap(comp, _eye(sp), P)}
    lam = 0.6 + 0.8j
    scaled = Dp.matrix @ np.conj(lam * P)
    parts["antilinear"] = float(np.abs(scaled - np.conj(lam) * (Dp.matrix @ np.conj(P))).max())
    ctx.note(_summary(parts))
    return _worst(parts)


def _canonical_pair(model, sp, z, top, bottom):
    """Rows are normalized duality cups over z, the two columns are given."""
    grid = tuple((x, model.dual(x)) for x in z)
    rows = [cf._inclusion(model, x) for x in z]
    v = sp.vector()
    for e, c in cf._assemble(grid, rows, [top, bottom]).items():
        v.amps[sp.index[e]] += c
    return v.amps


@_register("zero.map", "pairing the trivial configuration against a dual basis reproduces the trivial coefficient")
def _zero_map(ctx):
    model = ctx.model
    sp = ctx.space(2)
    G = cf.ll_gram(sp)
    one = sp.trivial().amps
    words = cf.gamma(model, ctx.m).words()
    # dual side: column b' next to its mirror image
    dual = np.array([_canonical_pair(model, sp, z, {b: 1.0}, cf._column_image(model, z, {b: 1.0}, cf.mirror_column))
                     for z in words for b in hs.fusion_chains(model, z)])
    weights = one @ G @ dual.T
    parts = {"restricted": 0.0}
    for z in words:
        zbar = tuple(model.dual(x) for x in z)
        want = 1.0 if not any(z) else 0.0
        for b1 in hs.fusion_chains(model, z):
            for b2 in hs.fusion_chains(model, zbar):
                y = _canonical_pair(model, sp, z, {b1: 1.0}, {b2: 1.0})
                got = complex(weights @ (y @ G @ dual.T))
                parts["restricted"] = max(parts["restricted"], abs(got - want))
    # over a whole dual basis the expansion needs the conjugate
    t = int(np.argmax(one))
    rhs = np.zeros(sp.dim)
    rhs[t] = 1.0
    parts["full basis"] = float(np.abs(np.conj(G) @ G[t, :] - rhs).max())
    ctx.strategy.add("full basis")
    ctx.note(_summary(parts) + f"; imag of trivial weights {_fmt(float(np.abs(weights.imag).max()))}")
    return _worst(parts)


@_register("killing", "the dimension-weighted sum of loops around a strand kills every nontrivial label")
def _killing(ctx):
    model = ctx.model
    mu = model.global_dim
    d = np.asarray(model.dims, dtype=float)
    hopf = tg.link_values(model, tg.hopf_scene())
    single = d @ hopf
    target = np.zeros(model.rank)
    target[0] = mu
    parts = {"one strand": float(np.abs(single - target).max())}
    ring = tg.link_values(model, tg.ring_scene())
    pair = np.einsum("x,xbc->bc", d, ring)
    vac = np.array([[mu if model.dual(b) == c else 0.0 for c in range(model.rank)]
                    for b in range(model.rank)])
    parts["two strands"] = float(np.abs(pair - vac).max())
    ctx.note(_summary(parts))
    return _worst(parts)


# ---------------------------------------------------------------------------
# lattice symmetries


@_register("symmetry.relations", "rotations and reflections of the torus lattice satisfy the dihedral relations and commute across directions")
def _symmetry_relations(ctx):
    sp = ctx.space(ctx.n, paired=False)
    P = ctx.probe(sp.dim)
    r1, t1, r2, t2 = (_sym(sp, k) for k in ("rho1", "theta1", "rho2", "theta2"))
    one = _eye(sp)
    parts = {
        "rho1 period n": _gap(r1.power(ctx.n), one, P),
        "rho2 period m": _gap(r2.power(ctx.m), one, P),
        "theta1^2": _gap(t1 @ t1, one, P),
        "theta2^2": _gap(t2 @ t2, one, P),
        "rho1 theta1": _gap(r1 @ t1, t1 @ r1.power(-1), P),
        "rho2 theta2": _gap(r2 @ t2, t2 @ r2.power(-1), P),
        "[rho1,rho2]": _gap(r1 @ r2, r2 @ r1, P),
        "[rho1,theta2]": _gap(r1 @ t2, t2 @ r1, P),
        "[theta1,rho2]": _gap(t1 @ r2, r2 @ t1, P),
        "[theta1,theta2]": _gap(t1 @ t2, t2 @ t1, P),
    }
    ctx.note(_summary(parts))
    if ctx.n != ctx.m and ctx.n > 0:
        ctx.note(f"rho1^m - 1 = {_fmt(_gap(r1.power(ctx.m), one, P))}")
    return _worst(parts)


def _form_gap(M, P):
    return float(np.abs(P.T @ M @ P).max()) if M.size else 0.0


@_register("ll.symmetry", "the lattice pairing is invariant under rotations and conjugated by the reflections")
def _ll_symmetry(ctx):
    sp = ctx.space(ctx.n)
    G = cf.ll_gram(sp)
    P = ctx.probe(sp.dim)
    R1, T1, R2, T2 = (_sym(sp, k).matrix for k in ("rho1", "theta1", "rho2", "theta2"))
    parts = {
        "rho1": _form_gap(R1.T @ G @ R1 - G, P),
        "rho2": _form_gap(R2.T @ G @ R2 - G, P),
        # conj LL(x, x') = LL(theta1 x, rho1 theta1 x')
        "theta1": _form_gap(T1.T @ G @ R1 @ T1 - np.conj(G), P),
        # conj LL(x, x') = LL(theta2 x, rho2 theta2 x')
        "theta2": _form_gap(T2.T @ G @ R2 @ T2 - np.conj(G), P),
    }
    literal = _form_gap((R1 @ T2).T @ G @ T2 - np.conj(G), P)
    ctx.note(_summary(parts) + f"; rho1-theta2 form {_fmt(literal)}")
    return _worst(parts)


@_register("L.symmetry", "the lattice functional is rotation invariant and conjugated by reflections")
def _l_symmetry(ctx):
    sp = ctx.space(ctx.n)
    L = cf.l_vector(sp)
    parts = {}
    for k in ("rho1", "rho2"):
        parts[k] = float(np.abs(L @ _sym(sp, k).matrix - L).max())
    for k in ("theta1", "theta2"):
        parts[k] = float(np.abs(L @ _sym(sp, k).matrix - np.conj(L)).max())
    parts["L = LL(., 1)"] = float(np.abs(cf.ll_gram(sp) @ sp.trivial().amps - L).max())
    delta = cf.scale_factor(ctx.model, ctx.m)
    parts["L(1)"] = abs(cf.l_functional(sp.trivial()) - delta ** (1 - ctx.n))
    ctx.strategy.add("full basis")
    ctx.note(_summary(parts))
    return _worst(parts)


@_register("mu.invariance", "the Frobenius elements are fixed by all four lattice symmetries")
def _mu_invariance(ctx):
    sp = ctx.space(ctx.n, paired=False)
    mu = cf.mu_element(ctx.model, ctx.n, ctx.m)
    parts = {k: (cf.lattice_symmetry(k, mu) - mu).norm() for k in ("rho1", "theta1", "rho2", "theta2")}
    unit = cf.mu_element(ctx.model, 1, ctx.m)
    parts["|mu_1| - 1"] = abs(unit.norm() - 1.0)
    ctx.note(_summary(parts) + f"; |mu_n| = {mu.norm():.12f}")
    return _worst(parts)


# ---------------------------------------------------------------------------
# the object gamma, contractions and the Frobenius algebra


@_register("gamma.dim", "the total dimension of gamma_m is mu^(m-1)")
def _gamma_dim(ctx):
    g = cf.gamma(ctx.model, ctx.m)
    target = ctx.model.global_dim ** (ctx.m - 1)
    ctx.note(f"d(gamma)={g.dimension:.12f} target={target:.12f} components={len(g.components)}")
    return abs(g.dimension - target)


@_register("contraction.split", "a one-string contraction splits into a sum over column bases of products of functionals")
def _contraction_split(ctx):
    # n = 1 lands in Conf(0, m), where L is the bare scalar and the delta factor has nothing to cancel
    model, n, m = ctx.model, max(ctx.n, 2), ctx.m
    sp = ctx.space(n, paired=False)
    out = ctx.space(2 * n - 2, paired=False)
    L, Lout = cf.l_vector(sp), cf.l_vector(out)
    delta = cf.scale_factor(model, m)
    by_first: dict = {}
    for fi, f in enumerate(sp.basis):
        by_first.setdefault(f.column(0), []).append(fi)
    worst, count = 0.0, 0
    for ei, e in enumerate(sp.basis):
        z = e.column(n - 1)
        zbar = tuple(model.dual(x) for x in z)
        trees = hs.fusion_chains(model, z)
        for fi in by_first.get(zbar, []):
            f = sp.basis[fi]
            pair = cf._column_pairing(model, z, e.cols[n - 1], zbar, f.cols[0])
            if abs(pair) < 1e-12:
                continue
            joined = cf.contract_wedge(1, sp.unit(ei), sp.unit(fi))
            # both factors carry sqrt d of the cut column, the joined diagram carries neither
            lhs = float(np.prod([model.dims[x] for x in z])) * (Lout @ joined.amps)
            rhs = 0j
            for b in trees:
                left = sp.index[cf.ConfBasisElement(e.grid, e.rows, e.cols[:-1] + (b,))]
                mirrored = cf.mirror_column(model, z, b)
                right = sum(c * L[sp.index[cf.ConfBasisElement(f.grid, f.rows, (ch,) + f.cols[1:])]]
                            for ch, c in mirrored.items())
                rhs += L[left] * right
            rhs *= delta * pair
            worst = max(worst, abs(lhs - rhs))
            count += 1
    ctx.strategy.add("full basis")
    ctx.note(f"{count} contractible pairs")
    return worst


def _fit(model, n, l, m):
    a, b = cf.mu_element(model, n, m), cf.mu_element(model, l, m)
    w = cf.contract_wedge(1, a, b)
    t = cf.mu_element(model, n + l - 2, m)
    c = complex(np.vdot(t.amps, w.amps) / np.vdot(t.amps, t.amps))
    return c, (w - t * c).norm()


@_register("mu.composition", "contracting two Frobenius elements along one string gives a fixed multiple of a Frobenius element")
def _mu_composition(ctx):
    model, m = ctx.model, ctx.m
    delta = cf.scale_factor(model, m)
    for n in (2, 3):
        ctx.space(n, paired=False)
    consts, fits = [], []
    for n, l in ((2, 2), (2, 3), (3, 2)):
        c, r = _fit(model, n, l, m)
        consts.append(c)
        fits.append(r)
    spread = max(abs(a - b) for a in consts for b in consts)
    expected = max(abs(c - 1 / delta) for c in consts)
    edge = {f"({n},{l})": _fit(model, n, l, m)[0] * delta for n, l in ((1, 1), (1, 2), (2, 1))}
    ctx.note(f"c={consts[0].real:.12f}{consts[0].imag:+.1e}i c*delta={(consts[0] * delta).real:.12f} "
             f"spread={_fmt(spread)} fit={_fmt(max(fits))}; edge c*delta "
             + " ".join(f"{k}={v.real:.6f}" for k, v in edge.items()))
    ctx.strategy.add("full basis")
    return max(max(fits), spread, expected)


@_register("frobenius", "the three-box Frobenius element is symmetric, associative, unital and satisfies the Frobenius law")
def _frobenius(ctx):
    model, m = ctx.model, ctx.m
    ctx.space(4, paired=False)
    delta = cf.scale_factor(model, m)
    mu1, mu2, mu3, mu4 = (cf.mu_element(model, k, m) for k in (1, 2, 3, 4))
    prod = cf.contract_wedge(1, mu3, mu3)
    parts = {
        "rotation": (cf.lattice_symmetry("rho1", mu3) - mu3).norm(),
        "reflection": (cf.lattice_symmetry("theta1", mu3) - mu3).norm(),
        # rotating the composite exchanges the two bracketings
        "associativity": (cf.lattice_symmetry("rho1", prod) - prod).norm(),
        "composite": (prod * delta - mu4).norm(),
        "left unit": (cf.contract_wedge(1, mu1, mu3) * delta - mu2).norm(),
        "right unit": (cf.contract_wedge(1, mu3, mu1) * delta - mu2).norm(),
    }
    ctx.note(_summary(parts))
    return _worst(parts)


# ---------------------------------------------------------------------------
# planar tangles


def _tangle_range(n):
    return range(0, 2 * n + 1) if n else range(0, 1)


@_register("tangle.adjoint", "each cap-adding inclusion is adjoint to the matching contraction and is an isometry")
def _tangle_adjoint(ctx):
    n = ctx.n
    ctx.space(n, paired=False), ctx.space(n + 1, paired=False)
    adj, iso = 0.0, 0.0
    for k in _tangle_range(n):
        I, Pm = _tangle(ctx, "iota", k, n), _tangle(ctx, "phi", k, n)
        adj = max(adj, float(np.abs(I.matrix.conj().T - Pm.matrix).max()))
        iso = max(iso, float(np.abs(I.matrix.conj().T @ I.matrix - np.eye(I.src.dim)).max()))
    ctx.strategy.add("full basis")
    ctx.note(f"adjoint={_fmt(adj)} isometry={_fmt(iso)} k=0..{max(_tangle_range(n))}")
    return max(adj, iso)


def _wedge_commutes(ctx, kind, k, a, b):
    """Residual of kind(x ^_k y) against kind(x) ^_k kind(y)."""
    xs, ys = ctx.space(a, paired=False), ctx.space(b, paired=False)
    zs = ctx.space(a + b - 2 * k, paired=False)
    Sx, Sy, Sz = _sym(xs, kind), _sym(ys, kind), _sym(zs, kind)
    worst = 0.0
    for x, y in ctx.pairs(xs.dim, ys.dim):
        vx, vy = xs.vector(x), ys.vector(y)
        lhs = Sz(cf.contract_wedge(k, vx, vy))
        rhs = cf.contract_wedge(k, Sx(vx), Sy(vy))
        worst = max(worst, (lhs - rhs).norm())
    return worst


@_register("planar.iso", "the rotation and reflection across the second lattice direction commute with every planar tangle")
def _planar_iso(ctx):
    n = ctx.n
    small, big = ctx.space(n, paired=False), ctx.space(n + 1, paired=False)
    parts = {}
    for kind in ("rho2", "theta2"):
        Ss, Sb = _sym(small, kind), _sym(big, kind)
        Ps, Pb = ctx.probe(small.dim), ctx.probe(big.dim)
        w = 0.0
        for k in _tangle_range(n):
            I, Pm = _tangle(ctx, "iota", k, n), _tangle(ctx, "phi", k, n)
            w = max(w, _gap(Sb @ I, I @ Ss, Ps), _gap(Ss @ Pm, Pm @ Sb, Pb))
        r1, t1 = _sym(small, "rho1"), _sym(small, "theta1")
        w = max(w, _gap(Ss @ r1, r1 @ Ss, Ps), _gap(Ss @ t1, t1 @ Ss, Ps))
        parts[kind + " tangles"] = w
        wedge = 0.0
        for k in range(0, n + 1):
            try:
                wedge = max(wedge, _wedge_commutes(ctx, kind, k, n, n))
            except BudgetExceeded:
                ctx.note(f"contraction k={k} skipped (budget)")
        parts[kind + " contractions"] = wedge
    ctx.note(_summary(parts))
    return _worst(parts)


# ---------------------------------------------------------------------------
# the string Fourier transform


@_register("sft.smatrix", "the string Fourier transform acts on the standard basis of the 2x2 space as the modular S-matrix")
def _sft_smatrix(ctx):
    model = ctx.model
    ctx.space(2, 2)
    sb = cf.standard_basis(model)
    F = cf.sft_operator(cf.conf_space(model, 2, 2))
    mat = np.array([[sb[j].inner(F(sb[i])) for j in range(model.rank)] for i in range(model.rank)])
    S = anyons.s_matrix(model)
    orth = max(abs(sb[i].inner(sb[j]) - (i == j)) for i in range(model.rank) for j in range(model.rank))
    ctx.strategy.add("full basis")
    ctx.note(f"standard basis orthonormality {_fmt(orth)}")
    return max(float(np.abs(mat - S).max()), orth)


def _star_parts(ctx, transform, splits):
    """Product rule of a map over star and tensor (zero-string contraction)."""
    worst = 0.0
    for a, b in splits:
        xs, ys = ctx.space(a), ctx.space(b)
        Fx, Fy, Fz = transform(xs), transform(ys), transform(ctx.space(a + b))
        for x, y in ctx.pairs(xs.dim, ys.dim):
            vx, vy = xs.vector(x), ys.vector(y)
            lhs = Fz(cf.star_product(vx, vy))
            rhs = cf.contract_wedge(0, Fx(vx), Fy(vy))
            worst = max(worst, (lhs - rhs).norm())
    return worst


def _star_splits(ctx):
    splits = _splits(ctx, ctx.n) if ctx.n >= 2 else []
    try:
        ctx.space(2 * ctx.n)
        if ctx.n >= 1 and (ctx.n, ctx.n) not in splits:
            splits.append((ctx.n, ctx.n))
    except BudgetExceeded:
        ctx.note(f"({ctx.n},{ctx.n}) star skipped (budget)")
    return splits


@_register("psi.star", "the pairing turns star products into products of pairings, and the transform maps star to tensor")
def _psi_star(ctx):
    splits = _star_splits(ctx)
    pairing = 0.0
    for a, b in splits:
        xs, ys, zs = ctx.space(a), ctx.space(b), ctx.space(a + b)
        Gx, Gy, Gz = cf.ll_gram(xs), cf.ll_gram(ys), cf.ll_gram(zs)
        pairs = ctx.pairs(xs.dim, ys.dim)
        stars = np.array([cf.star_product(xs.vector(x), ys.vector(y)).amps for x, y in pairs]).T
        tens = np.array([cf.contract_wedge(0, xs.vector(x), ys.vector(y)).amps for x, y in pairs]).T
        lhs = stars.T @ Gz @ tens
        xa = np.array([p[0] for p in pairs]).T
        ya = np.array([p[1] for p in pairs]).T
        rhs = (xa.T @ Gx @ xa) * (ya.T @ Gy @ ya)
        pairing = max(pairing, float(np.abs(lhs - rhs).max()))
    transform = _star_parts(ctx, cf.sft_operator, splits)
    ctx.note(f"pairing={_fmt(pairing)} transform={_fmt(transform)} sizes={splits}")
    return max(pairing, transform)


@_register("psi.contraction", "contractions on the lattice side pair against inclusions on the dual side")
def _psi_contraction(ctx):
    n = max(ctx.n, 1)
    Gb, Gs = cf.ll_gram(ctx.space(n)), cf.ll_gram(ctx.space(n - 1))
    parts = {}
    P1, I0 = _tangle(ctx, "phi", 1, n - 1).matrix, _tangle(ctx, "iota", 0, n - 1).matrix
    parts["phi1/iota0"] = float(np.abs(P1.T @ Gs - Gb @ I0).max())
    if n >= 2:
        P2, I1 = _tangle(ctx, "phi", 2, n - 1).matrix, _tangle(ctx, "iota", 1, n - 1).matrix
        parts["phi2/iota1"] = float(np.abs(P2.T @ Gs - Gb @ I1).max())
    ctx.strategy.add("full basis")
    ctx.note(_summary(parts))
    return _worst(parts)


@_register("psi.isometry", "the string Fourier transform is an isometry")
def _psi_isometry(ctx):
    sp = ctx.space(ctx.n)
    F = cf.sft_operator(sp)
    P = ctx.probe(sp.dim)
    img = F.matrix @ P
    return float(np.abs(img.conj().T @ img - P.conj().T @ P).max())


def _inclusion_parts(ctx, transform):
    """Shifted inclusion rule in both directions; returns (consistent, literal)."""
    n = ctx.n
    small, big = ctx.space(n), ctx.space(n + 1)
    Fs, Fb = transform(small), transform(big)
    P = ctx.probe(small.dim)
    good, literal = 0.0, 0.0
    for k in range(0, max(2 * n - 1, 1)):
        good = max(good, _gap(Fb @ _tangle(ctx, "iota", k + 1, n), _tangle(ctx, "iota", k, n) @ Fs, P))
        literal = max(literal, _gap(Fb @ _tangle(ctx, "iota", k, n), _tangle(ctx, "iota", k + 1, n) @ Fs, P))
    return good, literal


def _contraction_rule(ctx, transform):
    n = ctx.n
    small, big = ctx.space(n), ctx.space(n + 1)
    Fs, Fb = transform(small), transform(big)
    P = ctx.probe(big.dim)
    w = 0.0
    for k in range(0, max(2 * n, 1)):
        w = max(w, _gap(Fs @ _tangle(ctx, "phi", k + 1, n), _tangle(ctx, "phi", k, n) @ Fb, P))
    return w


@_register("psi.inclusion", "the transform shifts inclusions by one boundary point")
def _psi_inclusion(ctx):
    good, literal = _inclusion_parts(ctx, cf.sft_operator)
    ctx.note(f"F iota_(k+1) = iota_k F: {_fmt(good)}; F iota_k = iota_(k+1) F: {_fmt(literal)}")
    return good


def _transform_parts(ctx, transform):
    sp = ctx.space(ctx.n)
    F = transform(sp)
    P = ctx.probe(sp.dim)
    r, t1 = _sym(sp, "rho1"), _sym(sp, "theta1")
    parts = {
        "rotation": _gap(F @ r, r @ F, P),
        "reflection": _gap(t1 @ F, F @ r.power(-1) @ t1, P),
        "contraction": _contraction_rule(ctx, transform),
    }
    good, literal = _inclusion_parts(ctx, transform)
    parts["inclusion"] = good
    if ctx.n >= 2:
        parts["star"] = _star_parts(ctx, transform, _splits(ctx, ctx.n))
    return parts, literal


@_register("selfdual", "the string Fourier transform intertwines all elementary tangles, making the planar algebra self-dual")
def _selfdual(ctx):
    parts, literal = _transform_parts(ctx, cf.sft_operator)
    sp = ctx.space(ctx.n)
    F = cf.sft_operator(sp)
    P = ctx.probe(sp.dim)
    img = F.matrix @ P
    parts["isometry"] = float(np.abs(img.conj().T @ img - P.conj().T @ P).max())
    ctx.note(_summary(parts) + f"; literal inclusion form {_fmt(literal)}")
    return _worst(parts)


@_register("duality.tangles", "the duality map intertwines rotation, reflection, products, contractions and inclusions")
def _duality_tangles(ctx):
    plus = lambda sp: cf.duality_operator(sp, "plus")  # noqa: E731
    parts, literal = _transform_parts(ctx, plus)
    sp = ctx.space(ctx.n)
    parts["theta2 F"] = _gap(plus(sp), _sym(sp, "theta2") @ cf.sft_operator(sp), ctx.probe(sp.dim))
    ctx.note(_summary(parts) + f"; literal inclusion form {_fmt(literal)}")
    return _worst(parts)


@_register("zd.dft", "for pointed models the transform is a discrete Fourier transform whose square is charge conjugation")
def _zd_dft(ctx):
    model = ctx.model
    sp = ctx.space(2, 2)
    F = cf.sft_operator(sp)
    parts = {}
    pointed = all(abs(d - 1) < 1e-12 for d in model.dims)
    if pointed:
        parts["moduli"] = float(np.abs(np.abs(F.matrix) - 1 / math.sqrt(model.rank)).max())
    sb = cf.standard_basis(model)
    F2 = F @ F
    sq = np.array([[sb[j].inner(F2(sb[i])) for j in range(model.rank)] for i in range(model.rank)])
    conj = np.array([[1.0 if model.dual(i) == j else 0.0 for j in range(model.rank)]
                     for i in range(model.rank)])
    S = anyons.s_matrix(model)
    parts["square"] = float(np.abs(sq - conj).max())
    parts["S^2"] = float(np.abs(S @ S - conj).max())
    ctx.strategy.add("full basis")
    ctx.note(("pointed; " if pointed else "not pointed, moduli skipped; ") + _summary(parts))
    return _worst(parts)


@_register("lift.shading", "composing the transform with any power of the second-direction rotation still intertwines the tangles")
def _lift_shading(ctx):
    worst = {}
    for k in range(ctx.m):
        def shifted(sp, k=k):
            return cf.sft_operator(sp) @ _sym(sp, "rho2").power(k)
        parts, _ = _transform_parts(ctx, shifted)
        sp = ctx.space(ctx.n)
        img = shifted(sp).matrix
        parts["isometry"] = float(np.abs(img.conj().T @ img - np.eye(sp.dim)).max())
        worst[f"k={k}"] = _worst(parts)
    ctx.note(_summary(worst))
    return _worst(worst)


@_register("modularity.negative", "without modularity the duality map fails to be an isometry (evaluated on symmetric-z2)",
           negative=True)
def _modularity_negative(ctx):
    sp = ctx.space(ctx.n)
    r, _ = _anti_isometry_residual(ctx, sp)
    G = cf.ll_gram(sp)
    rank = int(np.linalg.matrix_rank(G, tol=1e-9))
    ctx.note(f"pairing rank {rank} of {sp.dim}")
    return r


# ---------------------------------------------------------------------------
# running


def list_checks() -> list[tuple[str, str]]:
    return [(c.check_id, c.statement) for c in REGISTRY.values()]


def run_check(check_id: str, model, n: int = 2, m: int = 2, tol: float = 1e-8,
              seed: int = 0, budget: int = DEFAULT_BUDGET) -> CheckReport:
    """Evaluate one registered identity.

    `model` is an AnyonModel or a built-in name.  The negative control always
    runs on the non-modular built-in, whatever model is passed.
    """
    try:
        check = REGISTRY[check_id]
    except KeyError:
        raise UnknownCheck(check_id) from None
    if isinstance(model, str):
        model = anyons.load_model(model)
    if check.negative:
        model = anyons.load_model("symmetric-z2")
    if n < 0 or m < 1:
        raise cf.SizeMismatch(f"bad lattice size {n}x{m}")
    ctx = _Ctx(model, n, m, np.random.default_rng(seed), budget)
    residual = float(check.run(ctx))
    if check.negative:
        threshold = NEGATIVE_MARGIN
        passed = residual >= threshold
    else:
        threshold = tol
        passed = residual < tol
    notes = list(ctx.notes)
    if ctx.strategy:
        notes.insert(0, "+".join(sorted(ctx.strategy)))
    return CheckReport(check_id, model.name, n, m, residual, threshold, passed,
                       "; ".join(notes), check.negative)


def run_suite(ids, model, n: int = 2, m: int = 2, tol: float = 1e-8, seed: int = 0,
              budget: int = DEFAULT_BUDGET) -> list[CheckReport]:
    """Run several checks; one that exceeds the budget is reported as failed."""
    reports = []
    for cid in ids:
        if cid not in REGISTRY:
            raise UnknownCheck(cid)
    for cid in ids:
        try:
            reports.append(run_check(cid, model, n, m, tol, seed, budget))
        except BudgetExceeded as exc:
            name = model if isinstance(model, str) else model.name
            reports.append(CheckReport(cid, name, n, m, float("inf"), tol, False, f"budget exceeded: {exc}"))
    return reports
