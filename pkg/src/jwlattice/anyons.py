"""Anyon model data: fusion rules, F and R symbols, and what follows from them.

Only multiplicity-free models are supported.  Labels are integers with 0 the
unit; F and R are stored as dense complex arrays that vanish on inadmissible
index combinations.

Conventions (splitting-tree form):

    ((a b)_e c)_d = sum_f F[a,b,c,d,e,f] (a (b c)_f)_d
    braiding (a b)_c -> (b a)_c picks up R[a,b,c]
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np


class ModelError(Exception):
    pass


class ParseError(ModelError):
    pass


class MissingSymbol(ModelError):
    pass


class InconsistentData(ModelError):
    pass


class NonUnitaryTwist(ModelError):
    pass


class UnknownModel(ModelError):
    pass


@dataclass(frozen=True)
class Label:
    index: int
    name: str
    dual: int


@dataclass(frozen=True, eq=False)
class AnyonModel:
    name: str
    labels: tuple[Label, ...]
    fusion: np.ndarray  # N[a, b, c] in {0, 1}
    fsym: np.ndarray  # shape (k,)*6
    rsym: np.ndarray  # shape (k, k, k)
    dims: np.ndarray
    twists: np.ndarray
    global_dim: float
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def names(self) -> list[str]:
        return [lab.name for lab in self.labels]

    def dual(self, a: int) -> int:
        return self.labels[a].dual

    def index(self, name: str | int) -> int:
        if isinstance(name, (int, np.integer)):
            if 0 <= name < self.rank:
                return int(name)
            raise KeyError(name)
        for lab in self.labels:
            if lab.name == name:
                return lab.index
        raise KeyError(name)

    def products(self, a: int, b: int) -> list[int]:
        """Channels c with N(a, b, c) = 1."""
        return [int(c) for c in np.nonzero(self.fusion[a, b])[0]]

    def __hash__(self):
        return id(self)


# ---------------------------------------------------------------------------
# construction helpers


def _fusion_from_triples(k: int, triples) -> np.ndarray:
    N = np.zeros((k, k, k), dtype=int)
    for a, b, c in triples:
        N[a, b, c] = 1
    return N


def _admissible_f(N: np.ndarray) -> np.ndarray:
    """Boolean mask over (a,b,c,d,e,f) of F entries whose trees both exist."""
    left = np.einsum("abe,ecd->abcde", N, N)
    right = np.einsum("bcf,afd->abcdf", N, N)
    return (left[..., :, None] * right[..., None, :]) > 0


def _perron_dims(N: np.ndarray) -> np.ndarray:
    k = N.shape[0]
    dims = np.ones(k)
    for a in range(k):
        vals = np.linalg.eigvals(N[a].astype(float))
        dims[a] = max(vals.real)
    return dims


def _twists(N: np.ndarray, R: np.ndarray, dims: np.ndarray) -> np.ndarray:
    k = N.shape[0]
    out = np.zeros(k, dtype=complex)
    for a in range(k):
        out[a] = sum(dims[c] / dims[a] * R[a, a, c] for c in range(k) if N[a, a, c])
    return out


def _build(name, names, duals, triples, fvals, rvals, dims=None, twists=None) -> AnyonModel:
    k = len(names)
    N = _fusion_from_triples(k, triples)
    labels = tuple(Label(i, names[i], duals[i]) for i in range(k))
    mask = _admissible_f(N)
    F = np.zeros((k,) * 6, dtype=complex)
    for idx, val in fvals.items():
        F[idx] = val
    missing = np.argwhere(mask & (F == 0))
    if len(missing):
        bad = tuple(int(v) for v in missing[0])
        raise MissingSymbol(f"F entry {bad} is admissible but absent")
    R = np.zeros((k, k, k), dtype=complex)
    for idx, val in rvals.items():
        R[idx] = val
    for a, b, c in np.argwhere(N > 0):
        if R[a, b, c] == 0:
            raise MissingSymbol(f"R entry {(int(a), int(b), int(c))} is admissible but absent")
    pf = _perron_dims(N)
    if dims is not None:
        given = np.asarray(dims, dtype=float)
        if np.max(np.abs(given - pf)) > 1e-6:
            raise InconsistentData(f"supplied dims {given} differ from Perron values {pf}")
    tw = _twists(N, R, pf)
    if twists is not None:
        tw = np.asarray(twists, dtype=complex)
    return AnyonModel(name, labels, N, F, R, pf, tw, float(np.sum(pf**2)))


def _trivial_f(N, overrides=None):
    """All admissible F entries equal to 1, except those in overrides."""
    vals = {tuple(int(v) for v in idx): 1.0 for idx in np.argwhere(_admissible_f(N))}
    vals.update(overrides or {})
    return vals


def fibonacci() -> AnyonModel:
    phi = (1 + math.sqrt(5)) / 2
    triples = [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0), (1, 1, 1)]
    N = _fusion_from_triples(2, triples)
    t = 1
    fv = _trivial_f(N, {
        (t, t, t, t, 0, 0): 1 / phi,
        (t, t, t, t, 0, 1): 1 / math.sqrt(phi),
        (t, t, t, t, 1, 0): 1 / math.sqrt(phi),
        (t, t, t, t, 1, 1): -1 / phi,
    })
    rv = {(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1,
          (1, 1, 0): cmath.exp(-4j * math.pi / 5),
          (1, 1, 1): cmath.exp(3j * math.pi / 5)}
    return _build("fibonacci", ["1", "tau"], [0, 1], triples, fv, rv)


def ising() -> AnyonModel:
    s, p = 1, 2
    triples = [(0, 0, 0), (0, s, s), (s, 0, s), (0, p, p), (p, 0, p),
               (s, s, 0), (s, s, p), (s, p, s), (p, s, s), (p, p, 0)]
    N = _fusion_from_triples(3, triples)
    h = 1 / math.sqrt(2)
    fv = _trivial_f(N, {
        (s, s, s, s, 0, 0): h, (s, s, s, s, 0, p): h,
        (s, s, s, s, p, 0): h, (s, s, s, s, p, p): -h,
        (s, p, s, p, s, s): -1,
        (p, s, p, s, s, s): -1,
    })
    rv = {(0, 0, 0): 1, (0, s, s): 1, (s, 0, s): 1, (0, p, p): 1, (p, 0, p): 1,
          (s, s, 0): cmath.exp(-1j * math.pi / 8),
          (s, s, p): cmath.exp(3j * math.pi / 8),
          (s, p, s): -1j, (p, s, s): -1j,
          (p, p, 0): -1}
    return _build("ising", ["1", "sigma", "psi"], [0, 1, 2], triples, fv, rv)


def cyclic(d: int) -> AnyonModel:
    if d % 2 == 0:
        raise ValueError("only odd d gives a modular pointed model with trivial F")
    triples = [(a, b, (a + b) % d) for a in range(d) for b in range(d)]
    N = _fusion_from_triples(d, triples)
    rv = {(a, b, (a + b) % d): cmath.exp(2j * math.pi * a * b / d)
          for a in range(d) for b in range(d)}
    return _build(f"z{d}", [str(a) for a in range(d)], [(-a) % d for a in range(d)],
                  triples, _trivial_f(N), rv)


def semion() -> AnyonModel:
    triples = [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]
    N = _fusion_from_triples(2, triples)
    fv = _trivial_f(N, {(1, 1, 1, 1, 0, 0): -1})
    rv = {(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1, (1, 1, 0): 1j}
    return _build("semion", ["1", "s"], [0, 1], triples, fv, rv)


def symmetric_z2() -> AnyonModel:
    # Rep(Z2): braiding is the trivial swap, so the model is not modular.
    triples = [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]
    N = _fusion_from_triples(2, triples)
    rv = {t: 1 for t in triples}
    return _build("symmetric-z2", ["1", "g"], [0, 1], triples, _trivial_f(N), rv)


BUILTINS = {
    "fibonacci": fibonacci,
    "ising": ising,
    "z3": lambda: cyclic(3),
    "z5": lambda: cyclic(5),
    "semion": semion,
    "symmetric-z2": symmetric_z2,
}

MODULAR_BUILTINS = ("fibonacci", "ising", "z3", "z5", "semion")

_loaded: dict[str, AnyonModel] = {}


# ---------------------------------------------------------------------------
# loading


def _num(x) -> float:
    try:
        return float(x)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"not a number: {x!r}") from exc


def parse_model_text(text: str) -> AnyonModel:
    """Parse the JSON model-file schema (see README)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc)) from exc
    if not isinstance(doc, dict):
        raise ParseError("model file must hold an object")
    for key in ("name", "labels", "dual", "fusion", "F", "R"):
        if key not in doc:
            raise ParseError(f"missing field {key!r}")
    names = [str(s) for s in doc["labels"]]
    if len(set(names)) != len(names) or not names:
        raise ParseError("labels must be a nonempty list of distinct names")
    pos = {s: i for i, s in enumerate(names)}

    def idx(s):
        if str(s) not in pos:
            raise ParseError(f"unknown label {s!r}")
        return pos[str(s)]

    try:
        duals = [idx(doc["dual"][s]) for s in names]
        triples = [tuple(idx(v) for v in t) for t in doc["fusion"]]
        fvals = {}
        for row in doc["F"]:
            if len(row) != 8:
                raise ParseError(f"F row needs 8 entries: {row}")
            fvals[tuple(idx(v) for v in row[:6])] = complex(_num(row[6]), _num(row[7]))
        rvals = {}
        for row in doc["R"]:
            if len(row) != 5:
                raise ParseError(f"R row needs 5 entries: {row}")
            rvals[tuple(idx(v) for v in row[:3])] = complex(_num(row[3]), _num(row[4]))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed model file: {exc}") from exc
    if any(len(t) != 3 for t in triples):
        raise ParseError("fusion entries must be triples")
    dims = None
    if "dims" in doc:
        dd = {idx(k): _num(v) for k, v in doc["dims"]}
        dims = [dd.get(i, float("nan")) for i in range(len(names))]
    twists = None
    if "twists" in doc:
        tt = {idx(r[0]): complex(_num(r[1]), _num(r[2])) for r in doc["twists"]}
        if len(tt) != len(names):
            raise ParseError("twists must list every label")
        twists = [tt[i] for i in range(len(names))]
    return _build(str(doc["name"]), names, duals, triples, fvals, rvals, dims, twists)


def model_to_text(model: AnyonModel) -> str:
    """Serialize a model in the model-file schema (round-trips through parse_model_text)."""
    nm = model.names
    k = model.rank
    fus = [[nm[a], nm[b], nm[c]] for a, b, c in np.argwhere(model.fusion > 0)]
    F = [[*(nm[i] for i in idx), repr(float(model.fsym[tuple(idx)].real)), repr(float(model.fsym[tuple(idx)].imag))]
         for idx in np.argwhere(_admissible_f(model.fusion))]
    R = [[nm[a], nm[b], nm[c], repr(float(model.rsym[a, b, c].real)), repr(float(model.rsym[a, b, c].imag))]
         for a, b, c in np.argwhere(model.fusion > 0)]
    doc = {"name": model.name, "labels": nm,
           "dual": {nm[a]: nm[model.dual(a)] for a in range(k)},
           "fusion": fus, "F": F, "R": R}
    return json.dumps(doc, indent=1)


def load_model(source: str) -> AnyonModel:
    """Built-in name, or the text of a model file."""
    key = source.strip().lower()
    if key in BUILTINS:
        if key not in _loaded:
            _loaded[key] = BUILTINS[key]()
        return _loaded[key]
    if source.lstrip().startswith("{"):
        return parse_model_text(source)
    raise UnknownModel(f"unknown model {source!r}; built-ins: {', '.join(BUILTINS)}")


# ---------------------------------------------------------------------------
# derived data and validation


def quantum_data(model: AnyonModel, tol: float = 1e-9):
    """(dims, global dimension, twists); raises if a twist leaves the unit circle."""
    bad = np.abs(np.abs(model.twists) - 1)
    if np.max(bad) > tol:
        raise NonUnitaryTwist(f"twist moduli off by {np.max(bad):.3g}")
    return model.dims.copy(), model.global_dim, model.twists.copy()


def s_matrix(model: AnyonModel) -> np.ndarray:
    """Modular S from twists and dimensions (independent of any diagram evaluation)."""
    if "smat" in model._cache:
        return model._cache["smat"]
    k, N, d, th = model.rank, model.fusion, model.dims, model.twists
    S = np.zeros((k, k), dtype=complex)
    for a in range(k):
        abar = model.dual(a)
        for b in range(k):
            S[a, b] = sum(N[abar, b, c] * th[c] / (th[a] * th[b]) * d[c] for c in range(k))
    S /= math.sqrt(model.global_dim)
    model._cache["smat"] = S
    return S


def pentagon_residual(model: AnyonModel) -> float:
    F = model.fsym
    lhs = np.einsum("fcdegl,ablefk->abcdefgkl", F, F)
    rhs = np.einsum("abcgfh,ahdegk,bcdkhl->abcdefgkl", F, F, F)
    return float(np.max(np.abs(lhs - rhs)))


def hexagon_residual(model: AnyonModel) -> float:
    F, R = model.fsym, model.rsym
    Rinv = np.zeros_like(R)
    nz = R != 0
    Rinv[nz] = 1 / R[nz]
    lhs = np.einsum("cae,acbdeg,cbg->abcdeg", R, F, R)
    rhs = np.einsum("cabdef,cfd,abcdfg->abcdeg", F, R, F)
    lhs2 = np.einsum("ace,acbdeg,bcg->abcdeg", Rinv, F, Rinv)
    rhs2 = np.einsum("cabdef,fcd,abcdfg->abcdeg", F, Rinv, F)
    return float(max(np.max(np.abs(lhs - rhs)), np.max(np.abs(lhs2 - rhs2))))


def f_unitarity_residual(model: AnyonModel) -> float:
    k = model.rank
    worst = 0.0
    for a in range(k):
        for b in range(k):
            for c in range(k):
                for d in range(k):
                    M = model.fsym[a, b, c, d]
                    rows = np.nonzero(np.any(M != 0, axis=1))[0]
                    cols = np.nonzero(np.any(M != 0, axis=0))[0]
                    if len(rows) == 0:
                        continue
                    if len(rows) != len(cols):
                        return float("inf")
                    sub = M[np.ix_(rows, cols)]
                    worst = max(worst, float(np.max(np.abs(sub @ sub.conj().T - np.eye(len(rows))))))
    return worst


def fusion_residuals(model: AnyonModel) -> dict[str, float]:
    N, d = model.fusion, model.dims
    k = model.rank
    assoc = np.einsum("abe,ecd->abcd", N, N) - np.einsum("bcf,afd->abcd", N, N)
    dimres = np.einsum("abc,c->ab", N, d) - np.outer(d, d)
    unit = np.abs(N[0] - np.eye(k)).max() + np.abs(N[:, 0] - np.eye(k)).max()
    duals = np.array([model.dual(a) for a in range(k)])
    conj = np.abs(N - N.transpose(1, 0, 2)[duals][:, duals][:, :, duals]).max()
    return {"associativity": float(np.abs(assoc).max()), "dimension": float(np.abs(dimres).max()),
            "unit": float(unit), "duality": float(conj), "multiplicity": float(max(0, N.max() - 1))}


@dataclass
class ValidationReport:
    model: str
    pentagon: float
    hexagon: float
    unitarity: float
    fusion: float
    twist: float
    s_unitarity: float
    modular: bool
    tol: float

    @property
    def ok(self) -> bool:
        return max(self.pentagon, self.hexagon, self.unitarity, self.fusion, self.twist) < self.tol

    def lines(self) -> list[str]:
        return [
            f"model={self.model}",
            f"pentagon_residual={self.pentagon:.3e}",
            f"hexagon_residual={self.hexagon:.3e}",
            f"f_unitarity_residual={self.unitarity:.3e}",
            f"fusion_residual={self.fusion:.3e}",
            f"twist_modulus_residual={self.twist:.3e}",
            f"s_unitarity_residual={self.s_unitarity:.3e}",
            f"modular={'true' if self.modular else 'false'}",
            f"valid={'true' if self.ok else 'false'}",
        ]


def validate_model(model: AnyonModel, tol: float = 1e-9) -> ValidationReport:
    S = s_matrix(model)
    s_res = float(np.max(np.abs(S @ S.conj().T - np.eye(model.rank))))
    # N(a, b, c) = N(b̄, ā, c̄) is bundled into the fusion residual
    fres = max(fusion_residuals(model).values())
    return ValidationReport(
        model=model.name,
        pentagon=pentagon_residual(model),
        hexagon=hexagon_residual(model),
        unitarity=f_unitarity_residual(model),
        fusion=fres,
        twist=float(np.max(np.abs(np.abs(model.twists) - 1))),
        s_unitarity=s_res,
        modular=s_res < tol,
        tol=tol,
    )


def perturbed(model: AnyonModel, index: tuple, delta: complex) -> AnyonModel:
    """Copy of the model with one F entry shifted; used to probe the validators."""
    F = model.fsym.copy()
    F[index] += delta
    return AnyonModel(model.name + "-perturbed", model.labels, model.fusion, F, model.rsym,
                      model.dims, model.twists, model.global_dim)
