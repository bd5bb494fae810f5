"""Spatial diagrams: 3D scenes, their planar projections, and sweep evaluation.

A Scene holds boxes (coupons carrying a payload) and labelled strands given as
3D polylines with rational coordinates.  Coordinates are (x, height, depth).
compile_scene projects along an oblique direction in which every coupon of
the lattice scenes faces the viewer, records crossings with exact rational
arithmetic, and turns the picture into a program of local moves read from the
top of the page down.  evaluate_diagram runs that program on fusion trees.
"""
from __future__ import annotations

import numpy as np
from dataclasses import dataclass, field
from fractions import Fraction as Q

from . import homspace as hs
from .anyons import AnyonModel


class NonGenericScene(ValueError):
    pass


class OpenDiagram(ValueError):
    pass


class SizeMismatch(ValueError):
    pass


# One global choice: which exchange a crossing stands for when the strand
# entering from the upper left passes over.  Fixed once by requiring the
# (2,2) lattice pairing to reproduce the twist-formula S-matrix rather than
# its complex conjugate (see tests/test_tangles.py::test_mirror_anchor).
LEFT_OVER_SIGN = -1

# projection direction (a, b, 1): screen = (x - a*depth, height - b*depth)
VIEW = (Q(2, 5), Q(1, 4))
SWEEPS = (Q(1, 23), Q(-1, 19))


def _q(p) -> tuple:
    return tuple(Q(v) for v in p)


@dataclass
class Box:
    name: str
    anchor: tuple  # 3D point
    kind: str  # "vec": legs hang below; "covec": legs arrive from above
    legs: list  # strand names, left to right as seen by the viewer


@dataclass
class Strand:
    name: str
    points: list  # 3D polyline, flow runs from first to last point
    color: str = "blue"
    closed: bool = False


@dataclass
class Scene:
    boxes: list = field(default_factory=list)
    strands: list = field(default_factory=list)

    def strand(self, name) -> Strand:
        for s in self.strands:
            if s.name == name:
                return s
        raise KeyError(name)

    def restricted(self, color: str) -> "Scene":
        keep = {s.name for s in self.strands if s.color == color}
        return Scene([b for b in self.boxes if set(b.legs) <= keep],
                     [s for s in self.strands if s.name in keep])


@dataclass
class Crossing:
    over: str
    under: str
    over_seg: int
    under_seg: int
    point: tuple  # screen point


@dataclass
class Diagram:
    """Projected picture plus the compiled program of local moves."""
    boxes: dict  # name -> (screen anchor, kind, legs)
    strands: dict  # name -> (screen points, color, closed)
    crossings: list
    program: list

    def export(self) -> str:
        lines = []
        for name, (pt, kind, legs) in self.boxes.items():
            lines.append(f"vertex {name} {kind} at {_fmt(pt)} legs {' '.join(legs)}")
        for name, (pts, color, closed) in self.strands.items():
            tag = "closed" if closed else "open"
            lines.append(f"strand {name} {color} {tag} " + " ".join(_fmt(p) for p in pts))
        for c in self.crossings:
            lines.append(f"crossing over={c.over}[{c.over_seg}] under={c.under}[{c.under_seg}] at {_fmt(c.point)}")
        return "\n".join(lines) + "\n"


def _fmt(p) -> str:
    return "(" + ",".join(str(v) for v in p) + ")"


# ---------------------------------------------------------------------------
# projection and crossing detection


def project(p, view=VIEW) -> tuple:
    a, b = view
    x, y, z = p
    return (x - a * z, y - b * z)


def depth(p, view=VIEW):
    a, b = view
    x, y, z = p
    return a * x + b * y + z


def _segments(points, closed):
    n = len(points)
    m = n if closed else n - 1
    return [(k, points[k], points[(k + 1) % n]) for k in range(m)]


def _intersect(p1, p2, p3, p4):
    """Exact intersection parameters (t, u) of segments p1p2 and p3p4, or None."""
    d1 = (p2[0] - p1[0], p2[1] - p1[1])
    d2 = (p4[0] - p3[0], p4[1] - p3[1])
    den = d1[0] * d2[1] - d1[1] * d2[0]
    r = (p3[0] - p1[0], p3[1] - p1[1])
    if den == 0:
        # parallel; collinear overlap is degenerate
        if r[0] * d1[1] - r[1] * d1[0] == 0:
            lo1, hi1 = sorted([0, 1])
            proj = [((q[0] - p1[0]) * d1[0] + (q[1] - p1[1]) * d1[1]) for q in (p3, p4)]
            L = d1[0] ** 2 + d1[1] ** 2
            if max(proj) >= 0 and min(proj) <= L:
                return "overlap"
        return None
    t = (r[0] * d2[1] - r[1] * d2[0]) / den
    u = (r[0] * d1[1] - r[1] * d1[0]) / den
    if 0 <= t <= 1 and 0 <= u <= 1:
        return (t, u)
    return None


def _lerp(p, q, t):
    return tuple(a + t * (b - a) for a, b in zip(p, q))


def _crossings(scene: Scene, view):
    segs = []
    for s in scene.strands:
        pts3 = [_q(p) for p in s.points]
        for k, p, q in _segments(pts3, s.closed):
            segs.append((s.name, k, p, q, project(p, view), project(q, view)))
    out = []
    for i in range(len(segs)):
        n1, k1, P1, P2, p1, p2 = segs[i]
        for j in range(i + 1, len(segs)):
            n2, k2, P3, P4, p3, p4 = segs[j]
            shared = {p1, p2} & {p3, p4}
            hit = _intersect(p1, p2, p3, p4)
            if hit is None:
                continue
            if hit == "overlap":
                raise NonGenericScene(f"segments {n1}[{k1}] and {n2}[{k2}] overlap in projection")
            t, u = hit
            pt = _lerp(p1, p2, t)
            if pt in shared:
                # meeting at a common endpoint: a polyline corner or a shared box anchor
                if (t in (0, 1)) and (u in (0, 1)):
                    continue
            if t in (0, 1) or u in (0, 1):
                raise NonGenericScene(f"a corner of {n1} or {n2} lies on the other strand at {pt}")
            d1 = depth(_lerp(P1, P2, t), view)
            d2 = depth(_lerp(P3, P4, u), view)
            if d1 == d2:
                raise NonGenericScene(f"strands {n1} and {n2} meet in space at {pt}")
            if d1 > d2:
                out.append(Crossing(n1, n2, k1, k2, pt))
            else:
                out.append(Crossing(n2, n1, k2, k1, pt))
    return out


# ---------------------------------------------------------------------------
# compiling the projected picture into a top-down program


def _level(p, tilt):
    return p[1] + tilt * p[0]


def _x_at(seg, h0, tilt):
    p, q = seg
    hp, hq = _level(p, tilt), _level(q, tilt)
    t = (h0 - hp) / (hq - hp)
    return p[0] + t * (q[0] - p[0])


def _spread(p, q, tilt):
    """Horizontal drift per unit drop along p -> q (q below p)."""
    return (q[0] - p[0]) / (_level(p, tilt) - _level(q, tilt))


def compile_scene(scene: Scene, view=VIEW, tilt=None) -> Diagram:
    tilt = SWEEPS[0] if tilt is None else Q(tilt)
    pts2 = {s.name: [project(_q(p), view) for p in s.points] for s in scene.strands}
    info = {s.name: s for s in scene.strands}
    crossings = _crossings(scene, view)
    boxes2 = {b.name: (project(_q(b.anchor), view), b.kind, list(b.legs)) for b in scene.boxes}

    # which box owns each strand end
    ends = {}
    for b in scene.boxes:
        anchor = project(_q(b.anchor), view)
        for leg in b.legs:
            pts = pts2[leg]
            if pts[0] == anchor:
                ends[(leg, "start")] = b.name
            elif pts[-1] == anchor:
                ends[(leg, "end")] = b.name
            else:
                raise NonGenericScene(f"strand {leg} does not touch box {b.name}")

    def seg_pts(name, k):
        pts = pts2[name]
        return pts[k], pts[(k + 1) % len(pts)]

    events = []  # (level, order, payload)
    for name, (anchor, kind, legs) in boxes2.items():
        events.append((_level(anchor, tilt), "box", name))
    for s in scene.strands:
        pts = pts2[s.name]
        n = len(pts)
        idx = range(n) if s.closed else range(1, n - 1)
        for k in idx:
            prev, cur, nxt = pts[(k - 1) % n], pts[k], pts[(k + 1) % n]
            hp, hc, hn = _level(prev, tilt), _level(cur, tilt), _level(nxt, tilt)
            if hp == hc or hn == hc:
                raise NonGenericScene(f"flat segment at corner {k} of {s.name}")
            if hp < hc and hn < hc:
                kind = "max"
            elif hp > hc and hn > hc:
                kind = "min"
            else:
                kind = "pass"
            events.append((hc, kind, (s.name, k)))
    for c in crossings:
        events.append((_level(c.point, tilt), "cross", c))
    events.sort(key=lambda e: -e[0])
    for e1, e2 in zip(events, events[1:]):
        if e1[0] == e2[0]:
            raise NonGenericScene(f"two events at sweep level {e1[0]}: {e1[1]} and {e2[1]}")

    active: list = []  # (strand, segment index)
    program: list = []

    def nseg(name):
        s = info[name]
        return len(s.points) if s.closed else len(s.points) - 1

    def pos_of(x0, h0):
        return sum(1 for key in active if _x_at(seg_pts(*key), h0, tilt) < x0)

    for h0, kind, payload in events:
        if kind == "box":
            anchor, bkind, legs = boxes2[payload]
            keys = []
            for leg in legs:
                if ends.get((leg, "start")) == payload:
                    keys.append((leg, 0))
                else:
                    keys.append((leg, nseg(leg) - 1))
            # every leg must leave on the expected side
            for key in keys:
                p, q = seg_pts(*key)
                other = q if p == anchor else p
                below = _level(other, tilt) < h0
                if below != (bkind == "vec"):
                    raise NonGenericScene(f"leg {key[0]} of {payload} leaves on the wrong side")
            if bkind == "vec":
                order = sorted(keys, key=lambda k: _spread(anchor, _other(seg_pts(*k), anchor), tilt))
                if order != keys:
                    raise NonGenericScene(f"legs of {payload} are not in left-to-right order")
                pos = pos_of(anchor[0], h0)
                active[pos:pos] = keys
                downs = [_flows_down(seg_pts(*k), k, anchor, ends, payload, tilt) for k in keys]
                program.append(("vec", payload, pos, tuple(legs), tuple(downs)))
            else:
                try:
                    pos = active.index(keys[0])
                except ValueError:
                    raise NonGenericScene(f"box {payload} legs are not on the sweep line") from None
                if active[pos:pos + len(keys)] != keys:
                    raise NonGenericScene(f"legs of {payload} are not adjacent when it is reached")
                downs = [_flows_down(seg_pts(*k), k, anchor, ends, payload, tilt) for k in keys]
                del active[pos:pos + len(keys)]
                program.append(("covec", payload, pos, tuple(legs), tuple(downs)))
        elif kind in ("max", "min", "pass"):
            name, k = payload
            n = nseg(name)
            before, after = (name, (k - 1) % n), (name, k)
            pts = pts2[name]
            cur = pts[k]
            if kind == "pass":
                # the segment above leaves the sweep line, the one below enters
                up = before if _level(pts[(k - 1) % len(pts)], tilt) > h0 else after
                down = after if up == before else before
                active[active.index(up)] = down
                continue
            lo_before = _spread(cur, pts[(k - 1) % len(pts)], tilt) if kind == "max" else None
            if kind == "max":
                lo_after = _spread(cur, pts[(k + 1) % len(pts)], tilt)
                left_is_before = lo_before < lo_after
                pair = [before, after] if left_is_before else [after, before]
                pos = pos_of(cur[0], h0)
                active[pos:pos] = pair
                # flow enters the corner along `before`; left leg is before -> runs left to right
                program.append(("cup", name, pos, left_is_before))
            else:
                i1, i2 = active.index(before), active.index(after)
                if abs(i1 - i2) != 1:
                    raise NonGenericScene(f"minimum of {name} closes non-adjacent slots")
                pos = min(i1, i2)
                left_is_before = i1 < i2
                del active[pos:pos + 2]
                program.append(("cap", name, pos, left_is_before))
        else:
            c = payload
            ko, ku = (c.over, c.over_seg), (c.under, c.under_seg)
            io, iu = active.index(ko), active.index(ku)
            if abs(io - iu) != 1:
                raise NonGenericScene("crossing strands are not adjacent on the sweep line")
            pos = min(io, iu)
            active[io], active[iu] = active[iu], active[io]
            program.append(("cross", pos, io < iu, c.over, c.under))
    if active:
        raise OpenDiagram(f"strands left open: {active}")
    strands2 = {s.name: (pts2[s.name], s.color, s.closed) for s in scene.strands}
    return Diagram(boxes2, strands2, crossings, program)


def _other(seg, anchor):
    p, q = seg
    return q if p == anchor else p


def _flows_down(seg, key, anchor, ends, box, tilt):
    """Does the strand run downward on this leg segment?"""
    name, k = key
    p, q = seg
    # flow runs p -> q within a segment
    return _level(q, tilt) < _level(p, tilt)


# ---------------------------------------------------------------------------
# evaluation


def crossing_sign(left_over: bool) -> int:
    return LEFT_OVER_SIGN if left_over else -LEFT_OVER_SIGN


def evaluate_diagram(model: AnyonModel, diagram: Diagram, labels: dict | None = None,
                     payloads: dict | None = None) -> complex:
    """Scalar value of a closed diagram.

    labels: strand name -> label index (default: unit).
    payloads: box name -> coefficient dict over chains of the box's seen word;
    for "covec" boxes these are the weights of the daggered basis trees.
    """
    labels = labels or {}
    payloads = payloads or {}
    word: tuple = ()
    state = {(): 1.0 + 0j}
    for op in diagram.program:
        tag = op[0]
        if tag == "vec" or tag == "covec":
            _, name, pos, legs, downs = op
            uword = tuple(hs.seen(model, labels.get(l, 0), dn) for l, dn in zip(legs, downs))
            coeffs = payloads.get(name)
            if coeffs is None:
                if any(uword):
                    raise ValueError(f"box {name} needs a payload")
                coeffs = {hs.fusion_chains(model, uword)[0]: 1.0}
            if tag == "vec":
                word, state = hs.insert_vector(model, word, state, pos, uword, coeffs)
            else:
                word, state = hs.apply_covector(model, word, state, pos, uword, coeffs)
        elif tag == "cup":
            _, name, pos, ltr = op
            pw, pv = hs.cup(model, labels.get(name, 0), ltr)
            word, state = hs.insert_vector(model, word, state, pos, pw, pv)
        elif tag == "cap":
            _, name, pos, ltr = op
            pw, pc = hs.cap(model, labels.get(name, 0), ltr)
            word, state = hs.apply_covector(model, word, state, pos, pw, pc)
        else:
            _, pos, left_over, _, _ = op
            word, state = hs.braid_state(model, word, state, pos, crossing_sign(left_over))
        if not state:
            return 0j
    if word:
        raise OpenDiagram(f"diagram ends with open slots {word}")
    return complex(state.get((), 0))


def evaluate_many(model: AnyonModel, diagram: Diagram, labels: dict, payloads: dict,
                  count: int) -> np.ndarray:
    """Values of `count` labellings of one diagram, swept together.

    labels: strand name -> integer array of length count (absent: unit).
    payloads: box name -> list of chains, one per labelling; for "covec"
    boxes the chain names a daggered basis tree.  Boxes without an entry
    must see only unit labels.

    Labellings that currently read the same word are advanced together,
    with their amplitudes stacked along a trailing axis.
    """
    everyone = np.arange(count)
    # word -> (member ids, {chain: amplitudes over those members})
    groups = {(): (everyone, {(): np.ones(count, dtype=complex)})}

    def lab(name, ids):
        arr = labels.get(name)
        return np.zeros(len(ids), dtype=int) if arr is None else np.asarray(arr)[ids]

    def regroup(pieces):
        out: dict = {}
        for word, ids, state in pieces:
            if not state:
                continue
            if word not in out:
                out[word] = [ids, state]
                continue
            old_ids, old = out[word]
            n_old = len(old_ids)
            merged = {}
            for ch in old.keys() | state.keys():
                arr = np.zeros(n_old + len(ids), dtype=complex)
                if ch in old:
                    arr[:n_old] = old[ch]
                if ch in state:
                    arr[n_old:] = state[ch]
                merged[ch] = arr
            out[word] = [np.concatenate([old_ids, ids]), merged]
        return {w: (v[0], v[1]) for w, v in out.items()}

    def split(ids, state, keys):
        """Partition a group by a per-member key; yields (key, positions)."""
        buckets: dict = {}
        for pos, k in enumerate(keys):
            buckets.setdefault(k, []).append(pos)
        for k, pos in buckets.items():
            pos = np.asarray(pos)
            yield k, ids[pos], {ch: arr[pos] for ch, arr in state.items()}

    for op in diagram.program:
        tag = op[0]
        pieces = []
        if tag in ("vec", "covec"):
            _, name, pos, legs, downs = op
            step = hs.insert_vector if tag == "vec" else hs.apply_covector
            chosen = payloads.get(name)
            for word, (ids, state) in groups.items():
                leg_labels = [lab(l, ids) for l in legs]
                keys = [(tuple(hs.seen(model, int(ll[t]), dn) for ll, dn in zip(leg_labels, downs)),
                         chosen[i] if chosen is not None else None)
                        for t, i in enumerate(ids)]
                for (uword, chain), sub_ids, sub in split(ids, state, keys):
                    if chain is None:
                        if any(uword):
                            raise ValueError(f"box {name} needs a payload")
                        chain = hs.fusion_chains(model, uword)[0]
                    nw, out = step(model, word, sub, pos, uword, {chain: 1.0})
                    pieces.append((nw, sub_ids, out))
        elif tag in ("cup", "cap"):
            _, name, pos, ltr = op
            arc = hs.cup if tag == "cup" else hs.cap
            step = hs.insert_vector if tag == "cup" else hs.apply_covector
            for word, (ids, state) in groups.items():
                for x, sub_ids, sub in split(ids, state, lab(name, ids).tolist()):
                    pw, pv = arc(model, x, ltr)
                    nw, out = step(model, word, sub, pos, pw, pv)
                    pieces.append((nw, sub_ids, out))
        else:
            _, pos, left_over, _, _ = op
            sign = crossing_sign(left_over)
            for word, (ids, state) in groups.items():
                nw, out = hs.braid_state(model, word, state, pos, sign)
                pieces.append((nw, ids, out))
        groups = regroup(pieces)
    result = np.zeros(count, dtype=complex)
    for word, (ids, state) in groups.items():
        if word:
            raise OpenDiagram(f"diagram ends with open slots {word}")
        if () in state:
            result[ids] = state[()]
    return result


# ---------------------------------------------------------------------------
# simple closed scenes used as anchors


def unknot_scene() -> Scene:
    pts = [(0, 0, 0), (2, Q(1, 3), 0), (Q(9, 4), 2, 0), (Q(1, 5), Q(7, 4), 0)]
    return Scene([], [Strand("loop", pts, closed=True)])


def hopf_scene() -> Scene:
    """Two loops linked once; 'a' lies flat, 'b' pierces it.

    Oriented so that the normalized value with labels (a, b) reproduces the
    model's S-matrix entry S[a, b]."""
    a = [(0, 0, 0), (2, Q(1, 7), 0), (Q(15, 7), 2, 0), (Q(-1, 9), Q(13, 7), 0)]
    b = [(Q(17, 19), Q(29, 10), -1), (Q(19, 17), 3, Q(11, 10)), (Q(10, 9), Q(9, 8), 1), (1, 1, -1)]
    return Scene([], [Strand("a", a, closed=True), Strand("b", b, color="red", closed=True)])


def ring_scene() -> Scene:
    """A flat loop 'a' threaded by two parallel, mutually unlinked loops 'b' and 'c'."""
    a = [(0, 0, 0), (2, Q(1, 7), 0), (Q(15, 7), 2, 0), (Q(-1, 9), Q(13, 7), 0)]
    def threaded(x, lift):
        return [(x + Q(-1, 11), Q(29, 10) + lift, -1), (x + Q(2, 17), 3 + lift, Q(11, 10)),
                (x + Q(1, 9), Q(9, 8) + lift, 1), (x, 1 + lift, -1)]
    return Scene([], [Strand("a", a, closed=True),
                      Strand("b", threaded(Q(2, 3), Q(0)), color="red", closed=True),
                      Strand("c", threaded(Q(4, 3), Q(1, 13)), color="red", closed=True)])


def link_values(model: AnyonModel, scene: Scene) -> np.ndarray:
    """Table of a closed link's value over all labellings of its strands."""
    diagram = compile_scene(scene)
    names = [s.name for s in scene.strands]
    out = np.zeros((model.rank,) * len(names), dtype=complex)
    for idx in np.ndindex(out.shape):
        out[idx] = evaluate_diagram(model, diagram, dict(zip(names, idx)))
    return out


# ---------------------------------------------------------------------------
# the lattice pairing scene


def _blue_layer(n: int, m: int, shift, color: str, prefix: str, fan, drop):
    """One lattice: m row boxes with legs hanging down, n column boxes below them."""
    sx, sz = shift
    boxes, strands = [], []
    a_gap = Q(1, 2)  # coupon height above the row
    leg = Q(3, 10)
    b, = (VIEW[1],)
    # column anchors sit low enough that every leg reaches them from above
    col_y = -leg - Q(1, 5) - b * Q(m - 1, 2) - drop
    for j in range(m):
        anchor = (Q(n + 1, 2) + fan + sx, a_gap, Q(-j) + sz)
        legs = []
        for i in range(1, n + 1):
            nm = f"{prefix}{i},{j}"
            pts = [anchor, (Q(i) + sx, Q(0), Q(-j) + sz), (Q(i) + sx, -leg, Q(-j) + sz),
                   (Q(i) + sx, col_y, Q(-(m - 1), 2) + sz + fan)]
            strands.append(Strand(nm, pts, color))
            legs.append(nm)
        boxes.append(Box(f"{prefix}row{j}", anchor, "vec", legs))
    for i in range(1, n + 1):
        anchor = (Q(i) + sx, col_y, Q(-(m - 1), 2) + sz + fan)
        boxes.append(Box(f"{prefix}col{i}", anchor, "covec", [f"{prefix}{i},{j}" for j in range(m)]))
    return boxes, strands


def ll_scene(n: int, m: int, with_red: bool = True) -> Scene:
    """Lattice and dual-lattice networks; the dual copy is shifted by (1/2, 0, 1/2)."""
    if n < 1 or m < 1:
        raise SizeMismatch("scene needs n, m >= 1")
    fan = Q(1, 13)
    bb, bs = _blue_layer(n, m, (Q(0), Q(0)), "blue", "b", fan, Q(0))
    if not with_red:
        return Scene(bb, bs)
    rb, rs = _blue_layer(n, m, (Q(1, 2), Q(1, 2)), "red", "r", fan, Q(0))
    return Scene(bb + rb, bs + rs)


_diagram_cache: dict = {}


def ll_diagram(n: int, m: int, with_red: bool = True, tilt=None) -> Diagram:
    key = (n, m, with_red, tilt)
    if key not in _diagram_cache:
        _diagram_cache[key] = compile_scene(ll_scene(n, m, with_red), tilt=tilt)
    return _diagram_cache[key]


def count_crossings(diagram: Diagram) -> dict:
    """Crossings split by colour pairing."""
    colors = {k: v[1] for k, v in diagram.strands.items()}
    mono = sum(1 for c in diagram.crossings if colors[c.over] == colors[c.under])
    return {"total": len(diagram.crossings), "monochromatic": mono,
            "inter": len(diagram.crossings) - mono}
