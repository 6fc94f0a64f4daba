"""Bar-Natan's dotted cobordism category, specialised to the X^2 = 0 theory.

Objects are crossingless tangles (``FlatTangle``).  A morphism between two
flat tangles is stored in canonical form: neck-cutting splits every surface
into disks, one per boundary loop, so a basis element is just the set of
dotted boundary loops.  Boundary loops are

* open loops of ``source U target`` through boundary points, named by their
  smallest point (a non-negative int);
* closed circles of the source, named ``-(2*i + 1)`` for circle ``i``;
* closed circles of the target, named ``-(2*i + 2)``.

Relations: sphere = 0, dotted sphere = 1, two dots = 0, handle = 2 * dot,
and neck-cutting ``I = (dot top) + (dot bottom)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import lru_cache


class CobordismError(ValueError):
    pass


def src_circle(i):
    return -(2 * i + 1)


def tgt_circle(i):
    return -(2 * i + 2)


@dataclass(frozen=True)
class FlatTangle:
    """Noncrossing matching plus free circles, with a doubled (h2, q2) shift."""

    matching: tuple = ()
    circles: int = 0
    h2: int = 0
    q2: int = 0

    @property
    def points(self):
        return tuple(sorted(p for pair in self.matching for p in pair))

    @property
    def arcs(self):
        return len(self.matching)

    def shifted(self, dh2, dq2):
        return replace(self, h2=self.h2 + dh2, q2=self.q2 + dq2)


def matching(pairs):
    """Canonical matching tuple from an iterable of pairs."""
    return tuple(sorted(tuple(sorted(p)) for p in pairs))


@lru_cache(maxsize=200_000)
def loops(m1, m2):
    """Loops of the union of two matchings on the same points.

    Returns ``(loop_of, ids)``: ``loop_of[p]`` is the id (smallest point) of
    the loop through ``p``; ``ids`` lists the loop ids in increasing order.
    """
    a = {}
    for p, q in m1:
        a[p], a[q] = q, p
    b = {}
    for p, q in m2:
        b[p], b[q] = q, p
    if a.keys() != b.keys():
        raise CobordismError("matchings live on different points")
    loop_of = {}
    ids = []
    for start in sorted(a):
        if start in loop_of:
            continue
        ids.append(start)
        p = start
        while True:
            loop_of[p] = start
            q = a[p]
            loop_of[q] = start
            p = b[q]
            if p == start:
                break
    return loop_of, tuple(ids)


def term_degree(source, target, dots):
    """Quantum degree of one canonical basis cobordism."""
    _, ids = loops(source.matching, target.matching)
    disks = len(ids) + source.circles + target.circles
    return disks - source.arcs - 2 * len(dots)


# ------------------------------------------------------------ evaluation

def _evaluate(components):
    """Reduce glued disks to canonical form.

    ``components`` is a list of ``(items, chi, dots)`` for each connected
    surface: its boundary loop names, Euler characteristic and dot count.
    Returns ``{frozenset(dotted items): coefficient}``.
    """
    result = {frozenset(): 1}
    for items, chi, dots in components:
        b = len(items)
        twice_genus = 2 - chi - b
        if twice_genus < 0 or twice_genus % 2:
            raise CobordismError(f"impossible surface: chi={chi}, boundary={b}")
        genus = twice_genus // 2
        eff = dots + genus
        if eff >= 2:
            return {}
        coef = 2 ** genus
        if b == 0:
            if eff == 0:
                return {}
            options = [(frozenset(), coef)]
        elif eff == 1:
            options = [(frozenset(items), coef)]
        else:
            full = frozenset(items)
            options = [(full - {x}, coef) for x in items]
        if len(options) == 1:
            add, c = options[0]
            if c == 1 and not add:
                continue
            result = {k | add: v * c for k, v in result.items()}
        else:
            new = {}
            for k, v in result.items():
                for add, c in options:
                    key = k | add
                    new[key] = new.get(key, 0) + v * c
            result = new
    return result


class _Surface:
    """Union-find over disks that tracks Euler characteristic and dots."""

    __slots__ = ("parent", "chi", "dots")

    def __init__(self):
        self.parent = []
        self.chi = []
        self.dots = []

    def disk(self, dotted):
        self.parent.append(len(self.parent))
        self.chi.append(1)
        self.dots.append(1 if dotted else 0)
        return len(self.parent) - 1

    def find(self, i):
        parent = self.parent
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def join(self, i, j, chi_loss):
        i, j = self.find(i), self.find(j)
        if i != j:
            self.parent[j] = i
            self.chi[i] += self.chi[j]
            self.dots[i] += self.dots[j]
        self.chi[i] -= chi_loss

    def components(self, boundary):
        """``boundary`` is a list of (item, disk); every root becomes a component."""
        groups = {}
        for item, d in boundary:
            groups.setdefault(self.find(d), []).append(item)
        out = []
        for i in range(len(self.parent)):
            if self.parent[i] == i:
                out.append((groups.get(i, []), self.chi[i], self.dots[i]))
        return out


# ------------------------------------------------------------ composition

@dataclass(frozen=True)
class DottedCobSum:
    """Integer combination of canonical dotted cobordisms ``source -> target``."""

    source: FlatTangle
    target: FlatTangle
    terms: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.source.points != self.target.points:
            raise CobordismError("source and target have different boundaries")
        clean = {frozenset(k): v for k, v in self.terms.items() if v}
        object.__setattr__(self, "terms", clean)

    def __eq__(self, other):
        return (isinstance(other, DottedCobSum) and self.source == other.source
                and self.target == other.target and self.terms == other.terms)

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.terms.items())))

    def __add__(self, other):
        return DottedCobSum(self.source, self.target, add_terms(self.terms, other.terms))

    def __neg__(self):
        return DottedCobSum(self.source, self.target, {k: -v for k, v in self.terms.items()})

    def __rmul__(self, n):
        return DottedCobSum(self.source, self.target, {k: n * v for k, v in self.terms.items()})

    def __matmul__(self, other):
        return compose(self, other)

    @property
    def degrees(self):
        return {term_degree(self.source, self.target, k) for k in self.terms}

    def is_zero(self):
        return not self.terms


def add_terms(t1, t2, sign=1):
    out = dict(t1)
    for k, v in t2.items():
        w = out.get(k, 0) + sign * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def identity(obj):
    return DottedCobSum(obj, obj, {frozenset(): 1}) if not obj.circles else \
        DottedCobSum(obj, obj, _identity_with_circles(obj.circles))


def _identity_with_circles(k):
    # each cylinder over a circle neck-cuts into (dot top) + (dot bottom)
    terms = {frozenset(): 1}
    for i in range(k):
        terms = {key | {d}: v for key, v in terms.items() for d in (src_circle(i), tgt_circle(i))}
    return terms


@lru_cache(maxsize=500_000)
def _compose_term(s_match, s_circ, t_match, t_circ, u_match, u_circ, g_dots, f_dots):
    surf = _Surface()
    g_loop, g_ids = loops(s_match, t_match)
    f_loop, f_ids = loops(t_match, u_match)
    gd = {i: surf.disk(i in g_dots) for i in g_ids}
    g_src = [surf.disk(src_circle(i) in g_dots) for i in range(s_circ)]
    g_tgt = [surf.disk(tgt_circle(i) in g_dots) for i in range(t_circ)]
    fd = {i: surf.disk(i in f_dots) for i in f_ids}
    f_src = [surf.disk(src_circle(i) in f_dots) for i in range(t_circ)]
    f_tgt = [surf.disk(tgt_circle(i) in f_dots) for i in range(u_circ)]
    for p, _q in t_match:
        surf.join(gd[g_loop[p]], fd[f_loop[p]], 1)
    for i in range(t_circ):
        surf.join(g_tgt[i], f_src[i], 0)
    out_loop, out_ids = loops(s_match, u_match)
    boundary = [(i, gd[g_loop[i]]) for i in out_ids]
    boundary += [(src_circle(i), g_src[i]) for i in range(s_circ)]
    boundary += [(tgt_circle(i), f_tgt[i]) for i in range(u_circ)]
    return tuple(_evaluate(surf.components(boundary)).items())


def compose_terms(source, middle, target, g_terms, f_terms):
    """Terms of ``f o g`` for ``g: source -> middle`` and ``f: middle -> target``."""
    out = {}
    sm, sc = source.matching, source.circles
    mm, mc = middle.matching, middle.circles
    tm, tc = target.matching, target.circles
    for gk, gv in g_terms.items():
        for fk, fv in f_terms.items():
            for k, v in _compose_term(sm, sc, mm, mc, tm, tc, gk, fk):
                w = out.get(k, 0) + gv * fv * v
                if w:
                    out[k] = w
                else:
                    del out[k]
    return out


def compose(f, g):
    """Vertical composition ``f o g`` in canonical form."""
    if g.target.matching != f.source.matching or g.target.circles != f.source.circles:
        raise CobordismError("target of g is not the source of f")
    return DottedCobSum(g.source, f.target,
                        compose_terms(g.source, g.target, f.target, g.terms, f.terms))


# ------------------------------------------------------------ planar gluing

def glue_matchings(m1, m2, glue):
    """Glue two flat tangles along identified points.

    ``glue`` maps each glued point to its partner (symmetric).  Returns the
    new matching on the remaining points and the list of closed circles,
    each as a sorted tuple of its points, ordered by smallest point.
    """
    arc = {}
    for p, q in m1:
        arc[p], arc[q] = q, p
    for p, q in m2:
        arc[p], arc[q] = q, p
    seen = set()
    pairs = []
    for p in sorted(arc):
        if p in seen or p in glue:
            continue
        cur = p
        while True:
            seen.add(cur)
            nxt = arc[cur]
            seen.add(nxt)
            if nxt not in glue:
                pairs.append((p, nxt) if p < nxt else (nxt, p))
                break
            cur = glue[nxt]
    circles = []
    for p in sorted(glue):
        if p in seen:
            continue
        pts = []
        cur = p
        while cur not in seen:
            seen.add(cur)
            pts.append(cur)
            nxt = arc[cur]
            seen.add(nxt)
            pts.append(nxt)
            cur = glue[nxt]
        circles.append(tuple(sorted(pts)))
    circles.sort()
    return tuple(sorted(pairs)), circles


class Gluing:
    """Precomputed planar gluing of two boundary point sets."""

    def __init__(self, pairs):
        self.glue = {}
        for p, q in pairs:
            if p == q or p in self.glue or q in self.glue:
                raise CobordismError(f"bad gluing pair {(p, q)}")
            self.glue[p], self.glue[q] = q, p
        self._objects = {}
        self._terms = {}

    def objects(self, m1, m2):
        key = (m1, m2)
        hit = self._objects.get(key)
        if hit is None:
            hit = glue_matchings(m1, m2, self.glue)
            self._objects[key] = hit
        return hit

    def morphism(self, a_src, a_tgt, a_dots, b_src, b_tgt, b_dots):
        """Glue one basis cobordism of each side; source/target are matchings."""
        key = (a_src, a_tgt, a_dots, b_src, b_tgt, b_dots)
        hit = self._terms.get(key)
        if hit is not None:
            return hit
        surf = _Surface()
        a_loop, a_ids = loops(a_src, a_tgt)
        b_loop, b_ids = loops(b_src, b_tgt)
        a_disk = {i: surf.disk(i in a_dots) for i in a_ids}
        b_disk = {i: surf.disk(i in b_dots) for i in b_ids}
        disk = {p: a_disk[i] for p, i in a_loop.items()}
        disk.update((p, b_disk[i]) for p, i in b_loop.items())
        for p, q in self.glue.items():
            if p < q:
                surf.join(disk[p], disk[q], 1)
        new_src, src_circles = self.objects(a_src, b_src)
        new_tgt, tgt_circles = self.objects(a_tgt, b_tgt)
        boundary = []
        if new_src:
            _, ids = loops(new_src, new_tgt)
            boundary = [(i, disk[i]) for i in ids]
        boundary += [(src_circle(i), disk[c[0]]) for i, c in enumerate(src_circles)]
        boundary += [(tgt_circle(i), disk[c[0]]) for i, c in enumerate(tgt_circles)]
        hit = tuple(_evaluate(surf.components(boundary)).items())
        self._terms[key] = hit
        return hit


# ------------------------------------------------------------ complexes

@dataclass(frozen=True)
class TangleComplex:
    """Bigraded complex of flat tangles with dotted-cobordism differentials.

    ``d`` maps ``(i, j)`` object-index pairs to term dicts; every entry goes
    from an object at ``h2`` to one at ``h2 + 2``.  ``parity`` is ``h2 mod 2``
    for all objects.
    """

    points: tuple
    objects: tuple
    d: dict = field(default_factory=dict, compare=False)
    parity: int = 0

    def __len__(self):
        return len(self.objects)

    def entry(self, i, j):
        return DottedCobSum(self.objects[i], self.objects[j], self.d.get((i, j), {}))

    def degrees(self):
        return sorted({o.h2 for o in self.objects})

    def check(self, differential_squared=True):
        """Assert gradings and (optionally) d o d = 0; returns self."""
        objs = self.objects
        for (i, j), terms in self.d.items():
            s, t = objs[i], objs[j]
            if t.h2 != s.h2 + 2:
                raise CobordismError(f"entry {i}->{j} does not raise h2 by 2")
            want = (s.q2 - t.q2) // 2
            for k in terms:
                if term_degree(s, t, k) != want or (s.q2 - t.q2) % 2:
                    raise CobordismError(f"entry {i}->{j} breaks quantum grading")
        if differential_squared:
            out = {}
            for (i, j), t1 in self.d.items():
                out.setdefault(i, []).append((j, t1))
            # collect per (i, k) across all middle objects
            total = {}
            for (i, j), t1 in self.d.items():
                for k, t2 in out.get(j, []):
                    key = (i, k)
                    total[key] = add_terms(total.get(key, {}),
                                           compose_terms(objs[i], objs[j], objs[k], t1, t2))
            bad = [key for key, terms in total.items() if terms]
            if bad:
                raise CobordismError(f"d o d != 0 at {bad[:5]}")
        return self

    def to_json(self):
        objs = [{"matching": [list(p) for p in o.matching], "circles": o.circles,
                 "h2": o.h2, "q2": o.q2} for o in self.objects]
        entries = [{"from": i, "to": j,
                    "terms": [{"dots": sorted(k), "coef": v} for k, v in sorted(
                        terms.items(), key=lambda kv: sorted(kv[0]))]}
                   for (i, j), terms in sorted(self.d.items())]
        return json.dumps({"points": list(self.points), "parity": self.parity,
                           "objects": objs, "differential": entries})


def unit_complex():
    """The complex of the empty tangle: one empty object in degree (0, 0)."""
    return TangleComplex((), (FlatTangle(),), {}, 0)


def crossing_complex(points):
    """Complex of a single crossing with slot points ``(a, b, c, d)``.

    0-smoothing (a-b, c-d) at doubled (-1, -1), 1-smoothing (a-d, b-c) at
    (+1, +1), joined by the saddle.
    """
    a, b, c, d = points
    zero = FlatTangle(matching([(a, b), (c, d)]), 0, -1, -1)
    one = FlatTangle(matching([(a, d), (b, c)]), 0, 1, 1)
    return TangleComplex(tuple(sorted(points)), (zero, one), {(0, 1): {frozenset(): 1}}, 1)


def circle_complex():
    """A lone circle, already delooped: empty objects at q2 = -2 and +2."""
    return TangleComplex((), (FlatTangle((), 0, 0, -2), FlatTangle((), 0, 0, 2)), {}, 0)


def shift(C, dh2, dq2):
    """Shift every object of ``C`` by doubled ``(dh2, dq2)``."""
    return TangleComplex(C.points, tuple(o.shifted(dh2, dq2) for o in C.objects),
                         dict(C.d), (C.parity + dh2) % 2)


def relabel(C, mapping):
    """Rename boundary points of ``C``."""
    def ren(m):
        return matching((mapping.get(p, p), mapping.get(q, q)) for p, q in m)

    objs = tuple(replace(o, matching=ren(o.matching)) for o in C.objects)
    d = {}
    for (i, j), terms in C.d.items():
        s, t = C.objects[i], C.objects[j]
        old_loop, _ = loops(s.matching, t.matching)
        new_loop, _ = loops(objs[i].matching, objs[j].matching)
        rename = {old_loop[p]: new_loop[mapping.get(p, p)] for p in old_loop}
        d[i, j] = {frozenset(rename.get(x, x) for x in k): v for k, v in terms.items()}
    return TangleComplex(tuple(sorted(mapping.get(p, p) for p in C.points)), objs, d, C.parity)


def tensor(A, B, pairs):
    """Planar tensor product of two circle-free complexes glued along ``pairs``.

    Signs follow the Koszul rule: the differential of ``B`` picks up
    ``(-1)^k`` where ``k = (h2 - parity) / 2`` of the ``A`` factor.
    New closed circles are kept on the objects (see ``deloop``).
    """
    if any(o.circles for o in A.objects) or any(o.circles for o in B.objects):
        raise CobordismError("tensor expects circle-free complexes")
    pairs = list(pairs)
    pts = set(A.points) | set(B.points)
    if set(A.points) & set(B.points):
        raise CobordismError("tensor factors share point labels")
    for p, q in pairs:
        if p not in pts or q not in pts:
            raise CobordismError(f"glued point {(p, q)} is not on either boundary")
    gl = Gluing(pairs)
    nb = len(B.objects)
    objs = []
    for a in A.objects:
        for b in B.objects:
            m, circles = gl.objects(a.matching, b.matching)
            objs.append(FlatTangle(m, len(circles), a.h2 + b.h2, a.q2 + b.q2))
    d = {}
    for (i, i2), terms in A.d.items():
        a, a2 = A.objects[i], A.objects[i2]
        for j, b in enumerate(B.objects):
            out = {}
            for k, v in terms.items():
                for k2, v2 in gl.morphism(a.matching, a2.matching, k, b.matching, b.matching,
                                          frozenset()):
                    out[k2] = out.get(k2, 0) + v * v2
            out = {k: v for k, v in out.items() if v}
            if out:
                d[i * nb + j, i2 * nb + j] = out
    for (j, j2), terms in B.d.items():
        b, b2 = B.objects[j], B.objects[j2]
        for i, a in enumerate(A.objects):
            sign = -1 if ((a.h2 - A.parity) // 2) % 2 else 1
            out = {}
            for k, v in terms.items():
                for k2, v2 in gl.morphism(a.matching, a.matching, frozenset(), b.matching,
                                          b2.matching, k):
                    out[k2] = out.get(k2, 0) + sign * v * v2
            out = {k: v for k, v in out.items() if v}
            if out:
                d[i * nb + j, i * nb + j2] = out
    points = tuple(sorted(p for p in pts if p not in gl.glue))
    return TangleComplex(points, tuple(objs), d, (A.parity + B.parity) % 2)
