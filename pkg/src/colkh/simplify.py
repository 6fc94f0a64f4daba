"""Complex reduction: delooping, Gauss elimination and tangle scanning.

Also holds ``naive_cube``, the unreduced cube-of-resolutions oracle that is
deliberately independent of the cobordism machinery.
"""

from __future__ import annotations

import heapq
import logging
import os
from dataclasses import dataclass, field, replace

from .cobordism import (
    FlatTangle, TangleComplex, circle_complex, compose_terms, crossing_complex,
    relabel, src_circle, tensor, tgt_circle, unit_complex,
)
from .homology import BigradedComplex

log = logging.getLogger(__name__)

DEFAULT_OBJECT_CAP = 2 ** 20


class ResourceLimitError(RuntimeError):
    """A reduction step exceeded the configured object cap."""

    def __init__(self, step, size, cap):
        self.step, self.size, self.cap = step, size, cap
        super().__init__(f"step {step}: complex grew to {size} objects (cap {cap})")


def object_cap():
    return int(os.environ.get("CKH_OBJECT_CAP", DEFAULT_OBJECT_CAP))


def deloop(C):
    """Replace every object with ``k`` circles by ``2**k`` circle-free objects.

    Circle ``i`` labelled ``+`` shifts q2 by +2 (included via a cup, projected
    by a dotted cap); ``-`` shifts by -2 (dotted cup, cap).
    """
    if not any(o.circles for o in C.objects):
        return C
    objs = []
    index = {}
    for i, o in enumerate(C.objects):
        k = o.circles
        for labels in range(2 ** k):
            plus = bin(labels).count("1")
            index[i, labels] = len(objs)
            objs.append(FlatTangle(o.matching, 0, o.h2, o.q2 + 2 * plus - 2 * (k - plus)))
    d = {}
    for (i, j), terms in C.d.items():
        ks, kt = C.objects[i].circles, C.objects[j].circles
        for key, v in terms.items():
            ls = sum(1 << c for c in range(ks) if src_circle(c) in key)
            lt = sum(1 << c for c in range(kt) if tgt_circle(c) not in key)
            new = frozenset(x for x in key if x >= 0)
            e = d.setdefault((index[i, ls], index[j, lt]), {})
            w = e.get(new, 0) + v
            if w:
                e[new] = w
            else:
                del e[new]
    d = {k: v for k, v in d.items() if v}
    return TangleComplex(C.points, tuple(objs), d, C.parity)


def _unit(terms):
    if len(terms) == 1:
        (k, v), = terms.items()
        if not k and v in (1, -1):
            return v
    return 0


def gauss_eliminate(C):
    """Cancel every invertible entry (plus or minus an identity cobordism).

    Pivots are taken in order of (h2, source index, target index); each
    cancellation updates the remaining entries by the zig-zag formula.
    """
    objs = C.objects
    out = {}
    inn = {}
    for (i, j), terms in C.d.items():
        out.setdefault(i, {})[j] = terms
        inn.setdefault(j, {})[i] = terms

    def candidate(i, j, terms):
        s, t = objs[i], objs[j]
        return s.q2 == t.q2 and s.matching == t.matching and _unit(terms)

    heap = [(objs[i].h2, i, j) for (i, j), terms in C.d.items() if candidate(i, j, terms)]
    heapq.heapify(heap)
    alive = [True] * len(objs)
    while heap:
        _, x, y = heapq.heappop(heap)
        if not (alive[x] and alive[y]):
            continue
        phi = out.get(x, {}).get(y)
        if phi is None:
            continue
        u = _unit(phi)
        if not u or not candidate(x, y, phi):
            continue
        sources = [(w, g) for w, g in inn.get(y, {}).items() if w != x]
        targets = [(z, dl) for z, dl in out.get(x, {}).items() if z != y]
        for w, gamma in sources:
            ow = out[w]
            for z, delta in targets:
                comp = compose_terms(objs[w], objs[y], objs[z], gamma, delta)
                if not comp:
                    continue
                cur = dict(ow.get(z, {}))
                for k, v in comp.items():
                    val = cur.get(k, 0) - u * v
                    if val:
                        cur[k] = val
                    else:
                        cur.pop(k, None)
                if cur:
                    ow[z] = cur
                    inn[z][w] = cur
                    if candidate(w, z, cur):
                        heapq.heappush(heap, (objs[w].h2, w, z))
                else:
                    ow.pop(z, None)
                    inn[z].pop(w, None)
        for v in (x, y):
            alive[v] = False
            for z in out.pop(v, {}):
                inn[z].pop(v, None)
            for w in inn.pop(v, {}):
                out[w].pop(v, None)
    keep = [i for i in range(len(objs)) if alive[i]]
    renum = {i: n for n, i in enumerate(keep)}
    d = {}
    for i, row in out.items():
        if not alive[i]:
            continue
        for j, terms in row.items():
            if terms:
                d[renum[i], renum[j]] = terms
    return TangleComplex(C.points, tuple(objs[i] for i in keep), d, C.parity)


def simplify(C):
    return gauss_eliminate(deloop(C))


@dataclass
class ScanStats:
    """Per-step telemetry of a scan."""

    sizes: list = field(default_factory=list)
    widths: list = field(default_factory=list)

    @property
    def max_objects(self):
        return max(self.sizes, default=1)


def _glue_pairs(current, piece):
    cur = set(current.points)
    pairs = []
    for p in piece.points:
        q = p ^ 1
        if q in cur or (q in piece.points and p < q):
            pairs.append((p, q))
    return pairs


def _region_complex(dec, piece, cap, stats):
    sub = unit_complex()
    inner = set(piece.points)
    for ci in piece.crossings:
        pts = tuple(dec.labels[ci, s] for s in range(4))
        X = crossing_complex(pts)
        pairs = [(p, p ^ 1) for p in pts if p ^ 1 in sub.points]
        pairs += [(p, p ^ 1) for p in pts if p ^ 1 in pts and p < (p ^ 1)]
        sub = simplify(tensor(sub, X, pairs))
        if len(sub) > cap:
            raise ResourceLimitError(f"region {piece.tag}", len(sub), cap)
    assert set(sub.points) == inner
    return sub


def scan(dec, replacements=None, cap=None, stats=None):
    """Fold tensor -> deloop -> gauss over the pieces of a decomposition.

    ``replacements`` maps a twist-region tag to a ready-made complex on that
    region's boundary points (used for projector insertion).  Returns a
    complex on the decomposition's boundary labels; for closed diagrams
    every object is the empty tangle.
    """
    cap = object_cap() if cap is None else cap
    replacements = replacements or {}
    C = unit_complex()
    for step, piece in enumerate(dec.pieces):
        if piece.kind == "circle":
            P = circle_complex()
        elif piece.kind == "crossing":
            P = crossing_complex(piece.points)
        elif piece.tag in replacements:
            P = replacements[piece.tag]
            extra = set(P.points) - set(piece.points)
            # ends of the region that close up on each other stay explicit
            if not set(piece.points) <= set(P.points) or any(p ^ 1 not in extra for p in extra):
                raise ValueError(f"replacement for {piece.tag} has the wrong boundary")
            piece = replace(piece, points=P.points)
        else:
            P = _region_complex(dec, piece, cap, stats)
        T = tensor(C, P, _glue_pairs(C, piece))
        if len(T) > cap:
            raise ResourceLimitError(step, len(T), cap)
        T = deloop(T)
        if len(T) > cap:
            raise ResourceLimitError(step, len(T), cap)
        C = gauss_eliminate(T)
        if stats is not None:
            stats.sizes.append(len(T))
            stats.widths.append(len(C.points))
        log.debug("scan step %d (%s): %d -> %d objects, width %d",
                  step, piece.kind, len(T), len(C), len(C.points))
    # move open crossing ends onto the boundary labels they are glued to
    bnd = set(dec.boundary)
    mapping = {p: p ^ 1 for p in C.points if p ^ 1 in bnd and p not in bnd}
    if mapping:
        C = relabel(C, mapping)
    for p in dec.boundary:
        if p ^ 1 in bnd and p not in C.points:
            # an arc with both ends on the boundary and no crossings
            C = tensor(C, TangleComplex((p, p ^ 1), (FlatTangle(((min(p, p ^ 1), max(p, p ^ 1)),)),),
                                        {}, 0), [])
    return C


def closed_to_bigraded(C):
    """Integer complex of a fully closed, reduced tangle complex."""
    if C.points:
        raise ValueError("complex still has boundary points")
    gens = {}
    index = []
    for o in C.objects:
        key = (o.h2, o.q2)
        index.append((key, gens.get(key, 0)))
        gens[key] = gens.get(key, 0) + 1
    d = {}
    for (i, j), terms in C.d.items():
        v = terms.get(frozenset(), 0)
        if v:
            (h2, q2), r = index[i]
            _, c = index[j]
            d.setdefault((h2, q2), {})[c, r] = v
    return BigradedComplex(gens, d)


# ------------------------------------------------------------ naive cube

class CrossingLimitError(ValueError):
    pass


def _state_circles(diagram, state):
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in diagram.edges:
        find(e)
    for ci, x in enumerate(diagram.crossings):
        bit = (state >> ci) & 1
        for s1, s2 in x.smoothing(bit):
            a, b = find(x.edges[s1]), find(x.edges[s2])
            if a != b:
                parent[a] = b
    roots = sorted({find(e) for e in diagram.edges})
    label = {r: i for i, r in enumerate(roots)}
    return {e: label[find(e)] for e in diagram.edges}, len(roots)


def naive_cube(diagram, limit=12):
    """Full cube of resolutions with the rank-2 Frobenius algebra.

    Generators are labelled states (bit 1 = v_-); degrees are doubled.
    The edge flipping crossing ``i`` carries sign ``(-1)^(#1s before i)``.
    """
    n = len(diagram.crossings)
    if n > limit:
        raise CrossingLimitError(f"{n} crossings exceeds the naive cube limit {limit}")
    states = []
    for s in range(2 ** n):
        circ, k = _state_circles(diagram, s)
        states.append((circ, k))
    gens = {}
    gindex = {}
    for s, (circ, k) in enumerate(states):
        r = bin(s).count("1")
        h2 = 2 * r - n
        for lab in range(2 ** k):
            minus = bin(lab).count("1")
            q2 = h2 + 2 * (k - minus) - 2 * minus
            key = (h2, q2)
            gindex[s, lab] = (key, gens.get(key, 0))
            gens[key] = gens.get(key, 0) + 1
    d = {}
    for s, (circ, k) in enumerate(states):
        for i in range(n):
            if (s >> i) & 1:
                continue
            t = s | (1 << i)
            sign = -1 if bin(s & ((1 << i) - 1)).count("1") % 2 else 1
            circ_t, kt = states[t]
            x = diagram.crossings[i]
            a, b = circ[x.edges[0]], circ[x.edges[2]]
            c_new = circ_t[x.edges[0]]
            c_new2 = circ_t[x.edges[2]]
            # map other circles by shared edges
            move = {}
            for e, ci in circ.items():
                move.setdefault(ci, set()).add(circ_t[e])
            for lab in range(2 ** k):
                bits = {ci: (lab >> ci) & 1 for ci in range(k)}
                images = []
                if a != b:
                    # merge: X*X = 0, 1*X = X, 1*1 = 1
                    if bits[a] and bits[b]:
                        continue
                    base = {}
                    for ci in range(k):
                        if ci in (a, b):
                            continue
                        (tc,) = move[ci]
                        base[tc] = bits[ci]
                    base[c_new] = bits[a] | bits[b]
                    images.append(base)
                else:
                    # split: 1 -> 1(x)X + X(x)1, X -> X(x)X
                    base = {}
                    for ci in range(k):
                        if ci == a:
                            continue
                        (tc,) = move[ci]
                        base[tc] = bits[ci]
                    if bits[a]:
                        img = dict(base)
                        img[c_new] = img[c_new2] = 1
                        images.append(img)
                    else:
                        for x1, x2 in ((0, 1), (1, 0)):
                            img = dict(base)
                            img[c_new], img[c_new2] = x1, x2
                            images.append(img)
                src_key, src_col = gindex[s, lab]
                for img in images:
                    tlab = sum(bit << ci for ci, bit in img.items())
                    tgt_key, tgt_row = gindex[t, tlab]
                    assert tgt_key == (src_key[0] + 2, src_key[1])
                    m = d.setdefault(src_key, {})
                    m[tgt_row, src_col] = m.get((tgt_row, src_col), 0) + sign
    return BigradedComplex(gens, d)
