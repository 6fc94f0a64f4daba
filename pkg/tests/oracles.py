"""Independent reference implementations used to freeze expected values.

The closure oracle turns a canonical dotted cobordism into the linear map of
the rank-2 Frobenius algebra V = Z<1, X>, X^2 = 0, by closing the boundary
with a fixed crossingless matching and reading off the topology of the
resulting closed-up surface.  It shares no code with ``colkh.cobordism``.
"""

import itertools
import random

ONE, X = 0, 1


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _union(parent, a, b):
    parent[_find(parent, a)] = _find(parent, b)


def circles_of(m1, m2):
    """Closed curves of two matchings on the same points, as sorted point tuples."""
    nxt1, nxt2 = {}, {}
    for p, q in m1:
        nxt1[p], nxt1[q] = q, p
    for p, q in m2:
        nxt2[p], nxt2[q] = q, p
    seen, out = set(), []
    for s in sorted(nxt1):
        if s in seen:
            continue
        cur, pts = s, []
        while True:
            seen.add(cur)
            pts.append(cur)
            o = nxt1[cur]
            seen.add(o)
            pts.append(o)
            cur = nxt2[o]
            if cur == s:
                break
        out.append(tuple(sorted(pts)))
    return sorted(out)


def frob_connected(inputs, n_out, genus, dots):
    """Image of a basis tensor under a connected surface: dict tuple -> coef."""
    # multiply inputs together
    if any(inputs) and sum(inputs) >= 2:
        return {}
    x = sum(inputs) + dots + genus  # handle = 2X contributes X with factor 2
    coef = 2 ** genus
    if x >= 2:
        return {}
    if n_out == 0:
        return {(): coef} if x == 1 else {}
    # iterated comultiplication of X^x
    terms = {(x,): coef}
    for _ in range(n_out - 1):
        new = {}
        for t, c in terms.items():
            last = t[-1]
            splits = [(X, X)] if last == X else [(ONE, X), (X, ONE)]
            for a, b in splits:
                k = t[:-1] + (a, b)
                new[k] = new.get(k, 0) + c
        terms = new
    return terms


def closure_map(source, target, terms, cap):
    """Matrix {(out_tuple, in_tuple): coef} of a cobordism closed up by ``cap``.

    ``source``/``target`` are ``(matching, circles)``; ``terms`` maps a
    frozenset of dotted items to a coefficient, items named as in colkh.
    """
    sm, sc = source
    tm, tc = target
    ins = circles_of(sm, cap)
    outs = circles_of(tm, cap)
    n_in, n_out = len(ins) + sc, len(outs) + tc
    loops = circles_of(sm, tm)
    result = {}
    for key, coef in terms.items():
        # nodes: loop disks, circle disks, cap strips
        nodes = [("loop", min(lp)) for lp in loops]
        nodes += [("src", i) for i in range(sc)] + [("tgt", i) for i in range(tc)]
        nodes += [("strip", a) for a in cap]
        parent = {n: n for n in nodes}
        loop_of = {p: ("loop", min(lp)) for lp in loops for p in lp}
        strip_of = {p: ("strip", a) for a in cap for p in a}
        for p in loop_of:
            _union(parent, loop_of[p], strip_of[p])
        comps = {}
        for n in nodes:
            comps.setdefault(_find(parent, n), []).append(n)
        dotted = set()
        for item in key:
            if item >= 0:
                dotted.add(("loop", item))
            elif item % 2:
                dotted.add(("src", (-item - 1) // 2))
            else:
                dotted.add(("tgt", (-item - 2) // 2))
        npts = {}
        for p in loop_of:
            r = _find(parent, loop_of[p])
            npts[r] = npts.get(r, 0) + 1
        in_comp = [_find(parent, loop_of[c[0]]) for c in ins] + \
            [_find(parent, ("src", i)) for i in range(sc)]
        out_comp = [_find(parent, loop_of[c[0]]) for c in outs] + \
            [_find(parent, ("tgt", i)) for i in range(tc)]
        for inp in itertools.product((ONE, X), repeat=n_in):
            img = {(): coef}
            order = []
            for r, members in comps.items():
                chi = len(members) - npts.get(r, 0)
                ci = [k for k in range(n_in) if in_comp[k] == r]
                co = [k for k in range(n_out) if out_comp[k] == r]
                b = len(ci) + len(co)
                g2 = 2 - chi - b
                assert g2 >= 0 and g2 % 2 == 0, (chi, b)
                d = sum(1 for m in members if m in dotted)
                part = frob_connected([inp[k] for k in ci], len(co), g2 // 2, d)
                img = {t + u: c * c2 for t, c in img.items() for u, c2 in part.items()}
                order += co
            for t, c in img.items():
                out = [None] * n_out
                for pos, k in enumerate(order):
                    out[k] = t[pos]
                k2 = (tuple(out), inp)
                result[k2] = result.get(k2, 0) + c
    return {k: v for k, v in result.items() if v}


def matmul(f, g):
    out = {}
    for (a, b), v in f.items():
        for (b2, c), w in g.items():
            if b == b2:
                out[a, c] = out.get((a, c), 0) + v * w
    return {k: v for k, v in out.items() if v}


def noncrossing_matchings(points):
    """All noncrossing perfect matchings of points in cyclic order."""
    points = list(points)
    if not points:
        return [()]
    out = []
    first = points[0]
    for k in range(1, len(points), 2):
        inside = points[1:k]
        outside = points[k + 1:]
        for a in noncrossing_matchings(inside):
            for b in noncrossing_matchings(outside):
                out.append(tuple(sorted(((first, points[k]),) + a + b)))
    return out


def random_terms(rng, items, n_terms=3):
    terms = {}
    for _ in range(n_terms):
        key = frozenset(x for x in items if rng.random() < 0.3)
        terms[key] = terms.get(key, 0) + rng.choice((-2, -1, 1, 2))
    return {k: v for k, v in terms.items() if v}


def seeded(seed):
    return random.Random(seed)
