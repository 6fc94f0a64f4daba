"""Planar diagrams of framed, colored links.

Crossings use PD notation: ``X[a,b,c,d]`` lists the four incident edges
counterclockwise, with ``a``-``c`` the under strand.  The 0-smoothing of a
crossing joins ``a``-``b`` and ``c``-``d``; the 1-smoothing joins ``a``-``d``
and ``b``-``c``.  With this rule a positive crossing (in the oriented sense)
has its oriented resolution as 0-smoothing, so positive twist regions resolve
to the identity braid in the all-0 state.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from itertools import count

# Slot directions in the local picture of a crossing: a=S, b=E, c=N, d=W.
_INWARD = {0: (0, 1), 1: (-1, 0), 2: (0, -1), 3: (1, 0)}


class DiagramError(ValueError):
    """Raised for malformed or inconsistent diagram input."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Crossing:
    edges: tuple
    tag: object = None

    def __post_init__(self):
        if len(self.edges) != 4:
            raise DiagramError(f"crossing needs 4 edges, got {self.edges}")

    @classmethod
    def from_over(cls, edges, over_ac=False, tag=None):
        """Build a crossing; ``over_ac`` marks input whose a-c strand is over."""
        edges = tuple(edges)
        if over_ac:
            edges = edges[1:] + edges[:1]
        return cls(edges, tag)

    def smoothing(self, state):
        """Slot pairs joined by the ``state`` (0 or 1) smoothing."""
        return ((0, 1), (2, 3)) if state == 0 else ((0, 3), (1, 2))

    def relabel(self, mapping):
        return Crossing(tuple(mapping.get(e, e) for e in self.edges), self.tag)


@dataclass(frozen=True)
class CutSite:
    """Parallel cable strands at a lifted basepoint.

    ``edges`` are ordered left to right looking along the component's
    traversal direction.  ``heads`` holds, per edge, the (crossing, slot)
    where the strand enters after the cut, or ``None`` on a crossingless
    circle.
    """

    component: int
    edges: tuple
    heads: tuple


@dataclass(frozen=True)
class LinkDiagram:
    crossings: tuple = ()
    circles: tuple = ()
    colors: tuple = ()
    framings: tuple = ()
    basepoints: tuple = ()
    cut_sites: tuple = ()
    components: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if not self.components:
            object.__setattr__(self, "components", _trace(self.crossings, self.circles)[0])
        ncomp = len(self.components)
        if not self.colors:
            object.__setattr__(self, "colors", (1,) * ncomp)
        if not self.framings:
            object.__setattr__(self, "framings", self_writhes(self))
        if not self.basepoints:
            object.__setattr__(self, "basepoints", tuple(min(c) for c in self.components))
        for name in ("colors", "framings", "basepoints"):
            if len(getattr(self, name)) != ncomp:
                raise DiagramError(f"{name} has {len(getattr(self, name))} entries for {ncomp} components")
        if any(c < 1 for c in self.colors):
            raise DiagramError(f"colors must be >= 1, got {self.colors}")
        for k, b in enumerate(self.basepoints):
            if b not in self.components[k]:
                raise DiagramError(f"basepoint {b} is not on component {k + 1}")

    @property
    def edges(self):
        return frozenset(e for comp in self.components for e in comp)

    def component_of(self):
        return {e: k for k, comp in enumerate(self.components) for e in comp}

    def __len__(self):
        return len(self.crossings)


@dataclass(frozen=True)
class Tangle:
    """A diagram with open edge ends.

    Each entry of ``boundary`` is an edge id whose end lies on the boundary
    disc; an edge listed twice is an arc with both ends on the boundary.
    """

    crossings: tuple
    boundary: tuple
    circles: tuple = ()


def _darts(crossings):
    darts = {}
    for ci, x in enumerate(crossings):
        for s, e in enumerate(x.edges):
            darts.setdefault(e, []).append((ci, s))
    return darts


def _trace(crossings, circles=()):
    """Component edge lists plus the set of darts where the traversal enters."""
    darts = _darts(crossings)
    for e, ds in darts.items():
        if len(ds) != 2:
            raise DiagramError(f"edge {e} has {len(ds)} endpoints, expected 2")
    for e in circles:
        if e in darts:
            raise DiagramError(f"circle {e} is also used by a crossing")
    if len(set(circles)) != len(circles):
        raise DiagramError("duplicate circle declaration")
    seen = set()
    comps = []
    heads = set()
    for start in sorted(darts):
        if start in seen:
            continue
        comp = []
        e = start
        tail, head = sorted(darts[e])
        while True:
            seen.add(e)
            comp.append(e)
            heads.add(head)
            ci, s = head
            out = (ci, (s + 2) % 4)
            e = crossings[ci].edges[out[1]]
            d1, d2 = darts[e]
            head = d2 if d1 == out else d1
            if e == start:
                break
        comps.append(tuple(comp))
    comps.extend((e,) for e in circles)
    comps.sort(key=min)
    return tuple(comps), frozenset(heads)


def _check_planar(crossings):
    """Every connected piece of the projection must have Euler characteristic 2."""
    if not crossings:
        return
    darts = _darts(crossings)
    other = {}
    for ds in darts.values():
        other[ds[0]], other[ds[1]] = ds[1], ds[0]
    # faces: orbits of "cross the edge, then turn to the next slot clockwise"
    faces = 0
    seen = set()
    for d in sorted(other):
        if d in seen:
            continue
        faces += 1
        while d not in seen:
            seen.add(d)
            ci, s = other[d]
            d = (ci, (s - 1) % 4)
    # connected pieces of the 4-valent graph
    parent = list(range(len(crossings)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for (c1, _), (c2, _) in darts.values():
        parent[find(c1)] = find(c2)
    pieces = len({find(i) for i in range(len(crossings))})
    v, e = len(crossings), 2 * len(crossings)
    if v - e + faces != 2 * pieces:
        raise DiagramError("diagram is not planar (Euler characteristic mismatch)")


def crossing_signs(diagram):
    """Sign of each crossing under the traversal orientation found by tracing."""
    _, heads = _trace(diagram.crossings, diagram.circles)
    signs = []
    for ci, _x in enumerate(diagram.crossings):
        under_in = 0 if (ci, 0) in heads else 2
        over_in = 3 if (ci, 3) in heads else 1
        ux, uy = _INWARD[under_in]
        ox, oy = _INWARD[over_in]
        signs.append(1 if ox * uy - oy * ux > 0 else -1)
    return tuple(signs)


def self_writhes(diagram):
    comp_of = diagram.component_of()
    signs = crossing_signs(diagram)
    writhe = [0] * len(diagram.components)
    for x, sgn in zip(diagram.crossings, signs):
        k = comp_of[x.edges[0]]
        if comp_of[x.edges[1]] == k:
            writhe[k] += sgn
    return tuple(writhe)


def make_diagram(crossings, circles=(), colors=None, framings=None, basepoints=None):
    """Validated ``LinkDiagram`` from crossings given as tuples or ``Crossing``."""
    xs = tuple(x if isinstance(x, Crossing) else Crossing(tuple(x)) for x in crossings)
    comps, _ = _trace(xs, tuple(circles))
    _check_planar(xs)
    n = len(comps)
    d = LinkDiagram(xs, tuple(circles), components=comps,
                    colors=tuple(colors) if colors else (1,) * n,
                    framings=(), basepoints=tuple(basepoints) if basepoints else ())
    if framings is not None:
        d = replace(d, framings=tuple(framings))
    return d


_X_RE = re.compile(r"^X\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\]$")
_CIRCLE_RE = re.compile(r"^circle\[\s*(-?\d+)\s*\]$")
_ATTR_RE = re.compile(r"^(color|framing|basepoint)\s+(\d+)\s*=\s*(-?\d+)$")


def parse_pd(text):
    """Parse the PD text format into a validated ``LinkDiagram``.

    Component numbers in ``color``/``framing``/``basepoint`` lines are
    1-based, with components ordered by their lowest edge id.
    """
    crossings, circles, attrs = [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _X_RE.match(line)
        if m:
            edges = tuple(int(g) for g in m.groups())
            if min(edges) < 1:
                raise DiagramError("edge ids must be positive", lineno)
            crossings.append(Crossing(edges))
            continue
        m = _CIRCLE_RE.match(line)
        if m:
            if int(m.group(1)) < 1:
                raise DiagramError("edge ids must be positive", lineno)
            circles.append(int(m.group(1)))
            continue
        m = _ATTR_RE.match(line)
        if m:
            attrs.append((m.group(1), int(m.group(2)), int(m.group(3)), lineno))
            continue
        raise DiagramError(f"cannot parse {raw.strip()!r}", lineno)
    if not crossings and not circles:
        raise DiagramError("empty diagram")
    try:
        d = make_diagram(crossings, circles)
    except DiagramError as exc:
        raise DiagramError(str(exc)) from None
    colors, framings, basepoints = list(d.colors), list(d.framings), list(d.basepoints)
    table = {"color": colors, "framing": framings, "basepoint": basepoints}
    for name, k, value, lineno in attrs:
        if not 1 <= k <= len(d.components):
            raise DiagramError(f"no component {k}", lineno)
        if name == "color" and value < 1:
            raise DiagramError(f"color must be >= 1, got {value}", lineno)
        if name == "basepoint" and value not in d.components[k - 1]:
            raise DiagramError(f"edge {value} is not on component {k}", lineno)
        table[name][k - 1] = value
    return replace(d, colors=tuple(colors), framings=tuple(framings),
                   basepoints=tuple(basepoints))


def format_pd(diagram):
    lines = [f"X[{','.join(map(str, x.edges))}]" for x in diagram.crossings]
    lines += [f"circle[{e}]" for e in diagram.circles]
    for k in range(len(diagram.components)):
        lines.append(f"color {k + 1} = {diagram.colors[k]}")
        lines.append(f"framing {k + 1} = {diagram.framings[k]}")
        lines.append(f"basepoint {k + 1} = {diagram.basepoints[k]}")
    return "\n".join(lines) + "\n"


def with_colors(diagram, colors):
    return replace(diagram, colors=tuple(colors))


# ---------------------------------------------------------------- builders

def _braid_crossing(positive, in_left, in_right, out_left, out_right, tag=None):
    # strands run upward; positive crossings resolve to the identity at 0
    if positive:
        return Crossing((in_right, out_right, out_left, in_left), tag)
    return Crossing((in_left, in_right, out_right, out_left), tag)


def braid_closure(word, strands=None):
    """Closed diagram of a braid word (``i`` for sigma_i, ``-i`` for its inverse)."""
    word = list(word)
    n = strands or (max((abs(g) for g in word), default=0) + 1)
    if any(g == 0 or abs(g) >= n for g in word):
        raise DiagramError(f"bad generator in braid word {word} on {n} strands")
    fresh = count(n + 1)
    bottom = list(range(1, n + 1))
    cur = list(bottom)
    xs = []
    for g in word:
        i = abs(g) - 1
        ol, orr = next(fresh), next(fresh)
        xs.append(_braid_crossing(g > 0, cur[i], cur[i + 1], ol, orr))
        cur[i], cur[i + 1] = ol, orr
    close = {c: b for c, b in zip(cur, bottom) if c != b}
    xs = [x.relabel(close) for x in xs]
    circles = [b for c, b in zip(cur, bottom) if c == b]
    return _renumber(make_diagram(xs, circles))


def _renumber(diagram):
    """Relabel edges as 1..E in order of first appearance."""
    mapping = {}
    for x in diagram.crossings:
        for e in x.edges:
            mapping.setdefault(e, len(mapping) + 1)
    for e in diagram.circles:
        mapping.setdefault(e, len(mapping) + 1)
    xs = [x.relabel(mapping) for x in diagram.crossings]
    return make_diagram(xs, [mapping[e] for e in diagram.circles])


def unlink(n):
    return make_diagram([], range(1, n + 1))


def add_kink(diagram, edge, sign):
    """Insert a curl of the given sign on ``edge`` (changes that framing by ``sign``)."""
    darts = _darts(diagram.crossings)
    top = max(diagram.edges) + 1
    loop, new = top, top + 1
    if edge in diagram.circles:
        # a lone circle becomes a 1-crossing kink diagram
        edges = (edge, edge, loop, loop) if sign > 0 else (edge, loop, loop, edge)
        xs = list(diagram.crossings) + [Crossing(edges)]
        circles = [c for c in diagram.circles if c != edge]
    else:
        _, heads = _trace(diagram.crossings, diagram.circles)
        head = next(d for d in darts[edge] if d in heads)
        xs = list(diagram.crossings)
        ci, s = head
        es = list(xs[ci].edges)
        es[s] = new
        xs[ci] = Crossing(tuple(es), xs[ci].tag)
        # traversal: edge -> kink -> new; enters at a, loops back in at d (+) or b (-)
        if sign > 0:
            xs.append(Crossing((edge, new, loop, loop)))
        else:
            xs.append(Crossing((edge, loop, loop, new)))
        circles = list(diagram.circles)
    d = make_diagram(xs, circles)
    comp_old = diagram.component_of()[edge]
    colors = list(diagram.colors)
    framings = list(diagram.framings)
    bps = list(diagram.basepoints)
    # component order may change only via lowest edge ids, which are preserved
    old_min = [min(c) for c in diagram.components]
    order = [old_min.index(min(c)) for c in d.components]
    framings[comp_old] += 1 if sign > 0 else -1
    return replace(d, colors=tuple(colors[i] for i in order),
                   framings=tuple(framings[i] for i in order),
                   basepoints=tuple(bps[i] for i in order))


def mirror(diagram):
    xs = [Crossing(x.edges[1:] + x.edges[:1], x.tag) for x in diagram.crossings]
    d = make_diagram(xs, diagram.circles, diagram.colors, basepoints=diagram.basepoints)
    return replace(d, framings=tuple(-f for f in diagram.framings))


def disjoint_union(d1, d2):
    shift = max(d1.edges) if d1.edges else 0
    m = {e: e + shift for e in d2.edges}
    xs = list(d1.crossings) + [x.relabel(m) for x in d2.crossings]
    circles = list(d1.circles) + [m[e] for e in d2.circles]
    d = make_diagram(xs, circles)
    mins = [min(c) for c in d1.components] + [min(c) + shift for c in d2.components]
    attrs = list(zip(d1.colors, d1.framings, d1.basepoints)) + [
        (c, f, b + shift) for c, f, b in zip(d2.colors, d2.framings, d2.basepoints)]
    order = [mins.index(min(c)) for c in d.components]
    return replace(d, colors=tuple(attrs[i][0] for i in order),
                   framings=tuple(attrs[i][1] for i in order),
                   basepoints=tuple(attrs[i][2] for i in order))


# ---------------------------------------------------------------- cabling

def cable(link):
    """Blackboard cable: component ``k`` becomes ``colors[k]`` parallel strands.

    The result is an uncolored diagram whose ``cut_sites`` record the lifted
    basepoints, one per original component.
    """
    if tuple(link.framings) != tuple(self_writhes(link)):
        raise DiagramError(f"framings {tuple(link.framings)} differ from the self-writhes "
                           f"{tuple(self_writhes(link))}; add kinks to realize the framing")
    comps, heads = _trace(link.crossings, link.circles)
    comp_of = {e: k for k, comp in enumerate(comps) for e in comp}
    color = {e: link.colors[comp_of[e]] for e in comp_of}
    fresh = count(1)
    copies = {e: tuple(next(fresh) for _ in range(color[e])) for e in comp_of}
    new_xs = []
    copy_heads = {}
    for ci, x in enumerate(link.crossings):
        a, b, c, d = x.edges
        n_under, n_over = color[a], color[b]
        north = (ci, 0) in heads
        east = (ci, 3) in heads

        def under_idx(col):
            return col if north else n_under - 1 - col

        def over_idx(row):
            return n_over - 1 - row if east else row

        vert = {}
        horiz = {}
        for col in range(n_under):
            vert[col, 0] = copies[a][under_idx(col)]
            vert[col, n_over] = copies[c][under_idx(col)]
            for row in range(1, n_over):
                vert[col, row] = next(fresh)
        for row in range(n_over):
            horiz[row, 0] = copies[d][over_idx(row)]
            horiz[row, n_under] = copies[b][over_idx(row)]
            for col in range(1, n_under):
                horiz[row, col] = next(fresh)
        index = {}
        for row in range(n_over):
            for col in range(n_under):
                index[col, row] = len(new_xs)
                new_xs.append(Crossing((vert[col, row], horiz[row, col + 1],
                                        vert[col, row + 1], horiz[row, col]), x.tag))
        # record where each copy of an edge enters this grid
        for slot, e in enumerate(x.edges):
            if (ci, slot) not in heads:
                continue
            for i, ce in enumerate(copies[e]):
                if slot == 0:
                    col = i if north else n_under - 1 - i
                    copy_heads[ce] = (index[col, 0], 0)
                elif slot == 2:
                    col = i if north else n_under - 1 - i
                    copy_heads[ce] = (index[col, n_over - 1], 2)
                elif slot == 3:
                    row = n_over - 1 - i if east else i
                    copy_heads[ce] = (index[0, row], 3)
                else:
                    row = n_over - 1 - i if east else i
                    copy_heads[ce] = (index[n_under - 1, row], 1)
    circles = [ce for e in link.circles for ce in copies[e]]
    sites = tuple(
        CutSite(k, copies[link.basepoints[k]],
                tuple(copy_heads.get(ce) for ce in copies[link.basepoints[k]]))
        for k in range(len(comps)))
    d = make_diagram(new_xs, circles)
    return replace(d, cut_sites=sites)


def _split_site(crossings, circles, site):
    """Cut the strands of ``site``: returns crossings, circles, bottom and top ids."""
    xs = list(crossings)
    used = {e for x in xs for e in x.edges} | set(circles)
    fresh = count(max(used, default=0) + 1)
    tops = []
    circles = list(circles)
    for e, head in zip(site.edges, site.heads):
        if head is None:
            tops.append(e)
            circles.remove(e)
            continue
        t = next(fresh)
        ci, s = head
        es = list(xs[ci].edges)
        es[s] = t
        xs[ci] = Crossing(tuple(es), xs[ci].tag)
        tops.append(t)
    return xs, circles, list(site.edges), tops, fresh


def twist_crossings(bottom, top, t, fresh, tag=None):
    """Crossings of ``t`` rows of sigma_1 ... sigma_{n-1} from ``bottom`` to ``top``."""
    n = len(bottom)
    if n < 2 or t == 0:
        return []
    cur = list(bottom)
    xs = []
    for _ in range(t):
        for i in range(n - 1):
            ol, orr = next(fresh), next(fresh)
            xs.append(_braid_crossing(True, cur[i], cur[i + 1], ol, orr, tag))
            cur[i], cur[i + 1] = ol, orr
    rename = dict(zip(cur, top))
    return [x.relabel(rename) for x in xs]


def insert_twists(diagram, site, n, t, tag=None):
    """Insert the positive twist braid ``B_{t,n}`` at a cut site.

    Adds ``t * (n - 1)`` crossings tagged with ``tag`` (default: the site's
    component), whose all-0 resolution is the identity braid.
    """
    if isinstance(site, int):
        site = diagram.cut_sites[site]
    if len(site.edges) != n:
        raise DiagramError(f"cut site has {len(site.edges)} strands, expected {n}")
    if t < 0:
        raise DiagramError("twist count must be non-negative")
    if n < 2 or t == 0:
        return diagram
    tag = ("twist", site.component) if tag is None else tag
    xs, circles, bottom, top, fresh = _split_site(diagram.crossings, diagram.circles, site)
    new = twist_crossings(bottom, top, t, fresh, tag)
    start = len(xs)
    xs.extend(new)
    d = make_diagram(xs, circles)
    # the strands now enter the braid first
    first = {}
    for j, x in enumerate(new):
        for s in (0, 3):  # incoming slots of a positive braid crossing
            if x.edges[s] in bottom and x.edges[s] not in first:
                first[x.edges[s]] = (start + j, s)
    new_site = replace(site, heads=tuple(first[e] for e in bottom))
    sites = tuple(new_site if s.component == site.component else s for s in diagram.cut_sites)
    return replace(d, cut_sites=sites)


def open_cut_sites(diagram, sites=None):
    """The tangle obtained by cutting all (or the given) cut sites open.

    Boundary order: for each site, its bottom strands left to right, then its
    top strands left to right.
    """
    sites = diagram.cut_sites if sites is None else sites
    xs, circles = list(diagram.crossings), list(diagram.circles)
    boundary = []
    for site in sites:
        xs, circles, bottom, top, _ = _split_site(xs, circles, site)
        boundary.extend(bottom + top)
    return Tangle(tuple(xs), tuple(boundary), tuple(circles))


# ---------------------------------------------------------------- decomposition

@dataclass(frozen=True)
class Piece:
    """One step of a scan: a single crossing, a tagged twist region or a circle.

    ``points`` are endpoint labels; for a crossing they follow slot order.
    """

    kind: str
    crossings: tuple
    points: tuple
    tag: object = None


@dataclass(frozen=True)
class TangleDecomposition:
    crossings: tuple
    circles: tuple
    pieces: tuple
    widths: tuple
    boundary: tuple
    labels: dict = field(compare=False, default=None)

    @property
    def max_width(self):
        return max(self.widths, default=0)


def endpoint_labels(crossings, boundary=()):
    """Label each crossing slot and boundary entry ``2*edge + k``.

    The two ends of an edge carry partner labels ``p`` and ``p ^ 1``.
    """
    seen = {}
    slot_labels = {}
    for ci, x in enumerate(crossings):
        for s, e in enumerate(x.edges):
            k = seen.get(e, 0)
            seen[e] = k + 1
            slot_labels[ci, s] = 2 * e + k
    bnd = []
    for e in boundary:
        k = seen.get(e, 0)
        seen[e] = k + 1
        bnd.append(2 * e + k)
    for e, k in seen.items():
        if k != 2:
            raise DiagramError(f"edge {e} has {k} endpoints")
    return slot_labels, tuple(bnd)


def decompose(diagram, group_tags=True):
    """Greedy sweep order of the crossings of a diagram or tangle.

    Crossings sharing a twist tag form one multi-crossing piece when
    ``group_tags`` is set.  Each step prefers the unit with the most
    endpoints already open, then the smallest resulting width.
    """
    crossings = diagram.crossings
    boundary = getattr(diagram, "boundary", ())
    circles = diagram.circles
    slot_labels, bnd = endpoint_labels(crossings, boundary)
    units = []
    by_tag = {}
    for ci, x in enumerate(crossings):
        if group_tags and x.tag is not None:
            if x.tag not in by_tag:
                by_tag[x.tag] = len(units)
                units.append(["region", [], x.tag])
            units[by_tag[x.tag]][1].append(ci)
        else:
            units.append(["crossing", [ci], None])

    def unit_points(unit):
        pts = [slot_labels[ci, s] for ci in unit[1] for s in range(4)]
        if unit[0] == "crossing":
            return tuple(pts)
        inner = set(pts)
        return tuple(p for p in pts if p ^ 1 not in inner)

    points = [unit_points(u) for u in units]
    open_pts = set()
    remaining = list(range(len(units)))
    pieces, widths = [], []
    while remaining:
        best = None
        for u in remaining:
            pts = points[u]
            shared = sum(1 for p in pts if p ^ 1 in open_pts)
            width = len(open_pts) - shared + (len(pts) - shared)
            key = (-shared, width, units[u][0] != "region", u)
            if best is None or key < best[0]:
                best = (key, u)
        u = best[1]
        remaining.remove(u)
        kind, cis, tag = units[u]
        pts = points[u]
        for p in pts:
            if p ^ 1 in open_pts:
                open_pts.discard(p ^ 1)
            else:
                open_pts.add(p)
        pieces.append(Piece(kind, tuple(cis), pts, tag))
        widths.append(len(open_pts))
    for e in circles:
        pieces.append(Piece("circle", (), (), e))
        widths.append(len(open_pts))
    if not pieces:
        widths.append(len(bnd))
    return TangleDecomposition(crossings, tuple(circles), tuple(pieces), tuple(widths),
                               bnd, slot_labels)


def recompose(dec):
    """Crossings and circles reassembled from a decomposition."""
    order = sorted(ci for p in dec.pieces for ci in p.crossings)
    if order != list(range(len(dec.crossings))):
        raise DiagramError("decomposition does not cover every crossing exactly once")
    circles = tuple(p.tag for p in dec.pieces if p.kind == "circle")
    return tuple(dec.crossings[ci] for ci in order), circles
