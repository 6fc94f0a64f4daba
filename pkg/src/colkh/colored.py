"""Colored Khovanov cohomology through twisted cables and the truncated P2 projector."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import count

from .cobordism import FlatTangle, TangleComplex, relabel, shift
from .diagram import Tangle, cable, decompose, insert_twists, open_cut_sites, twist_crossings
from .homology import BigradedGroups, cohomology
from .simplify import ScanStats, closed_to_bigraded, scan

log = logging.getLogger(__name__)


class TruncationError(RuntimeError):
    """The projector truncation (or a window) is too small for the request."""

    def __init__(self, message, suggested=None):
        self.suggested = suggested
        super().__init__(message)


class ProjectorError(RuntimeError):
    """The reduced twisted 2-braid complex does not have the expected shape."""


@dataclass(frozen=True)
class ApproximantSpec:
    r: int
    colors: tuple
    shift2: tuple  # doubled (h2, q2)

    @property
    def plain_shift(self):
        return self.shift2[0] // 2, self.shift2[1] // 2


@dataclass(frozen=True)
class StabilizationCertificate:
    j: int
    r: int
    B: int
    Q0: int
    method: str = "certified"

    def to_dict(self):
        return {"j": self.j, "r": self.r, "method": self.method, "B": self.B, "Q0": self.Q0}


@dataclass(frozen=True)
class TruncatedProjector:
    N: int
    complex: TangleComplex

    def degrees(self):
        return [(o.h2 // 2, o.q2 // 2) for o in self.complex.objects]


@dataclass
class ColoredResult:
    groups: BigradedGroups
    certificates: list = field(default_factory=list)
    r: int | None = None
    history: dict = field(default_factory=dict)


def _twisted_sites(link):
    return [k for k, c in enumerate(link.colors) if c >= 2]


def approximant(link, r):
    """Cable with ``c(k) * r`` twist rows at each lifted basepoint, plus its shift."""
    if r < 0:
        raise ValueError("r must be non-negative")
    D = cable(link)
    total = 0
    for k in _twisted_sites(link):
        c = link.colors[k]
        D = insert_twists(D, D.cut_sites[k], c, c * r, tag=("twist", k))
        total += r * c * (c - 1)
    return D, ApproximantSpec(r, tuple(link.colors), (total, total))


def reduce_closed(diagram, replacements=None, stats=None):
    """Scan a closed diagram and return its bigraded integer complex."""
    C = scan(decompose(diagram), replacements=replacements, stats=stats)
    return closed_to_bigraded(C)


def approximant_groups(link, r, stats=None):
    """Cohomology of the shifted approximant at twist parameter ``r``."""
    D, spec = approximant(link, r)
    C = reduce_closed(D, stats=stats)
    return cohomology(C.shifted(*spec.shift2))


def away_part_min_q(link):
    """Lowest ``q - #arcs`` over the reduced complex of the cable cut open at its basepoints."""
    T = open_cut_sites(cable(link))
    C = scan(decompose(T))
    low = min(o.q2 - 2 * o.arcs for o in C.objects)
    return low // 2


def bound(colors, r, Q0):
    twisted = [c for c in colors if c >= 2]
    if not twisted:
        return None
    return min(2 * c * (r - 1) + 1 for c in twisted) + Q0


def certified_r(colors, j, Q0):
    """Smallest ``r >= 0`` with ``j <= B(r) - 2``; returns a certificate."""
    colors = tuple(colors)
    if bound(colors, 0, Q0) is None:
        return StabilizationCertificate(j, 0, 0, Q0)
    r = 0
    while j > bound(colors, r, Q0) - 2:
        r += 1
    return StabilizationCertificate(j, r, bound(colors, r, Q0), Q0)


def _map(fn, args, threads):
    if threads and threads > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, *zip(*args)))
    return [fn(*a) for a in args]


def colored_kh(link, qmin, qmax, mode="certified", k=2, r=None, r_max=40,
               check_stability=False, threads=1):
    """Colored cohomology on the window ``qmin <= j <= qmax``.

    ``r`` forces a fixed twist count (no certificates).  In certified mode
    the groups come from the largest certified r over the window; with
    ``check_stability`` they are recomputed at r + 1 and compared.
    """
    if r is not None:
        G = approximant_groups(link, r).window(qmin, qmax)
        return ColoredResult(G.require_integral(), [], r)
    if mode == "certified":
        Q0 = away_part_min_q(link)
        per_j = [certified_r(link.colors, j, Q0) for j in range(qmin, qmax + 1)]
        rstar = max((c.r for c in per_j), default=0)
        rs = [rstar, rstar + 1] if check_stability else [rstar]
        results = _map(approximant_groups, [(link, x) for x in rs], threads)
        G = results[0].window(qmin, qmax).require_integral()
        history = {x: g.window(qmin, qmax) for x, g in zip(rs, results)}
        B = bound(link.colors, rstar, Q0)
        certs = [StabilizationCertificate(c.j, rstar, B if B is not None else 0, Q0)
                 for c in per_j]
        if check_stability and history[rstar] != history[rstar + 1]:
            raise AssertionError(f"certified groups changed between r={rstar} and r={rstar + 1}")
        return ColoredResult(G, [c.to_dict() for c in certs], rstar, history)
    if mode == "empirical":
        history = {}
        streak = 1
        prev = None
        for x in range(r_max + 1):
            G = approximant_groups(link, x).window(qmin, qmax)
            history[x] = G
            streak = streak + 1 if G == prev else 1
            prev = G
            if streak >= k:
                first = x - k + 1
                certs = [{"j": j, "r": first, "method": "empirical", "agree": k}
                         for j in range(qmin, qmax + 1)]
                return ColoredResult(G.require_integral(), certs, first, history)
        raise TruncationError(f"no {k} consecutive agreements up to r={r_max}")
    raise ValueError(f"unknown mode {mode!r}")


# ------------------------------------------------------------ projector route

IDENTITY = ((0, 2), (1, 3))
TURNBACK = ((0, 1), (2, 3))


def truncated_p2(N):
    """Reduced complex of the 2-braid sigma_1^N, shifted by doubled (N, N).

    Boundary points 0, 1 are the bottom ends (left, right) and 2, 3 the top
    ends.  The reduction must leave the identity at (0, 0) and one turnback
    at plain (d, 2d - 1) for each 1 <= d <= N.
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    if N == 0:
        C = TangleComplex((0, 1, 2, 3), (FlatTangle(IDENTITY),), {}, 0)
        return TruncatedProjector(0, C)
    xs = twist_crossings([1, 2], [3, 4], N, count(5), tag=None)
    dec = decompose(Tangle(tuple(xs), (1, 2, 3, 4)))
    C = scan(dec)
    C = relabel(C, dict(zip(dec.boundary, range(4))))
    C = shift(C, N, N)
    got = sorted((o.h2, o.q2, o.matching) for o in C.objects)
    want = [(0, 0, IDENTITY)] + [(2 * d, 4 * d - 2, TURNBACK) for d in range(1, N + 1)]
    if got != want:
        raise ProjectorError(f"unexpected truncated projector objects: {got}")
    return TruncatedProjector(N, C)


def _region_points(dec, tag):
    # first braid crossing holds the bottom ends, the last one the top ends
    cis = [ci for p in dec.pieces if p.kind == "region" and p.tag == tag for ci in p.crossings]
    first, last = min(cis), max(cis)
    lab = dec.labels
    return [lab[first, 3], lab[first, 0], lab[last, 2], lab[last, 1]]


def projector_groups(link, N):
    """Cohomology with the truncated projector in place of each 2-colored twist region."""
    if any(c > 2 for c in link.colors):
        raise ValueError("projector route supports colors <= 2")
    D, _ = approximant(link, 1)
    dec = decompose(D)
    P = truncated_p2(N).complex
    repl = {}
    for k in _twisted_sites(link):
        tag = ("twist", k)
        repl[tag] = relabel(P, dict(enumerate(_region_points(dec, tag))))
    C = scan(dec, replacements=repl)
    return cohomology(closed_to_bigraded(C))


def colored_kh_via_projector(link, N, qmin, qmax):
    """Projector-route groups on a window, checked against truncation N + 2."""
    if any(c > 2 for c in link.colors):
        raise ValueError("projector route supports colors <= 2")
    if not _twisted_sites(link):
        return approximant_groups(link, 0).window(qmin, qmax)
    G = projector_groups(link, N).window(qmin, qmax)
    G2 = projector_groups(link, N + 2).window(qmin, qmax)
    if G != G2:
        raise TruncationError(f"truncation N={N} is too small for j <= {qmax}", suggested=N + 4)
    return G.require_integral()


# ------------------------------------------------------------ framing and tails

def framing_shift_2cable(df):
    """Doubled bigrading shift and absorbed twist count for a framing change ``df``."""
    return (2 * df, 6 * df), df


def detect_tail_periodicity(G, max_period, window=None, min_periods=3):
    """All ``(dq, di, onset)`` with ``G[i, j] = G[i + di, j + dq]`` for ``j >= onset``.

    Plain gradings.  ``window`` is the computed ``(qmin, qmax)`` range
    (default: the span of nonzero groups) and must cover ``min_periods``
    periods of ``max_period``.  Results are sorted by onset.
    """
    if window is None:
        qs = [q2 // 2 for q2 in G.qdegrees()] or [0]
        window = (min(qs), max(qs))
    lo, hi = window
    if hi - lo < min_periods * max_period:
        raise TruncationError(f"window [{lo}, {hi}] is narrower than {min_periods} periods "
                              f"of {max_period}")
    rows = {}
    for (h2, q2), g in G.groups.items():
        rows.setdefault(q2, {})[h2] = g
    out = []
    for dq in range(1, max_period + 1):
        for di in range(-2 * max_period, 2 * max_period + 1):
            onset = None
            for j in range(hi - dq, lo - 1, -1):
                a = rows.get(2 * j, {})
                b = {h - 2 * di: g for h, g in rows.get(2 * (j + dq), {}).items()}
                if a != b:
                    break
                onset = j
            if onset is not None and onset <= hi - min_periods * dq:
                out.append((dq, di, onset))
    out.sort(key=lambda t: (t[2], t[0], abs(t[1]), t[1]))
    return out
