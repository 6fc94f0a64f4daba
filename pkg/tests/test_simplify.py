import pytest

from colkh.cobordism import FlatTangle, TangleComplex, crossing_complex
from colkh.colored import approximant
from colkh.diagram import Crossing, Tangle, braid_closure, decompose, unlink, with_colors
from colkh.homology import cohomology
from colkh.simplify import (
    CrossingLimitError, ResourceLimitError, ScanStats, closed_to_bigraded, deloop,
    gauss_eliminate, naive_cube, scan,
)
from corpus import CORPUS, MOVE_PAIRS


def scan_groups(d, stats=None):
    return cohomology(closed_to_bigraded(scan(decompose(d), stats=stats)).check())


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_scan_matches_naive_cube(name):
    d = CORPUS[name]
    assert len(d.crossings) <= 10
    assert scan_groups(d) == cohomology(naive_cube(d).check())


@pytest.mark.parametrize("name", sorted(MOVE_PAIRS))
def test_reidemeister_pairs(name):
    w1, w2 = MOVE_PAIRS[name]
    n = max(abs(g) for g in w1 + w2) + 1
    assert scan_groups(braid_closure(w1, n)) == scan_groups(braid_closure(w2, n))


def test_naive_cube_small_cases():
    u = cohomology(naive_cube(unlink(1)))
    assert u.groups == {(0, -2): (1, ()), (0, 2): (1, ())}
    assert cohomology(naive_cube(CORPUS["kink+"])).total_rank() == 2
    assert cohomology(naive_cube(CORPUS["T(2,2)"])).total_rank() == 4
    with pytest.raises(CrossingLimitError):
        naive_cube(braid_closure([1] * 13))


def test_frozen_trefoil():
    # frozen from the naive cube oracle (doubled gradings)
    want = {(-3, -7): (1, ()), (-3, -3): (1, ()), (1, 1): (1, ()), (3, 5): (0, (2,)),
            (3, 9): (1, ())}
    assert scan_groups(CORPUS["T(2,3)"]).groups == want


def test_deloop_single_circle():
    C = TangleComplex((), (FlatTangle((), 1, 0, 0),), {}, 0)
    D = deloop(C)
    assert sorted((o.h2, o.q2) for o in D.objects) == [(0, -2), (0, 2)]
    X = crossing_complex((0, 1, 2, 3))
    assert deloop(X) is X


def test_gauss_identity_pair():
    o = FlatTangle(((0, 1),), 0, 0, 0)
    C = TangleComplex((0, 1), (o, o.shifted(2, 0)), {(0, 1): {frozenset(): 1}}, 0)
    assert len(gauss_eliminate(C)) == 0
    X = crossing_complex((0, 1, 2, 3))
    assert gauss_eliminate(X).objects == X.objects


def test_r2_tangle_reduces_to_identity():
    # sigma_1 sigma_1^{-1} as a tangle: one object, the identity braid
    xs = (Crossing((2, 4, 3, 1)), Crossing((3, 4, 6, 5)))
    T = scan(decompose(Tangle(xs, (1, 2, 5, 6))))
    assert len(T) == 1
    assert (T.objects[0].h2, T.objects[0].q2) == (0, 0)


def test_scan_deterministic():
    d = braid_closure([1, -2, 1, -2, 1])
    a = scan(decompose(d))
    b = scan(decompose(d))
    assert a.objects == b.objects and a.d == b.d


def test_resource_cap(monkeypatch):
    monkeypatch.setenv("CKH_OBJECT_CAP", "3")
    with pytest.raises(ResourceLimitError) as err:
        scan(decompose(braid_closure([1, -2, 1, -2])))
    assert err.value.cap == 3


# max objects per step, recorded when the engine was written
BASELINES = {"T(2,7)": 42, "figure8": 30, "trefoil 2-cable r=8": 228}


@pytest.mark.parametrize("name", sorted(BASELINES))
def test_telemetry_guardrail(name):
    st = ScanStats()
    if name in CORPUS:
        scan(decompose(CORPUS[name]), stats=st)
    else:
        d, _ = approximant(with_colors(braid_closure([1, 1, 1]), (2,)), 8)
        scan(decompose(d), stats=st)
    assert st.max_objects <= 2 * BASELINES[name]
