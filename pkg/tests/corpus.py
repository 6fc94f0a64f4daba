"""Closed test diagrams with at most 10 crossings."""

from colkh.diagram import add_kink, braid_closure, disjoint_union, parse_pd, unlink


def kinked(signs):
    d = unlink(1)
    for s in signs:
        d = add_kink(d, min(d.edges), s)
    return d


CORPUS = {
    "unknot": unlink(1),
    "unlink2": unlink(2),
    "unlink3": unlink(3),
    "kink+": kinked([1]),
    "kink-": kinked([-1]),
    "kink++": kinked([1, 1]),
    "kink+-": kinked([1, -1]),
    **{f"T(2,{k})": braid_closure([1] * k) for k in range(2, 8)},
    "T(2,-3)": braid_closure([-1] * 3),
    "T(2,-4)": braid_closure([-1] * 4),
    "figure8": braid_closure([1, -2, 1, -2]),
    "5_2": braid_closure([1, 1, 1, 2, -1, 2]),
    "6_1": braid_closure([1, 1, 2, -1, -3, 2, -3]),
    "granny": braid_closure([1, 1, 1, 2, 2, 2]),
    "square": braid_closure([1, 1, 1, -2, -2, -2]),
    "hopf+unknot": disjoint_union(braid_closure([1, 1]), unlink(1)),
    "trefoil-pd": parse_pd("X[1,5,2,4]\nX[3,1,4,6]\nX[5,3,6,2]\n"),
    "T(3,3)": braid_closure([1, 2] * 3),
}

# pairs of diagrams related by a single Reidemeister II or III move
MOVE_PAIRS = {
    "R2 on trefoil": ([1, 1, 1], [1, -1, 1, 1, 1]),
    "R2 on 3 strands": ([1, 2], [1, 2, -1, 1]),
    "R2 on figure8": ([1, -2, 1, -2], [1, -2, 2, -2, 1, -2]),
    "R3 plain": ([1, 2, 1], [2, 1, 2]),
    "R3 with tail": ([1, 2, 1, 1], [2, 1, 2, 1]),
    "R3 mixed": ([1, 2, 1, -2], [2, 1, 2, -2]),
    "R3 negative": ([-1, -2, -1], [-2, -1, -2]),
    "R3 on 4 strands": ([2, 3, 2, 1], [3, 2, 3, 1]),
}
