"""Built-in fans used by the verification suite and the CLI.

The projective line lists v_{p0} = -1 before v_{p_inf} = +1, so that
O(a p0 + b p_inf) has polytope [-b, a].
"""

from __future__ import annotations

from .fan import Fan

P1 = Fan(((-1,), (1,)), ((0,), (1,)), ("p0", "pinf"))
P2 = Fan(((1, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2), (2, 0)))
P1xP1 = Fan(((1, 0), (-1, 0), (0, 1), (0, -1)), ((0, 2), (2, 1), (1, 3), (3, 0)))
F1 = Fan(((1, 0), (0, 1), (-1, 1), (0, -1)), ((0, 1), (1, 2), (2, 3), (3, 0)))
RAY = Fan(((1,),), ((0,),))
NONSMOOTH = Fan(((1, 0), (0, 1), (-1, -2)), ((0, 1), (1, 2), (2, 0)))

CATALOG: dict[str, Fan] = {
    "P1": P1,
    "P2": P2,
    "P1xP1": P1xP1,
    "F1": F1,
    "ray": RAY,
    "nonsmooth": NONSMOOTH,
}

# complete and smooth: the fans the cohomology and K-theory checks run on
SMOOTH_COMPLETE = ("P1", "P2", "P1xP1", "F1")
