"""Burnside ring of C_p, the Burnside Mackey functor and its Green structure.

Run: python3 demos/burnside_ring.py [p] [q]
"""

import sys

import numpy as np

from localcoeff.burnside import (BurnsideCategory, FiniteGSet, MackeyFunctor, Span, SpanHom, box_product,
                                 burnside_green, burnside_ring_product, green_check)
from localcoeff.groupring import FiniteGroup

p = int(sys.argv[1]) if len(sys.argv) > 1 else 3
q = int(sys.argv[2]) if len(sys.argv) > 2 else 7
g = FiniteGroup.cyclic(p)
pt, free = FiniteGSet.point(g), FiniteGSet.orbit(g, [g.identity])
zero = np.zeros(p, dtype=np.int64)

one = SpanHom.from_span(Span.identity(pt))
x = SpanHom.from_span(Span(pt, free, pt, zero, zero))
print("[C_p] * [C_p] =", burnside_ring_product(x, x))
print("(1 + [C_p])^2 =", burnside_ring_product(one + x, one + x))

cat = BurnsideCategory(g)
a = MackeyFunctor.burnside(cat, q)
print("\nA dims on (G/e, G/G):", a.dims)
print("res o tr on A(G/e):", (a.restriction(0, 1) @ a.transfer(0, 1)).array.tolist())
print("A box A dims:", box_product(a, a).functor.dims)

a, box, mult, unit = burnside_green(cat, q)
rep = green_check(a, box, mult, unit)
print("\nGreen functor check passed:", rep.passed)
print("structure constants at G/G (k, i, j):")
print(rep.algebras[cat.top])
