"""Homology of real projective space with trivial and twisted coefficients.

Run: python3 demos/projective_space.py
"""

from localcoeff import models
from localcoeff.eilenberg import eilenberg_cohomology, eilenberg_homology
from localcoeff.groupring import FiniteGroup, GroupRingModule

q = 5
for N in range(1, 7):
    x = models.sphere_antipodal(N, q)
    triv = eilenberg_homology(x, GroupRingModule.trivial(x.group, q))
    sign = eilenberg_homology(x, GroupRingModule.sign(x.group, q))
    print(f"RP^{N}  trivial {triv.target}  sign {sign.target}  collapsed={triv.collapsed and sign.collapsed}")

# modular case: C_3 acting on F_3, where the group ring is not semisimple
x = models.k_pi_1(FiniteGroup.cyclic(3), 8, 3)
res = eilenberg_cohomology(x, GroupRingModule.trivial(x.group, 3, side="right"))
print("H^*(C_3; F_3) through degree", res.valid_through, ":", res.target[:res.valid_through + 1])
