"""The Serre computation for BO(2) -> BZ/2, plain and C_p-equivariant.

Run: python3 demos/bo2.py [p] [q]
"""

import sys

from localcoeff.eilenberg import bo2_pipeline

p = int(sys.argv[1]) if len(sys.argv) > 1 else 3
q = int(sys.argv[2]) if len(sys.argv) > 2 else 5
rep = bo2_pipeline(p, q, t_max=24)

print("dim H^n(BO(2); F_q), n = 0..24:")
print(" ", rep.nonequivariant)
print(f"\nC_{p} generator labels (sign of the involution, E2 column at s = 0..3):")
for e in rep.equivariant:
    mark = "fixed" if e.fixed else ""
    print(f"  {str(e.label):8s} real dim {e.real_dim:3d}  sign {e.sign:+d}  {e.e2}  {mark}")
print("\nfixed labels match the even-sign rule:", rep.fixed_matches)
for lab, w in rep.decomposition.entries[:8]:
    print(f"  {lab} = " + (" * ".join(f"({g})^{k}" if k > 1 else str(g) for g, k in w.items()) or "1"))
