"""The built S matrices as intertwiners of quantum affine algebra modules."""

from qreflect.scalar import ONE
from qreflect.uqrep import ALGEBRA_FOR, AlgebraSpec, check_intertwiner, check_weyl, rep_generator

# %% The spin representation of D2 at n = 2: e_0 adds the first bit and
# carries the spectral parameter.
spec = AlgebraSpec("D2", 2)
for gen in ("e", "f", "k"):
    M = rep_generator(spec, gen, 0).matrix
    print(gen + "_0:", {f"{c}->{r}": str(v) for (r, c), v in sorted(M.entries.items())})

# %% The Cartan data is sanity checked through k e k^-1 = p_j^2 e and [e, f].
print(check_weyl(spec).to_json())

# %% Each algebra row and its S matrix.
for t, fam in ALGEBRA_FOR.items():
    print(f"  {t:7s} -> S^{fam}")

# %% Type A, the (1, 1) block at n = 3, and the spin rows at n = 2 with both
# choices of p = +-i/q.
print(check_intertwiner(AlgebraSpec("A", 3), l=1, m=1).to_json())
for t in ("D2", "B", "Btilde"):
    for sign in (1, -1):
        print(t, sign, check_intertwiner(AlgebraSpec(t, 2, sign)).status)
print(check_intertwiner(AlgebraSpec("D1", 2), sigma=1, sigmap=-1).to_json())
