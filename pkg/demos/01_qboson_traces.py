"""q-boson words, their traces, and the brute-force Fock sums behind them."""

from fractions import Fraction

from qreflect.oracle import agree, exact_series, trace_oracle
from qreflect.qboson import (DOUBLED, SINGLE, TruncatedState, apply_truncated, boundary_eval,
                             normal_order, trace_eval, word)
from qreflect.scalar import monomial

# %% The single q-boson: a+ raises, a- lowers with a factor 1 - q^(2m), and
# k = q^(h + 1/2) carries the zero-point half power.
v = TruncatedState.basis(SINGLE, 3)
for letter in ("a+", "a-", "k"):
    print(f"{letter:>2} |3> =", apply_truncated(word(SINGLE, letter), v).amps)

# %% Normal ordering moves raising operators left and k-powers right.  A
# balanced pair a+ a- is kept as it is, since the trace formula uses it directly.
nf = normal_order(word(SINGLE, "a- k a+"))
for (r, s, h), c in sorted(nf.items(), key=str):
    print(f"  (a+)^{r} (a-)^{s} h-power {h}:  {c}")

# %% Tr(z^h X) over the doubled Fock space, in closed form.
Z = monomial(z=1)
w = word(DOUBLED, "A+ K A-")
exact = trace_eval(w, Z)
print("Tr(z^h A+ K A-) =", exact)

# %% The same trace as a plain sum over Fock levels at z = 1/2, truncated at
# q-degree 30.  Both expansions agree coefficient by coefficient.
z0 = Fraction(1, 2)
oracle = trace_oracle(w, z0, 30)
print("agree to q^30:", agree(exact, oracle, z0, 30))
print("first terms:", {e: c for e, c in sorted(exact_series(exact, z0, 10).items()) if c})

# %% Boundary evaluations replace the trace by a matrix element between the
# special vectors; k = k' = 2 kills every odd number of raising operators.
# Raw values may keep formal infinite products; inside S and K they cancel
# against the normalization.
print("<chi| a+ k |chi> =", boundary_eval(word(SINGLE, "a+ k"), 2, 2, Z))
print("<eta| a+ k |eta> =", boundary_eval(word(SINGLE, "a+ k"), 1, 1, Z))
