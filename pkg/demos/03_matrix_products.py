"""From local q-boson operators to spectral-parameter dependent S and K."""

from qreflect.matprod import block_decompose, build_k_boundary, build_k_trace, build_s_boundary, build_s_trace
from qreflect.verify import check_re, check_ybe

# %% n = 2, trace reduction: the weight (1, 1) block is the six-vertex model.
S = build_s_trace(2, 1, 1)
print(S.to_text())

# %% Every weight block of S^tr at n = 2.
for B in block_decompose(build_s_trace(2)):
    print(f"  block {B.block}: {len(B.entries)} nonzero entries")

# %% K^tr maps weight l to weight n - l.
print(build_k_trace(2).to_text())

# %% The boundary families carry two labels each.
print(build_s_boundary(1, 1, 2).to_text())
print(build_k_boundary(1, 2, 2).to_text())

# %% Yang-Baxter and reflection equations, exactly in q, x and y.
print(check_ybe("tr", 2).to_json())
print(check_ybe("boundary", 2, 1, 2).to_json())
print(check_re("tr", "tr", 2).to_json())
print(check_re("boundary", "boundary", 2, 1, 1, 1, 2).to_json())
