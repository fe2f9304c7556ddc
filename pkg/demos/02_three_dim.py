"""Matrix elements of the 3D R and the 3D K, and the identities they satisfy."""

from qreflect.scalar import ONE
from qreflect.threedim import k3d_apply, k3d_element, r3d_apply, r3d_element
from qreflect.verify import check_3dre_spot, check_inversion, check_quantized_re, check_tetra_spot

# %% Elements vanish unless the weights balance: a + b = i + j and b + c = j + k.
print("R^{130}_{312} =", r3d_element(1, 3, 0, 3, 1, 2))
print("R^{000}_{312} =", r3d_element(0, 0, 0, 3, 1, 2))
print("K^{1111}_{0210} =", k3d_element(1, 1, 1, 1, 0, 2, 1, 0))

# %% Applied to a basis vector the sums are finite.
image = r3d_apply({(1, 0, 1): ONE})
for idx, c in sorted(image.items()):
    print(f"  R|101> has {c} on |{idx}>")

# %% Both operators are involutions.
print(check_inversion("R", 3).status, check_inversion("K", 2, l_max=3).status)
v = {(0, 1, 1, 2): ONE}
print("K K |0112> == |0112>:", k3d_apply(k3d_apply(v)) == v)

# %% The tetrahedron and 3D reflection equations, contracted on one input.
print(check_tetra_spot((1, 0, 1, 0, 1, 1)).to_json())
print(check_3dre_spot((1, 0, 0, 1, 0, 0, 0, 1, 0)).to_json())

# %% The quantized reflection equation, all sixteen components on the
# states of total degree at most 3.
cert = check_quantized_re(3)
print(cert.status, cert.components, "components")
