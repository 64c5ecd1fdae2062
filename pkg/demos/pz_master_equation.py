"""
The Pandharipande-Zvonkine element and its deformation
=======================================================

Build the PZ element for m = 1, check the master equation, then add the
element coming from a symbolic minimal class on M_{2,1}.
"""

from modcohft.coeffs import register_minimal
from modcohft.cohft import pz_alpha, pz_lambda, br
from modcohft.complexes import GA, Truncation

N = 4
A, alpha = pz_alpha(1, N)
ga = GA(A, Truncation(N))
print("terms in alpha:", len(alpha))
print("master residual is zero:", not ga.master_residual(alpha))

# a minimal class is a primitive: killed by every boundary map
name = register_minimal(2, 1)
_, lam = pz_lambda(name, N)
print("terms in lambda:", len(lam))
print("alpha + lambda solves it too:", not ga.master_residual(alpha + lam))

# the Buryak-Rossi functor sends it to a quantum solution
W = Truncation(N, 3)
print("quantum residual of br(alpha):", GA(A, W).quantum_master_residual(br(alpha, W)) or 0)
