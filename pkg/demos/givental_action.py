"""
Givental's action from graphs
=============================

An r-element is a cycle in the tautological graph complex.  Its action on a
TQFT agrees with Teleman's formula, and the Manin-Zograf elements just
multiply each vertex class.
"""

import random

from modcohft.cohft import FrobeniusData, frobenius_tqft
from modcohft.complexes import Truncation
from modcohft.complexes.operad import act_on_gA, check_cycle
from modcohft.givental import (givental_r, random_r_data, teleman_infinitesimal_oracle,
                               manin_zograf_l, mz_oracle, one_vertex_homology_window)

F = FrobeniusData.group_algebra_z2()
A, W = F.A, Truncation(3)
alpha = frobenius_tqft(F, 3)

rd = random_r_data(A, random.Random(1))
r = givental_r(A, rd)
print("r-data:", rd)
print("cycle:", check_cycle(r, 'tautgra-omega', A)["verdict"])

lhs = act_on_gA(r, alpha, A, W, infinitesimal=True)
print("matches Teleman:", lhs == teleman_infinitesimal_oracle(A, rd, alpha, W))

ell = {('k', 1): 1, ('ch', 1): 2}
print("Manin-Zograf is multiplication:",
      act_on_gA(manin_zograf_l(ell), alpha, A, W) == mz_oracle(ell, alpha, W))

# one-vertex homology grows like an enveloping algebra
print("one-vertex homology, rank one:",
      one_vertex_homology_window(FrobeniusData.rank_one().A, 3))
