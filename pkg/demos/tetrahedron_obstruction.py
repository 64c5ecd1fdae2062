"""
The tetrahedron acts non-trivially
==================================

sigma_3 (the tetrahedron with its wheel correction) is a cycle in the graph
complex.  Acting by it on the rank-one TQFT only adds the tetrahedron graph,
and the gauge solver shows this change cannot be undone.  Takes a few seconds.
"""

from modcohft.cohft import FrobeniusData, frobenius_tqft, br
from modcohft.complexes import GA, Truncation
from modcohft.complexes.homology import gauge_equivalent
from modcohft.complexes.operad import sigma3, check_cycle, act_on_gA, describe

print("sigma3 is a theta-cycle:", check_cycle(sigma3(), 'cgra-theta')["verdict"])

F = FrobeniusData.rank_one()
W = Truncation(4, 3)
alpha = br(frobenius_tqft(F, 4), W)
beta = act_on_gA(sigma3(), alpha, F.A, W)

ga = GA(F.A, W)
print("still a quantum MC element:", not ga.quantum_master_residual(beta))
for (G, h), c in (beta - alpha).items():
    print("difference:", c, describe(G, h))

res = gauge_equivalent(ga, beta, alpha, quantum=True)
print("verdict:", res["verdict"], "at weight", res["weight"])
for d in res["detected"]:
    print("  obstruction on", describe(*d["graph"]), "coefficient", d["target_coef"])
