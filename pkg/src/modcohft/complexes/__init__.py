from .vec import GVec, OVec, Truncation, weight, gvec
from .ga import GA, vertex_graph, disjoint_union
