"""Representative families over matroids, and algorithms built on them."""
from .errors import RepfamError
from .kpath import k_path, x_schedule
from .matroid import GraphSpec, LinearMatroid, contract, graphic_matroid, uniform_matroid
from .mld import parse_circuit, solve_kwmld, solve_kwmmld
from .product import ProductSpec, product_repset_all_sizes, product_repset_linear, product_repset_uniform
from .repset import WeightedFamily, compute_repset_linear, truncate
from .sepcol import SeparatingCollection, build_collection, compute_repset_uniform
from .twdp import feedback_vertex_set, make_nice, steiner_tree

__version__ = "0.1.0"
