"""Computable topology on budgeted names.

Points, open sets and compact sets are given by names: lazy streams of
binary words, read a finite prefix at a time under a step budget.  The
package builds computable spaces on top of these names (Euclidean space,
induced spaces of predicate subbases, products, subspaces), manifolds given
by computable atlases, and the embedding of compact computable manifolds into
Euclidean space.
"""

from .ball import RationalBall, format_ball, parse_ball
from .embed import embed_compact
from .espace import separate_points
from .euclid import enclosure_at, euclidean_space, point_from_rational
from .gallery import make
from .manifold import ManifoldSpace, ambient_enclosure, ambient_enclosure_at, open_submanifold
from .names import Confirmed, ContractViolation, Discipline, Name, Unknown, member_semidecide

__version__ = "0.1.0"

__all__ = [
    "Confirmed",
    "ContractViolation",
    "Discipline",
    "ManifoldSpace",
    "Name",
    "RationalBall",
    "Unknown",
    "ambient_enclosure",
    "ambient_enclosure_at",
    "embed_compact",
    "enclosure_at",
    "euclidean_space",
    "format_ball",
    "make",
    "member_semidecide",
    "open_submanifold",
    "parse_ball",
    "point_from_rational",
    "separate_points",
]
