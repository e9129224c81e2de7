"""quadmaps: random planar quadrangulations via labelled trees.

Rooted quadrangulations with n faces correspond bijectively to plane trees
with n edges carrying positive labels (adjacent labels differing by at most
one, root label one), profile mapped onto label distribution.  The package
implements that codec, the blossom-tree conjugation sampler that makes both
tree families exactly uniform, the walk machinery behind it, exhaustive
enumeration oracles, and a reproducible Monte-Carlo harness for the
n^{1/4}-scaling experiments.
"""

from ._backend import backend_name
from .bijection import quad_radius_fast, quad_to_tree, tree_to_quad
from .blossom import (
    BlossomTree,
    blossom_to_embedded,
    conjugacy_class,
    embedded_to_blossom,
    labelling_process,
    sample_well_labelled_coupled,
)
from .enumeration import (
    enumerate_embedded,
    enumerate_plane_trees,
    enumerate_well_labelled,
    exact_counts,
)
from .labelled import (
    ContourPair,
    EmbeddedTree,
    WellLabelledTree,
    from_contour_pair,
    is_well_labelled,
    label_distribution,
    sample_embedded,
    scaled_paths,
    to_contour_pair,
    vertex_labels,
)
from .maps import PlanarMap, Profile, Quadrangulation, bfs_profile, build_map, faces
from .trees import (
    PlaneTree,
    Shape,
    contour_traversal,
    dyck_to_tree,
    extract_shape,
    sample_plane_tree,
    shape_matrix,
    tree_to_dyck,
)
from .walks import (
    LatticeWalk,
    count_ballot,
    cyclic_shift,
    is_positive_member,
    low_records,
    partial_sums,
    verify_cycle_lemma,
    walk_heights,
)

__version__ = "0.1.0"


def sample_quadrangulation(n, rng):
    """Uniform rooted quadrangulation with n faces, as a validated map."""
    w, _ = sample_well_labelled_coupled(n, rng)
    return tree_to_quad(w)
