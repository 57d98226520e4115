from .core import (
    Crossing,
    LinkDiagram,
    build_diagram,
    concordance_inverse,
    linking_matrix,
    mirror,
    reverse,
    reverse_all,
    switch_crossing,
)
from .faces import FaceStructure, check_planar
from .generators import (
    CORPUS,
    corpus,
    generate_bing_pairs_gpc,
    generate_hopf,
    generate_nghl,
    generate_twist_family,
    generate_unlink,
    generate_whitehead_doubled_hopf,
    whitehead_double,
)
from .pd import parse_pd, to_pd
from .planar import braid_closure
from .surgery import (
    BandCrossing,
    BandFoot,
    BandSpec,
    attach_fusion_band,
    insert_generalized_positive_crossing,
    insert_twist,
    smooth_crossing,
    sublink,
)

__all__ = [
    "CORPUS",
    "BandCrossing",
    "BandFoot",
    "BandSpec",
    "Crossing",
    "FaceStructure",
    "LinkDiagram",
    "attach_fusion_band",
    "braid_closure",
    "build_diagram",
    "check_planar",
    "concordance_inverse",
    "corpus",
    "generate_bing_pairs_gpc",
    "generate_hopf",
    "generate_nghl",
    "generate_twist_family",
    "generate_unlink",
    "generate_whitehead_doubled_hopf",
    "insert_generalized_positive_crossing",
    "insert_twist",
    "linking_matrix",
    "mirror",
    "parse_pd",
    "reverse",
    "reverse_all",
    "smooth_crossing",
    "sublink",
    "switch_crossing",
    "to_pd",
    "whitehead_double",
]
