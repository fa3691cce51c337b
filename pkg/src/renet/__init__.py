"""Reconfigurable decorated place/transition nets.

Token-game semantics with capacities, renewable transition labels,
inhibitor arcs and transition priorities; rule-based net transformation
through gluing squares; bounded state-space exploration; and a finite
poset category kernel with universal-property oracles backing it all.
"""

from .canonical import canonical_form, canonical_key
from .errors import (
    AntisymmetryViolation,
    BoundTooSmall,
    ComplementNotPushout,
    DocumentError,
    GluingViolated,
    InvalidCube,
    InvalidMorphism,
    NotEnabled,
    NotEnabledParallel,
    ParseError,
    RenetError,
    ResolutionError,
    UnknownTransition,
    ValidationError,
)
from .explore import (
    ReachabilityGraph,
    ReconfigurableNet,
    SimulationResult,
    StepLabel,
    explore,
    simulate,
    successors,
)
from .morphisms import NetMorphism, check_morphism, identity_morphism, is_strict
from .nets import (
    OMEGA,
    DecoratedNet,
    Multiset,
    RENEW_FUNCTIONS,
    blocking_condition,
    decorated_net,
    enabled,
    enabled_set,
    fire,
    fire_parallel,
    make_label,
    renew_label,
    validate_net,
)
from .oracles import (
    Cube,
    VkReport,
    all_posets,
    check_adjunction,
    check_vk_square,
    count_monotone_maps,
    monotone_maps,
    verify_pullback,
    verify_pushout,
)
from .posets import (
    Cospan,
    MonotoneMap,
    Poset,
    Span,
    discrete,
    initial_poset,
    is_order_embedding,
    is_strict_order_embedding,
    poset,
    pullback,
    pushout,
    pushout_raw_relation,
    set_pushout,
    underlying,
    validate_poset,
)
from .rewrite import (
    GluingReport,
    RewriteResult,
    Rule,
    apply_rule,
    check_gluing,
    find_matches,
    inverse_rule,
    make_rule,
    net_isomorphic,
    pushout_complement,
)

__version__ = "0.1.0"
