"""Categorical network dynamics toolkit.

Networks of neurons are finite directed graphs carrying consistent
("summing") assignments of resources: weighted codes, transition
systems, probabilities.  The toolkit evolves those assignments by a
gated wedge-sum dynamics that reduces to the classical threshold-linear
weight recursion, composes per-node automata into architecture-level
transition systems along condensation graphs, and analyzes networks
through directed clique homology, entropy cocycles, and geometric
integrated information.
"""

from .graph import (
    DiGraph,
    PointedDiGraph,
    CycleDetected,
    condensation,
    gen_erdos_renyi,
    gen_erdos_renyi_undirected,
    gen_mlp,
    kahn_order,
    tarjan_scc,
    to_pointed,
)
from .simplicial import (
    Filtration,
    SimplicialComplex,
    betti,
    code_nerve,
    connectivity_proxy,
    directed_flag_complex,
    persistence,
    undirected_flag_complex,
)
from .codes import (
    Code,
    WeightedCode,
    concat_sum,
    gen_bernoulli_code,
    is_code_morphism,
    mix_law_check,
    probability,
    total_weight,
    wedge_sum,
)
from .resources import (
    Measuring,
    RealResource,
    VectorResource,
    conversion_rate,
    threshold,
)
from .netfunctors import (
    SummingFunctor,
    inclusion_exclusion_check,
    is_in_equalizer,
    pushforward,
)
from .hopfield import (
    CodeExpr,
    HopfieldState,
    HopfieldSystem,
    run,
    state_from_codes,
    step_categorical,
    step_classical,
    verify_reduction,
)
from .transitions import (
    DistributedStructure,
    TransitionSystem,
    coproduct,
    extract_code,
    graft,
    graft_acyclic,
    graft_strong,
    language_words,
    product,
    xi,
    xi_t,
)
from .information import (
    JointDistribution,
    VariableSpec,
    coboundary0,
    coboundary1,
    entropy,
    kl,
    qx_complex,
    sigma_action,
)
from .integinfo import (
    SystemPartition,
    feedforward_ii,
    hopfield_ii_trace,
    ii,
    ii_lambda,
    manifold_residual,
    project,
    pythagorean_check,
)

__version__ = "0.1.0"
