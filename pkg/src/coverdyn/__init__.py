"""coverdyn: cover-based homology, induced-map spectra, and topological
entropy for finite dynamical models, with a checker for the inequality
ent(f_L) >= log rho(f_*)."""

from .entropy import (
    EntropySequence,
    ExpansionReport,
    FiberEntropyReport,
    SubcoverResult,
    TopologicalEntropyReport,
    cover_entropy,
    covering_number,
    entropy_estimate,
    expansion_multiplicity,
    fiber_entropy,
    minimal_subcover,
    topological_entropy,
)
from .errors import (
    AssignmentError,
    CarrierError,
    CoverdynError,
    DimensionError,
    DomainError,
    ModelMismatchError,
    NonCoverError,
    ScenarioError,
    WindowMismatchError,
)
from .fiber import (
    EigenchainWitness,
    EmbedReport,
    FiberNerve,
    OrbitFiber,
    build_fiber_nerve,
    decompose_eigenvalue,
    eigenchain_analysis,
    embed_cech_chains,
    fiber_homology,
    fiber_intersect,
    fiber_tower,
    intersection_axiom_audit,
    orbit_fiber,
)
from .induced import (
    ChainMap,
    EigenSupReport,
    HomologyMap,
    SimplicialAssignment,
    SpectralSummary,
    TowerReport,
    carrier_assignment,
    eigen_sup_chain,
    induced_chain_map,
    induced_homology_map,
    refinement_assignment,
    spectral_summary,
    tower_limit,
)
from .intlinalg import IntMatrix, SmithForm, char_poly, smith_normal_form
from .models import (
    Cover,
    Model,
    PLIntervalSpec,
    complement_cover,
    cover,
    discretize_interval_map,
    iterated_join,
    join,
    preimage_cover,
    refines,
)
from .nerve import (
    BoundaryMatrix,
    DualityReport,
    HomologyGroup,
    NerveComplex,
    PurityReport,
    Simplex,
    SimplicialComplex,
    boundary_matrix,
    build_nerve,
    cohomology,
    complement_representation,
    duality_audit,
    homology,
    homology_table,
    partial_dimension,
    purity_audit,
    raw_complex,
)
from .scenarios import Analysis, Scenario, builtin_scenario, load_scenario
from .verdict import VerdictReport, emit_report, run_verdict

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
