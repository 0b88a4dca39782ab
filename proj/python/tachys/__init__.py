"""Time-optimal qubit evolution, quasi-Hermitian dynamics and their Hermitian dilation."""

from ._tachys import (
    BlochBasis,
    DilationModel,
    Metric,
    TachysError,
    aligned_hamiltonian,
    build_dilation,
    cloning_defect,
    control_u_channel,
    discrimination_povm,
    dissipation_row,
    dissipative_factor,
    efficiency_bound,
    efficiency_of,
    energy_gap_sq,
    evolve_dilated,
    evolve_semigroup,
    expm,
    fidelity,
    first_passage_scan,
    make_bloch_basis,
    minimal_time,
    not_roundtrip,
    optimal_hamiltonian,
    pseudo_hermiticity_defect,
    quasi_hamiltonian,
    run_cli,
    shifted_generator,
    solve_brachistochrone,
    split,
    visibility_ratio,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
