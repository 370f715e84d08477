"""Spectral analysis of gyroscopic-dissipative Lagrangian systems.

The heavy lifting lives in the C++ extension; this package re-exports it.
"""

from gyrospec._core import (
    AsymptoticModel,
    DichotomyReport,
    GyroIoError,
    GyroNumericalError,
    GyroValidationError,
    IdentityReport,
    LagrangianSystem,
    LimitingFrequencies,
    Mode,
    ModeClass,
    Netlist,
    SweepResult,
    Trajectory,
    ValidationReport,
    __version__,
    characteristic_scalars,
    classify,
    compile_netlist,
    dual,
    emit_netlist,
    energy_balance_residual,
    expansion_coefficients,
    hamiltonian,
    identity_suite,
    integrate,
    kernel_reduced_system,
    limiting_frequencies,
    load_system,
    log_grid,
    overdamping_thresholds,
    parse_netlist,
    pencil,
    q_factor,
    rayleigh_power,
    save_system,
    spectrum,
    sweep,
    validate,
)

__all__ = [
    "AsymptoticModel",
    "DichotomyReport",
    "GyroIoError",
    "GyroNumericalError",
    "GyroValidationError",
    "IdentityReport",
    "LagrangianSystem",
    "LimitingFrequencies",
    "Mode",
    "ModeClass",
    "Netlist",
    "SweepResult",
    "Trajectory",
    "ValidationReport",
    "__version__",
    "characteristic_scalars",
    "classify",
    "compile_netlist",
    "dual",
    "emit_netlist",
    "energy_balance_residual",
    "expansion_coefficients",
    "hamiltonian",
    "identity_suite",
    "integrate",
    "kernel_reduced_system",
    "limiting_frequencies",
    "load_system",
    "log_grid",
    "overdamping_thresholds",
    "parse_netlist",
    "pencil",
    "q_factor",
    "rayleigh_power",
    "save_system",
    "spectrum",
    "sweep",
    "validate",
]
