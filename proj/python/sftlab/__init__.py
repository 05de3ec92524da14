from ._sftlab import (
    beta_critical_potts,
    beta_n,
    beta_star,
    ell_critical,
    encircling_loops,
    htop_identity,
    onsager_htop,
    onsager_minus_beta_f,
    peierls_bound,
    run_cli,
    spectrum_check,
    trace_m_alpha_pow,
    verify_potts,
    vertex_census_counts,
)

__all__ = [
    "beta_critical_potts",
    "beta_n",
    "beta_star",
    "ell_critical",
    "encircling_loops",
    "htop_identity",
    "onsager_htop",
    "onsager_minus_beta_f",
    "peierls_bound",
    "run_cli",
    "spectrum_check",
    "trace_m_alpha_pow",
    "verify_potts",
    "vertex_census_counts",
]
