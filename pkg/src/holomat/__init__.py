"""holomat: a computational laboratory for Hermitian connections.

Modules:
    fiber    -- Hermitian fibers, complex structures, skew endomorphisms
    forms    -- exterior algebra on a fiber: Lefschetz, Hodge star, identities
    models   -- manifold backends: Lie groups and coordinate-chart metrics
    conn     -- Chern / Bismut / Gauduchon / Levi-Civita connections
    hol      -- matrix Lie subalgebras and holonomy approximation
    rep      -- unitary representations on exterior powers
    kforms   -- algebraic curvature tensors and positivity machinery
    verify   -- theorem-level verification pipelines and reports
    cli      -- command-line entry point
"""

__version__ = "0.1.0"

__all__ = [
    "fiber",
    "forms",
    "models",
    "conn",
    "hol",
    "rep",
    "kforms",
    "verify",
    "cli",
    "__version__",
]
