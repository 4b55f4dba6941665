"""Bessel integrals, Voronoi summation, and moments of L-functions over
Q and the norm-Euclidean imaginary quadratic fields.

Subpackage map:
    fields       exact field/ideal arithmetic (Fractions throughout)
    expsums      Kloosterman and Ramanujan sums
    special      complex gamma, digamma, Hurwitz zeta (hand-rolled)
    lfun         Dedekind zeta, Laurent constants, gamma factors, AFE weights
    bessel       real/complex Bessel kernels, asymptotics, Mellin transforms
    quadrature   oscillatory Gauss-Legendre panel machinery
    oscillatory  spectral-weight integrals and their surrogates
    regions      hyperbolic-coordinate region measures and emptiness tests
    voronoi      the summation formula, both sides, with certified tails
    moments      diagonal/Eisenstein/off-diagonal terms, predictions
    spectral_data  Maass-form data ingestion and validation
    cli          command-line interface (`bml ...`)
"""

__version__ = "0.1.0"

_SUBMODULES = {
    "fields", "expsums", "special", "lfun", "bessel", "quadrature",
    "oscillatory", "regions", "voronoi", "moments", "spectral_data",
    "suite", "cli", "reports", "errors",
}


def __getattr__(name):
    # lazy submodule access: `import bml; bml.moments` works without paying
    # scipy import cost for light uses
    if name in _SUBMODULES:
        import importlib

        mod = importlib.import_module(f".{name}", __name__)
        globals()[name] = mod
        return mod
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
