"""Twisted second moments of Dirichlet L-functions over even primitive characters.

Brute-force family sums via Hurwitz zeta, closed-form main-term predictions,
and numerical checks of the exact identities those predictions rest on.
"""

__version__ = "0.1.0"
