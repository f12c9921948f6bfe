"""Verification engine for descent equations, Chern-Simons/WZW functionals,
symplectic structure on connection space, discrete Hodge theory, and the
associated abelian group extension."""

__version__ = "0.1.0"
