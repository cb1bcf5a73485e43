"""goldtri: exact engine and verifier for the golden-right-triangle
substitution tiling with decorated tiles."""

from goldtri.goldfield import AlgebraicNum, psi_pow

__all__ = ["AlgebraicNum", "psi_pow"]
__version__ = "0.1.0"
