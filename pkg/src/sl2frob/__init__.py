"""Exact-arithmetic workbench for modules over higher Frobenius kernels of SL2."""

from .exactfield import FieldCtx, FieldElement, Matrix

__all__ = ["FieldCtx", "FieldElement", "Matrix"]
__version__ = "0.1.0"
