"""Exact computations for N=2 superconformal, affine sl(2) and gl(1|1) representations."""

__version__ = "0.1.0"
