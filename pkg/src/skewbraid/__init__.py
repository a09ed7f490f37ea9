"""Numerical braid monodromy for polynomial skew-products."""
