"""Exact umbral operator calculus for monic polynomial families."""
