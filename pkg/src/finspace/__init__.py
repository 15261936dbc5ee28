"""Sheaves, cosheaves and duality on finite topological spaces, computed exactly."""
