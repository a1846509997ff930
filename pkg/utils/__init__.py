"""Lattice, Jordan, projection and 𝒫-map computations."""
