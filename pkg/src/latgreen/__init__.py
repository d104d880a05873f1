"""Lattice Green functions from residue series."""
