"""Exact arithmetic substrate: integers, finite fields, polynomials, lattices."""
