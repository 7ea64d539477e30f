"""Continued fraction algorithms as graphs: domains, invariant densities and automata."""
