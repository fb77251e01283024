"""Witt-equivalence invariants of function fields of conics."""
