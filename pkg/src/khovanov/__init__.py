"""Khovanov homology over Z[c] and Z."""
