"""Exact constructions of right-angled Artin group representations into
rank-two and lattice matrix groups, with certification of the flat and
geodesic configuration hypotheses of the ping-pong embedding theorem."""

__version__ = "0.1.0"
