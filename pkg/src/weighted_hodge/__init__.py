"""Tower fields, weighted spaces and weighted Hodge-Helmholtz decompositions
on the exterior of a ball in three dimensions."""

__version__ = "0.1.0"
