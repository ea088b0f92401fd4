"""drgcert: exact association-scheme eigensystems, dual feasibility
certificates, and exhaustive extremal-family search for distance-regular
graph families, including the twisted Grassmann graphs."""

__version__ = "0.1.0"
