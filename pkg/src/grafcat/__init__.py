"""grafcat: graphs with open-ended edges and the categories they form.

The package implements two encodings of such graphs (vertex/flag
quadruples with an involution, and arc/flag/vertex diagrams), the
morphism classes between them (graftings, compressions, contractions,
mergers, etale maps, reduced covers, refinements), and a machine-checked
equivalence between the quadruple category and a category of cospans,
verified by exhaustive enumeration at small size.
"""

__version__ = "0.1.0"
