"""covol: quiver coverings, arrow voltages, and graded path coalgebras.

Exact-arithmetic workbench for smash coproduct quivers and coalgebras,
homogeneity and covering checks, relator extraction, universal grading
groups, and the graded-comodule correspondence at desk scale.
"""

__version__ = "0.1.0"
