"""Red-blue colouring laboratory.

Tools for running a density-controlled book-construction algorithm on
two-colourings of complete graphs, replaying its traces against exact
rational invariants, and certifying the closed-form bound functions and
binomial inequalities that back its analysis.
"""

__version__ = "0.1.0"
