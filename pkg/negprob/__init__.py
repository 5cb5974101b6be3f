"""
negprob: signed groundings of multi-test experiments

Finite observation spaces with exact arithmetic, their grounding systems and
nonnegative feasibility, rigid selections of measurement frames, and
phase-space checks of the Wigner density.
"""

__version__ = "0.1.0"
