"""Exact computations on varieties of sum-of-squares decompositions.

Submodules
----------
algebra       exact fields, monomial orders, multivariate polynomials
linalg        exact matrices, fraction-free elimination, Cayley transform
sosring       Veronese bases, Gram matrices, the C-space, polynomial systems
formulas      closed-form degrees of O(k), SO(k), SOS_1 and SOS_2
groebner      Buchberger's algorithm, staircase dimension and degree
tangentspace  Jacobian nullity and Koszul syzygies
sos2          the two components of two-square decompositions
cli           command-line front end
"""

__version__ = "0.1.0"
