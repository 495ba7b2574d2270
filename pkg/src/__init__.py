"""logderiv - logarithmic derivations of real line arrangements"""

__version__ = "1.0.0"
__author__ = "logderiv"
__description__ = "Exact filtration, d_f and combinatorics of affine line arrangements"
