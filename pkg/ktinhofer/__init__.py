"""k-Tinhofer toolkit: color refinement, individualization-refinement and
the k-Tinhofer hierarchy, with gadget generators and brute-force oracles."""

__version__ = "0.3.0"
