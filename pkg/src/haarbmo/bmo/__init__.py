"""
Carleson constants and dyadic BMO norms.
"""

from haarbmo.bmo.carleson import CarlesonAnalyzer, sqrt_fraction
