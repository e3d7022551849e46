"""
Oracles and certified bounds for operator norms on dyadic BMO.
"""

from haarbmo.norms.oracle import EXHAUSTIVE_DOMAIN_CAP, NormOracle, carleson_table
