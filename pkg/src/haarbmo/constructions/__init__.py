"""
Example constructions: the staged counterexample and random generators.
"""

from haarbmo.constructions.extension import extend_to_total
from haarbmo.constructions.random_maps import RandomGenerator, random_collection, random_rearrangement
from haarbmo.constructions.section5 import Section5Builder, Section5Params, StageSpec, build_section5
