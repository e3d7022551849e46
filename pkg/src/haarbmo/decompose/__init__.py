"""
Stopping-time decompositions, splittings and certificate verifiers.
"""

from haarbmo.decompose.generations import GenerationalDecomposer, generational_decomposition, lemma2_union_bound
from haarbmo.decompose.main_lemma import MainLemma, main_lemma
from haarbmo.decompose.splitting import CarlesonSplitter
from haarbmo.decompose.verifier import PropertyVerifier, certificate_constants
