"""
Value types shared by the haarbmo modules.
"""

from haarbmo.models.certificate import (
    CertificateBlock,
    CertificateConstants,
    Colour,
    ConditionSSplit,
    GenerationTree,
    MainLemmaResult,
    Mode,
    PackingEstimate,
    PropertyPCertificate,
    SplitReport,
    TraceEntry,
    Verdict,
)
from haarbmo.models.expansion import CarlesonReport, HaarExpansion
from haarbmo.models.interval import (
    ROOT,
    CoverTracker,
    DyadicInterval,
    DyadicRational,
    IntervalSet,
    Relation,
    Universe,
)
from haarbmo.models.rearrangement import Rearrangement
from haarbmo.models.report import DistortionResult, ExampleBundle, NormReport, StageEntry, StageReport

__all__ = [
    "CarlesonReport",
    "CertificateBlock",
    "CertificateConstants",
    "Colour",
    "ConditionSSplit",
    "CoverTracker",
    "DistortionResult",
    "DyadicInterval",
    "DyadicRational",
    "ExampleBundle",
    "GenerationTree",
    "HaarExpansion",
    "IntervalSet",
    "MainLemmaResult",
    "Mode",
    "PackingEstimate",
    "NormReport",
    "PropertyPCertificate",
    "ROOT",
    "Rearrangement",
    "Relation",
    "SplitReport",
    "StageEntry",
    "StageReport",
    "TraceEntry",
    "Universe",
    "Verdict",
]
