"""
JSON encodings of intervals, collections, expansions, rearrangements,
certificates and reports.

Rationals are always written as "p/q" strings; floats appear only in fields
that are square roots (norms and lower bounds).
"""
import json
import os
import tempfile
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Union

from haarbmo.constructions.section5 import Section5Params, StageSpec
from haarbmo.exceptions import FormatError
from haarbmo.models.certificate import (
    CertificateBlock,
    CertificateConstants,
    ConditionSSplit,
    Mode,
    PropertyPCertificate,
    SplitReport,
    Verdict,
)
from haarbmo.models.expansion import CarlesonReport, HaarExpansion
from haarbmo.models.interval import DyadicInterval, DyadicRational, IntervalSet, Universe
from haarbmo.models.rearrangement import Rearrangement
from haarbmo.models.report import NormReport, StageReport

Rational = Union[int, Fraction, DyadicRational]


def rational_to_str(value: Rational) -> str:
    if isinstance(value, DyadicRational):
        value = value.to_fraction()
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(value: Any) -> Fraction:
    """Parse "p/q", an integer string or an integer."""
    if isinstance(value, bool):
        raise FormatError(f"expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise FormatError(f"expected a rational string \"p/q\", got {value!r}")
    try:
        numerator, _, denominator = value.strip().partition("/")
        q = int(denominator) if denominator else 1
        if q <= 0:
            raise ValueError
        return Fraction(int(numerator), q)
    except ValueError:
        raise FormatError(f"malformed rational {value!r}") from None


def _optional_rational(value: Optional[Rational]) -> Optional[str]:
    return None if value is None else rational_to_str(value)


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _require_list(value: Any, what: str) -> List[Any]:
    if not isinstance(value, list):
        raise FormatError(f"{what} must be an array, got {value!r}")
    return value


def interval_from_json(value: Any) -> DyadicInterval:
    if not isinstance(value, list) or len(value) != 2 or not all(_is_int(v) for v in value):
        raise FormatError(f"an interval is a two-element array [n, k], got {value!r}")
    return DyadicInterval(value[0], value[1])


def _root_from_json(value: Any, universe: Optional[Universe]) -> DyadicInterval:
    root = interval_from_json(value)
    if universe is not None:
        universe.check(root)
    return root


def collection_to_json(collection: Iterable[DyadicInterval]) -> List[List[int]]:
    return IntervalSet(collection).to_pairs()


def collection_from_json(value: Any, universe: Optional[Universe] = None) -> IntervalSet:
    if isinstance(value, dict) and "intervals" in value:
        value = value["intervals"]
    if not isinstance(value, list):
        raise FormatError("a collection is an array of [n, k] pairs")
    collection = IntervalSet(interval_from_json(v) for v in value)
    if universe is not None:
        universe.check_all(collection)
    return collection


def expansion_to_json(x: HaarExpansion) -> List[Dict[str, Any]]:
    return [{"interval": i.to_pair(), "coeff": rational_to_str(c)} for i, c in x.items()]


def expansion_from_json(value: Any, universe: Optional[Universe] = None) -> HaarExpansion:
    if not isinstance(value, list):
        raise FormatError("an expansion is an array of {\"interval\", \"coeff\"} objects")
    coefficients: Dict[DyadicInterval, Fraction] = {}
    for entry in value:
        if not isinstance(entry, dict) or "interval" not in entry or "coeff" not in entry:
            raise FormatError(f"malformed expansion entry {entry!r}")
        interval = interval_from_json(entry["interval"])
        if interval in coefficients:
            raise FormatError(f"duplicate coefficient for {interval}")
        coefficients[interval] = parse_rational(entry["coeff"])
    x = HaarExpansion(coefficients)
    if universe is not None:
        x.check_universe(universe)
    return x


def rearrangement_to_json(tau: Rearrangement) -> Dict[str, Any]:
    return {
        "depth": tau.universe.max_depth,
        "total": tau.total,
        "map": [{"from": s.to_pair(), "to": t.to_pair()} for s, t in tau.items()],
    }


def rearrangement_from_json(value: Any, depth: Optional[int] = None) -> Rearrangement:
    """
    Decode and validate a rearrangement.

    Args:
        value: The decoded JSON document.
        depth: The configured universe depth; the file must agree with it.
    """
    if not isinstance(value, dict) or "depth" not in value or "map" not in value:
        raise FormatError("a rearrangement is an object with \"depth\" and \"map\"")
    file_depth = value["depth"]
    if not _is_int(file_depth):
        raise FormatError(f"depth must be an integer, got {file_depth!r}")
    if depth is not None and depth != file_depth:
        raise FormatError(f"rearrangement has depth {file_depth} but the run uses depth {depth}")
    pairs = []
    for entry in _require_list(value["map"], "\"map\""):
        if not isinstance(entry, dict) or "from" not in entry or "to" not in entry:
            raise FormatError(f"malformed map entry {entry!r}")
        pairs.append((interval_from_json(entry["from"]), interval_from_json(entry["to"])))
    tau = Rearrangement.validate(Universe(file_depth), pairs)
    if "total" in value and bool(value["total"]) != tau.total:
        raise FormatError(f"\"total\" is {value['total']} but the map is {'total' if tau.total else 'partial'}")
    return tau


def carleson_report_to_json(report: CarlesonReport) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "constant": rational_to_str(report.constant),
        "witness": report.witness.to_pair() if report.witness is not None else None,
    }
    if report.per_interval_sums is not None:
        data["per_interval_sums"] = [
            {"interval": j.to_pair(), "sum": rational_to_str(s)} for j, s in report.per_interval_sums.items()
        ]
    return data


def certificate_to_json(certificate: PropertyPCertificate) -> Dict[str, Any]:
    constants = certificate.constants
    return {
        "root": certificate.root.to_pair(),
        "mode": certificate.mode.value,
        "blocks": [
            {"L": collection_to_json(b.preimage), "E": collection_to_json(b.error)}
            for b in certificate.blocks
        ],
        "constants": None if constants is None else {
            key: _optional_rational(value) for key, value in constants.as_dict().items()
        },
    }


def certificate_from_json(value: Any, universe: Optional[Universe] = None) -> PropertyPCertificate:
    if not isinstance(value, dict) or "root" not in value or "blocks" not in value:
        raise FormatError("a certificate is an object with \"root\" and \"blocks\"")
    try:
        mode = Mode(value.get("mode", "strong"))
    except ValueError:
        raise FormatError(f"unknown certificate mode {value.get('mode')!r}") from None
    root = _root_from_json(value["root"], universe)
    blocks = []
    for entry in _require_list(value["blocks"], "\"blocks\""):
        if not isinstance(entry, dict):
            raise FormatError(f"malformed block {entry!r}")
        blocks.append(CertificateBlock(collection_from_json(entry.get("L", []), universe),
                                       collection_from_json(entry.get("E", []), universe)))
    return PropertyPCertificate(root, mode, blocks, _constants_from_json(value.get("constants")))


def _constants_from_json(raw: Any) -> Optional[CertificateConstants]:
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise FormatError(f"\"constants\" must be an object, got {raw!r}")
    missing = [key for key in ("error_carleson", "homogeneity", "mass") if raw.get(key) is None]
    if missing:
        raise FormatError(f"\"constants\" is missing {', '.join(missing)}")
    weak_sup = raw.get("weak_sup")
    return CertificateConstants(
        parse_rational(raw["error_carleson"]),
        parse_rational(raw["homogeneity"]),
        parse_rational(raw["mass"]),
        None if weak_sup is None else parse_rational(weak_sup),
    )


def split_from_json(value: Any, universe: Optional[Universe] = None) -> ConditionSSplit:
    """Decode a condition-S split {"root", "L", "E"}."""
    if not isinstance(value, dict) or "root" not in value:
        raise FormatError("a split is an object with \"root\", \"L\" and \"E\"")
    return ConditionSSplit(_root_from_json(value["root"], universe),
                           collection_from_json(value.get("L", []), universe),
                           collection_from_json(value.get("E", []), universe))


def verdict_to_json(verdict: Verdict) -> Dict[str, Any]:
    return {
        "mode": verdict.mode,
        "holds": verdict.holds,
        "constants": {k: rational_to_str(v) for k, v in verdict.constants.items()},
        "overall": _optional_rational(verdict.overall),
        "bound": _optional_rational(verdict.bound),
        "failure": verdict.failure,
    }


def norm_report_to_json(report: NormReport) -> Dict[str, Any]:
    return {
        "distortion": rational_to_str(report.distortion),
        "witness": collection_to_json(report.witness),
        "lower_bound": report.lower_bound,
        "lower_bound_sq": rational_to_str(report.lower_bound_sq),
        "lower_witness": expansion_to_json(report.lower_witness),
        "upper_bound_sq": rational_to_str(report.upper_bound_sq),
        "upper_witness": collection_to_json(report.upper_witness),
        "certified": report.certified,
    }


def split_report_to_json(report: SplitReport) -> Dict[str, Any]:
    return {
        "method": report.method,
        "parts": [collection_to_json(p) for p in report.parts],
        "constants": [rational_to_str(c) for c in report.constants],
        "expected_parts": report.expected_parts,
        "within_bounds": report.within_bounds,
        "notes": list(report.notes),
    }


def params_from_json(value: Any) -> Section5Params:
    if not isinstance(value, dict) or "depth" not in value or "stages" not in value:
        raise FormatError("example parameters are an object with \"depth\" and \"stages\"")
    if not _is_int(value["depth"]):
        raise FormatError(f"depth must be an integer, got {value['depth']!r}")
    stages = []
    for entry in _require_list(value["stages"], "\"stages\""):
        try:
            stages.append(StageSpec(int(entry["kn_depth"]), int(entry["l_n"]), int(entry["eps_exp"])))
        except (KeyError, TypeError, ValueError):
            raise FormatError(f"malformed stage {entry!r}") from None
    return Section5Params(value["depth"], stages)


def params_to_json(params: Section5Params) -> Dict[str, Any]:
    return {
        "depth": params.depth,
        "stages": [{"kn_depth": s.kn_depth, "l_n": s.l_n, "eps_exp": s.eps_exp} for s in params.stages],
    }


def stage_report_to_json(report: StageReport) -> Dict[str, Any]:
    return {
        "stages": [
            {
                "kn_depth": s.kn_depth,
                "l_n": s.l_n,
                "default_l_n": s.default_l_n,
                "truncated": s.truncated,
                "eps_exp": s.eps_exp,
                "left": rational_to_str(s.left),
                "kn_measure": rational_to_str(s.kn_measure),
                "generation_measures": [rational_to_str(m) for m in s.generation_measures],
                "slot_measure": rational_to_str(s.slot_measure),
            }
            for s in report.stages
        ],
        "cumulative": [rational_to_str(c) for c in report.cumulative],
    }


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"malformed JSON: {e.msg}", e.lineno, e.colno) from None


def load_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        return loads(f.read())


def write_text(path: str, text: str) -> None:
    """Write text atomically: a temporary file in the same directory, then a rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, temp_path = tempfile.mkstemp(prefix=".haarbmo-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.unlink(temp_path)
        raise


def write_json(path: str, data: Any) -> None:
    write_text(path, dumps(data))
