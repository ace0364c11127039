import functools
import logging
import re
from dataclasses import dataclass

import lab_config
from EvaluationCode import EvalCode, MonomialBox
from LabErrors import CapabilityError, UsageError
from Tower import builtin_tower, enumerate_places, expected_place_count


# MARK: Initialize Logger
# Configure logging set-up. We want to log times & types of logs, as well as
# function names & the subsequent message.
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(funcName)s - %(message)s'
)

# Create a logger
logger = logging.getLogger(__name__)

_GS_PATTERN = re.compile(r"^gs-(thm34|thm36|cor38)-q(\d+)(?:-l(\d+))?(?:-d(\d+))?$")
_PROP41_PATTERN = re.compile(r"^f4-prop41-j(\d+)$")


@dataclass(frozen=True)
class PresetSpec:
    """
    A named code: tower, depth and box, plus the family data the distance lab
    needs (variant, q, l, and the level i of the GS step F_i in F_{i+1}).
    """
    name: str
    tower_name: str
    depth: int
    box: MonomialBox
    family: str
    variant: str
    q: int = None
    l: int = None
    level: int = 1


def _gs_spec(name, variant, q, l, level):
    if q < 4 or q not in lab_config.ENUMERATION_QS:
        raise CapabilityError(f"GS presets support q in {lab_config.ENUMERATION_QS[1:]}, not {q}")
    if level < 1:
        raise UsageError(f"Level must be at least 1 in {name}")
    if variant == "cor38":
        if l is None or not 1 <= l <= q * q // 2:
            raise UsageError(f"{name}: cor38 needs -l<l> with 1 <= l <= {q * q // 2}")
        first = l
    elif l is not None:
        raise UsageError(f"{name}: only cor38 presets take -l<l>")
    else:
        first = q * q // 2 - q if variant == "thm34" else q * q // 2
    box = MonomialBox((first, q - 1, q - 2), (0, level, level + 1))
    return PresetSpec(name, f"gs-q{q}", level + 1, box, "gs", variant, q=q, l=l, level=level)


def parse_preset(name):
    """
    Resolves a preset name to its definition.

    Behavior with Exceptions:
        UsageError for an unknown name; CapabilityError when the name is
        well formed but outside the supported q range.
    """
    match = _GS_PATTERN.match(name)
    if match:
        variant, q, l, level = match.groups()
        return _gs_spec(name, variant, int(q), int(l) if l else None, int(level) if level else 1)

    match = _PROP41_PATTERN.match(name)
    if match:
        j = int(match.group(1))
        if j < 1:
            raise UsageError(f"{name}: depth must be at least 1")
        bounds = (0,) + (1,) * (j - 1) + (0,)
        return PresetSpec(name, "f4", j, MonomialBox(bounds), "f4", "prop41")

    if name == "f4-rem42a":
        return PresetSpec(name, "f4", 2, MonomialBox((1, 1, 0)), "f4", "rem42a")
    if name == "f4-rem42b":
        return PresetSpec(name, "f4", 2, MonomialBox((1, 1), (0, 2)), "f4", "rem42b")
    if name == "f8-prop44":
        return PresetSpec(name, "f8", 2, MonomialBox((4, 1)), "f8", "prop44")
    if name == "f8-prop45":
        return PresetSpec(name, "f8", 3, MonomialBox((4, 1, 1)), "f8", "prop45")

    raise UsageError(f"Unknown preset {name!r}; try one of: {', '.join(preset_names())}")


def preset_names(q=8):
    """Canonical preset names, the GS ones at the given q."""
    names = [f"gs-thm34-q{q}", f"gs-thm36-q{q}"]
    names += [f"gs-cor38-q{q}-l{l}" for l in range(1, q * q // 2 + 1)]
    names += [f"f4-prop41-j{j}" for j in range(1, 7)]
    names += ["f4-rem42a", "f4-rem42b", "f8-prop44", "f8-prop45"]
    return names


def table_presets(q=8):
    """The seven codes of the parameter table, in table order."""
    return [f"gs-thm34-q{q}", f"gs-thm36-q{q}", "f4-prop41-j3", "f4-rem42a", "f4-rem42b", "f8-prop44", "f8-prop45"]


@functools.lru_cache(maxsize=16)
def build_preset(name, cap=lab_config.DEFAULT_PLACE_CAP):
    """
    Enumerates the places of a preset and materialises its code.

    Behavior with Exceptions:
        UsageError / CapabilityError from parse_preset, PlaceCapError from the
        enumeration, CapabilityError when the generator matrix would be too
        large to hold.
    """
    spec = parse_preset(name)
    tower = builtin_tower(spec.tower_name)
    n = expected_place_count(tower, spec.depth)
    if n * spec.box.nominal_dimension > lab_config.MAX_MATRIX_ENTRIES:
        raise CapabilityError(
            f"{name} needs a {spec.box.nominal_dimension} x {n} generator matrix, over {lab_config.MAX_MATRIX_ENTRIES} entries"
        )
    places = enumerate_places(tower, spec.depth, cap=cap)
    code = EvalCode(places, spec.box, name=name, metadata={"preset": spec})
    logger.info(f"Built preset {name}")
    return code


def claimed_parameters(spec):
    """
    Parameters as the literature states them, keyed by reading. Each value is
    a dict with n, k, d, r; d_is_bound marks a d that bounds the distance
    from one side only (prop45 from above, the overlapping GS boxes from below).
    """
    if spec.family == "gs":
        q, i = spec.q, spec.level
        n = q ** (i + 1) * (q * q - q)
        k = spec.box.nominal_dimension
        d = n - q ** (i + 1) * sum(spec.box.bounds)
        # Past q^2/2 - q values of x_0 the factored witness cannot keep its
        # zero sets disjoint, so d is only the designed lower bound.
        d_is_bound = spec.box.bounds[0] > q * q // 2 - q
        return {"stated": {"n": n, "k": k, "d": d, "r": q - 1, "d_is_bound": d_is_bound}}
    if spec.variant == "prop41":
        j = spec.depth
        readings = {"table": {"n": 2 ** (j + 1), "k": 2 ** (j - 1), "d": 2, "r": 1, "d_is_bound": False}}
        if j >= 2:
            readings["statement"] = {"n": 2 ** j, "k": 2 ** (j - 2), "d": 2, "r": 1, "d_is_bound": False}
            readings["proof"] = {"n": 2 ** j, "k": 2 ** (j - 1), "d": 2 ** (j - 1), "r": 1, "d_is_bound": False}
        return readings
    if spec.variant in ("rem42a", "rem42b"):
        return {"stated": {"n": 8, "k": 4, "d": 2, "r": 1, "d_is_bound": False}}
    if spec.variant == "prop44":
        return {"stated": {"n": 24, "k": 10, "d": 4, "r": 1, "d_is_bound": False}}
    return {"stated": {"n": 48, "k": 20, "d": 4, "r": 1, "d_is_bound": True}}
