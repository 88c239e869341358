from enum import Enum, auto

# Largest |D| the form enumeration will attempt.
ENUMERATION_LIMIT = 25_000_000

CACHE_ENV_VAR = "SELMER_CLASSGROUP_CACHE"
LIMIT_ENV_VAR = "SELMER_ENUMERATION_LIMIT"

# Mazur: a rational torsion point has order at most 12.
TORSION_BOUND = 12

DEFAULT_SEARCH_HEIGHT = 60


class PrimeKind(Enum):
    RAMIFIED = auto()
    INERT = auto()
    SPLIT = auto()


class Relation(Enum):
    """Containment of the local Kummer image of E inside that of the dual curve."""
    EQUAL = auto()
    MEETS_TRIVIALLY = auto()
    STRICTLY_INSIDE = auto()
    STRICTLY_LARGER = auto()


class VerdictStatus(Enum):
    NOT_CUBE_SUM = "NotCubeSum"
    CUBE_SUM = "CubeSum"
    CONDITIONAL_CUBE_SUM = "ConditionalCubeSum"
    UNDETERMINED = "Undetermined"


class BoundSource(Enum):
    TYPE1_CONTAINMENT = "type1-containment"
    TYPE1_MIN_UPPER = "type1-quadratic-upper"
    TYPE1_SQUARE = "type1-square-case"
    TYPE1_ROOT_NUMBER = "type1-root-number"
    TYPE1_OVER_Q = "type1-over-Q"
    SEL3_TYPE1 = "sel3-type1"
    TYPE2_CONTAINMENT = "type2-containment"
    TYPE2_REFINED = "type2-refined"
    TYPE2_SQUARE = "type2-square-case"
    TYPE2_DUAL = "type2-dual"
    TYPE2_DUAL_SHIFT = "type2-dual-shift"
    SEL3_TYPE2 = "sel3-type2"
    RANK = "rank"
    NONE = "no-lower-bound-theorem"


class Assumption(Enum):
    NOT_SQUARE = "a-not-square-in-K"
    SQUARE = "a-square-in-K"
    COPRIME_TO_3 = "3-does-not-divide-a"
    ROOT_NUMBER = "root-number-given"
    RANK_GIVEN = "rank-given"
    CLASS_RANK_FLOORED = "class-rank-floored"
    NO_LOWER_BOUND = "no-lower-bound-theorem"
    SHA_EVEN = "Sha(E/Q)[3] even"
    RANK_POSITIVE = "rk > 0 given"


class ExitCode(Enum):
    OK = 0
    INPUT_ERROR = 2
    LIMIT_EXCEEDED = 3
    INCONSISTENT = 4
