import cmath
import math
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class Graph(BaseModel):
    model_config = ConfigDict(frozen=True)

    vertex_count: int = Field(..., ge=0, description="Number of vertices")
    edges: tuple[tuple[int, int], ...] = Field(
        default=(),
        description="Unordered vertex pairs, 0-based, in input order",
        examples=[((0, 1), (1, 2), (2, 0))],
    )

    @model_validator(mode="after")
    def _check_simple(self) -> "Graph":
        seen: set[frozenset[int]] = set()
        for u, v in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(
                    f"Edge ({u}, {v}) references a vertex outside 0..{self.vertex_count - 1}"
                )
            if u == v:
                raise ValueError(f"Self-loop at vertex {u}")
            key = frozenset((u, v))
            if key in seen:
                raise ValueError(f"Duplicate edge ({u}, {v})")
            seen.add(key)
        return self

    @property
    def edge_count(self) -> int:
        return len(self.edges)


class ArcSet(BaseModel):
    model_config = ConfigDict(frozen=True)

    arcs: tuple[tuple[int, int], ...] = Field(
        ..., description="Ordered (origin, terminus) pairs, 2|E| of them"
    )
    reversal: tuple[int, ...] = Field(
        ..., description="Index of the reversed arc for every arc"
    )

    @model_validator(mode="after")
    def _check_involution(self) -> "ArcSet":
        if len(self.reversal) != len(self.arcs):
            raise ValueError("Reversal must have one entry per arc")
        for e, r in enumerate(self.reversal):
            if r == e or self.reversal[r] != e:
                raise ValueError(f"Reversal is not a fixed-point-free involution at arc {e}")
            if self.arcs[r] != self.arcs[e][::-1]:
                raise ValueError(f"Arc {e} and its reversal {r} do not swap endpoints")
        return self

    def origin(self, e: int) -> int:
        return self.arcs[e][0]

    def terminus(self, e: int) -> int:
        return self.arcs[e][1]


class GraphInvariants(BaseModel):
    model_config = ConfigDict(frozen=True)

    vertex_count: int
    edge_count: int
    degree: int | None = Field(
        default=None, description="Common degree k, None when the graph is not regular"
    )
    connected: bool
    bipartite: bool
    betti1: int = Field(..., description="First Betti number |E| - |V| + #components")
    bipartition: tuple[int, ...] | None = Field(
        default=None, description="Proper 2-colouring of the vertices when bipartite"
    )

    def require_regular(self, minimum_degree: int = 0) -> int:
        if self.degree is None:
            raise ValueError("Graph is not regular")
        if self.degree < minimum_degree:
            raise ValueError(
                f"Graph degree {self.degree} is below the required minimum {minimum_degree}"
            )
        return self.degree

    def require_connected(self) -> None:
        if not self.connected:
            raise ValueError("Graph is not connected")


class AssumptionFlags(BaseModel):
    model_config = ConfigDict(frozen=True)

    proj_proper: bool = Field(..., description="d*d is a proper projection (d*d != I)")
    S_proper: bool = Field(..., description="S is neither I nor -I")
    a_neq_pm_b: bool = Field(..., description="a != b and a != -b")
    ab_nonzero: bool = Field(..., description="ab != 0")

    def failing(self) -> list[str]:
        return [name for name, value in self.model_dump().items() if not value]

    @property
    def all_hold(self) -> bool:
        return not self.failing()


class ChiralPair(BaseModel):
    """Quadruple (S, d, a, b) with the derived coin C, evolution U = SC and
    discriminant T = dSd*. Arrays are read-only once built."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    S: np.ndarray
    d: np.ndarray
    a: float
    b: float
    C: np.ndarray
    U: np.ndarray
    T: np.ndarray
    assumptions: AssumptionFlags
    label: str = Field(default="pair", description="Model name used in reports")

    @property
    def dim_H(self) -> int:
        return self.S.shape[0]

    @property
    def dim_K(self) -> int:
        return self.d.shape[0]

    @property
    def balanced(self) -> bool:
        """a = -b: U is a scaled unitary and birth values coincide pairwise."""
        return math.isclose(self.a, -self.b, rel_tol=0.0, abs_tol=1e-12 * max(1.0, abs(self.a)))


class MultiplicityData(BaseModel):
    model_config = ConfigDict(frozen=True)

    m_plus: int = Field(..., description="dim ker(T - 1)")
    m_minus: int = Field(..., description="dim ker(T + 1)")
    M_plus: int = Field(..., description="dim(ker d ∩ ker(S + 1))")
    M_minus: int = Field(..., description="dim(ker d ∩ ker(S - 1))")
    dim_H: int
    dim_K: int

    @property
    def accounting_holds(self) -> bool:
        return self.M_plus + self.M_minus == (
            self.dim_H - 2 * self.dim_K + self.m_plus + self.m_minus
        )


class JoukowskyParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    a: float
    b: float

    @model_validator(mode="after")
    def _check_defined(self) -> "JoukowskyParams":
        if self.a == self.b:
            raise ValueError(f"Scaled Joukowsky transform needs a != b, got a = b = {self.a}")
        if self.a * self.b == 0:
            raise ValueError("Scaled Joukowsky transform needs ab != 0")
        return self

    @property
    def circle_radius(self) -> float | None:
        return math.sqrt(-self.a * self.b) if self.a * self.b < 0 else None


class AtomOrigin(str, Enum):
    INHERITED = "inherited"
    BIRTH_A_PLUS = "birth_a_plus"
    BIRTH_A_MINUS = "birth_a_minus"
    BIRTH_B_PLUS = "birth_b_plus"
    BIRTH_B_MINUS = "birth_b_minus"


class SpectralAtom(BaseModel):
    model_config = ConfigDict(frozen=True)

    re: float
    im: float
    mult: int = Field(..., ge=1, description="Geometric multiplicity")
    origin: AtomOrigin
    t_source: float | None = Field(
        default=None, description="Eigenvalue of T the atom is inherited from"
    )
    degenerate: bool = Field(
        default=False, description="Double root of the inverse transform"
    )
    merged_with: AtomOrigin | None = Field(
        default=None, description="Second birth origin sharing this value (a = -b)"
    )

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)


class DirectValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    re: float
    im: float
    mult_geometric: int
    mult_algebraic: int

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)


class BoundCheck(BaseModel):
    passed: bool
    checked: int = Field(..., description="Number of values or samples checked")
    worst: float = Field(..., description="Largest violation margin, <= 0 when passed")


class BoundReport(BaseModel):
    annulus: BoundCheck
    locus: BoundCheck
    resolvent: BoundCheck

    @property
    def passed(self) -> bool:
        return self.annulus.passed and self.locus.passed and self.resolvent.passed


class Verdict(str, Enum):
    MATCH = "match"
    MISMATCH = "mismatch"


class SpectrumReport(BaseModel):
    model: str
    n: int
    a: float
    b: float
    atoms: list[SpectralAtom] = Field(default_factory=list)
    direct: list[DirectValue] = Field(default_factory=list)
    verdict: Verdict
    mismatches: list[str] = Field(default_factory=list)
    notes: list[str] = Field(default_factory=list)
    bounds: BoundReport | None = None


class MkoParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    gamma: float = Field(0.0, ge=0.0, description="Gain/loss strength")
    phi: float = Field(0.0, ge=0.0, lt=2 * math.pi, description="Phase parameter")
    theta1: float = Field(..., ge=0.0, lt=2 * math.pi)
    theta2: float = Field(..., ge=0.0, lt=2 * math.pi)

    @property
    def p(self) -> float:
        return -math.sin(self.theta1)

    @property
    def q(self) -> complex:
        return -1j * math.cos(self.theta1)

    @property
    def a(self) -> float:
        return math.sin(self.theta2)

    @property
    def b(self) -> complex:
        return -1j * cmath.exp(-2j * self.phi) * math.cos(self.theta2)

    @property
    def m_gamma(self) -> float:
        return self.a * self.p * math.cosh(2 * self.gamma) - abs(self.q * self.b)

    @property
    def M_gamma(self) -> float:
        return self.a * self.p * math.cosh(2 * self.gamma) + abs(self.q * self.b)

    def Gamma(self, i: int) -> float | None:
        ap = self.a * self.p
        if ap == 0:
            return None
        return -(1 + (-1) ** (i + 1) * abs(self.q * self.b)) / ap

    def threshold(self, i: int) -> float | None:
        g = self.Gamma(i)
        if g is None or g < 1:
            return None
        return 0.5 * math.log(g + math.sqrt(g * g - 1))


class MkoRegime(str, Enum):
    CIRCLE_ONLY = "circle_only"
    MIXED = "mixed"
    REAL_ONLY = "real_only"


class MkoSpectrumSet(BaseModel):
    model_config = ConfigDict(frozen=True)

    m_gamma: float
    M_gamma: float
    circle_cos_interval: tuple[float, float] | None = Field(
        default=None, description="cos ξ range of the unit-circle arc"
    )
    real_intervals: list[tuple[float, float]] = Field(default_factory=list)
    regime: MkoRegime

    def distance(self, z: complex) -> float:
        best = math.inf
        if self.circle_cos_interval is not None:
            lo, hi = self.circle_cos_interval
            # arc is conjugation symmetric: clamp |arg z|, keep the half-plane
            sign = -1.0 if z.imag < 0 else 1.0
            angle = min(max(abs(cmath.phase(z)), math.acos(hi)), math.acos(lo))
            best = abs(z - cmath.rect(1.0, sign * angle))
        for lo, hi in self.real_intervals:
            x = min(max(z.real, lo), hi)
            best = min(best, abs(z - x))
        return best


class CorrelatedParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: float = Field(..., ge=0.0, le=1.0, description="Backtracking probability")
    k: int = Field(..., ge=2, description="Degree of the underlying graph")

    @property
    def a(self) -> float:
        return 1.0

    @property
    def b(self) -> float:
        return (self.p * self.k - 1) / (self.k - 1)

    @property
    def r(self) -> float:
        return abs(self.p * self.k - 1) / (self.k - 1)


class ZetaPolynomial(BaseModel):
    model_config = ConfigDict(frozen=True)

    coefficients: tuple[float, ...] = Field(
        ..., description="Coefficients of 1/ζ_G(u), ascending powers of u"
    )

    @model_validator(mode="after")
    def _check_constant(self) -> "ZetaPolynomial":
        if not self.coefficients or abs(self.coefficients[0] - 1) > 1e-9:
            raise ValueError("Constant coefficient of 1/ζ must be 1")
        return self

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1


class NBWalkCounts(BaseModel):
    model_config = ConfigDict(frozen=True)

    counts: tuple[int, ...] = Field(..., description="N_1..N_L")


class Command(str, Enum):
    SPECTRUM = "spectrum"
    ZETA = "zeta"
    MKO = "mko"
    SWEEP = "sweep"
    VERIFY = "verify"


class ModelName(str, Enum):
    GROVER = "grover"
    CORRELATED = "correlated"
    MKO = "mko"
    HOM_EXAMPLE = "hom-example"
    INHOM_EXAMPLE = "inhom-example"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


GRAPH_MODELS = {ModelName.GROVER, ModelName.CORRELATED}


class RunConfig(BaseModel):
    command: Command
    graph_path: str | None = None
    builtin: str | None = None
    model: ModelName | None = None
    p: float | None = None
    a: float | None = None
    b: float | None = None
    gamma: float = 0.0
    theta1: float | None = None
    theta2: float | None = None
    phi: float = 0.0
    alpha: float | None = None
    beta_re: float = 0.0
    beta_im: float = 0.0
    ring: int = 8
    state_angle: float = 0.0
    state_phase: float = 0.0
    grid: int = 512
    L: int = 6
    tol: float = 1e-8
    seed: int = 42
    random_pairs: int = 100
    random_graphs: int = 50
    sweep_range: tuple[float, float, float] | None = None
    out: str | None = None
    format: OutputFormat = OutputFormat.JSON

    @model_validator(mode="after")
    def _check_graph_source(self) -> "RunConfig":
        needs_graph = self.command == Command.ZETA or (
            self.command in (Command.SPECTRUM, Command.SWEEP) and self.model in GRAPH_MODELS
        )
        sources = (self.graph_path is not None) + (self.builtin is not None)
        if needs_graph and sources != 1:
            raise ValueError("Exactly one of --graph or --builtin is required")
        if not needs_graph and sources:
            raise ValueError(f"Command {self.command.value} takes no input graph")
        return self


class ZetaReport(BaseModel):
    graph: str
    vertex_count: int
    edge_count: int
    degree: int
    zeta_reciprocal: list[float]
    bass_form: list[float]
    max_residue: float
    walk_counts: list[int] | None = None
    log_series_holds: bool | None = None
    euler_product: list[float] | None = None
    euler_product_holds: bool | None = None
    notes: list[str] = Field(default_factory=list)
    passed: bool


class MkoReport(BaseModel):
    gamma: float
    phi: float
    theta1: float
    theta2: float
    m_gamma: float
    M_gamma: float
    gamma0: float | None
    gamma1: float | None
    regime: MkoRegime
    circle_cos_interval: tuple[float, float] | None
    real_intervals: list[tuple[float, float]]
    grid: int
    max_distance: float
    unimodular: bool
    passed: bool


class SweepRow(BaseModel):
    parameter: float
    skipped: bool = False
    reason: str | None = None
    min_modulus: float | None = None
    max_modulus: float | None = None
    min_real: float | None = None
    max_real: float | None = None
    r: float | None = None
    circle_radius: float | None = None
    regime: MkoRegime | None = None
    verdict: Verdict | None = None
    contained: bool | None = None


class SweepReport(BaseModel):
    model: ModelName
    graph: str | None = None
    rows: list[SweepRow]


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class VerifySummary(BaseModel):
    seed: int
    tol: float
    checks: list[CheckResult]
    passed: bool
    first_failure: str | None = None
