"""
zk-betti - Document and Parameter Models

Pydantic models for everything that crosses the process boundary: complex
files, table and polynomial documents, sampler parameters and experiment
configuration files. Validation errors carry field-level locations, which
the CLI reports verbatim.
"""

from typing import Annotated, List, Literal, Optional

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, PlainSerializer, model_validator

from .linalg import FieldSpec

SEED_LIMIT = 1 << 64

# Seeds are unsigned 64-bit; JSON documents carry them as decimal strings so
# values above 2^53 survive canonicalization.
Seed = Annotated[
    int,
    Field(ge=0, lt=SEED_LIMIT, description="Unsigned 64-bit master seed"),
    PlainSerializer(lambda v: str(v), return_type=str, when_used="json"),
]

Probability = Annotated[float, Field(ge=0.0, le=1.0)]


def _check_field_name(value: str) -> str:
    return FieldSpec.parse(value).name


FieldName = Annotated[str, AfterValidator(_check_field_name)]


# ============================================================================
# Documents
# ============================================================================

class ComplexDocument(BaseModel):
    """Complex file: ``{"n": <int>, "facets": [[<int>...]...]}``."""
    model_config = ConfigDict(extra="forbid")

    n: int = Field(..., ge=1, description="Vertex count; labels are 1..n")
    facets: List[List[int]] = Field(default_factory=list, description="Facets as vertex lists")


class TableEntry(BaseModel):
    i: int = Field(..., ge=0)
    j: int = Field(..., ge=0)
    beta: int = Field(..., ge=0)


class TableDocument(BaseModel):
    """Bigraded table: nonzero entries only, sorted by (j, i)."""
    n: int
    field: FieldName
    entries: List[TableEntry]


class PolynomialDocument(BaseModel):
    """Integer polynomial in p, ascending coefficients."""
    d: int
    j: int
    kind: Literal["f", "g", "var", "cov"]
    i: Optional[int] = None
    m: Optional[int] = None
    field: FieldName
    coeffs: List[int]


# ============================================================================
# Parameters and configuration
# ============================================================================

class LMParams(BaseModel):
    """Parameters of one Linial-Meshulam sample Y^d(n, p)."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(..., ge=1, description="Vertex count")
    d: int = Field(..., ge=1, description="Dimension of the random simplices")
    p: Probability = Field(..., description="Inclusion probability")
    seed: Seed = 0

    @model_validator(mode="after")
    def _dimension_fits(self) -> "LMParams":
        if self.d > self.n - 1:
            raise ValueError(f"d={self.d} exceeds n-1={self.n - 1}")
        return self


def _check_bidegree(d: int, j: int, i: int) -> None:
    if j < d + 1:
        raise ValueError(f"j={j} must be at least d+1={d + 1}")
    if i not in (j - d, j - d - 1):
        raise ValueError(f"i={i} must be j-d={j - d} or j-d-1={j - d - 1}")


class ExperimentConfig(BaseModel):
    """Configuration of a convergence or variance-scaling run."""
    model_config = ConfigDict(extra="forbid")

    d: int = Field(1, ge=1, description="Dimension of the random simplices")
    j: int = Field(3, ge=1, description="Full-subcomplex size")
    i: int = Field(2, ge=0, description="Homological index, j-d or j-d-1")
    p_grid: List[Probability] = Field(default_factory=lambda: [0.3, 0.5, 0.7], min_length=1)
    n_grid: List[int] = Field(default_factory=lambda: [8, 12, 16], min_length=1)
    trials: int = Field(200, ge=1, description="Samples per (p, n) cell")
    seed: Seed = 0
    field: FieldName = Field("f2", description="Coefficient field: q or f<prime>")
    workers: int = Field(1, ge=1, description="Parallel workers")
    work_budget: Optional[int] = Field(None, ge=1, le=(1 << 53) - 1, description="Override the default work budget")

    @model_validator(mode="after")
    def _consistent(self) -> "ExperimentConfig":
        _check_bidegree(self.d, self.j, self.i)
        too_small = [n for n in self.n_grid if n < self.j]
        if too_small:
            raise ValueError(f"n_grid values {too_small} are smaller than j={self.j}")
        return self

    @property
    def field_spec(self) -> FieldSpec:
        return FieldSpec.parse(self.field)


class CovarianceConfig(BaseModel):
    """Configuration of a covariance check between two overlapping j-sets."""
    model_config = ConfigDict(extra="forbid")

    d: int = Field(1, ge=1)
    j: int = Field(3, ge=1)
    i: int = Field(2, ge=0)
    m: int = Field(1, ge=0, description="Overlap |J1 & J2|")
    n: Optional[int] = Field(None, ge=1, description="Vertex count; defaults to 2j-m")
    p: Probability = 0.5
    trials: int = Field(5000, ge=2)
    seed: Seed = 0
    field: FieldName = "f2"
    workers: int = Field(1, ge=1)

    @model_validator(mode="after")
    def _consistent(self) -> "CovarianceConfig":
        _check_bidegree(self.d, self.j, self.i)
        if self.m > self.j:
            raise ValueError(f"overlap m={self.m} exceeds j={self.j}")
        if self.n is not None and self.n < 2 * self.j - self.m:
            raise ValueError(f"n={self.n} is smaller than 2j-m={2 * self.j - self.m}")
        return self

    @property
    def vertex_count(self) -> int:
        return self.n if self.n is not None else 2 * self.j - self.m

    @property
    def field_spec(self) -> FieldSpec:
        return FieldSpec.parse(self.field)
