# spaceconfig.py
"""
Hamiltonian space configs: TOML files validated by pydantic models.

A built-in name such as ``s1_r2`` resolves to ``<CORPUS_DIR>/s1_r2.toml``;
anything else is treated as a path.
"""
import hashlib
import logging
import os
import re

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, StrictInt, StrictStr, ValidationError, field_validator, model_validator

from exactpoly import Polynomial, PolynomialError, as_rational
from liealg import GROUP_TAGS, LieAlgebraData, LieAlgebraError
from reduction import HamiltonianSpace, LabeledPoint
from settings import settings

logger = logging.getLogger(__name__)

# strict: lax mode would turn 1.0 into 1
Rational = StrictInt | StrictStr


class ConfigError(ValueError):
    pass


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class LieConfig(_Strict):
    dim: int = Field(ge=0)
    # 1-indexed (k, i, j, c) rows: [E_i, E_j] = sum_k c E_k
    structure_constants: list[list[Rational]] = Field(default_factory=list)
    rep: list[list[list[Rational]]] | None = None
    group_tag: str | None = None

    @field_validator("group_tag")
    @classmethod
    def _known_tag(cls, v: str | None) -> str | None:
        if v is not None and v not in GROUP_TAGS:
            raise ValueError(f"unknown group_tag {v!r}; expected one of {list(GROUP_TAGS)}")
        return v

    @field_validator("structure_constants")
    @classmethod
    def _rows_of_four(cls, v: list[list[Rational]]) -> list[list[Rational]]:
        for row in v:
            if len(row) != 4:
                raise ValueError(f"entry {row} must be [k, i, j, value]")
        return v


class PointConfig(_Strict):
    label: str = Field(pattern=r"^[A-Za-z0-9_]+$")
    coords: list[Rational]
    expect: Literal["regular", "singular"] | None = None


class SpaceConfig(_Strict):
    name: str
    description: str = ""
    variables: list[str] = Field(min_length=1)
    omega: list[list[Rational]]
    mu: list[str] = Field(default_factory=list)
    lie: LieConfig
    points: list[PointConfig] = Field(default_factory=list)

    @field_validator("omega")
    @classmethod
    def _square(cls, v: list[list[Rational]]) -> list[list[Rational]]:
        size = len(v)
        for row in v:
            if len(row) != size:
                raise ValueError(f"omega must be square; got a row of length {len(row)} in a {size}-row matrix")
        return v

    @model_validator(mode="after")
    def _shapes(self) -> "SpaceConfig":
        n = len(self.variables)
        if len(set(self.variables)) != n:
            raise ValueError(f"variables are not unique: {self.variables}")
        if len(self.omega) != n:
            raise ValueError(f"omega is {len(self.omega)}x{len(self.omega)} but there are {n} variables")
        if len(self.mu) != self.lie.dim:
            raise ValueError(f"mu has {len(self.mu)} components, lie.dim is {self.lie.dim}")
        if self.lie.rep is not None:
            if len(self.lie.rep) != self.lie.dim:
                raise ValueError(f"lie.rep has {len(self.lie.rep)} matrices, expected {self.lie.dim}")
            for i, a in enumerate(self.lie.rep):
                if len(a) != n or any(len(row) != n for row in a):
                    raise ValueError(f"lie.rep[{i}] must be {n}x{n} (the action on M)")
        for p in self.points:
            if len(p.coords) != n:
                raise ValueError(f"point {p.label!r} has {len(p.coords)} coordinates, expected {n}")
        return self


def builtin_names() -> list[str]:
    if not os.path.isdir(settings.CORPUS_DIR):
        return []
    return sorted(f[:-5] for f in os.listdir(settings.CORPUS_DIR) if f.endswith(".toml"))


def resolve(name_or_path: str) -> str:
    if os.path.isfile(name_or_path):
        return name_or_path
    candidate = os.path.join(settings.CORPUS_DIR, f"{name_or_path}.toml")
    if os.path.isfile(candidate):
        return candidate
    raise ConfigError(f"unknown example {name_or_path!r}; built-in examples are {builtin_names()}")


def config_hash(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()


def _field_path(loc: tuple) -> str:
    return ".".join(str(part) for part in loc) or "<root>"


def _error_line(exc: tomllib.TOMLDecodeError, text: str) -> int:
    """1-based line of a TOML error; "end of document" errors land on the last line."""
    pos = getattr(exc, "pos", None)
    if pos is None:
        # older tomllib only reports the position inside the message
        match = re.search(r"line (\d+)", str(exc))
        return int(match.group(1)) if match else text.count("\n") + 1
    return text.count("\n", 0, pos) + 1


def parse_config(raw: bytes, source: str = "<config>") -> SpaceConfig:
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ConfigError(f"{source}: not UTF-8 ({exc})") from exc
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{source}: TOML syntax error at line {_error_line(exc, text)}: {exc}") from exc
    try:
        return SpaceConfig.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise ConfigError(f"{source}: field {_field_path(first['loc'])}: {first['msg']}") from exc


def build_space(cfg: SpaceConfig, source: str = "<config>") -> HamiltonianSpace:
    variables = cfg.variables
    n = len(variables)
    try:
        mu = [Polynomial.parse(text, variables) for text in cfg.mu]
    except PolynomialError as exc:
        raise ConfigError(f"{source}: field mu: {exc}") from exc
    try:
        lie = LieAlgebraData.from_sparse(
            cfg.lie.dim, cfg.lie.structure_constants, cfg.lie.rep, cfg.lie.group_tag, rep_dim=n
        )
        points = [LabeledPoint(p.label, tuple(as_rational(v) for v in p.coords), p.expect) for p in cfg.points]
        return HamiltonianSpace.build(cfg.name, variables, cfg.omega, lie, mu, points)
    except (LieAlgebraError, PolynomialError) as exc:
        raise ConfigError(f"{source}: {exc}") from exc


def load_space(name_or_path: str) -> tuple[HamiltonianSpace, str]:
    """Load and structurally validate a config; returns the space and the sha256 of its bytes."""
    path = resolve(name_or_path)
    try:
        with open(path, "rb") as f:
            raw = f.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    source = os.path.basename(path)
    space = build_space(parse_config(raw, source), source)
    logger.info(f"Loaded {space.name} from {path} (n={space.n}, d={space.d})")
    return space, config_hash(raw)
