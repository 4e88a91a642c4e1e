"""Run orchestration: configuration, the sampling pipeline, and CSV rendering.

A run evolves one configured initial state over a uniform rescaled-time grid
and assembles per-sample observables.  The mutual-entropy columns (I, SP,
SC) always involve three evolutions (ground product, excited product, cat),
which share the single spectral decomposition; they are computed only when
requested.  Output is deterministic: a given config renders byte-identical
CSV, with 12 significant digits and "\n" line endings, and divergent samples
as empty cells.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import INITIAL_KINDS, SystemParams, build_hamiltonian, initial_state
from .observables import (
    DivergenceError,
    EntropyRecord,
    IonState2x2,
    coherence_part,
    entropy_entrywise,
    entropy_vn,
    entropy_vn_motion,
    inversion,
    mutual_entropy,
    population_part,
    reduce_ion,
    reduce_motion,
)
from .propagator import diagonalize, time_series
from .qalgebra import DeformationParams

COLUMNS = ("t", "Pg", "Pe", "ReC", "ImC", "Inv", "S_paper", "S_vN", "I", "SP", "SC")

# Columns that require the three-evolution mutual-entropy pipeline.
TRIPLE_COLUMNS = frozenset({"I", "SP", "SC"})


class ConfigError(Exception):
    """Invalid run configuration; the message names the offending field."""


@dataclass(frozen=True)
class RunConfig:
    """Flat run configuration; field names double as the JSON config keys."""

    omega_bar: float = 50.0
    delta_bar: float = -50.0
    epsilon_bar: float = 0.05
    beta: complex = 4.0 + 0.0j
    tau: float = 0.004
    n_max: int = 32
    initial: str = "cat"
    t_max_rescaled: float = 350.0
    dt_rescaled: float = 0.1
    output_path: str = ""
    emit: tuple[str, ...] = COLUMNS

    def validate(self) -> None:
        if not self.dt_rescaled > 0:
            raise ConfigError(f"dt_rescaled must be positive, got {self.dt_rescaled}")
        if self.t_max_rescaled < 0:
            raise ConfigError(
                f"t_max_rescaled must be non-negative, got {self.t_max_rescaled}"
            )
        if self.n_max < 1:
            raise ConfigError(f"n_max must be at least 1, got {self.n_max}")
        if self.initial not in INITIAL_KINDS:
            raise ConfigError(
                f"initial must be one of {'/'.join(INITIAL_KINDS)}, got {self.initial!r}"
            )
        unknown = [c for c in self.emit if c not in COLUMNS]
        if unknown:
            raise ConfigError(f"emit contains unknown column names {unknown}")
        for name in ("omega_bar", "delta_bar", "epsilon_bar", "t_max_rescaled"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")
        if not (math.isfinite(self.beta.real) and math.isfinite(self.beta.imag)):
            raise ConfigError("beta must be finite")

    def columns(self) -> tuple[str, ...]:
        """Emitted columns in canonical order; t is always first."""
        want = set(self.emit) | {"t"}
        return tuple(c for c in COLUMNS if c in want)

    def system_params(self) -> SystemParams:
        return SystemParams(
            omega_bar=self.omega_bar,
            delta_bar=self.delta_bar,
            epsilon_bar=self.epsilon_bar,
            beta=self.beta,
            deformation=DeformationParams(tau=self.tau, n_max=self.n_max),
        )


@dataclass(frozen=True)
class RunResult:
    """Sampled run: the grid, the primary-state reductions, and entropy records."""

    config: RunConfig
    grid: np.ndarray
    ions: tuple[IonState2x2, ...]
    records: tuple[EntropyRecord, ...]

    def series(self, column: str) -> list[tuple[float, float]]:
        """(t, value) pairs for one column, skipping undefined samples."""
        out = []
        for t, value in zip(self.grid, self.column_values(column)):
            if value is not None:
                out.append((float(t), float(value)))
        return out

    def column_values(self, column: str) -> list[float | None]:
        if column not in COLUMNS:
            raise ConfigError(f"unknown column {column!r}")
        out: list[float | None] = []
        for t, ion, rec in zip(self.grid, self.ions, self.records):
            out.append(_COLUMN_GETTERS[column](float(t), ion, rec))
        return out


_COLUMN_GETTERS = {
    "t": lambda t, ion, rec: t,
    "Pg": lambda t, ion, rec: ion.pg,
    "Pe": lambda t, ion, rec: ion.pe,
    "ReC": lambda t, ion, rec: ion.c_ge.real,
    "ImC": lambda t, ion, rec: ion.c_ge.imag,
    "Inv": lambda t, ion, rec: rec.inv,
    "S_paper": lambda t, ion, rec: rec.s_entrywise,
    "S_vN": lambda t, ion, rec: rec.s_vn,
    "I": lambda t, ion, rec: rec.i_mutual,
    "SP": lambda t, ion, rec: rec.s_p,
    "SC": lambda t, ion, rec: rec.s_c,
}


def time_grid(cfg: RunConfig) -> np.ndarray:
    """Uniform rescaled-time grid 0, dt, 2 dt, ..., up to and including t_max."""
    n = int(math.floor(cfg.t_max_rescaled / cfg.dt_rescaled + 1e-9)) + 1
    return np.arange(n) * cfg.dt_rescaled


def simulate(cfg: RunConfig, with_mutual: bool | None = None) -> RunResult:
    """Evolve the configured initial state and assemble per-sample observables.

    with_mutual forces (or suppresses) the three-evolution mutual-entropy
    pipeline; by default it runs exactly when the emitted columns need it.
    Divergent mutual-entropy samples are stored as None.
    """
    cfg.validate()
    if with_mutual is None:
        with_mutual = bool(TRIPLE_COLUMNS & set(cfg.columns()))
    params = cfg.system_params()
    sd = diagonalize(build_hamiltonian(params))
    grid = time_grid(cfg)

    kinds = {cfg.initial}
    if with_mutual:
        kinds |= {"ground", "excited", "cat"}
    states = {
        kind: list(time_series(sd, initial_state(kind, params), grid)) for kind in kinds
    }

    ions = []
    records = []
    for i, t in enumerate(grid):
        psi = states[cfg.initial][i]
        ion = reduce_ion(psi)
        i_mutual = s_p = s_c = None
        if with_mutual:
            ion_1 = reduce_ion(states["ground"][i])
            ion_2 = reduce_ion(states["excited"][i])
            ion_cat = reduce_ion(states["cat"][i])
            try:
                i_mutual = mutual_entropy(ion_1, ion_2, ion_cat)
            except DivergenceError:
                i_mutual = None
            try:
                s_p = population_part(ion_1, ion_2, ion_cat)
            except DivergenceError:
                s_p = None
            if i_mutual is not None and s_p is not None:
                s_c = coherence_part(i_mutual, s_p)
        ions.append(ion)
        records.append(
            EntropyRecord(
                t_rescaled=float(t),
                inv=inversion(ion),
                s_entrywise=entropy_entrywise(ion),
                s_vn=entropy_vn(ion),
                s_vn_motion=entropy_vn_motion(reduce_motion(psi)),
                i_mutual=i_mutual,
                s_p=s_p,
                s_c=s_c,
            )
        )
    return RunResult(config=cfg, grid=grid, ions=tuple(ions), records=tuple(records))


def format_value(value: float | None) -> str:
    """12-significant-digit cell; undefined values render as empty cells."""
    if value is None:
        return ""
    return f"{value:.12g}"


def render_csv(result: RunResult) -> str:
    """Deterministic CSV text for the emitted columns, "\n" line endings."""
    columns = result.config.columns()
    table = {c: result.column_values(c) for c in columns}
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for i in range(len(result.grid)):
        writer.writerow([format_value(table[c][i]) for c in columns])
    return buf.getvalue()


def run_simulation(cfg: RunConfig) -> str:
    """Run one simulation and return its CSV text, writing output_path if set."""
    result = simulate(cfg)
    text = render_csv(result)
    if cfg.output_path:
        with open(cfg.output_path, "w", newline="") as fh:
            fh.write(text)
    return text
