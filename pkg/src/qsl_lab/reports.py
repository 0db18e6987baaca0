"""Serialization of speed-limit reports and numeric tables.

JSON reports round-trip losslessly (floats survive via shortest-repr,
complex numbers as [re, im] pairs).  CSV tables are written with 17
significant digits, "." decimal separator, and "\\n" line endings so
that identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .spaces import ProductState, PureState, SpaceDescriptor
from .speedlimits import SeparabilityEigenpair, SolverConfig, SpeedReport

SCHEMA = "qsl-lab/report/v1"


def format_number(x: float) -> str:
    """17-significant-digit decimal form, round-trip exact."""
    return "%.17g" % float(x)


def write_csv(
    path,
    header: Sequence[str],
    rows: Iterable[Sequence[float]],
    metadata: Sequence[tuple[str, str]] = (),
) -> None:
    """Write a numeric table; metadata appears as leading '# key: value' lines."""
    lines = [f"# {key}: {value}" for key, value in metadata]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(format_number(x) for x in row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _complex_pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _vector_pairs(vec: np.ndarray) -> list[list[float]]:
    return [_complex_pair(z) for z in np.asarray(vec).reshape(-1)]


def _vector_from_pairs(pairs) -> np.ndarray:
    return np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)


def _eigenpair_to_dict(pair: SeparabilityEigenpair) -> dict:
    return {
        "value": pair.value,
        "locals": [_vector_pairs(k) for k in pair.state.locals],
        "converged": pair.converged,
        "iterations": pair.iterations,
    }


def _eigenpair_from_dict(data: dict, dims: tuple[int, ...]) -> SeparabilityEigenpair:
    state = ProductState(
        space=SpaceDescriptor(dims),
        locals=tuple(_vector_from_pairs(k) for k in data["locals"]),
    )
    return SeparabilityEigenpair(
        value=float(data["value"]),
        state=state,
        converged=bool(data["converged"]),
        iterations=int(data["iterations"]),
    )


@dataclass(frozen=True)
class ReportDocument:
    """A SpeedReport plus everything needed to reproduce it."""

    report: SpeedReport
    model: dict
    dims: tuple[int, ...]
    solver: SolverConfig
    hbar: float
    backend: str
    wall_time_s: float
    version: str = __version__

    def to_dict(self) -> dict:
        rep = self.report
        return {
            "schema": SCHEMA,
            "model": dict(self.model),
            "dims": list(self.dims),
            "hbar": self.hbar,
            "results": {
                "qsl": rep.qsl,
                "qsl_sep_plus": rep.qsl_sep_plus,
                "ratio": None if rep.ratio_infinite else rep.ratio,
                "ratio_infinite": rep.ratio_infinite,
                "e_min": rep.e_min,
                "e_max": rep.e_max,
                "e_min_sep": rep.e_min_sep,
                "e_max_sep": rep.e_max_sep,
                "n_parties": rep.n_parties,
                "converged": rep.converged,
            },
            "certificates": {
                "extremal_state": _vector_pairs(rep.extremal_state.vector),
                "max_sep": _eigenpair_to_dict(rep.max_sep),
                "min_sep": _eigenpair_to_dict(rep.min_sep),
            },
            "provenance": {
                "seed": self.solver.seed,
                "starts": self.solver.starts,
                "max_iters": self.solver.max_iters,
                "tol": self.solver.tol,
                "backend": self.backend,
                "version": self.version,
                "wall_time_s": self.wall_time_s,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "ReportDocument":
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unknown report schema {data.get('schema')!r}")
        dims = tuple(int(d) for d in data["dims"])
        res = data["results"]
        cert = data["certificates"]
        prov = data["provenance"]
        ratio_infinite = bool(res["ratio_infinite"])
        report = SpeedReport(
            qsl=float(res["qsl"]),
            qsl_sep_plus=float(res["qsl_sep_plus"]),
            ratio=math.inf if ratio_infinite else float(res["ratio"]),
            ratio_infinite=ratio_infinite,
            e_min=float(res["e_min"]),
            e_max=float(res["e_max"]),
            e_min_sep=float(res["e_min_sep"]),
            e_max_sep=float(res["e_max_sep"]),
            n_parties=int(res["n_parties"]),
            extremal_state=PureState(
                space=SpaceDescriptor(dims),
                vector=_vector_from_pairs(cert["extremal_state"]),
            ),
            max_sep=_eigenpair_from_dict(cert["max_sep"], dims),
            min_sep=_eigenpair_from_dict(cert["min_sep"], dims),
        )
        solver = SolverConfig(
            starts=int(prov["starts"]),
            max_iters=int(prov["max_iters"]),
            tol=float(prov["tol"]),
            seed=int(prov["seed"]),
        )
        return cls(
            report=report,
            model=dict(data["model"]),
            dims=dims,
            solver=solver,
            hbar=float(data["hbar"]),
            backend=str(prov["backend"]),
            wall_time_s=float(prov["wall_time_s"]),
            version=str(prov["version"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        return cls.from_dict(json.loads(text))
