"""TOML run-configuration ingestion with explicit unit tags.

Every dimensioned quantity must be written as an inline table
``{ value = ..., unit = "..." }``; bare numbers are accepted only for
dimensionless fields.  Unknown keys anywhere in the file are rejected.
All quantities are converted to SI on load.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import tomli

from .material import (MaterialParams, RotationConvention, TechnicalParams,
                       convert_technical)

__all__ = ["RunConfig", "ConfigError", "load_config", "parse_config"]


class ConfigError(ValueError):
    pass


_UNIT_SCALES = {
    "pressure": {"Pa": 1.0, "kPa": 1e3, "MPa": 1e6, "GPa": 1e9},
    "length": {"m": 1.0, "cm": 1e-2, "mm": 1e-3},
    "pressure*length^2": {"Pa*m^2": 1.0, "N": 1.0, "MPa*mm^2": 1.0,
                          "MPa*m^2": 1e6},
    "density": {"kg/m^3": 1.0},
    "line_density": {"kg/m": 1.0},
    "frequency": {"Hz": 1.0, "rad/s": 1.0 / (2 * 3.141592653589793)},
}


def _quantity(section: str, key: str, raw, kind: str) -> float:
    scales = _UNIT_SCALES[kind]
    if not isinstance(raw, dict):
        raise ConfigError(f"{section}.{key}: dimensioned quantity needs "
                          f"{{ value = ..., unit = ... }} (one of {sorted(scales)})")
    extra = set(raw) - {"value", "unit"}
    if extra:
        raise ConfigError(f"{section}.{key}: unknown keys {sorted(extra)}")
    if "value" not in raw or "unit" not in raw:
        raise ConfigError(f"{section}.{key}: missing value or unit tag")
    unit = raw["unit"]
    if unit not in scales:
        raise ConfigError(f"{section}.{key}: unknown unit {unit!r} "
                          f"(expected one of {sorted(scales)})")
    return float(raw["value"]) * scales[unit]


def _bare(section: str, key: str, raw) -> float:
    if isinstance(raw, dict):
        raise ConfigError(f"{section}.{key} is dimensionless; write a bare number")
    return float(raw)


def _check_keys(section: str, table: dict, allowed: set):
    extra = set(table) - allowed
    if extra:
        raise ConfigError(f"[{section}]: unknown keys {sorted(extra)}")


@dataclass
class RunConfig:
    material: MaterialParams
    a: float
    h: float
    Jx: float
    Jy: float
    Jz: float
    theta_deg: list
    convention: RotationConvention
    n_list: list
    m_list: list
    plate_formulation: str = "energy"
    solid_N: int = 32
    solid_matrices: str = "corrected"
    solid_b8: str = "patched"
    scan_hz: tuple = (0.2, 25.0)
    scan_steps: int = 200
    frequency_unit: str = "hz"          # 'hz' or 'rad/s' in emitted tables
    output_path: str | None = None
    technical: TechnicalParams | None = None
    shapes: list = field(default_factory=list)   # (name, Jx, Jy, Jz) sweep


def parse_config(data: dict) -> RunConfig:
    _check_keys("", data, {"material", "geometry", "inertia", "modes",
                           "plate", "solid3d", "report", "output"})
    if "material" not in data:
        raise ConfigError("missing [material] section")
    mat = data["material"]
    _check_keys("material", mat, {"technical", "lame", "rho"})
    if "rho" not in mat:
        raise ConfigError("material.rho is required")
    rho = _quantity("material", "rho", mat["rho"], "density")
    technical = None
    if "technical" in mat and "lame" in mat:
        raise ConfigError("give material.technical or material.lame, not both")
    if "technical" in mat:
        t = mat["technical"]
        _check_keys("material.technical", t,
                    {"E", "nu", "l_t", "l_b", "N2", "beta_gamma_ratio"})
        for k in ("E", "nu", "l_t", "l_b", "N2", "beta_gamma_ratio"):
            if k not in t:
                raise ConfigError(f"material.technical.{k} is required")
        technical = TechnicalParams(
            E=_quantity("material.technical", "E", t["E"], "pressure"),
            nu=_bare("material.technical", "nu", t["nu"]),
            l_t=_quantity("material.technical", "l_t", t["l_t"], "length"),
            l_b=_quantity("material.technical", "l_b", t["l_b"], "length"),
            N2=_bare("material.technical", "N2", t["N2"]),
            beta_gamma_ratio=_bare("material.technical", "beta_gamma_ratio",
                                   t["beta_gamma_ratio"]),
        )
        mp = convert_technical(technical, rho)
    elif "lame" in mat:
        t = mat["lame"]
        _check_keys("material.lame", t,
                    {"lambda", "mu", "alpha", "beta", "gamma", "epsilon"})
        for k in ("lambda", "mu", "alpha", "beta", "gamma", "epsilon"):
            if k not in t:
                raise ConfigError(f"material.lame.{k} is required")
        mp = MaterialParams(
            lam=_quantity("material.lame", "lambda", t["lambda"], "pressure"),
            mu=_quantity("material.lame", "mu", t["mu"], "pressure"),
            alpha=_quantity("material.lame", "alpha", t["alpha"], "pressure"),
            beta=_quantity("material.lame", "beta", t["beta"], "pressure*length^2"),
            gamma=_quantity("material.lame", "gamma", t["gamma"], "pressure*length^2"),
            epsilon=_quantity("material.lame", "epsilon", t["epsilon"],
                              "pressure*length^2"),
            rho=rho,
        )
    else:
        raise ConfigError("material needs a technical or lame subsection")

    if "geometry" not in data:
        raise ConfigError("missing [geometry] section")
    g = data["geometry"]
    _check_keys("geometry", g, {"a", "h"})
    a = _quantity("geometry", "a", g.get("a"), "length")
    h = _quantity("geometry", "h", g.get("h"), "length")

    if "inertia" not in data:
        raise ConfigError("missing [inertia] section")
    ine = data["inertia"]
    _check_keys("inertia", ine, {"Jx", "Jy", "Jz", "theta_deg", "convention",
                                 "shape"})
    shapes = []
    if "shape" in ine:
        if any(k in ine for k in ("Jx", "Jy", "Jz")):
            raise ConfigError("give inertia.Jx/Jy/Jz or [[inertia.shape]], not both")
        if not isinstance(ine["shape"], list) or not ine["shape"]:
            raise ConfigError("[[inertia.shape]] must be a non-empty array of tables")
        for i, sh in enumerate(ine["shape"]):
            _check_keys(f"inertia.shape[{i}]", sh, {"name", "Jx", "Jy", "Jz"})
            for k in ("name", "Jx", "Jy", "Jz"):
                if k not in sh:
                    raise ConfigError(f"inertia.shape[{i}].{k} is required")
            shapes.append((str(sh["name"]),
                           _quantity("inertia.shape", "Jx", sh["Jx"], "line_density"),
                           _quantity("inertia.shape", "Jy", sh["Jy"], "line_density"),
                           _quantity("inertia.shape", "Jz", sh["Jz"], "line_density")))
    else:
        for k in ("Jx", "Jy", "Jz"):
            if k not in ine:
                raise ConfigError(f"inertia.{k} is required")
        shapes.append(("default",
                       _quantity("inertia", "Jx", ine["Jx"], "line_density"),
                       _quantity("inertia", "Jy", ine["Jy"], "line_density"),
                       _quantity("inertia", "Jz", ine["Jz"], "line_density")))
    Jx, Jy, Jz = shapes[0][1], shapes[0][2], shapes[0][3]
    theta = ine.get("theta_deg", [0.0])
    if not isinstance(theta, list):
        theta = [theta]
    theta = [float(t) for t in theta]
    conv = ine.get("convention", "paper")
    try:
        convention = {"paper": RotationConvention.PAPER_SIN2THETA,
                      "tensor": RotationConvention.TENSOR}[conv]
    except KeyError:
        raise ConfigError(f"inertia.convention must be 'paper' or 'tensor', got {conv!r}")

    modes = data.get("modes", {})
    _check_keys("modes", modes, {"n", "m"})
    n_list = modes.get("n", [1])
    m_list = modes.get("m", [1])
    if not isinstance(n_list, list):
        n_list = [n_list]
    if not isinstance(m_list, list):
        m_list = [m_list]
    n_list = [int(v) for v in n_list]
    m_list = [int(v) for v in m_list]

    pl = data.get("plate", {})
    _check_keys("plate", pl, {"formulation"})
    formulation = pl.get("formulation", "energy")
    if formulation not in ("energy", "mixed", "paper"):
        raise ConfigError(f"plate.formulation must be energy|mixed|paper, got {formulation!r}")

    so = data.get("solid3d", {})
    _check_keys("solid3d", so, {"N", "matrices", "b8", "scan_hz", "scan_steps"})
    solid_N = int(so.get("N", 32))
    matrices = so.get("matrices", "corrected")
    if matrices not in ("corrected", "printed"):
        raise ConfigError("solid3d.matrices must be corrected|printed")
    b8 = so.get("b8", "patched")
    if b8 not in ("patched", "strict"):
        raise ConfigError("solid3d.b8 must be patched|strict")
    scan = so.get("scan_hz", [0.2, 25.0])
    if (not isinstance(scan, list)) or len(scan) != 2:
        raise ConfigError("solid3d.scan_hz must be a [lo, hi] list")
    steps = int(so.get("scan_steps", 200))

    rep = data.get("report", {})
    _check_keys("report", rep, {"frequency_unit"})
    funit = rep.get("frequency_unit", "hz")
    if funit not in ("hz", "rad/s"):
        raise ConfigError("report.frequency_unit must be 'hz' or 'rad/s'")

    out = data.get("output", {})
    _check_keys("output", out, {"path"})

    return RunConfig(material=mp, a=a, h=h, Jx=Jx, Jy=Jy, Jz=Jz,
                     theta_deg=theta, convention=convention,
                     n_list=n_list, m_list=m_list,
                     plate_formulation=formulation, solid_N=solid_N,
                     solid_matrices=matrices, solid_b8=b8,
                     scan_hz=(float(scan[0]), float(scan[1])),
                     scan_steps=steps, frequency_unit=funit,
                     output_path=out.get("path"), technical=technical,
                     shapes=shapes)


def load_config(path) -> RunConfig:
    with open(path, "rb") as f:
        try:
            data = tomli.load(f)
        except tomli.TOMLDecodeError as e:
            raise ConfigError(f"invalid TOML: {e}") from e
    return parse_config(data)
