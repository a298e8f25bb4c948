"""Command-line interface: table reproduction, sweeps and comparison reports.

Subcommands
-----------
convert      material parameter report from the technical constants
plate-freqs  plate eigenfrequency CSV over the configured theta/mode sweep
solid-freqs  3D collocation eigenfrequencies with a convergence indicator
compare      plate vs 3D frequencies with relative errors
resonance    forced-response amplitude scan with refined peak list

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 acceptance-threshold failure.
"""
from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import numeig
from .config import ConfigError, RunConfig, load_config
from .material import RotationConvention, rotate_inertia, recover_technical
from .plate import (AssemblyError, PlateGeometry, assemble_modal_system,
                    plate_spectrum)
from .solid3d import (build_pencil, chebyshev_grid, resonance_scan,
                      solid_coefficients, solid_spectrum)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_THRESHOLD = 4


def _fmt(x: float) -> str:
    return f"{x:.6e}"


def _write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else _fmt(cell)
                              for cell in row))
    text = "\n".join(lines) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)


def _freq_columns(spectrum, unit: str):
    return spectrum.omega if unit == "rad/s" else spectrum.freqs_hz


def _plate_spectrum_for(cfg: RunConfig, theta_deg: float, n: int, m: int,
                        J=None):
    Jx, Jy, Jz = J if J is not None else (cfg.Jx, cfg.Jy, cfg.Jz)
    inertia = rotate_inertia(Jx, Jy, Jz, math.radians(theta_deg), cfg.convention)
    geom = PlateGeometry(cfg.a, cfg.h)
    system = assemble_modal_system(cfg.material, inertia, geom, n, m,
                                   formulation=cfg.plate_formulation)
    return plate_spectrum(system)


def cmd_convert(cfg: RunConfig, args) -> int:
    mp = cfg.material
    if cfg.technical is None:
        print("note: config provided moduli directly; reporting them back")
    rows = [
        ("lambda", mp.lam, "Pa"), ("mu", mp.mu, "Pa"), ("alpha", mp.alpha, "Pa"),
        ("beta", mp.beta, "Pa*m^2"), ("gamma", mp.gamma, "Pa*m^2"),
        ("epsilon", mp.epsilon, "Pa*m^2"), ("rho", mp.rho, "kg/m^3"),
    ]
    _write_csv(args.out, ("parameter", "value", "unit"),
               [(k, v, u) for k, v, u in rows])
    if mp.alpha == 0.0:
        print("warning: alpha = 0, the reverse constitutive form is singular",
              file=sys.stderr)
    tp = recover_technical(mp)
    print(f"check: l_t = {tp.l_t:.6e} m, l_b = {tp.l_b:.6e} m, "
          f"N^2 = {tp.N2:.6e}", file=sys.stderr)
    return EXIT_OK


def cmd_plate_freqs(cfg: RunConfig, args) -> int:
    jobs = [(name, (Jx, Jy, Jz), theta, n, m)
            for (name, Jx, Jy, Jz) in cfg.shapes
            for theta in cfg.theta_deg
            for n in cfg.n_list for m in cfg.m_list]
    def work(job):
        _name, J, theta, n, m = job
        return _plate_spectrum_for(cfg, theta, n, m, J)
    with ThreadPoolExecutor(max_workers=args.threads) as pool:
        specs = list(pool.map(work, jobs))
    nfreq = max(len(sp.freqs_hz) for sp in specs) if specs else 0
    header = ["shape", "theta_deg", "n", "m"] \
        + [f"f{i+1:02d}" for i in range(nfreq)] + ["unit", "labels"]
    rows = []
    for (name, _J, theta, n, m), sp in zip(jobs, specs):
        vals = list(_freq_columns(sp, cfg.frequency_unit))
        vals += [float("nan")] * (nfreq - len(vals))
        labels = "|".join(l.value + ("*" if mx else "")
                          for l, mx in zip(sp.labels, sp.mixed))
        rows.append([name, theta, float(n), float(m), *vals,
                     cfg.frequency_unit, labels])
    _write_csv(args.out, header, rows)
    return EXIT_OK


def _solid_spectrum_for(cfg: RunConfig, N: int, k: int = 10):
    inertia = rotate_inertia(cfg.Jx, cfg.Jy, cfg.Jz, 0.0, cfg.convention)
    sc = solid_coefficients(cfg.material, inertia, cfg.a,
                            variant=cfg.solid_matrices,
                            b8_patch=(cfg.solid_b8 == "patched"))
    pencil = build_pencil(sc, chebyshev_grid(N, cfg.h))
    return solid_spectrum(pencil, k=k), pencil


def cmd_solid_freqs(cfg: RunConfig, args) -> int:
    spec, _ = _solid_spectrum_for(cfg, cfg.solid_N)
    spec_ref, _ = _solid_spectrum_for(cfg, cfg.solid_N + 16)
    kk = min(len(spec.freqs_hz), len(spec_ref.freqs_hz))
    rows = []
    for i in range(kk):
        v = spec.omega[i] if cfg.frequency_unit == "rad/s" else spec.freqs_hz[i]
        drift = abs(spec.freqs_hz[i] - spec_ref.freqs_hz[i]) / spec_ref.freqs_hz[i]
        rows.append([float(i + 1), v, cfg.frequency_unit, drift])
    _write_csv(args.out, ("mode", "frequency", "unit", "drift_vs_refined"), rows)
    return EXIT_OK


def cmd_compare(cfg: RunConfig, args) -> int:
    n, m = cfg.n_list[0], cfg.m_list[0]
    theta = cfg.theta_deg[0]
    plate_sp = _plate_spectrum_for(cfg, theta, n, m)
    solid_sp, _ = _solid_spectrum_for(cfg, cfg.solid_N, k=14)
    from .plate import ModeClass
    macro = (ModeClass.FLEXURAL, ModeClass.MIDPLANE_ROTATION)
    rows = []
    worst_macro = 0.0
    plate_distinct = []
    for f, lab in zip(plate_sp.freqs_hz, plate_sp.labels):
        if not plate_distinct or abs(f - plate_distinct[-1][0]) > 1e-9 * f:
            plate_distinct.append((f, lab))
    for f, lab in plate_distinct:
        j = int(np.argmin(np.abs(solid_sp.freqs_hz - f)))
        f3 = solid_sp.freqs_hz[j]
        rel = abs(f - f3) / f3
        rows.append([f, f3, rel, lab.value])
        if lab in macro:
            worst_macro = max(worst_macro, rel)
    _write_csv(args.out, ("plate_hz", "solid_hz", "rel_error", "plate_class"), rows)
    if worst_macro > args.tolerance:
        print(f"macro-mode error {worst_macro:.3e} exceeds tolerance "
              f"{args.tolerance:.3e}", file=sys.stderr)
        return EXIT_THRESHOLD
    return EXIT_OK


def cmd_resonance(cfg: RunConfig, args) -> int:
    spec, pencil = _solid_spectrum_for(cfg, cfg.solid_N)
    lo, hi = (2 * math.pi * cfg.scan_hz[0], 2 * math.pi * cfg.scan_hz[1])
    omegas, amps, peaks = resonance_scan(pencil, lo, hi, cfg.scan_steps)
    rows = [[w / (2 * math.pi), a] for w, a in zip(omegas, amps)]
    _write_csv(args.out, ("frequency_hz", "amplitude"), rows)
    step = (omegas[1] - omegas[0])
    flagged = 0
    for p in peaks:
        dist = np.min(np.abs(spec.omega - p))
        flag = "" if dist <= step else "  [no matching eigenvalue within one step]"
        if flag:
            flagged += 1
        print(f"peak at {p/(2*math.pi):.6f} Hz "
              f"(nearest eigenvalue {spec.omega[np.argmin(np.abs(spec.omega-p))]/(2*math.pi):.6f} Hz)"
              + flag, file=sys.stderr)
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cosseratplate",
        description="Modal analysis of Cosserat elastic plates")
    parser.add_argument("--config", required=True, help="TOML run configuration")
    parser.add_argument("--out", default=None, help="output CSV path (default stdout)")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--tolerance", type=float, default=0.01,
                        help="macro-mode comparison threshold for `compare`")
    parser.add_argument("--convention", choices=("paper", "tensor"), default=None,
                        help="override the inertia rotation convention")
    parser.add_argument("--b8", choices=("patched", "strict"), default=None,
                        help="override the z3-row Laplacian patch mode")
    parser.add_argument("command", choices=("convert", "plate-freqs",
                                            "solid-freqs", "compare", "resonance"))
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
    except (ConfigError, OSError, ValueError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    if args.convention is not None:
        cfg.convention = {"paper": RotationConvention.PAPER_SIN2THETA,
                          "tensor": RotationConvention.TENSOR}[args.convention]
    if args.b8 is not None:
        cfg.solid_b8 = args.b8

    handler = {"convert": cmd_convert, "plate-freqs": cmd_plate_freqs,
               "solid-freqs": cmd_solid_freqs, "compare": cmd_compare,
               "resonance": cmd_resonance}[args.command]
    try:
        return handler(cfg, args)
    except (numeig.PencilError, AssemblyError, np.linalg.LinAlgError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
