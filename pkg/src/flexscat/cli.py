"""Command-line front end.

Subcommands:

* ``simulate``    solve the direct problem for a config and write the
                  far-field matrix file(s)
* ``reconstruct`` compute an indicator field (from a supplied far-field file
                  or an in-process simulation) and write CSV/PGM/PNG/spectrum
* ``validate``    run the numerical invariant suites and report residuals
* ``shapes``      print the shape library with parameterizations
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import fileio, forward, geometry, indicators, specfun
from .experiment import add_noise, load_config, run_experiment
from .grid import make_grid

SHAPE_HELP = """\
shape library (t in [0, 2*pi), counterclockwise):

  circle            center + radius (cos t, sin t)
                    params: center, radius (default 0.4)
  ellipse           center + (a cos t, b sin t)
                    params: center, semi_axes (default (1.0, 0.5))
  rounded_square    center + scale (cos^3 t + cos t, sin^3 t + sin t)
                    params: center, scale (default 0.25)
  rounded_triangle  center + (radius + wobble cos 3t)(cos t, sin t)
                    params: center, radius (default 0.8), wobble (default 0.12)
  kite              center + scale (0.65 cos 2t + cos t - 0.65, 1.5 sin t)
                    params: center, scale (default 0.5)
"""


def cmd_simulate(args) -> int:
    config = load_config(args.config)
    out = Path(args.output_dir or config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    scene = config.scene()
    f = forward.far_field_matrix(scene, config.kappa, config.n_directions,
                                 config.mhalf)
    u_res = forward.unitarity_residual(f)
    i_res = forward.far_identity_residual(f)
    fileio.write_farfield(out / "farfield.txt", f)
    print(f"wrote {out / 'farfield.txt'} (N={config.n_directions}, "
          f"kappa={config.kappa})")
    if config.noise_level > 0:
        fileio.write_farfield(out / "farfield_noisy.txt",
                              add_noise(f, config.noise_level, config.seed))
        print(f"wrote {out / 'farfield_noisy.txt'} "
              f"(delta={config.noise_level}, seed={config.seed})")
    print(f"unitarity residual   {u_res:.3e}")
    print(f"far-identity residual {i_res:.3e}")
    return 0


def cmd_reconstruct(args) -> int:
    config = load_config(args.config)
    if args.method:
        config = replace(config, method=args.method)
    if args.threads:
        config = replace(config, n_threads=args.threads)
    farfield = None
    if args.farfield:
        farfield = fileio.read_farfield(args.farfield)
        if farfield.n_directions != config.n_directions:
            raise SystemExit(
                f"far-field file N={farfield.n_directions} does not match "
                f"config N={config.n_directions}")
        if abs(farfield.kappa - config.kappa) > 1e-12 * max(config.kappa, 1.0):
            raise SystemExit(
                f"far-field file kappa={farfield.kappa} does not match "
                f"config kappa={config.kappa}")
    result = run_experiment(config, out_dir=args.output_dir, farfield=farfield)
    for key in ("field", "heatmap", "figure", "spectrum", "manifest"):
        print(f"wrote {result['paths'][key]}")
    res = result["residuals"]
    print(f"unitarity residual   {res['unitarity']:.3e}")
    print(f"far-identity residual {res['far_identity']:.3e}")
    return 0


class _Report:
    def __init__(self):
        self.rows = []

    def check(self, name: str, residual: float, tol: float):
        self.rows.append((name, float(residual), float(tol)))

    def render(self) -> tuple[str, bool]:
        width = max(len(r[0]) for r in self.rows) + 2
        lines = []
        ok = True
        for name, res, tol in self.rows:
            passed = res <= tol
            ok &= passed
            lines.append(f"{'PASS' if passed else 'FAIL'}  {name:<{width}}"
                         f"residual {res:.3e}  tol {tol:.0e}")
        return "\n".join(lines), ok


# Frozen 30-digit oracle values (extended-precision ascending series).
_SPOT_VALUES = [
    ("J0(1)", lambda: specfun.bessel_j(0, 1.0), 0.765197686557966551449717526103),
    ("Y0(1)", lambda: specfun.bessel_y(0, 1.0), 0.0882569642156769579829267660235),
    ("I0(1)", lambda: specfun.bessel_i(0, 1.0), 1.26606587775200833559824462521),
    ("K0(1)", lambda: specfun.bessel_k(0, 1.0), 0.421024438240708333335627379213),
    ("J5(10)", lambda: specfun.bessel_j(5, 10.0), -0.234061528186793640443694941646),
    ("Y3(7.5)", lambda: specfun.bessel_y(3, 7.5), 0.15970759193793511509503486769),
    ("I2(3.25)", lambda: specfun.bessel_i(2, 3.25), 2.9416152804573350406227909811),
    ("K4(2.5)", lambda: specfun.bessel_k(4, 2.5), 0.765205357622841923587668009252),
]


def _validate_specfun(rep: _Report):
    for name, fn, ref in _SPOT_VALUES:
        rep.check(f"specfun {name}", abs(fn() - ref) / abs(ref), 1e-12)
    x = 1.7
    worst = 0.0
    for n in range(11):
        w = (specfun.bessel_j(n + 1, x) * specfun.bessel_y(n, x)
             - specfun.bessel_j(n, x) * specfun.bessel_y(n + 1, x))
        worst = max(worst, abs(w - 2.0 / (np.pi * x)))
    rep.check("specfun J/Y Wronskian", worst, 1e-11)
    worst = 0.0
    for xx in (0.1, 1.0, 10.0, 50.0):
        for n in range(11):
            w = (specfun.bessel_i(n, xx) * specfun.bessel_k(n + 1, xx)
                 + specfun.bessel_i(n + 1, xx) * specfun.bessel_k(n, xx))
            worst = max(worst, abs(w - 1.0 / xx) * xx)
    rep.check("specfun I/K Wronskian", worst, 1e-11)


def _validate_kernels(rep: _Report, kappa: float):
    from .kernels import sdir_block, sdir_selfsplit
    curve = geometry.make_shape("circle", radius=1.0)
    worst = 0.0
    for dt in (0.5, 0.05, 2.0):
        t, s = 1.3, 1.3 - dt
        split = sdir_selfsplit(kappa, curve, t, s)
        recon = split.k1 * np.log(4.0 * np.sin((t - s) / 2.0) ** 2) + split.k2
        block = sdir_block(kappa, curve, t, curve, s)
        worst = max(worst, float(np.max(np.abs(recon - block))))
    rep.check("kernel splitting reconstruction", worst, 1e-11)
    split0 = sdir_selfsplit(kappa, curve, 1.0, 1.0)
    rep.check("kernel diagonal limit (1,1)",
              abs(split0.k2[0, 0] - (-0.25j / (2 * kappa**2))), 1e-13)


def _validate_forward(rep: _Report, n: int, mhalf: int):
    kappa = 2.0 * np.pi
    disk = geometry.make_shape("circle", radius=0.4)
    f = forward.far_field_matrix(disk, kappa, n, mhalf)
    rep.check("far-field unitarity", forward.unitarity_residual(f), 1e-6)
    rep.check("far-field identity", forward.far_identity_residual(f), 1e-6)
    fs = forward.disk_series_far_field((0.0, 0.0), 0.4, kappa, n, 60)
    rep.check("Nystroem vs disk series",
              float(np.max(np.abs(f.entries - fs.entries))), 1e-6)

    system = forward.assemble(disk, kappa, mhalf)
    lay = system.layout
    rng = np.random.default_rng(12345)
    k = lay.total_nodes
    tau = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    sig = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    v, dv = system.apply(tau, sig)
    lhs = np.imag(np.sum(lay.weights * (tau * np.conj(v) + sig * np.conj(dv))))
    dens = forward.DensityPair(tau=tau, sigma=sig, layout=lay)
    dirs = forward.direction_grid(max(n, 64))
    vinf = forward.far_field_vector(dens, kappa, dirs)
    rhs = kappa**2 / (4 * np.pi) * (2 * np.pi / dirs.shape[0]) * np.sum(np.abs(vinf) ** 2)
    rep.check("energy identity", abs(lhs - rhs) / abs(rhs), 1e-5)

    t = np.array([0.7, -0.3])
    f2 = forward.far_field_matrix(geometry.make_shape("circle", radius=0.4, center=t),
                                  kappa, n, mhalf)
    d = np.exp(1j * kappa * (f.directions() @ t))
    conj = np.conj(d)[:, None] * f.entries * d[None, :]
    rep.check("far-field translation covariance",
              float(np.max(np.abs(f2.entries - conj))), 1e-8)

    worst = 0.0
    rng = np.random.default_rng(99)
    for _ in range(5):
        z = rng.uniform(-2, 2, size=2)
        h = rng.uniform(0.05, 0.5)
        t_b = indicators.probe_gram(z, h, kappa, f.directions()).entries
        vals = np.linalg.eigvalsh(t_b)
        worst = max(worst, -float(vals.min()) / float(np.trace(t_b).real))
    rep.check("probe matrix PSD", worst, 1e-10)
    return f


def _validate_example1(rep: _Report, f):
    grid = make_grid((-4, 4, -4, 4), 41, 41)
    pts = grid.points()
    r = np.linalg.norm(pts, axis=1)
    for variant in ("W1", "W2"):
        vals = indicators.fm_field(f, grid, alpha=0.0, variant=variant).values
        ratio = np.median(vals[r <= 0.3]) / np.median(vals[r >= 1.5])
        rep.check(f"example-1 {variant} separation (ratio {ratio:.1f} >= 10)",
                  10.0 / ratio, 1.0)
    counts = indicators.mm_field(f, grid, h=0.1, delta=0.0).values
    margin = counts[r >= 1.5].min() - counts[r <= 0.3].max()
    rep.check(f"example-1 W3 separation (margin {margin:.0f} >= 1)",
              1.0 - margin, 0.0)


def cmd_validate(args) -> int:
    t0 = time.time()
    quick = args.level == "quick"
    n, mhalf = (32, 64) if quick else (64, 128)
    rep = _Report()
    _validate_specfun(rep)
    _validate_kernels(rep, kappa=2.0 * np.pi)
    f = _validate_forward(rep, n, mhalf)
    if not quick:
        _validate_example1(rep, f)
    text, ok = rep.render()
    print(text)
    print(f"{'OK' if ok else 'FAILED'} ({len(rep.rows)} checks, "
          f"{time.time() - t0:.1f} s, level={args.level})")
    return 0 if ok else 1


def cmd_shapes(_args) -> int:
    print(SHAPE_HELP, end="")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="flexscat",
        description="Flexural plate-wave scattering and qualitative "
                    "obstacle reconstruction from far-field data.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="solve the direct problem and "
                           "write the far-field matrix file(s)")
    p_sim.add_argument("--config", required=True, help="TOML experiment config")
    p_sim.add_argument("--output-dir", default=None)
    p_sim.set_defaults(func=cmd_simulate)

    p_rec = sub.add_parser("reconstruct", help="compute an indicator field "
                           "and write field/heatmap/figure/spectrum")
    p_rec.add_argument("--config", required=True, help="TOML experiment config")
    p_rec.add_argument("--farfield", default=None,
                       help="existing far-field file (default: simulate)")
    p_rec.add_argument("--output-dir", default=None)
    p_rec.add_argument("--method", choices=("W1", "W2", "W3", "W4"), default=None)
    p_rec.add_argument("--threads", type=int, default=None)
    p_rec.set_defaults(func=cmd_reconstruct)

    p_val = sub.add_parser("validate", help="run the numerical invariant suites")
    p_val.add_argument("--level", choices=("quick", "full"), default="quick")
    p_val.set_defaults(func=cmd_validate)

    p_shapes = sub.add_parser("shapes", help="print the shape library")
    p_shapes.set_defaults(func=cmd_shapes)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
