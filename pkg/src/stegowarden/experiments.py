"""Declarative experiment sweeps: presets for every figure-style comparison,
a flat key=value spec-file format, CSV (and optional SVG) emission.

A sweep is a cartesian grid over (scheme, alpha, tau, DWR, WNR).  Each grid
point runs under its own derived key, so results are reproducible from the
root seed alone and the CSV is byte-identical across reruns; record order is
the deterministic grid order even when points execute in parallel.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import math
import os
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from . import analysis
from .analysis import (
    KLD_BINS,
    KLD_SUPPORT_SIGMAS,
    build_histogram,
    default_epsilon,
    estimate_capacity_ber,
    estimate_capacity_mi,
    kld,
    kld_derivative_alpha,
    kld_noise_floor,
    optimize_alpha,
    scheme_kld,
)
from .errors import ParameterError
from .images import image_to_signal, load_pgm
from .schemes import SCHEME_NAMES, SchemeSpec
from .scs import scs_theoretical_pdf
from .signals import Key, gen_gaussian_host, random_bits
from .spread import stscs_theoretical_pdf
from .tcq import tcq_theoretical_pdf

__all__ = [
    "ExperimentSpec",
    "ExperimentRecord",
    "DensityRow",
    "DerivativeRow",
    "ExperimentResult",
    "PRESETS",
    "make_preset",
    "parse_specfile",
    "run_experiment",
    "emit_csv",
    "emit_density_csv",
    "emit_derivative_csv",
    "emit_plot",
    "run_and_write",
]

CSV_HEADER = "scheme,alpha,tau,dwr_db,wnr_db,kld_bits,capacity_bits,capacity_method,ber,G,trials,seed"
DENSITY_HEADER = "scheme,alpha,tau,dwr_db,x,empirical_pdf,theoretical_pdf"
DERIVATIVE_HEADER = "scheme,alpha,tau,dwr_db,h,dkld_dalpha_bits,noise_floor_bits"

KINDS = ("density", "kld", "capacity", "kld-capacity", "kld-derivative", "images")

# default grids for per-point Costa-factor optimization
OPT_ALPHA_GRID_MI = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95)
OPT_ALPHA_GRID_BSC = (0.2, 0.3, 0.5, 0.7, 0.9)


@dataclass(frozen=True)
class ExperimentSpec:
    """One declarative sweep; grids are cartesian and must be non-empty."""

    name: str
    kind: str
    schemes: tuple[str, ...]
    alphas: tuple[float, ...]
    taus: tuple[int, ...] = (2,)
    dwrs_db: tuple[float, ...] = (13.0,)
    wnrs_db: tuple[float, ...] = (math.inf,)
    g: int = 10**6
    trials: int = 10**5
    seed: int = 0
    out: str = "experiment.csv"
    r: int = 6
    sigma_s: float = 1.0
    alpha_policy: str = "fixed"  # fixed | opt | both (capacity kinds)
    h: float = 0.05  # alpha step for the derivative kind
    images_dir: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown experiment kind {self.kind!r}")
        for s in self.schemes:
            if s not in SCHEME_NAMES:
                raise ParameterError(f"unknown scheme {s!r}")
        for grid, label in (
            (self.schemes, "schemes"),
            (self.alphas, "alphas"),
            (self.taus, "taus"),
            (self.dwrs_db, "dwrs_db"),
            (self.wnrs_db, "wnrs_db"),
        ):
            if len(grid) == 0:
                raise ParameterError(f"grid {label} must be non-empty")
        if self.alpha_policy not in ("fixed", "opt", "both"):
            raise ParameterError("alpha_policy must be fixed, opt or both")
        if self.kind in ("density", "kld", "kld-capacity", "kld-derivative") and self.g < 10**4:
            raise ParameterError("density experiments need G >= 1e4")
        if self.kind == "images" and not self.images_dir:
            raise ParameterError("images experiments need images_dir")

    @property
    def key(self) -> Key:
        return Key(self.seed)


@dataclass(frozen=True)
class ExperimentRecord:
    scheme: str
    alpha: float
    tau: int
    dwr_db: float
    wnr_db: float
    kld_bits: float | None
    capacity_bits: float | None
    capacity_method: str
    ber: float | None
    g: int
    trials: int
    seed: int


@dataclass(frozen=True)
class DensityRow:
    scheme: str
    alpha: float
    tau: int
    dwr_db: float
    x: float
    empirical_pdf: float
    theoretical_pdf: float


@dataclass(frozen=True)
class DerivativeRow:
    scheme: str
    alpha: float
    tau: int
    dwr_db: float
    h: float
    dkld_dalpha_bits: float
    noise_floor_bits: float


@dataclass
class ExperimentResult:
    records: list = field(default_factory=list)
    density: list = field(default_factory=list)
    derivative: list = field(default_factory=list)


def _tau_for(scheme: str, spec: ExperimentSpec):
    return tuple(spec.taus) if scheme == "stscs" else (1,)


def _grid(spec: ExperimentSpec):
    """Deterministic grid order: scheme, alpha, tau, dwr, wnr (as applicable)."""
    points = []
    for scheme in spec.schemes:
        for alpha in spec.alphas:
            for tau in _tau_for(scheme, spec):
                for dwr in spec.dwrs_db:
                    if spec.kind in ("capacity", "kld-capacity"):
                        for wnr in spec.wnrs_db:
                            points.append((scheme, alpha, tau, dwr, wnr))
                    else:
                        points.append((scheme, alpha, tau, dwr, math.inf))
    return points


def _scheme_spec(scheme: str, alpha: float, tau: int, dwr: float, spec: ExperimentSpec) -> SchemeSpec:
    return SchemeSpec(name=scheme, alpha=alpha, dwr_db=dwr, tau=tau if scheme == "stscs" else 1, r=spec.r)


def _host_pdf(sigma_s):
    return lambda z: norm.pdf(z, scale=sigma_s)


def _theoretical_density(sspec: SchemeSpec, params, xs, sigma_s):
    if sspec.name == "scs":
        return scs_theoretical_pdf(xs, params, _host_pdf(sigma_s))
    if sspec.name == "tcq":
        return tcq_theoretical_pdf(xs, params, _host_pdf(sigma_s), host_cdf=lambda z: norm.cdf(z, scale=sigma_s))
    return stscs_theoretical_pdf(xs, params, _host_pdf(sigma_s), sigma_s)


def _density_point(spec: ExperimentSpec, scheme, alpha, tau, dwr, key: Key):
    sspec = dataclasses.replace(_scheme_spec(scheme, alpha, tau, dwr, spec), dithered=False)
    g = spec.g - spec.g % sspec.block
    s = gen_gaussian_host(g, spec.sigma_s, key)
    bits = random_bits(key, sspec.n_bits(g))
    params = sspec.build_params(spec.sigma_s, key)
    x = sspec.embed(s, bits, params)
    lim = KLD_SUPPORT_SIGMAS * spec.sigma_s
    hist_x = build_histogram(x, -lim, lim, KLD_BINS)
    hist_s = build_histogram(s, -lim, lim, KLD_BINS)
    report = kld(hist_x, hist_s, default_epsilon(g))
    centers = hist_x.centers()
    theo = _theoretical_density(sspec, params, centers, spec.sigma_s)
    emp = hist_x.density()
    rows = [
        DensityRow(scheme, alpha, tau, dwr, float(cx), float(pe), float(pt))
        for cx, pe, pt in zip(centers, emp, theo)
    ]
    return report, rows


def _capacity_point(spec: ExperimentSpec, scheme, alpha, tau, dwr, wnr, key: Key):
    """Capacity rows for one grid point, honoring the alpha policy."""
    sspec = _scheme_spec(scheme, alpha, tau, dwr, spec)
    method = "bsc" if scheme == "tcq" else "mi"
    rows = []
    if spec.alpha_policy in ("fixed", "both"):
        if method == "mi":
            est = estimate_capacity_mi(sspec, wnr, spec.trials, key, spec.sigma_s)
            ber = None
        else:
            est = estimate_capacity_ber(sspec, wnr, spec.trials, key, spec.sigma_s)
            ber = analysis.measure_ber(sspec, wnr, spec.trials, key, spec.sigma_s)
        rows.append((alpha, est, f"{method}/alpha-fixed", ber))
    if spec.alpha_policy in ("opt", "both"):
        grid = OPT_ALPHA_GRID_BSC if method == "bsc" else OPT_ALPHA_GRID_MI
        alpha_star, est = optimize_alpha(sspec, wnr, grid, spec.trials, key, spec.sigma_s, method)
        ber = (
            analysis.measure_ber(sspec.with_alpha(alpha_star), wnr, spec.trials, key, spec.sigma_s)
            if method == "bsc"
            else None
        )
        rows.append((alpha_star, est, f"{method}/alpha-opt", ber))
    return rows


def _images_point(spec: ExperimentSpec, scheme, alpha, tau, dwr, key: Key):
    paths = sorted(
        os.path.join(spec.images_dir, f)
        for f in os.listdir(spec.images_dir)
        if f.lower().endswith(".pgm")
    )
    if not paths:
        raise ParameterError(f"no .pgm files under {spec.images_dir}")
    klds, total = [], 0
    for i, path in enumerate(paths):
        sig, _ = image_to_signal(load_pgm(path))
        sigma = float(sig.std())
        if sigma <= 0:
            continue  # constant image carries no usable host
        sspec = dataclasses.replace(_scheme_spec(scheme, alpha, tau, dwr, spec), dithered=False)
        g = sig.size - sig.size % sspec.block
        sig = sig[:g]
        ikey = key.child("image", i)
        bits = random_bits(ikey, sspec.n_bits(g))
        params = sspec.build_params(sigma, ikey)
        x = sspec.embed(sig, bits, params)
        lim = KLD_SUPPORT_SIGMAS * sigma
        report = kld(
            build_histogram(x, -lim, lim, KLD_BINS),
            build_histogram(sig, -lim, lim, KLD_BINS),
            default_epsilon(g),
        )
        klds.append(report.kld_bits)
        total += g
    if not klds:
        raise ParameterError("no usable images (all constant)")
    return float(np.mean(klds)), total, len(klds)


def _run_point(spec: ExperimentSpec, index: int):
    """Execute one grid point under its own derived key; pure given (spec, index)."""
    scheme, alpha, tau, dwr, wnr = _grid(spec)[index]
    key = spec.key.child("point", index)
    records, density, derivative = [], [], []
    try:
        if spec.kind in ("density", "kld"):
            if spec.kind == "density":
                report, rows = _density_point(spec, scheme, alpha, tau, dwr, key)
                density.extend(rows)
            else:
                sspec = _scheme_spec(scheme, alpha, tau, dwr, spec)
                g = spec.g - spec.g % sspec.block
                report = scheme_kld(sspec, g, key, spec.sigma_s)
            records.append(
                ExperimentRecord(scheme, alpha, tau, dwr, wnr, report.kld_bits, None, "", None,
                                 spec.g, spec.trials, spec.seed)
            )
        elif spec.kind == "capacity":
            for a_used, est, label, ber in _capacity_point(spec, scheme, alpha, tau, dwr, wnr, key):
                records.append(
                    ExperimentRecord(scheme, a_used, tau, dwr, wnr, None, est.bits_per_sample,
                                     label, ber, spec.g, est.trials, spec.seed)
                )
        elif spec.kind == "kld-capacity":
            # the KLD key depends only on (scheme, alpha, tau, dwr) so rows sharing an
            # operating point report the same detectability across the WNR grid
            kkey = spec.key.child(f"kld-{scheme}-{alpha}-{tau}-{dwr}")
            sspec = _scheme_spec(scheme, alpha, tau, dwr, spec)
            g = spec.g - spec.g % sspec.block
            report = scheme_kld(sspec, g, kkey, spec.sigma_s)
            for a_used, est, label, ber in _capacity_point(spec, scheme, alpha, tau, dwr, wnr, key):
                records.append(
                    ExperimentRecord(scheme, a_used, tau, dwr, wnr, report.kld_bits,
                                     est.bits_per_sample, label, ber, spec.g, est.trials, spec.seed)
                )
        elif spec.kind == "kld-derivative":
            sspec = _scheme_spec(scheme, alpha, tau, dwr, spec)
            g = spec.g - spec.g % sspec.block
            deriv = kld_derivative_alpha(sspec, alpha, spec.h, g, key, spec.sigma_s)
            floor = kld_noise_floor(g, key, spec.sigma_s)
            report = scheme_kld(sspec, g, key, spec.sigma_s)
            records.append(
                ExperimentRecord(scheme, alpha, tau, dwr, wnr, report.kld_bits, None, "", None,
                                 spec.g, spec.trials, spec.seed)
            )
            derivative.append(DerivativeRow(scheme, alpha, tau, dwr, spec.h, deriv, floor))
        elif spec.kind == "images":
            mean_kld, total, n_images = _images_point(spec, scheme, alpha, tau, dwr, key)
            records.append(
                ExperimentRecord(scheme, alpha, tau, dwr, wnr, mean_kld, None, "", None,
                                 total, n_images, spec.seed)
            )
    except Exception as exc:
        raise type(exc)(
            f"{exc} [at grid point scheme={scheme} alpha={alpha} tau={tau} "
            f"dwr_db={dwr} wnr_db={wnr}]"
        ) from exc
    return records, density, derivative


def run_experiment(spec: ExperimentSpec, jobs: int = 1) -> ExperimentResult:
    """Run the full cartesian sweep; output order is the grid order."""
    points = _grid(spec)
    result = ExperimentResult()
    if jobs <= 1:
        outs = [_run_point(spec, i) for i in range(len(points))]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            outs = list(pool.map(_run_point, [spec] * len(points), range(len(points))))
    for recs, dens, deriv in outs:
        result.records.extend(recs)
        result.density.extend(dens)
        result.derivative.extend(deriv)
    return result


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".12g")
    return str(v)


def emit_csv(records, path) -> None:
    if not records:
        raise ParameterError("no records to write")
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            for rec in records:
                fh.write(
                    ",".join(
                        _fmt(v)
                        for v in (
                            rec.scheme, rec.alpha, rec.tau, rec.dwr_db, rec.wnr_db,
                            rec.kld_bits, rec.capacity_bits, rec.capacity_method,
                            rec.ber, rec.g, rec.trials, rec.seed,
                        )
                    )
                    + "\n"
                )
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def emit_density_csv(rows, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(DENSITY_HEADER + "\n")
        for r in rows:
            fh.write(
                ",".join(_fmt(v) for v in (r.scheme, r.alpha, r.tau, r.dwr_db, r.x,
                                            r.empirical_pdf, r.theoretical_pdf)) + "\n"
            )


def emit_derivative_csv(rows, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(DERIVATIVE_HEADER + "\n")
        for r in rows:
            fh.write(
                ",".join(_fmt(v) for v in (r.scheme, r.alpha, r.tau, r.dwr_db, r.h,
                                            r.dkld_dalpha_bits, r.noise_floor_bits)) + "\n"
            )


def emit_plot(rows, path, x_field: str, y_field: str, group_fields=("scheme",)) -> None:
    """Minimal self-contained SVG line chart, one polyline per group."""
    if not rows:
        raise ParameterError("no rows to plot")
    width, height, margin = 640, 420, 60
    palette = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")

    def value(row, fld):
        return getattr(row, fld)

    groups: dict[str, list] = {}
    for row in rows:
        gname = ",".join(str(value(row, f)) for f in group_fields)
        groups.setdefault(gname, []).append(row)
    pts = [
        (value(r, x_field), value(r, y_field))
        for rs in groups.values()
        for r in rs
        if value(r, x_field) is not None and value(r, y_field) is not None
        and math.isfinite(value(r, x_field)) and math.isfinite(value(r, y_field))
    ]
    if not pts:
        raise ParameterError("no finite points to plot")
    xs, ys = zip(*pts)
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def sx(v):
        return margin + (v - x0) / (x1 - x0) * (width - 2 * margin)

    def sy(v):
        return height - margin - (v - y0) / (y1 - y0) * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<text x="{width // 2}" y="{height - 15}" text-anchor="middle" '
        f'font-size="13">{x_field}</text>',
        f'<text x="18" y="{height // 2}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 18 {height // 2})">{y_field}</text>',
    ]
    for i in range(5):
        xv = x0 + (x1 - x0) * i / 4
        yv = y0 + (y1 - y0) * i / 4
        parts.append(
            f'<text x="{sx(xv):.1f}" y="{height - margin + 18}" text-anchor="middle" '
            f'font-size="11">{xv:.3g}</text>'
        )
        parts.append(
            f'<text x="{margin - 8}" y="{sy(yv):.1f}" text-anchor="end" '
            f'font-size="11">{yv:.3g}</text>'
        )
    for gi, (gname, rs) in enumerate(sorted(groups.items())):
        color = palette[gi % len(palette)]
        good = [
            r for r in rs
            if value(r, x_field) is not None and value(r, y_field) is not None
            and math.isfinite(value(r, x_field)) and math.isfinite(value(r, y_field))
        ]
        good.sort(key=lambda r: value(r, x_field))
        coords = " ".join(f"{sx(value(r, x_field)):.2f},{sy(value(r, y_field)):.2f}" for r in good)
        if coords:
            parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        parts.append(
            f'<text x="{width - margin + 4}" y="{margin + 14 * gi}" font-size="11" '
            f'fill="{color}">{gname}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")


def _plot_fields(kind: str):
    return {
        "kld": ("dwr_db", "kld_bits", ("scheme", "tau", "alpha")),
        "images": ("dwr_db", "kld_bits", ("scheme",)),
        "capacity": ("wnr_db", "capacity_bits", ("scheme", "capacity_method")),
        "kld-capacity": ("kld_bits", "capacity_bits", ("scheme",)),
        "kld-derivative": ("alpha", "kld_bits", ("scheme", "tau")),
        "density": ("x", "empirical_pdf", ("scheme", "alpha", "tau")),
    }[kind]


def run_and_write(spec: ExperimentSpec, jobs: int = 1, plot: bool = False) -> list[str]:
    """Run a sweep and write its CSV outputs (plus an SVG when asked)."""
    result = run_experiment(spec, jobs=jobs)
    written = []
    emit_csv(result.records, spec.out)
    written.append(spec.out)
    stem = spec.out[:-4] if spec.out.endswith(".csv") else spec.out
    if result.density:
        emit_density_csv(result.density, stem + "_density.csv")
        written.append(stem + "_density.csv")
    if result.derivative:
        emit_derivative_csv(result.derivative, stem + "_derivative.csv")
        written.append(stem + "_derivative.csv")
    if plot:
        xf, yf, gf = _plot_fields(spec.kind)
        rows = result.density if spec.kind == "density" else result.records
        emit_plot(rows, stem + ".svg", xf, yf, gf)
        written.append(stem + ".svg")
    return written


# ---------------------------------------------------------------------------
# presets: the paper-figure style sweeps at desk scale
# ---------------------------------------------------------------------------

PRESETS = {
    "fig1a": "SCS stego density vs its analytic model, alpha=0.3, DWR=13 dB (~10 s)",
    "fig3a": "capacity vs WNR for SCS, TCQ, ST-SCS(tau=2), fixed and optimized alpha (~3 min)",
    "fig3b": "d(KLD)/d(alpha) for ST-SCS tau=2 at DWR=13 dB (~1 min)",
    "fig4": "ST-SCS stego densities vs the analytic model, tau in {2,10}, alpha in {0.3,0.7} (~2 min)",
    "fig5a": "KLD vs DWR for SCS, TCQ, ST-SCS(tau in {2,10}) at alpha=0.3 (~1 min)",
    "fig5b": "capacity vs KLD trade-off over the (DWR, WNR) grid (~4 min)",
    "fig6a": "ST-SCS KLD vs tau for several alpha (~1 min)",
    "fig6b": "ST-SCS KLD vs alpha for tau in {2,10} (~1 min)",
    "fig7": "mean KLD vs DWR over a directory of PGM images (~1 min for a dozen images)",
}


def make_preset(name: str, seed: int, out: str, images_dir: str | None = None) -> ExperimentSpec:
    """Instantiate a named preset.  Parameters the source figures leave
    unstated (grids, trial counts) are desk-scale defaults chosen here."""
    common = dict(seed=seed, out=out)
    if name == "fig1a":
        return ExperimentSpec(name=name, kind="density", schemes=("scs",), alphas=(0.3,),
                              dwrs_db=(13.0,), g=10**6, **common)
    if name == "fig3a":
        return ExperimentSpec(name=name, kind="capacity", schemes=("scs", "tcq", "stscs"),
                              alphas=(0.5,), taus=(2,), dwrs_db=(13.0,),
                              wnrs_db=(-20.0, -16.0, -12.0, -8.0, -4.0, 0.0, 4.0, 8.0, 12.0),
                              trials=10**5, alpha_policy="both", **common)
    if name == "fig3b":
        return ExperimentSpec(name=name, kind="kld-derivative", schemes=("stscs",),
                              alphas=(0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8), taus=(2,),
                              dwrs_db=(13.0,), g=10**6, h=0.05, **common)
    if name == "fig4":
        return ExperimentSpec(name=name, kind="density", schemes=("stscs",),
                              alphas=(0.3, 0.7), taus=(2, 10), dwrs_db=(13.0,), g=10**6, **common)
    if name == "fig5a":
        return ExperimentSpec(name=name, kind="kld", schemes=("scs", "tcq", "stscs"),
                              alphas=(0.3,), taus=(2, 10), dwrs_db=(5.0, 13.0, 21.0, 30.0),
                              g=10**6, **common)
    if name == "fig5b":
        return ExperimentSpec(name=name, kind="kld-capacity", schemes=("scs", "tcq", "stscs"),
                              alphas=(0.3,), taus=(2,), dwrs_db=(0.0, 10.0, 20.0, 30.0, 40.0),
                              wnrs_db=(-20.0, -12.0, -4.0, 4.0, 12.0), g=2 * 10**5,
                              trials=3 * 10**4, alpha_policy="fixed", **common)
    if name == "fig6a":
        return ExperimentSpec(name=name, kind="kld", schemes=("stscs",),
                              alphas=(0.3, 0.5, 0.7), taus=(2, 4, 10), dwrs_db=(13.0,),
                              g=10**6, **common)
    if name == "fig6b":
        return ExperimentSpec(name=name, kind="kld", schemes=("stscs",),
                              alphas=(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9),
                              taus=(2, 10), dwrs_db=(13.0,), g=10**6, **common)
    if name == "fig7":
        return ExperimentSpec(name=name, kind="images", schemes=("scs", "tcq", "stscs"),
                              alphas=(0.3,), taus=(2,), dwrs_db=(5.0, 13.0, 21.0, 30.0),
                              images_dir=images_dir, **common)
    raise ParameterError(f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}")


# ---------------------------------------------------------------------------
# flat key=value spec files
# ---------------------------------------------------------------------------

_LIST_FIELDS = {"schemes": str, "alphas": float, "taus": int, "dwrs_db": float, "wnrs_db": float}
_SCALAR_FIELDS = {
    "name": str, "kind": str, "g": int, "trials": int, "seed": int, "out": str,
    "r": int, "sigma_s": float, "alpha_policy": str, "h": float, "images_dir": str,
}


def parse_specfile(path) -> ExperimentSpec:
    """Parse `key = value` lines; lists are comma-separated, '#' starts a comment."""
    fields: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected 'key = value'")
            k, v = (part.strip() for part in line.split("=", 1))
            if k in _LIST_FIELDS:
                conv = _LIST_FIELDS[k]
                try:
                    fields[k] = tuple(conv(tok.strip()) for tok in v.split(",") if tok.strip())
                except ValueError as exc:
                    raise ParameterError(f"{path}:{lineno}: bad list value {v!r}") from exc
            elif k in _SCALAR_FIELDS:
                conv = _SCALAR_FIELDS[k]
                try:
                    fields[k] = conv(v)
                except ValueError as exc:
                    raise ParameterError(f"{path}:{lineno}: bad value {v!r} for {k}") from exc
            else:
                raise ParameterError(f"{path}:{lineno}: unknown key {k!r}")
    for required in ("kind", "schemes", "alphas"):
        if required not in fields:
            raise ParameterError(f"{path}: missing required key {required!r}")
    fields.setdefault("name", "custom")
    return ExperimentSpec(**fields)
