"""Command-line front end.

Commands:
    analyze    weight diagnostics + annulus prediction (JSON, SVG figure)
    spectrum   finite-section eigenvalues and Gelfand sequences (CSV, SVG)
    certify    universality certification report (JSON; exit 0/2/3)
    decompose  fixed-point splitting of a function (CSV + JSON)
    selftest   invariant battery at reduced order

Reports embed the exact run configuration; identical configurations produce
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import WcospecError
from .mobius import Automorphism, canonical, from_fixed_points
from .report import dumps, write_complex_csv, write_json, write_matrix_csv
from .series import TaylorSeries, exp as series_exp, fractional_power, log as series_log, mul
from .spaces import SpaceSpec, norm
from .spectra import gelfand_radius, predict_annuli, truncated_eigenvalues
from .symbolparse import analyze_text, parse
from .universality import (
    caradus_report,
    decompose as split_function,
    eigenfunction,
    eigenfunction_composed,
    generator_check,
    membership_diagnostics,
    omega_ratio_limits,
)
from .wco import WCOperator, normalized_isometry

USAGE_EXIT = 64
FAILURE_EXIT = 1
CERTIFY_EXIT = {"certified_at_scale": 0, "window_empty": 2, "failed": 3}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(USAGE_EXIT)


def parse_complex(text: str) -> complex:
    """Accept '1', '-0.5', '2i', '1+0.5i', 'i' (also j-suffix)."""
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError as exc:
        raise WcospecError(f"cannot parse complex number {text!r}") from exc


def parse_automorphism(spec: str) -> Automorphism:
    """Constructor syntax: 'canonical:r' or 'fixed:a,b;deriv:lambda_a'."""
    spec = spec.strip()
    if spec.startswith("canonical:"):
        return canonical(float(spec.split(":", 1)[1]))
    if spec.startswith("fixed:"):
        try:
            fixed_part, deriv_part = spec.split(";", 1)
            a_text, b_text = fixed_part.split(":", 1)[1].split(",")
            if not deriv_part.startswith("deriv:"):
                raise ValueError
            lam = float(deriv_part.split(":", 1)[1])
        except ValueError as exc:
            raise WcospecError(
                f"bad automorphism spec {spec!r}; expected fixed:a,b;deriv:lambda_a"
            ) from exc
        return from_fixed_points(parse_complex(a_text), parse_complex(b_text), lam)
    raise WcospecError(f"bad automorphism spec {spec!r}; expected canonical:r or fixed:...")


def parse_space(spec: str, p: float) -> SpaceSpec:
    spec = spec.strip().lower()
    if spec == "hardy":
        return SpaceSpec.hardy(p)
    if spec.startswith("bergman:"):
        return SpaceSpec.bergman(float(spec.split(":", 1)[1]), p)
    if spec == "bergman":
        return SpaceSpec.bergman(0.0, p)
    raise WcospecError(f"bad space spec {spec!r}; expected hardy or bergman:<sigma>")


@dataclass
class RunConfig:
    command: str
    symbol_text: str | None = None
    automorphism_spec: str | None = None
    space: str = "hardy"
    p: float = 2.0
    lam: complex | None = None
    order: int = 256
    K: int = 5
    tolerance: float = 1e-3
    out: str = "."
    quick: bool = False
    f_text: str | None = None
    mu: float = 1.0
    nu: float = 1.0
    seed: int = 0
    threads: int | None = None
    version: str = field(default=__version__)

    def echo(self) -> dict:
        d = {k: v for k, v in self.__dict__.items()}
        d["branch_convention"] = (
            "log((b-z)/(a-z)) fixed by principal value at z=0; "
            "boundary powers (c-z)^s via principal log(1-z/c)"
        )
        return d


def _common_flags(p: argparse.ArgumentParser, need_symbol=True):
    if need_symbol:
        p.add_argument("--symbol", required=True, help="weight expression u(z), e.g. '2+z'")
        p.add_argument("--auto", required=True,
                       help="automorphism: canonical:r or fixed:a,b;deriv:lambda_a")
    p.add_argument("--space", default="hardy", help="hardy or bergman:<sigma>")
    p.add_argument("--p", type=float, default=2.0, help="space exponent (default 2)")
    p.add_argument("--N", type=int, default=256, help="truncation order")
    p.add_argument("--tol", type=float, default=1e-3, help="probe tolerance")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--quick", action="store_true", help="reduced-size run")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wcospec",
                     description="weighted hyperbolic composition operators: spectra and universality")
    parser.add_argument("--version", action="version", version=f"wcospec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_an = sub.add_parser("analyze", help="weight diagnostics and annulus prediction")
    _common_flags(p_an)

    p_sp = sub.add_parser("spectrum", help="finite-section eigenvalues and Gelfand sequences")
    _common_flags(p_sp)
    p_sp.add_argument("--lambda", dest="lam", default=None, help="marker eigenvalue for the figure")

    p_ce = sub.add_parser("certify", help="universality certification")
    _common_flags(p_ce)
    p_ce.add_argument("--lambda", dest="lam", required=True, help="translation eigenvalue")
    p_ce.add_argument("--K", type=int, default=5, help="kernel probe depth")
    p_ce.add_argument("--seed", type=int, default=0, help="seed for the target battery")

    p_de = sub.add_parser("decompose", help="fixed-point splitting of a function")
    p_de.add_argument("--f", required=True, help="function expression to split")
    p_de.add_argument("--auto", required=True, help="automorphism spec")
    p_de.add_argument("--mu", type=float, default=1.0)
    p_de.add_argument("--nu", type=float, default=1.0)
    _common_flags(p_de, need_symbol=False)

    p_st = sub.add_parser("selftest", help="run the invariant battery")
    p_st.add_argument("--N", type=int, default=256)
    p_st.add_argument("--quick", action="store_true", help="subset at N=64")
    p_st.add_argument("--out", default=None, help="optional directory for the summary JSON")

    return parser


def _ensure_out(cfg: RunConfig) -> str:
    os.makedirs(cfg.out, exist_ok=True)
    return cfg.out


def _config_from_args(args, command) -> RunConfig:
    cfg = RunConfig(command=command)
    cfg.symbol_text = getattr(args, "symbol", None)
    cfg.automorphism_spec = getattr(args, "auto", None)
    cfg.space = getattr(args, "space", "hardy")
    cfg.p = getattr(args, "p", 2.0)
    cfg.order = getattr(args, "N", 256)
    cfg.K = getattr(args, "K", 5)
    cfg.tolerance = getattr(args, "tol", 1e-3)
    cfg.out = getattr(args, "out", ".")  # None disables file output (selftest)
    cfg.quick = getattr(args, "quick", False)
    cfg.f_text = getattr(args, "f", None)
    cfg.mu = getattr(args, "mu", 1.0)
    cfg.nu = getattr(args, "nu", 1.0)
    cfg.seed = getattr(args, "seed", 0)
    lam = getattr(args, "lam", None)
    cfg.lam = parse_complex(lam) if isinstance(lam, str) else lam
    threads = os.environ.get("WCOSPEC_THREADS")
    cfg.threads = int(threads) if threads else None
    return cfg


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_analyze(cfg: RunConfig) -> int:
    from .figures import save_annulus_figure

    out = _ensure_out(cfg)
    psi = parse_automorphism(cfg.automorphism_spec)
    space = parse_space(cfg.space, cfg.p)
    weight = analyze_text(cfg.symbol_text, psi, cfg.order)
    pred = predict_annuli(weight, psi, space)
    payload = {
        "config": cfg.echo(),
        "weight": {
            "source": weight.source,
            "sup_norm_est": weight.sup_norm_est,
            "inf_modulus_est": weight.inf_modulus_est,
            "A_plus": weight.A_plus,
            "A_minus": weight.A_minus,
            "B_plus": weight.B_plus,
            "B_minus": weight.B_minus,
            "diagnostics": weight.diagnostics,
        },
        "annulus": pred.as_dict(),
    }
    write_json(payload, os.path.join(out, "analyze.json"))
    save_annulus_figure(pred, os.path.join(out, "annulus.svg"),
                        title=f"annuli for u = {weight.source}")
    print(dumps(payload))
    return 0


def cmd_spectrum(cfg: RunConfig) -> int:
    from .figures import save_annulus_figure, save_gelfand_figure

    out = _ensure_out(cfg)
    psi = parse_automorphism(cfg.automorphism_spec)
    space = parse_space(cfg.space, cfg.p)
    weight = analyze_text(cfg.symbol_text, psi, cfg.order)
    pred = predict_annuli(weight, psi, space)
    T = WCOperator(weight, psi, space, cfg.order)

    eig = truncated_eigenvalues(T.galerkin())
    write_complex_csv(eig.values, os.path.join(out, "eigenvalues.csv"))
    write_matrix_csv(T.galerkin().entries, os.path.join(out, "galerkin.csv"))

    n_max = 12 if cfg.quick else 40
    probe_deg = max(1, cfg.order // 16)
    probe = mul(fractional_power(psi.a, 0.02 - space.gamma, probe_deg),
                fractional_power(psi.b, 0.02 - space.gamma, probe_deg)).pad(cfg.order)
    seq_fwd = gelfand_radius(T, probe, n_max)
    seq_bwd = gelfand_radius(T.inverse_operator(), probe, n_max)
    with open(os.path.join(out, "gelfand.csv"), "w") as fh:
        fh.write("n,forward,inverse\n")
        for i in range(n_max):
            fh.write(f"{i + 1},{float(seq_fwd.values[i])!r},{float(seq_bwd.values[i])!r}\n")

    payload = {
        "config": cfg.echo(),
        "annulus": pred.as_dict(),
        "gelfand_forward_last": float(seq_fwd.values[-1]),
        "gelfand_inverse_last": float(seq_bwd.values[-1]),
        "eigenvalue_caveat": eig.caveat,
        "num_eigenvalues": int(eig.values.size),
    }
    write_json(payload, os.path.join(out, "spectrum.json"))
    save_annulus_figure(pred, os.path.join(out, "annulus.svg"),
                        eigenvalues=eig.values, lam=cfg.lam,
                        title=f"finite-section spectrum, u = {weight.source}")
    save_gelfand_figure(
        {"forward": seq_fwd.values, "inverse": seq_bwd.values},
        {"outer_upper": pred.outer_upper, "1/inner_lower": 1.0 / pred.inner_lower},
        os.path.join(out, "gelfand.svg"),
    )
    print(dumps(payload))
    return 0


def cmd_certify(cfg: RunConfig) -> int:
    from .figures import save_annulus_figure

    out = _ensure_out(cfg)
    psi = parse_automorphism(cfg.automorphism_spec)
    space = parse_space(cfg.space, cfg.p)
    weight = analyze_text(cfg.symbol_text, psi, cfg.order)
    report = caradus_report(weight, psi, space, cfg.lam, cfg.order,
                            K=cfg.K, tolerance=cfg.tolerance, seed=cfg.seed)
    payload = {"config": cfg.echo(), **report.to_dict()}
    write_json(payload, os.path.join(out, "certify.json"))
    pred = predict_annuli(weight, psi, space)
    save_annulus_figure(pred, os.path.join(out, "annulus.svg"), lam=cfg.lam,
                        title=f"certification at lambda = {cfg.lam}")
    print(dumps(payload))
    return CERTIFY_EXIT[report.verdict]


def cmd_decompose(cfg: RunConfig) -> int:
    out = _ensure_out(cfg)
    psi = parse_automorphism(cfg.automorphism_spec)
    space = parse_space(cfg.space, cfg.p)
    f = parse(cfg.f_text).series(cfg.order)
    f1, f2 = split_function(f, psi, cfg.mu, cfg.nu)
    recon = float(np.max(np.abs(f1.coeffs + f2.coeffs - f.coeffs)))
    diag = membership_diagnostics(f1, f2, psi, cfg.mu, cfg.nu, space)
    with open(os.path.join(out, "decompose.csv"), "w") as fh:
        fh.write("k,f_re,f_im,f1_re,f1_im,f2_re,f2_im\n")
        for k in range(cfg.order + 1):
            row = [float(f.coeffs[k].real), float(f.coeffs[k].imag),
                   float(f1.coeffs[k].real), float(f1.coeffs[k].imag),
                   float(f2.coeffs[k].real), float(f2.coeffs[k].imag)]
            fh.write(f"{k}," + ",".join(repr(v) for v in row) + "\n")
    payload = {
        "config": cfg.echo(),
        "reconstruction_max_error": recon,
        "membership": diag,
    }
    write_json(payload, os.path.join(out, "decompose.json"))
    print(dumps(payload))
    return 0


def _selftest_checks(order: int, quick: bool):
    """Each check returns (value, bound, tail_fraction); a check over its
    bound is downgraded to a warning when its inputs overflow the truncation
    (tail fraction above the diagnostic threshold)."""
    from .spaces import tail_mass_fraction

    psi = canonical(0.5)
    hardy = SpaceSpec.hardy()

    def check_isometry():
        worst, tail = 0.0, 0.0
        rng = np.random.default_rng(7)
        spaces = [hardy] if quick else [hardy, SpaceSpec.bergman(0.0), SpaceSpec.bergman(1.0)]
        deg = min(16, max(2, order // 4))
        for space in spaces:
            op = normalized_isometry(psi, space, order)
            for _ in range(3 if quick else 10):
                c = np.zeros(order + 1, dtype=np.complex128)
                c[: deg + 1] = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
                f = TaylorSeries(c)
                image = op.apply(f)
                worst = max(worst, abs(norm(image, space, warn_tail=False)
                                       / norm(f, space, warn_tail=False) - 1.0))
                tail = max(tail, tail_mass_fraction(image, space))
        return worst, 1e-6, tail

    def check_eigenrelation():
        worst, tail = 0.0, 0.0
        K = 1 if quick else 2
        for k in range(-K, K + 1):
            wk = 2j * np.pi * k / psi.delta
            g = eigenfunction(psi, wk, order, normalize=True)
            cg = eigenfunction_composed(psi, wk, order, normalize=True)
            worst = max(worst, float(np.linalg.norm(cg.coeffs - g.coeffs)))
            tail = max(tail, tail_mass_fraction(g, hardy))
        return worst, 1e-7, tail

    def check_generator():
        worst = max(generator_check(psi, k, order) for k in range(-2, 3))
        g1 = eigenfunction(psi, 2j * np.pi / psi.delta, order, normalize=True)
        return worst, 1e-6, tail_mass_fraction(g1, hardy)

    def check_decomposition():
        rng = np.random.default_rng(11)
        worst = 0.0
        deg = min(8, max(1, order // 4))
        for _ in range(5 if quick else 20):
            c = np.zeros(order + 1, dtype=np.complex128)
            c[: deg + 1] = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
            f = TaylorSeries(c)
            f1, f2 = split_function(f, psi, 1.5, 1.0)
            worst = max(worst, float(np.max(np.abs(f1.coeffs + f2.coeffs - f.coeffs))))
        return worst, 1e-12, 0.0

    def check_ratio_limits():
        lim = omega_ratio_limits(psi, 1.0, 2.0)
        value = max(abs(lim["at_a"] - psi.lambda_a), abs(lim["at_b"] - psi.lambda_b ** 2))
        return value, 1e-3, 0.0

    def check_series_roundtrip():
        f = fractional_power(1.0, 1.0, order)  # 1 - z
        rt = series_exp(series_log(f))
        err = float(np.max(np.abs(rt.coeffs - f.coeffs)))
        g = mul(fractional_power(1.0, 0.3, order), fractional_power(1.0, 0.7, order))
        err = max(err, float(np.max(np.abs(g.coeffs - f.coeffs))))
        return err, 1e-10, 0.0

    return {
        "isometry": check_isometry,
        "eigen_relation": check_eigenrelation,
        "generator": check_generator,
        "decomposition": check_decomposition,
        "ratio_limits": check_ratio_limits,
        "series_roundtrip": check_series_roundtrip,
    }


def cmd_selftest(cfg: RunConfig) -> int:
    order = 64 if cfg.quick else cfg.order
    checks = _selftest_checks(order, cfg.quick)
    rows = []
    failures = 0
    for name, fn in checks.items():
        t0 = time.perf_counter()
        try:
            value, bound, tail = fn()
            if value < bound:
                status = "pass"
            elif tail > 1e-6:
                status = "warn"  # truncation too short for the check, not a defect
            else:
                status = "FAIL"
        except WcospecError as exc:
            value, bound, tail, status = float("nan"), float("nan"), 0.0, "FAIL"
            print(f"  {name}: error {exc}")
        dt = time.perf_counter() - t0
        rows.append({"check": name, "value": value, "bound": bound,
                     "tail_fraction": tail, "status": status,
                     "pass": status != "FAIL", "seconds": round(dt, 3)})
        if status == "FAIL":
            failures += 1
        print(f"{name:20s} {status:4s}  value={value:.3e}  bound={bound:.1e}  "
              f"tail={tail:.1e}  ({dt:.2f}s)")
    if cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        write_json({"config": cfg.echo(), "results": rows},
                   os.path.join(cfg.out, "selftest.json"))
    print(f"{len(rows) - failures}/{len(rows)} checks passed (N={order})")
    return 1 if failures else 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args, args.command)
        handler = {
            "analyze": cmd_analyze,
            "spectrum": cmd_spectrum,
            "certify": cmd_certify,
            "decompose": cmd_decompose,
            "selftest": cmd_selftest,
        }[args.command]
        return handler(cfg)
    except WcospecError as exc:
        sys.stderr.write(dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return FAILURE_EXIT


if __name__ == "__main__":
    raise SystemExit(main())
