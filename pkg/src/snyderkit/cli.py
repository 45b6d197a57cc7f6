"""Command-line entry point: ``snyderkit <command> [options]``.

Exit codes: 0 success, 1 a verification or oracle check failed, 2 bad usage
or an unparsable series expression.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .hadamard import make_context, transform_realization
from .parse import parse_series
from .realizations import (
    KAPPA_MODELS,
    MODEL_IDS,
    MUTATIONS,
    PHI_MODELS,
    build,
    hermitize,
)
from .series import SeriesBundle, TransformSpec, TruncatedSeries, phi_bundle, solve_F_for_phi1
from .verify import verify
from .weyl import Metric, adjoint, render

COMMANDS = ("series", "verify", "transform", "hermitize", "oracle")


class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser):
    p.add_argument("--dim", type=int, default=4, help="spacetime dimension d, 2..6 (default 4)")
    p.add_argument("--grade", type=int, default=None,
                   help="truncation grade D in b and a (default 8, or 6 for kappa models)")
    p.add_argument("--order", type=int, default=None,
                   help="series order K, coefficients up to u^K (default 8)")
    p.add_argument("--metric", choices=("lorentzian", "euclidean"), default="lorentzian",
                   help="metric signature (default lorentzian)")
    p.add_argument("--model", default=None, help="model id: " + ", ".join(MODEL_IDS))
    p.add_argument("--F", dest="F", default=None,
                   help='series F(u) in G = F0(u) + (x.p)F(u) (default "-u/2" where needed)')
    p.add_argument("--F0", dest="F0", default="0", help='series F0(u) (default "0")')
    p.add_argument("--phi1", default=None, help="target phi1(u); the matching F is solved for")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "text"), default="text", help="report format")
    p.add_argument("--oracle", action="store_true", help="also run the representation oracle")
    p.add_argument("--dpoly", type=int, default=3, help="oracle polynomial degree bound (default 3)")
    p.add_argument("--mutate", choices=MUTATIONS, default=None,
                   help="inject a known fault (test hook)")
    p.add_argument("--no-timing", action="store_true",
                   help="report elapsed_ms as 0 so JSON output is reproducible byte for byte")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snyderkit",
        description="Exact verification of Snyder-type and kappa-deformed realizations.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "series": "phi and g series for a transform generator",
        "verify": "check a model's commutation relations to a grade",
        "transform": "conjugate a model by exp(iG) and re-verify",
        "hermitize": "symmetrize a model and re-verify",
        "oracle": "run only the representation oracle",
    }
    for name in COMMANDS:
        _common(sub.add_parser(name, help=helps[name], description=helps[name]))
    return parser


# --- configuration -------------------------------------------------------------


class Config:
    def __init__(self, ns):
        self.ns = ns
        self.command = ns.command
        if not 2 <= ns.dim <= 6:
            raise UsageError(f"--dim must be in 2..6, got {ns.dim}")
        self.metric = Metric.named(ns.metric, ns.dim)
        self.model = ns.model
        if self.model is not None and self.model not in MODEL_IDS:
            raise UsageError(f"unknown model {self.model!r}; choose from {', '.join(MODEL_IDS)}")
        kappa = self.model in KAPPA_MODELS
        self.grade = ns.grade if ns.grade is not None else (6 if kappa else 8)
        if self.grade < 0:
            raise UsageError("--grade must be >= 0")
        if kappa and (self.grade < 2 or self.grade % 2):
            raise UsageError(f"kappa models need an even grade >= 2, got {self.grade}")
        if ns.order is not None and ns.grade is not None and ns.order < self.grade // 2:
            raise UsageError(f"--order {ns.order} is below grade/2 = {self.grade // 2}")
        self.order = ns.order if ns.order is not None else 8
        if self.order < 0:
            raise UsageError("--order must be >= 0")

    def spec(self, K: int) -> TransformSpec:
        """Parse F/F0 (or solve for F from phi1) to order ``K + 2``."""
        ns = self.ns
        if ns.phi1 is not None:
            if ns.F is not None:
                raise UsageError("give either --F or --phi1, not both")
            F = solve_F_for_phi1(parse_series(ns.phi1, K + 2), K + 2)
        else:
            F = parse_series(ns.F if ns.F is not None else "-u/2", K + 2)
        F0 = parse_series(ns.F0, K + 2)
        if F.coeffs[0]:
            raise UsageError(f"F(0) must vanish, got {F.coeffs[0]}")
        if F0.coeffs[0]:
            raise UsageError(f"F0(0) must vanish, got {F0.coeffs[0]}")
        return TransformSpec(F, F0)

    def realization(self, model=None):
        model = model or self.model
        if model is None:
            raise UsageError("--model is required for this command")
        bundle = None
        if model in PHI_MODELS:
            K = max(self.order, self.grade // 2)
            bundle = phi_bundle(self.spec(K), K, metric=self.metric)
        try:
            return build(model, self.metric, self.grade, bundle, self.ns.mutate)
        except ValueError as exc:
            raise UsageError(str(exc)) from None


# --- commands ------------------------------------------------------------------


def _series_text(bundle: SeriesBundle) -> str:
    lines = []
    for name, s in bundle.named():
        lines.append(f"{name}: " + ", ".join(str(c) for c in s.coeffs))
    return "\n".join(lines) + "\n"


def cmd_series(cfg: Config):
    K = cfg.order
    bundle = phi_bundle(cfg.spec(K), K, metric=cfg.metric)
    payload = {"command": "series", "order": K, "series": bundle.to_json()}
    return 0, payload, _series_text(bundle)


def _oracle_block(cfg: Config, R):
    from .oracle import rep_oracle

    if R.d > 4:
        raise UsageError("the representation oracle supports --dim up to 4")
    try:
        return rep_oracle(R, cfg.ns.dpoly)
    except ValueError as exc:
        raise UsageError(f"oracle: {exc}") from None


def cmd_verify(cfg: Config):
    R = cfg.realization()
    rep = verify(R)
    timing = not cfg.ns.no_timing
    payload = rep.to_dict(timing)
    text = rep.to_text()
    ok = rep.ok
    if cfg.ns.oracle:
        orc = _oracle_block(cfg, R)
        payload["oracle"] = orc.to_dict(timing)
        text += orc.to_text()
        ok = ok and orc.ok
    return (0 if ok else 1), payload, text


def cmd_oracle(cfg: Config):
    R = cfg.realization()
    orc = _oracle_block(cfg, R)
    return (0 if orc.ok else 1), orc.to_dict(not cfg.ns.no_timing), orc.to_text()


def _elements_text(R) -> str:
    return "".join(f"xhat[{mu}] = {render(E)}\n" for mu, E in enumerate(R.xhat))


def cmd_transform(cfg: Config):
    model = cfg.model or "snyder-original"
    if model in KAPPA_MODELS and cfg.ns.grade is None:
        cfg.grade = 6
    base = cfg.realization(model)
    spec = cfg.spec(max(cfg.order, cfg.grade // 2))
    start = time.perf_counter()
    try:
        ctx = make_context(spec, cfg.metric, cfg.grade)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    R = transform_realization(ctx, base)
    rep = verify(R)
    rep.elapsed_ms = int((time.perf_counter() - start) * 1000)
    timing = not cfg.ns.no_timing
    payload = rep.to_dict(timing)
    payload["base_model"] = model
    payload["xhat"] = [render(E) for E in R.xhat]
    text = f"transform of {model} with F = {spec.F}, F0 = {spec.F0}\n" + _elements_text(R)
    if R.bundle is not None:
        payload["bundle"] = R.bundle.to_json()
        text += "extracted series:\n" + _series_text(R.bundle)
    else:
        payload["note"] = "result is not of the phi1/phi2/phi3 shape; no bundle extracted"
        text += "note: " + payload["note"] + "\n"
    text += rep.to_text()
    return (0 if rep.ok else 1), payload, text


def cmd_hermitize(cfg: Config):
    R = hermitize(cfg.realization())
    self_adjoint = all(adjoint(E) == E for E in R.elements())
    rep = verify(R)
    ok = rep.ok and self_adjoint
    timing = not cfg.ns.no_timing
    payload = rep.to_dict(timing)
    payload["self_adjoint"] = self_adjoint
    payload["xhat"] = [render(E) for E in R.xhat]
    text = f"hermitized {R.kind}\n" + _elements_text(R)
    text += f"self-adjoint: {'yes' if self_adjoint else 'NO'}\n" + rep.to_text()
    if cfg.ns.oracle:
        orc = _oracle_block(cfg, R)
        payload["oracle"] = orc.to_dict(timing)
        text += orc.to_text()
        ok = ok and orc.ok
    return (0 if ok else 1), payload, text


_DISPATCH = {
    "series": cmd_series,
    "verify": cmd_verify,
    "transform": cmd_transform,
    "hermitize": cmd_hermitize,
    "oracle": cmd_oracle,
}


_EXPR_FLAGS = ("--F", "--F0", "--phi1")


def _glue_expressions(argv):
    # "--F -u/2" would read -u/2 as an option; bind it as "--F=-u/2"
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _EXPR_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_expressions(list(sys.argv[1:] if argv is None else argv))
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = Config(ns)
        code, payload, text = _DISPATCH[ns.command](cfg)
    except (UsageError, ValueError) as exc:
        print(f"snyderkit {ns.command}: {exc}", file=sys.stderr)
        return 2
    out = json.dumps(payload, indent=1) + "\n" if ns.format == "json" else text
    if ns.out:
        with open(ns.out, "w", encoding="utf-8") as fh:
            fh.write(out)
        if ns.format == "json":
            sys.stdout.write(text)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
