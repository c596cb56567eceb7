"""Command-line front end.

Exit codes: 0 ok, 1 usage/config error, 2 point outside the ball,
3 malformed group presentation, 4 a verdict came out undecided.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import ball, fock, groups, spectral
from .ball import BallError, FormError
from .functions import extremal_distance
from .serialize import map_from_json, orbit_csv, point_from_json, point_to_json

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BAD_POINT = 2
EXIT_BAD_GROUP = 3
EXIT_UNDECIDED = 4


class ConfigError(ValueError):
    pass


class GroupError(ValueError):
    pass


@dataclass
class RunConfig:
    n: int = 1
    d: int = fock.DEFAULT_DEGREE
    group: Any = None
    max_word_len: int = 6
    dedup_tol: float = groups.ORBIT_DEDUP_TOL
    out_threshold: float = spectral.OUT_THRESHOLD
    tol: float = 1e-10
    seed: int = 0
    format: str = "json"
    samples: int = 200

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ConfigError("n and d must be >= 1")
        if self.max_word_len < 0:
            raise ConfigError("max_word_len must be >= 0")
        if self.dedup_tol <= 0 or self.out_threshold <= 0 or self.tol <= 0:
            raise ConfigError("tolerances must be > 0")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.samples < 1:
            raise ConfigError("samples must be >= 1")

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config fields: {', '.join(unknown)}")
        return cls(**data)


def load_config(path: str | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return RunConfig.from_dict(data)


def load_presentation(cfg: RunConfig, base: Path | None = None) -> groups.GroupPresentation:
    src = cfg.group
    if src is None:
        raise GroupError("config has no group presentation")
    if isinstance(src, str):
        path = Path(src)
        if base is not None and not path.is_absolute():
            path = base / path
        try:
            src = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise GroupError(f"cannot read presentation {path}: {exc}") from exc
    try:
        n = int(src.get("n", cfg.n))
        gens = tuple(map_from_json(m) for m in src.get("generators", []))
        return groups.GroupPresentation(n, gens)
    except FormError as exc:
        raise GroupError(str(exc)) from exc
    except (AttributeError, TypeError, ValueError) as exc:
        raise GroupError(f"malformed presentation: {exc}") from exc


def _json_arg(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"not valid JSON: {text!r}") from exc


def _points_arg(text: str, n: int) -> list[np.ndarray]:
    data = _json_arg(text)
    if not isinstance(data, list):
        raise ConfigError("expected a JSON list of points")
    return [point_from_json(p, n) for p in data]


def cmd_distance(cfg, args) -> tuple[Any, int]:
    z = point_from_json(_json_arg(args.z), cfg.n)
    w = point_from_json(_json_arg(args.w), cfg.n)
    closed = ball.pseudo_distance(z, w)
    value, witness = extremal_distance(z, w)
    return {
        "closed_form": closed,
        "extremal": value,
        "abs_diff": abs(closed - value),
        "witness": witness.to_dict(),
        "witness_at_w": abs(witness(w)),
    }, EXIT_OK


def _elements(cfg, args):
    pres = load_presentation(cfg, args.base)
    return groups.enumerate_elements(pres, cfg.max_word_len)


def cmd_orbit(cfg, args):
    orbit = groups.orbit_of_origin(_elements(cfg, args), cfg.dedup_tol)
    if cfg.format == "csv":
        return orbit_csv(orbit.points, orbit.shells), EXIT_OK
    return {
        "points": [point_to_json(p) for p in orbit.points],
        "shells": list(orbit.shells),
        "words": [list(w.word) for w in orbit.witnesses],
    }, EXIT_OK


def cmd_blaschke(cfg, args):
    report = groups.blaschke_report(_elements(cfg, args))
    code = EXIT_UNDECIDED if report.verdict == groups.Verdict.UNDECIDED else EXIT_OK
    if cfg.format == "csv":
        lines = ["len,count,term_sum,partial_sum"]
        for s, p in zip(report.shells, report.partial_sums):
            lines.append(f"{s.length},{s.count},{s.term_sum!r},{p!r}")
        return "\n".join(lines) + "\n", code
    return report.to_dict(), code


def cmd_witness(cfg, args):
    z = point_from_json(_json_arg(args.z), cfg.n)
    delta = _points_arg(args.delta, cfg.n)
    w = spectral.vanishing_witness(delta, z)
    out = w.to_dict()
    out["value_at_probe"] = abs(w.value_at_probe)
    out["max_on_set"] = max((abs(w(p)) for p in delta), default=0.0)
    return out, EXIT_OK


def cmd_membership(cfg, args):
    z = point_from_json(_json_arg(args.z), cfg.n)
    delta = _points_arg(args.delta, cfg.n)
    v = spectral.spectral_membership(delta, z, cfg.out_threshold)
    code = EXIT_UNDECIDED if v.status == spectral.Membership.UNDECIDED else EXIT_OK
    return v.to_dict(), code


def cmd_ergodic(cfg, args):
    poly = fock.NcPoly.from_list(_json_arg(args.poly))
    rep = spectral.ergodicity_certificate(_elements(cfg, args), poly, cfg.tol)
    return rep.to_dict(), EXIT_OK


def cmd_fock(cfg, args):
    poly = fock.NcPoly.from_list(_json_arg(args.poly))
    basis = fock.TruncatedFockBasis(cfg.n, cfg.d)
    T = fock.poly_to_operator(poly, basis)
    S = [fock.creation(j, basis) for j in range(1, cfg.n + 1)]
    out = {
        "n": cfg.n,
        "d": cfg.d,
        "op_norm": fock.op_norm(T),
        "coefficient_norm": poly.coefficient_norm(),
        "row_norm_creation": fock.row_norm(S),
    }
    if args.export:
        out["operator"] = T.to_dict()
    return out, EXIT_OK


def cmd_sweep(cfg, args):
    """Seeded property sweep over random points and maps."""
    rng = np.random.default_rng(cfg.seed)
    n = cfg.n
    metric = isometry = ident = 0.0
    for _ in range(cfg.samples):
        z = ball.random_point(rng, n, 0.99)
        w = ball.random_point(rng, n, 0.99)
        g = ball.random_moebius(rng, n)
        rho = ball.pseudo_distance(z, w)
        metric = max(metric, abs(rho - extremal_distance(z, w)[0]))
        isometry = max(isometry, abs(ball.pseudo_distance(g(z), g(w)) - rho))
        lhs = 1.0 - np.linalg.norm(ball.involution_apply(w, z))
        rhs = ball.comparability_factor(w, z) * (1.0 - np.linalg.norm(z))
        ident = max(ident, abs(lhs - rhs) / abs(lhs))
    return {
        "seed": cfg.seed,
        "samples": cfg.samples,
        "n": n,
        "max_metric_gap": metric,
        "max_isometry_gap": isometry,
        "max_comparability_rel_err": ident,
    }, EXIT_OK


COMMANDS = {
    "distance": cmd_distance,
    "orbit": cmd_orbit,
    "blaschke": cmd_blaschke,
    "witness": cmd_witness,
    "membership": cmd_membership,
    "ergodic": cmd_ergodic,
    "fock": cmd_fock,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="RunConfig JSON document")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=["json", "csv"], help="override the config format")

    parser = argparse.ArgumentParser(prog="ballfock", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", parents=[common], help="pseudohyperbolic distance, both formulas")
    p.add_argument("--z", required=True, help="point as JSON, e.g. '[[0.5,0]]' or '[0.5]'")
    p.add_argument("--w", required=True)

    sub.add_parser("orbit", parents=[common], help="orbit of 0 under the configured group")
    sub.add_parser("blaschke", parents=[common], help="Blaschke sums over group elements")

    for name, text in (("witness", "vanishing product for a finite set"),
                       ("membership", "spectral-closure membership verdict")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--z", required=True)
        p.add_argument("--delta", required=True, help="JSON list of points")

    p = sub.add_parser("ergodic", parents=[common], help="orbit invariance/constancy defects")
    p.add_argument("--poly", required=True, help='NcPoly JSON, e.g. \'[{"word":[1],"coeff":[1,0]}]\'')

    p = sub.add_parser("fock", parents=[common], help="truncated Fock-space norms")
    p.add_argument("--poly", required=True)
    p.add_argument("--export", action="store_true", help="include the dense operator")

    sub.add_parser("sweep", parents=[common], help="seeded random property sweep")
    return parser


def _render(result: Any) -> str:
    if isinstance(result, str):
        return result
    return json.dumps(result, indent=2, sort_keys=True) + "\n"


def _write(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    target = Path(out)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=".ballfock-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, target)


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2, which is reserved for bad points here
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.format is not None:
            cfg.format = args.format
        args.base = Path(args.config).parent if args.config else None
        result, code = COMMANDS[args.command](cfg, args)
    except BallError as exc:
        result, code = {"error": "bad_point", "message": str(exc)}, EXIT_BAD_POINT
    except GroupError as exc:
        result, code = {"error": "bad_group", "message": str(exc)}, EXIT_BAD_GROUP
    except (ConfigError, ValueError, TypeError) as exc:
        result, code = {"error": "usage", "message": str(exc)}, EXIT_USAGE
    _write(_render(result), args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
