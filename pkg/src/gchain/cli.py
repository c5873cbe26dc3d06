"""Command-line frontend: ``gchain validate|entropy|rate|spectrum|entangle``.

Exit codes: 0 success / valid, 1 parse or usage error, 2 invalid chain or
section, 3 validity unknown, 4 monotonicity violation in an entropy trace,
5 numeric failure, 6 resource limit.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import specio
from .chains import (BandedSpec, ExchangeableSpec, MixtureStatus, ToeplitzMixtureSpec,
                     banded_is_g_chain, direct_section_check, exchangeable_is_g_chain,
                     materialize, mixture_is_g_chain)
from .entanglement import FamilyParams, chain_pair_verdicts, simon_test
from .entropy_rate import (DEFAULT_QUAD_POINTS, MONO_TOL, entropy_sequence, exchangeable_rate,
                           kms_rate, spectral_measure_distance, toeplitz_spectrum)
from .errors import (InvalidArgumentError, NumericFailureError, ResourceLimitError,
                     SectionInvalidError, SpecParseError)
from .gmatrix import PSD_TOL, SYM_TOL

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_UNKNOWN, EXIT_MONOTONE = 0, 1, 2, 3, 4
EXIT_NUMERIC, EXIT_RESOURCE = 5, 6
COMMANDS = ("validate", "entropy", "rate", "spectrum", "entangle")


@dataclass
class RunConfig:
    command: str
    spec_path: str | None = None
    n_max: int = 16
    quad_points: int = DEFAULT_QUAD_POINTS
    sym_tol: float = SYM_TOL
    psd_tol: float = PSD_TOL
    mono_tol: float = MONO_TOL
    tol: float = PSD_TOL
    out: str | None = None
    format: str | None = None
    weights: dict | None = None
    lam: float | None = None
    b: float | None = None
    pairs: list = field(default_factory=lambda: [(1, 2), (1, 3)])

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InvalidArgumentError(f"unknown command {self.command!r}")
        if self.n_max < 1:
            raise InvalidArgumentError("--n-max must be at least 1")
        if self.quad_points < 64:
            raise InvalidArgumentError("--quad-points must be at least 64")
        for name in ("sym_tol", "psd_tol", "mono_tol", "tol"):
            if not getattr(self, name) > 0:
                raise InvalidArgumentError(f"--{name.replace('_', '-')} must be positive")
        if self.format not in (None, "csv", "json"):
            raise InvalidArgumentError("--format must be csv or json")


@dataclass
class Outcome:
    code: int
    text: str
    messages: list = field(default_factory=list)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load_spec(config):
    if config.spec_path is None:
        raise SpecParseError("--spec is required for this command")
    return specio.load(config.spec_path)


def _sections(spec, config):
    return [{"n": n, "ok": bool(t), "min_eig": t.min_eig}
            for n, t in enumerate(direct_section_check(spec, config.n_max, config.tol), start=1)]


def cmd_validate(config: RunConfig) -> Outcome:
    spec = _load_spec(config)
    sections = _sections(spec, config)
    all_pass = all(s["ok"] for s in sections)
    if isinstance(spec, ExchangeableSpec):
        crit = exchangeable_is_g_chain(spec.A, spec.B, config.tol, config.sym_tol)
        criterion = {"name": "exchangeable", "ok": crit.ok, "reasons": list(crit.reasons),
                     "margins": crit.margins}
        status = "valid" if crit else "invalid"
    elif isinstance(spec, BandedSpec):
        crit = banded_is_g_chain(spec.A, spec.B, config.tol, config.sym_tol)
        criterion = {"name": "banded_endpoints", "ok": crit.ok, "reasons": list(crit.reasons),
                     "margins": crit.margins}
        status = "valid" if crit else "invalid"
    else:
        mstatus = mixture_is_g_chain(spec, config.tol)
        criterion = {"name": "mixture_sufficient", "result": mstatus.value}
        if mstatus is MixtureStatus.SUFFICIENT_PASS:
            status = "valid"
        else:
            status = "unknown" if all_pass else "section-invalid"
    report = {"kind": spec.kind, "k": spec.k, "status": status, "criterion": criterion,
              "sections": sections}
    code = {"valid": EXIT_OK, "unknown": EXIT_UNKNOWN}.get(status, EXIT_INVALID)
    return Outcome(code, _dump(report))


def cmd_entropy(config: RunConfig) -> Outcome:
    spec = _load_spec(config)
    trace = entropy_sequence(spec, config.n_max, config.psd_tol, config.mono_tol)
    if config.format == "json":
        text = _dump({"kind": spec.kind,
                      "rows": [{"n": r.n, "S_n": r.entropy, "rate": r.rate, "delta": r.delta}
                               for r in trace.rows],
                      "violations": trace.violations})
    else:
        text = trace.to_csv()
    code = EXIT_MONOTONE if trace.violations else EXIT_OK
    return Outcome(code, text, [f"monotonicity violation: {v}" for v in trace.violations])


def _last_rate(spec, config):
    trace = entropy_sequence(spec, config.n_max, config.psd_tol, config.mono_tol)
    last = trace.rows[-1]
    return {"n": last.n, "rate": last.rate}


def cmd_rate(config: RunConfig) -> Outcome:
    spec = _load_spec(config)
    report = {"kind": spec.kind}
    if isinstance(spec, ExchangeableSpec):
        report.update(method="exact", rate=exchangeable_rate(spec.A, spec.B, config.tol))
    else:
        mixture = spec.as_mixture() if isinstance(spec, BandedSpec) else spec
        B = mixture.common_block()
        if B is None:
            report.update(method="finite_section", rate=None,
                          note="bands carry different blocks; no closed-form rate")
        else:
            q = kms_rate(mixture.A, B, mixture.weights, config.quad_points, tol=config.psd_tol)
            report.update(method="kms_quadrature", rate=q.estimate, quadrature=q.to_dict())
    report["last_finite_rate"] = _last_rate(spec, config)
    return Outcome(EXIT_OK, _dump(report))


def _spectrum_weights(config):
    if config.weights is not None:
        return config.weights
    spec = _load_spec(config)
    if isinstance(spec, BandedSpec):
        return {spec.j: 1.0}
    if isinstance(spec, ToeplitzMixtureSpec):
        return spec.weights
    raise InvalidArgumentError("spectrum needs --weights or a banded/toeplitz_mixture spec")


def cmd_spectrum(config: RunConfig) -> Outcome:
    weights = _spectrum_weights(config)
    n = config.n_max
    eig = toeplitz_spectrum(weights, n)
    schedule = [1 << i for i in range(n.bit_length()) if (1 << i) <= n]
    dists = [(m, spectral_measure_distance(weights, m)) for m in schedule]
    if config.format == "json":
        return Outcome(EXIT_OK, _dump({"weights": {str(j): p for j, p in weights.items()},
                                       "n": n, "eigenvalues": eig.tolist(),
                                       "distances": [{"n": m, "distance": d} for m, d in dists]}))
    buf = io.StringIO()
    buf.write("quantity,n,index,value\n")
    for r, x in enumerate(eig, start=1):
        buf.write(f"eigenvalue,{n},{r},{x:.17g}\n")
    for m, d in dists:
        buf.write(f"kolmogorov_distance,{m},,{d:.17g}\n")
    return Outcome(EXIT_OK, buf.getvalue())


def _family_from_spec(spec):
    """Recognise A = lam I_2 with every band b diag(1, -1); else None."""
    if spec.k != 1 or isinstance(spec, ExchangeableSpec):
        return None
    mixture = spec.as_mixture() if isinstance(spec, BandedSpec) else spec
    A, B = mixture.A, mixture.common_block()
    lam = A[0, 0]
    if B is None or not np.array_equal(A, lam * np.eye(2)):
        return None
    b = B[0, 0]
    if b <= 0 or not np.array_equal(B, b * np.diag([1.0, -1.0])):
        return None
    return FamilyParams(float(lam), float(b), mixture.weights)


def cmd_entangle(config: RunConfig) -> Outcome:
    if config.lam is not None or config.b is not None:
        if config.lam is None or config.b is None or config.weights is None:
            raise InvalidArgumentError("--lam, --b and --weights must be given together")
        params, spec = FamilyParams(config.lam, config.b, config.weights), None
    else:
        spec = _load_spec(config)
        params = _family_from_spec(spec)
    if params is not None:
        rows = [v.to_dict() for v in chain_pair_verdicts(params, config.pairs, config.tol)]
    else:
        if spec.k != 1:
            raise InvalidArgumentError("entangle supports only single-mode sites (k = 1)")
        rows = []
        for pair in config.pairs:
            res = simon_test(materialize(spec, pair).matrix, config.tol)
            rows.append({"pair": list(pair), "c": None, "window": None,
                         "verdict": res.verdict.value, "margin": res.margin})
    return Outcome(EXIT_OK, _dump(rows))


HANDLERS = {"validate": cmd_validate, "entropy": cmd_entropy, "rate": cmd_rate,
            "spectrum": cmd_spectrum, "entangle": cmd_entangle}


def _parse_weights(text):
    out = {}
    for item in text.split(","):
        j, _, p = item.partition(":")
        try:
            out[int(j)] = float(p)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad weight {item!r}; expected J:P") from None
    return out


def _parse_pairs(text):
    pairs = []
    for item in text.split(";"):
        try:
            a, b = (int(x) for x in item.split(","))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad pair {item!r}; expected I,J") from None
        pairs.append((a, b))
    return pairs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gchain", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--spec", dest="spec_path")
    parser.add_argument("--n-max", type=int, default=16)
    parser.add_argument("--quad-points", type=int, default=DEFAULT_QUAD_POINTS)
    parser.add_argument("--out")
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--sym-tol", type=float, default=SYM_TOL)
    parser.add_argument("--psd-tol", type=float, default=PSD_TOL)
    parser.add_argument("--mono-tol", type=float, default=MONO_TOL)
    parser.add_argument("--tol", type=float, default=PSD_TOL)
    parser.add_argument("--weights", type=_parse_weights, help="J:P[,J:P...]")
    parser.add_argument("--lam", type=float)
    parser.add_argument("--b", type=float)
    parser.add_argument("--pairs", type=_parse_pairs, default=[(1, 2), (1, 3)], help="I,J[;I,J...]")
    return parser


def run(config: RunConfig) -> Outcome:
    try:
        return HANDLERS[config.command](config)
    except SpecParseError as exc:
        return Outcome(EXIT_PARSE, "", [f"parse error: {exc}"])
    except SectionInvalidError as exc:
        return Outcome(EXIT_INVALID, "", [f"invalid section n={exc.n}: {exc}"])
    except InvalidArgumentError as exc:
        return Outcome(EXIT_INVALID, "", [f"invalid: {exc}"])
    except NumericFailureError as exc:
        return Outcome(EXIT_NUMERIC, "", [f"numeric failure: {exc}"])
    except ResourceLimitError as exc:
        return Outcome(EXIT_RESOURCE, "", [f"resource limit: {exc}"])


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(**vars(args))
    except InvalidArgumentError as exc:
        print(f"gchain: {exc}", file=sys.stderr)
        return EXIT_PARSE
    outcome = run(config)
    for msg in outcome.messages:
        print(msg, file=sys.stderr)
    if outcome.text:
        if config.out:
            with open(config.out, "w") as fh:
                fh.write(outcome.text)
        else:
            sys.stdout.write(outcome.text)
    return outcome.code


if __name__ == "__main__":
    sys.exit(main())
