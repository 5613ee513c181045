"""Command-line interface: config parsing, dispatch, deterministic reports.

Configs are JSON objects {"n": 3, "alpha": [...], "beta": [...],
"gamma": [...]} whose vector entries are rational strings like "2/3"
(plain integers are accepted).  Exit codes: 0 = pass, 1 = check failure,
2 = input error or unsupported query.  With --json the report is a
single machine-readable document, byte-identical for identical inputs
and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .core import Parameters, format_element, parse_element
from .hilbert import (
    ClosedFormReport,
    closed_form_check,
    factorization_identity,
)
from .gwa import verify_gwa
from .iso import decide_graded_iso
from .rewrite import (
    PRESET_PREPROJECTIVE,
    PRESET_QDU,
    build_system,
    check_confluence,
    dimension_matrix,
    enumerate_basis,
    normal_form,
)
from .skewgroup import verify_quotient_match
from .structure import (
    balanced_twist_weights,
    build_superpotential,
    check_derivation_quotient,
    check_diagonal_map,
    check_twist_invariance,
    derived_nakayama,
    noetherian_chain_check,
    paper_nakayama,
    paper_twist_weights,
    property_report,
    pwd_probe_H,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


class ConfigError(Exception):
    pass


@dataclass
class AlgebraConfig:
    n: int
    alpha: list[str]
    beta: list[str]
    gamma: list[str]

    def to_parameters(self) -> Parameters:
        return Parameters.of(self.n, self.alpha, self.beta, self.gamma)

    def canonical_text(self) -> str:
        return json.dumps(
            {"n": self.n, "alpha": self.alpha, "beta": self.beta, "gamma": self.gamma},
            sort_keys=True,
        )


def _rational_str(value, field: str, index: int) -> str:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ConfigError(f"{field}[{index}]: expected a rational string or integer")
    try:
        frac = Fraction(str(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{field}[{index}]: {exc}") from exc
    return str(frac)


def parse_config(text: str) -> AlgebraConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    if "n" not in raw or not isinstance(raw["n"], int) or isinstance(raw["n"], bool) or raw["n"] < 1:
        raise ConfigError("field 'n': expected a positive integer")
    n = raw["n"]
    vectors = {}
    for field in ("alpha", "beta", "gamma"):
        if field not in raw or not isinstance(raw[field], list):
            raise ConfigError(f"field '{field}': expected an array")
        if len(raw[field]) != n:
            raise ConfigError(f"field '{field}': length mismatch (expected {n}, got {len(raw[field])})")
        vectors[field] = [_rational_str(v, field, i) for i, v in enumerate(raw[field])]
    return AlgebraConfig(n, vectors["alpha"], vectors["beta"], vectors["gamma"])


def load_config(path: str) -> AlgebraConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# Report assembly
# ---------------------------------------------------------------------------

def _matrix(m: list[list[int]]) -> list[list[int]]:
    return [list(row) for row in m]


def _closed_form_findings(report: ClosedFormReport) -> dict:
    out = {
        "preset": report.preset,
        "max_degree": report.max_degree,
        "matrices_match": report.matrices_match,
        "totals": report.totals,
        "totals_match": report.totals_match,
    }
    if report.first_mismatch is not None:
        k, i, j, expected, got = report.first_mismatch
        out["first_mismatch"] = {"degree": k, "row": i, "col": j, "expected": expected, "got": got}
    if report.note:
        out["note"] = report.note
    return out


def _superpotential_findings(params: Parameters) -> tuple[bool, dict]:
    sections = {}
    unit_beta = all(b * b == 1 for b in params.beta)
    for name, weights in (("printed", paper_twist_weights(params)),
                          ("balanced", balanced_twist_weights(params))):
        built = build_superpotential(params, weights)
        invariance = check_twist_invariance(built.omega, weights)
        span_ok = check_derivation_quotient(built.omega, params)
        sections[name] = {
            "orbits_closed": built.all_orbits_closed,
            "twist_invariant": invariance.invariant,
            "span_matches_relations": span_ok,
            "closure_scalars": {f"{fam}[{i}]": str(c)
                                for (fam, i), c in sorted(built.closure_scalars.items())},
        }
        if not invariance.invariant:
            sections[name]["twist_defect"] = format_element(invariance.defect)
    sections["printed"]["expected_to_pass"] = unit_beta
    balanced_ok = (sections["balanced"]["orbits_closed"]
                   and sections["balanced"]["twist_invariant"]
                   and sections["balanced"]["span_matches_relations"])
    printed_pass = (sections["printed"]["twist_invariant"]
                    and sections["printed"]["span_matches_relations"])
    ok = balanced_ok and (printed_pass == unit_beta)
    return ok, sections


def _nakayama_findings(params: Parameters) -> tuple[bool, dict]:
    squares = {b * b for b in params.beta}
    printed_expected = len(squares) == 1
    printed = check_diagonal_map(paper_nakayama(params), params, params)
    derived = check_diagonal_map(derived_nakayama(params), params, params)
    findings = {
        "printed": {"preserves_relations": printed.ok, "expected_to_pass": printed_expected},
        "derived": {
            "preserves_relations": derived.ok,
            "per_relation_scalars": [str(d["scalar"]) for d in derived.per_relation],
        },
    }
    ok = derived.ok and (printed.ok == printed_expected)
    return ok, findings


def _chain_findings(report) -> dict:
    return {
        "vertex": report.vertex,
        "s_max": report.s_max,
        "generator": report.generator,
        "up_cycle": report.up_cycle,
        "annihilation": report.annihilation_ok,
        "strict_inclusions": {str(s): strict for s, strict in report.strict_inclusions},
        "support_pattern": report.support_pattern_ok,
    }


def _pwd_findings(report) -> dict:
    out = {
        "trials": report.trials,
        "beta_nonzero": report.beta_nonzero,
        "zero_products": len(report.failures),
    }
    if report.counterexample is not None:
        out["counterexample"] = {"left": report.counterexample[0], "right": report.counterexample[1]}
    return out


def _skewgroup_findings(report) -> dict:
    return {
        "n": report.n,
        "max_degree": report.max_degree,
        "idempotents": report.idempotents_ok,
        "generator_forms_agree": report.generator_forms_agree,
        "proof_identities": report.proof_identities_ok,
        "relations_killed_by_beta": {str(c): v for c, v in sorted(report.relation_kill.items())},
        "dimensions_match": report.dimensions_ok,
    }


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _cmd_nf(args) -> tuple[str, dict]:
    params = load_config(args.config).to_parameters()
    sys_ = build_system(PRESET_QDU, params)
    try:
        element = parse_element(args.element, params.n)
    except ValueError as exc:
        raise ConfigError(f"bad element: {exc}") from exc
    result = normal_form(sys_, element)
    return "pass", {"input": format_element(element), "normal_form": format_element(result)}


def _cmd_basis(args) -> tuple[str, dict]:
    params = load_config(args.config).to_parameters()
    preset = PRESET_PREPROJECTIVE if args.preset == "preprojective" else PRESET_QDU
    sys_ = build_system(preset, params, n=params.n)
    paths = enumerate_basis(sys_, args.degree)
    matrix = dimension_matrix(sys_, args.degree)
    return "pass", {
        "degree": args.degree,
        "preset": preset,
        "paths": [str(p) for p in paths],
        "dimension_matrix": _matrix(matrix),
        "total": len(paths),
    }


def _cmd_confluence(args) -> tuple[str, dict]:
    params = load_config(args.config).to_parameters()
    report = check_confluence(build_system(PRESET_QDU, params))
    findings = {
        "overlaps": len(report.overlaps),
        "confluent": report.confluent,
        "words": [str(o.word) for o in report.overlaps],
        "unresolved": [
            {"word": str(o.word), "difference": format_element(o.difference)}
            for o in report.overlaps if not o.resolves
        ],
    }
    return ("pass" if report.confluent else "fail"), findings


def _cmd_hilbert(args) -> tuple[str, dict]:
    params = load_config(args.config).to_parameters()
    preset = PRESET_PREPROJECTIVE if args.preset == "preprojective" else PRESET_QDU
    if args.check:
        report = closed_form_check(params, args.max_degree, preset=preset)
        return ("pass" if report.ok else "fail"), _closed_form_findings(report)
    sys_ = build_system(preset, params, n=params.n)
    matrices = [dimension_matrix(sys_, k) for k in range(args.max_degree + 1)]
    findings = {
        "preset": preset,
        "max_degree": args.max_degree,
        "matrices": [_matrix(m) for m in matrices],
        "totals": [sum(sum(row) for row in m) for m in matrices],
    }
    return "pass", findings


def _cmd_iso(args) -> tuple[str, dict]:
    p = load_config(args.config).to_parameters()
    q = load_config(args.other).to_parameters()
    verdict = decide_graded_iso(p, q)
    if verdict.kind == "unsupported":
        return "unsupported", {"detail": verdict.detail}
    findings: dict = {"result": verdict.kind}
    if verdict.witness is not None:
        findings["witness"] = verdict.witness.describe()
        findings["witness"]["arrow_map"] = _witness_arrow_map(verdict.witness)
    findings["cases"] = [c.describe() for c in verdict.cases]
    return "pass", findings


def _witness_arrow_map(w) -> dict:
    from .core import Arrow

    out = {}
    for fam in ("u", "d"):
        for i in range(w.n):
            scalar, image = w.arrow_image(Arrow(fam, i))
            out[f"{fam}{i}"] = f"{scalar} * {image}"
    return out


def _cmd_verify(args) -> tuple[str, dict]:
    cfg = load_config(args.config)
    params = cfg.to_parameters()
    what = args.what
    if what == "gwa":
        if not params.beta_all_nonzero():
            raise ConfigError("verify gwa requires all beta_i nonzero")
        report = verify_gwa(params, trials=args.trials, seed=args.seed)
        findings = {
            "relations_killed": report.relations_killed,
            "roundtrip_arrows": report.roundtrip_arrows,
            "roundtrip_base": report.roundtrip_base,
            "grading": report.grading_ok,
            "pwd": {"trials": report.pwd.trials, "failures": len(report.pwd.failures)},
        }
        return ("pass" if report.ok else "fail"), findings
    if what == "superpotential":
        if not params.beta_all_nonzero():
            raise ConfigError("verify superpotential requires all beta_i nonzero")
        if not params.gamma_is_zero():
            raise ConfigError("verify superpotential requires gamma = 0")
        ok, findings = _superpotential_findings(params)
        return ("pass" if ok else "fail"), findings
    if what == "nakayama":
        if not params.beta_all_nonzero():
            raise ConfigError("verify nakayama requires all beta_i nonzero")
        ok, findings = _nakayama_findings(params)
        return ("pass" if ok else "fail"), findings
    if what == "pwd":
        report = pwd_probe_H(params, degree_bound=args.max_degree or 5,
                             trials=args.trials, seed=args.seed)
        return ("pass" if report.ok else "fail"), _pwd_findings(report)
    if what == "noetherian":
        bad = next((i for i in range(params.n) if params.beta[i] == 0), None)
        if bad is None:
            raise ConfigError("verify noetherian requires some beta_i = 0")
        report = noetherian_chain_check(params, i=bad, s_max=2)
        return ("pass" if report.ok else "fail"), _chain_findings(report)
    if what == "properties":
        report = property_report(params)
        findings = {
            "beta_nonzero": report.beta_nonzero,
            "noetherian": report.noetherian,
            "piecewise_domain": report.pwd,
            "polynomial_subalgebra": report.polynomial_subalgebra,
            "witnesses": report.witnesses,
        }
        return ("pass" if report.checks_passed else "fail"), findings
    if what == "skewgroup":
        n = args.n or params.n
        if args.n is None:
            if any(a != 0 for a in params.alpha) or not params.gamma_is_zero():
                raise ConfigError("verify skewgroup requires alpha = gamma = 0 (or pass --n)")
            sk_params = params
        else:
            sk_params = None
        if n < 2:
            raise ConfigError("verify skewgroup requires n >= 2")
        report = verify_quotient_match(n, sk_params, max_degree=args.max_degree or 4)
        return ("pass" if report.ok else "fail"), _skewgroup_findings(report)
    raise ConfigError(f"unknown verify target {what!r}")


def _cmd_report(args) -> tuple[str, dict]:
    params = load_config(args.config).to_parameters()
    n = params.n
    sections: dict = {}
    oks: list[bool] = []

    conf = check_confluence(build_system(PRESET_QDU, params))
    sections["confluence"] = {"overlaps": len(conf.overlaps), "confluent": conf.confluent}
    oks.append(conf.confluent)

    qdu_check = closed_form_check(params, 8, preset=PRESET_QDU)
    sections["hilbert"] = _closed_form_findings(qdu_check)
    oks.append(qdu_check.ok)
    pre_check = closed_form_check(params, 8, preset=PRESET_PREPROJECTIVE)
    sections["preprojective"] = _closed_form_findings(pre_check)
    oks.append(pre_check.ok)
    fact = factorization_identity(n)
    sections["factorization_identity"] = fact
    oks.append(fact)

    props = property_report(params)
    sections["properties"] = {
        "beta_nonzero": props.beta_nonzero,
        "noetherian": props.noetherian,
        "piecewise_domain": props.pwd,
        "polynomial_subalgebra": props.polynomial_subalgebra,
        "checks_passed": props.checks_passed,
    }
    oks.append(props.checks_passed)

    if params.beta_all_nonzero():
        gwa = verify_gwa(params, trials=min(args.trials, 100), seed=args.seed)
        sections["gwa"] = {
            "relations_killed": gwa.relations_killed,
            "roundtrip_arrows": gwa.roundtrip_arrows,
            "roundtrip_base": gwa.roundtrip_base,
            "grading": gwa.grading_ok,
            "pwd_failures": len(gwa.pwd.failures),
        }
        oks.append(gwa.ok)
        if params.gamma_is_zero():
            sp_ok, sp = _superpotential_findings(params)
            sections["superpotential"] = sp
            oks.append(sp_ok)
            nk_ok, nk = _nakayama_findings(params)
            sections["nakayama"] = nk
            oks.append(nk_ok)
        pwd = pwd_probe_H(params, degree_bound=4, trials=min(args.trials, 100), seed=args.seed)
        sections["pwd"] = _pwd_findings(pwd)
        oks.append(pwd.ok)
    else:
        chain = noetherian_chain_check(params, s_max=2)
        sections["noetherian_chain"] = _chain_findings(chain)
        oks.append(chain.ok)
        pwd = pwd_probe_H(params, degree_bound=4, trials=min(args.trials, 100), seed=args.seed)
        sections["pwd"] = _pwd_findings(pwd)
        oks.append(pwd.ok)

    if (2 <= n <= 12 and all(a == 0 for a in params.alpha) and params.gamma_is_zero()):
        sk = verify_quotient_match(n, params, max_degree=3)
        sections["skewgroup"] = _skewgroup_findings(sk)
        oks.append(sk.ok)

    return ("pass" if all(oks) else "fail"), sections


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quiverdu",
                                     description="quiver down-up algebra toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", help="path to the algebra config JSON")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized probes")

    p_nf = sub.add_parser("nf", help="normal form of an element")
    common(p_nf)
    p_nf.add_argument("element", help="element in the textual format")

    p_basis = sub.add_parser("basis", help="normal-word basis at a degree")
    common(p_basis)
    p_basis.add_argument("--degree", type=int, required=True)
    p_basis.add_argument("--preset", choices=["qdu", "preprojective"], default="qdu")

    p_conf = sub.add_parser("confluence", help="resolve all overlap ambiguities")
    common(p_conf)

    p_hil = sub.add_parser("hilbert", help="dimension matrices and totals")
    common(p_hil)
    p_hil.add_argument("--max-degree", type=int, default=8)
    p_hil.add_argument("--preset", choices=["qdu", "preprojective"], default="qdu")
    p_hil.add_argument("--check", action="store_true",
                       help="compare enumeration against the closed form")

    p_iso = sub.add_parser("iso", help="graded isomorphism decision")
    common(p_iso)
    p_iso.add_argument("--other", required=True, help="path to the second config")

    p_ver = sub.add_parser("verify", help="run one verification suite")
    p_ver.add_argument("what", choices=[
        "gwa", "superpotential", "nakayama", "pwd", "noetherian", "properties", "skewgroup"])
    common(p_ver)
    p_ver.add_argument("--trials", type=int, default=200)
    p_ver.add_argument("--max-degree", type=int, default=None)
    p_ver.add_argument("--n", type=int, default=None,
                       help="skewgroup: group order override (alpha=gamma=0 assumed)")

    p_rep = sub.add_parser("report", help="full verification suite for one config")
    common(p_rep)
    p_rep.add_argument("--trials", type=int, default=100)
    return parser


_DISPATCH = {
    "nf": _cmd_nf,
    "basis": _cmd_basis,
    "confluence": _cmd_confluence,
    "hilbert": _cmd_hilbert,
    "iso": _cmd_iso,
    "verify": _cmd_verify,
    "report": _cmd_report,
}


def _emit(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, sort_keys=True, indent=2))
        return
    print(f"command: {report['command']}")
    print(f"verdict: {report['verdict']}")
    for key, value in sorted(report["findings"].items()):
        print(f"  {key}: {json.dumps(value, sort_keys=True)}")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    command = args.command if args.command != "verify" else f"verify {args.what}"
    try:
        verdict, findings = _DISPATCH[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = {
        "command": command,
        "verdict": verdict,
        "findings": findings,
        "seed": getattr(args, "seed", 0),
        "version": __version__,
    }
    _emit(report, args.json)
    if verdict == "pass":
        return EXIT_PASS
    if verdict == "fail":
        return EXIT_FAIL
    return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
