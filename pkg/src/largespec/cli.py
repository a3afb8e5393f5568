"""Command-line experiment runner.

Exit codes: 0 when every asserted check passes, 1 when some record fails (the
failing records are also dumped to stderr), 2 for invalid input, a budget
refusal or an unresolvable precision problem.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import sweeps
from ._validation import DEFAULT_BUDGET, BudgetError, InputError, PrecisionError, parse_rational
from .bohr import bohr_set, bourgain_size_check
from .core import ResidueSet, density, make_set, parse_set_spec
from .energy import energy_tk, energy_tk_bruteforce
from .report import RunReport, count, emit_report, jsonable
from .spectrum import ModulusComparator, dyadic_levels, spectrum_size_bound, spectrum_threshold
from .systems import build_matrix, count_solutions, gowers_monotonicity_check

COMMANDS = ("spectrum", "energy", "systems", "gowers", "chang", "improved", "bohr",
            "verify-main", "verify-matrix", "verify-all")


@dataclass
class ExperimentConfig:
    command: str
    sets: list = field(default_factory=list)
    alphas: list | None = None
    ks: list | None = None
    ds: list | None = None
    Ns: list | None = None
    seed: int = 0
    samples: int = 0
    exhaustive: bool = False
    format: str = "json"
    budget: int = DEFAULT_BUDGET
    time_budget: float = sweeps.TIME_LIMIT
    variant: str = "star"
    K: list | None = None
    eps: list | None = None
    lemma: str = "main"
    level_ks: list | None = None
    full: bool = False
    quick: bool = False

    def validate(self):
        if self.budget <= 0 or self.time_budget < 0:
            raise InputError("budgets must be positive")
        if self.samples < 0:
            raise InputError("--samples must be nonnegative")
        for name in ("alphas", "ks", "ds", "Ns", "eps", "level_ks"):
            if getattr(self, name) == []:
                raise InputError(f"parameter grid {name!r} is empty")
        for k in (self.ks or []) + (self.level_ks or []):
            if k < 1:
                raise InputError(f"k must be positive, got {k}")
        for d in self.ds or []:
            if d < 0:
                raise InputError(f"d must be nonnegative, got {d}")
        return self

    def as_dict(self):
        return asdict(self)


def int_list(text):
    """``"2,3"``, ``"5..11"`` or a mix like ``"5..7,9"``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from exc
    return out


def expr_list(text):
    return [s.strip() for s in text.split(",") if s.strip()]


def _parser():
    parser = argparse.ArgumentParser(prog="largespec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--set", action="append", default=[], dest="sets",
                        help="set spec such as 'N=10,list:0,1' (repeatable)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="maximum number of enumerated tuples")
    common.add_argument("--time-budget", type=float, default=sweeps.TIME_LIMIT,
                        help="seconds per instance, 0 disables the limit")

    alpha = argparse.ArgumentParser(add_help=False)
    alpha.add_argument("--alpha", "--alpha-grid", dest="alphas", type=expr_list,
                       help="comma-separated rationals or expressions in delta")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--N", dest="Ns", type=int_list, help="moduli, e.g. 5..11")
    grid.add_argument("--exhaustive", action="store_true", help="every nonempty subset")
    grid.add_argument("--samples", type=int, default=None)

    def add(name, parents, help_text):
        return sub.add_parser(name, parents=parents, help=help_text)

    add("spectrum", [common, alpha], "large spectrum R_alpha and its dyadic levels")
    p = add("energy", [common, alpha], "T_k and, with --alpha, the energy lower bound")
    p.add_argument("--k", dest="ks", type=int_list)
    p = add("systems", [common, alpha], "solution counts S_{k,d} of the sign-matrix system")
    p.add_argument("--k", dest="ks", type=int_list)
    p.add_argument("--d", dest="ds", type=int_list)
    p = add("gowers", [common, grid], "Gowers norms of indicators or random signals")
    p.add_argument("--d", dest="ds", type=int_list)
    add("chang", [common, alpha, grid], "dissociated basis of R_alpha with span certificates")
    p = add("improved", [common, alpha, grid], "short representations over Lambda*")
    p.add_argument("--variant", choices=("star", "tilde"), default="star")
    p = add("bohr", [common, grid], "Bohr sets, size bound and containment in 2A - 2A")
    p.add_argument("--K", type=int_list, default=None, help="frequencies, e.g. 1,2")
    p.add_argument("--eps", type=expr_list, default=None)
    p.add_argument("--full", action="store_true", help="check the full containment chain")
    p = add("verify-main", [common, alpha, grid], "sweep the energy lower bound")
    p.add_argument("--k", dest="ks", type=int_list)
    p.add_argument("--lemma", choices=("main", "level", "both"), default="main")
    p.add_argument("--level-k", dest="level_ks", type=int_list)
    p = add("verify-matrix", [common, alpha, grid], "sweep the matrix bound and S_{k,0} = T_k")
    p.add_argument("--k", dest="ks", type=int_list)
    p.add_argument("--d", dest="ds", type=int_list)
    p = add("verify-all", [common], "every acceptance family")
    p.add_argument("--quick", action="store_true", help="reduced sizes for smoke runs")
    return parser


DEFAULTS = {
    "spectrum": {"alphas": ["delta"]},
    "energy": {"ks": [2]},
    "systems": {"ks": [1], "ds": [1]},
    "gowers": {"ds": [1, 2, 3], "samples": 0},
    "chang": {"alphas": ["delta/2"], "samples": 0},
    "improved": {"alphas": ["delta/2"], "samples": 0},
    "bohr": {"eps": ["1/10"], "samples": 0},
    "verify-main": {"alphas": ["delta", "delta/2", "delta/4"], "ks": [2, 3], "Ns": [5, 6, 7],
                    "level_ks": [2, 4], "samples": 100},
    "verify-matrix": {"alphas": ["delta/2"], "ks": [1, 2], "ds": [1], "Ns": [7], "samples": 200},
    "verify-all": {},
}


def make_config(args) -> ExperimentConfig:
    values = dict(DEFAULTS[args.command])
    for name in ExperimentConfig.__dataclass_fields__:
        v = getattr(args, name, None)
        if v is not None and name != "command":
            values[name] = v
    values.setdefault("samples", 0)
    return ExperimentConfig(args.command, **values).validate()


def load_sets(cfg):
    return [(spec, make_set(parse_set_spec(spec))) for spec in cfg.sets]


def _need_sets(cfg):
    if not cfg.sets:
        raise InputError(f"{cfg.command} needs at least one --set")
    return load_sets(cfg)


# single-instance records


def spectrum_record(spec, A, alpha_expr):
    alpha = parse_rational(alpha_expr, density(A))
    cmp = ModulusComparator(A)
    R = spectrum_threshold(A, alpha, cmp)
    levels = dyadic_levels(A, alpha, cmp)
    bound = spectrum_size_bound(A, alpha)
    return {
        "key": [spec, alpha_expr],
        "operation": "spectrum_threshold",
        "claim": sweeps.CLAIMS["size"],
        "spec": spec, "N": A.N, "set": list(A.elements), "delta": density(A),
        "alpha": alpha,
        "R": list(R.members.elements),
        "size": len(R),
        "bound": bound,
        "moduli": [float(abs(cmp.coefficients[r])) for r in R.members.elements],
        "levels": [{"index": lv.index, "members": list(lv.members.elements)} for lv in levels],
        "verdict": sweeps.verdict(len(R) <= bound),
        "warnings": list(cmp.warnings),
    }


def energy_record(spec, B, k, budget):
    t = energy_tk(B, k)
    rec = {"key": [spec, k], "operation": "energy_tk", "claim": sweeps.CLAIMS["oracle"],
           "spec": spec, "N": B.N, "set": list(B.elements), "k": k, "t_k": count(t)}
    if len(B) ** (2 * k) <= budget:
        brute = energy_tk_bruteforce(B, k, budget)
        rec["t_k_bruteforce"] = count(brute)
        rec["verdict"] = sweeps.verdict(brute == t)
    else:
        rec["verdict"] = "info"
    return rec


def systems_record(spec, B, k, d, budget):
    exact = count_solutions(B, k, d, "exact")
    spectral = count_solutions(B, k, d, "spectral")
    system = build_matrix(k, d)
    rec = {"key": [spec, k, d], "operation": "count_solutions",
           "claim": "exact and spectral counts of S_{k,d} agree",
           "spec": spec, "N": B.N, "set": list(B.elements), "k": k, "d": d,
           "count": count(exact), "count_spectral": count(spectral)}
    if system.matrix.shape[1] <= 64:
        rec["matrix"] = system.matrix.tolist()
    rec["verdict"] = sweeps.verdict(exact == spectral)
    return rec


def gowers_set_record(spec, A, ds):
    ok, values = gowers_monotonicity_check(A.indicator().astype(complex), max(ds))
    return {"key": [spec], "operation": "gowers_monotonicity_check",
            "claim": sweeps.CLAIMS["gowers"], "spec": spec, "N": A.N, "set": list(A.elements),
            "norms": {str(d): values[d - 1] for d in ds}, "verdict": sweeps.verdict(ok)}


def bohr_record(N, K, eps_expr):
    eps = parse_rational(eps_expr)
    Ks = ResidueSet(N, K)
    members = bohr_set(Ks, eps)
    ok, size, bound = bourgain_size_check(Ks, eps)
    return {"key": [N, list(Ks.elements), eps_expr], "operation": "bohr_set",
            "claim": sweeps.CLAIMS["bourgain"], "N": N, "K": list(Ks.elements), "eps": eps,
            "bohr": list(members.elements), "size": size, "bound": bound,
            "verdict": sweeps.verdict(ok)}


# commands


def _samples(cfg, default):
    return cfg.samples if cfg.samples else default


def run_spectrum(cfg):
    return [spectrum_record(s, A, a) for s, A in _need_sets(cfg) for a in cfg.alphas]


def run_energy(cfg):
    records = []
    for s, A in _need_sets(cfg):
        for k in cfg.ks:
            records.append(energy_record(s, A, k, cfg.budget))
            for a in cfg.alphas or []:
                rec = sweeps.main_record(A, a, k)
                rec["key"] = [s] + rec["key"]
                records.append(rec)
    return records


def run_systems(cfg):
    records = []
    for s, A in _need_sets(cfg):
        for k in cfg.ks:
            for d in cfg.ds:
                records.append(systems_record(s, A, k, d, cfg.budget))
                for a in cfg.alphas or []:
                    rec = sweeps.matrix_record(A, a, k, d)
                    rec["key"] = [s] + rec["key"]
                    records.append(rec)
    return records


def run_gowers(cfg):
    records = [gowers_set_record(s, A, cfg.ds) for s, A in load_sets(cfg)]
    if cfg.samples or not cfg.sets:
        records += sweeps.gowers_family(_samples(cfg, 100), cfg.seed, d_max=max(cfg.ds))
    return records


def run_chang(cfg):
    records = []
    for s, A in load_sets(cfg):
        for a in cfg.alphas:
            rec = sweeps.chang_record(A, a)
            rec["key"] = [s] + rec["key"]
            records.append(rec)
    if cfg.samples or not cfg.sets:
        records += sweeps.chang_family(_samples(cfg, 200), cfg.seed)
    return records


def run_improved(cfg):
    records = []
    for s, A in load_sets(cfg):
        for a in cfg.alphas:
            rec = sweeps.improved_record(A, a, cfg.variant)
            rec["key"] = [s] + rec["key"]
            records.append(rec)
    if cfg.samples or not cfg.sets:
        Ns = cfg.Ns or sweeps.COPRIME_MODULI
        records += sweeps.improved_family(_samples(cfg, 100), cfg.seed, Ns, cfg.variant)
    return records


def run_bohr(cfg):
    records = []
    if cfg.K is not None:
        if not cfg.Ns:
            raise InputError("bohr --K needs --N")
        records += [bohr_record(N, cfg.K, e) for N in cfg.Ns for e in cfg.eps]
    for s, A in load_sets(cfg):
        rec = sweeps.containment_record(A, cfg.full)
        rec["key"] = [s] + rec["key"]
        records.append(rec)
    if cfg.samples:
        if cfg.full:
            records += sweeps.proposition_family(cfg.samples, cfg.seed, cfg.Ns or sweeps.COPRIME_MODULI)
        else:
            records += sweeps.containment_family(cfg.samples, cfg.seed)
            records += sweeps.bourgain_family(samples=cfg.samples, seed=cfg.seed)
    if not records:
        raise InputError("bohr needs --K with --N, a --set, or --samples")
    return records


def run_verify_main(cfg):
    records = []
    if cfg.lemma in ("main", "both"):
        records += sweeps.main_theorem_family(cfg.Ns, cfg.alphas, cfg.ks, cfg.exhaustive,
                                              cfg.samples, cfg.seed)
    if cfg.lemma in ("level", "both"):
        if cfg.exhaustive:
            records += sweeps.level_lemma_family(cfg.Ns, cfg.alphas, cfg.level_ks)
        else:
            items = sweeps.sampled_instances(cfg.Ns, cfg.alphas, cfg.level_ks, cfg.samples,
                                             np.random.Generator(np.random.PCG64(cfg.seed)))
            records += sweeps.parallel_map(sweeps.level_record, items)
    return records


def run_verify_matrix(cfg):
    records = sweeps.matrix_family(cfg.Ns, cfg.alphas, cfg.ks, cfg.ds, cfg.exhaustive,
                                   cfg.samples, cfg.seed)
    records += sweeps.matrix_d0_family(cfg.samples or 200, cfg.seed)
    return records


def run_verify_all(cfg):
    """Every acceptance family; ``--quick`` shrinks each one."""
    q = cfg.quick
    seeds = np.random.SeedSequence(cfg.seed).generate_state(12).tolist()
    n = (lambda full, small: small if q else full)
    alphas = ["delta", "delta/2", "delta/4"]
    main_Ns = list(range(5, 8)) if q else list(range(5, 12))
    records = []
    records += sweeps.energy_oracle_family(range(4, n(13, 8)), 5, (2, 3), n(500, 20), seeds[0])
    records += sweeps.main_theorem_family(main_Ns, alphas, (2, 3))
    records += sweeps.level_lemma_family(main_Ns, alphas, (2, 4))
    records += sweeps.matrix_d0_family(n(200, 20), seeds[1])
    records += sweeps.matrix_family([7], ["delta/2"], (1, 2), (1,))
    records += sweeps.gowers_family(n(100, 10), seeds[2])
    records += sweeps.fourier_family(n(100, 10), seeds[3])
    records += sweeps.chang_family(n(200, 20), seeds[4])
    records += sweeps.improved_family(n(100, 10), seeds[5])
    records += sweeps.rudin_family(n(100, 10), seeds[6])
    records += sweeps.statement_family(n(100, 10), seeds[7])
    records += sweeps.bourgain_family(samples=n(200, 20), seed=seeds[8])
    records += sweeps.containment_family(n(200, 20), seeds[9])
    records += sweeps.proposition_family(n(100, 10), seeds[10])
    return records


RUNNERS = {
    "spectrum": run_spectrum, "energy": run_energy, "systems": run_systems,
    "gowers": run_gowers, "chang": run_chang, "improved": run_improved, "bohr": run_bohr,
    "verify-main": run_verify_main, "verify-matrix": run_verify_matrix,
    "verify-all": run_verify_all,
}


def run(cfg: ExperimentConfig, timestamp=None) -> RunReport:
    sweeps.TIME_LIMIT = cfg.time_budget
    report = RunReport(cfg.command, jsonable(cfg.as_dict()), seed=cfg.seed, timestamp=timestamp)
    for rec in RUNNERS[cfg.command](cfg):
        report.add(rec)
    report.sort()
    return report


def main(argv=None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        report = run(cfg)
    except (InputError, BudgetError, PrecisionError) as exc:
        print(f"largespec: error: {exc}", file=sys.stderr)
        return 2
    payload = emit_report(report, cfg.format)
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    failures = report.failures
    for rec in failures:
        print("FAIL " + json.dumps(jsonable(rec)), file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
