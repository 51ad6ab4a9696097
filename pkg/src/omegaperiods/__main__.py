import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor

import pandas as pd

from omegaperiods.algebra import Potential, normalize_dfe
from omegaperiods.basis import delta, eval_solution, solve_samples
from omegaperiods.errors import InputError, OmegaError, PoleProximityError, ToleranceNotMet
from omegaperiods.omega import OmegaEvaluator, PoleInfo
from omegaperiods.quadrature import Estimate, QuadConfig
from omegaperiods.reduction import eval_reduction, parse_q, reduce_mixed
from omegaperiods.selftest import run_selftest
from omegaperiods.utils import _complex_to_json, parse_complex, parse_complex_list, read_config, read_samples

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_TOLERANCE = 3
EXIT_POLE = 4

DEFAULT_WORKERS = 4
BATCH_COLUMNS = ["s_re", "s_im", "re", "im", "achieved_error", "pole", "residue_re", "residue_im", "error"]
BATCH_COMMANDS = ("eval", "incomplete", "ml", "diff")


def _response(command, values=(), achieved_error=None, poles=(), warnings=(), data=None, status="ok"):
    return {
        "status": status,
        "command": command,
        "values": [_complex_to_json(v) for v in values],
        "achieved_error": achieved_error,
        "poles": list(poles),
        "warnings": list(warnings),
        "data": data,
    }


def _pole_json(n, residue, column=None):
    pole = {"n": n, "residue": _complex_to_json(residue)}
    if column is not None:
        pole["column"] = column
    return pole


def _required(args, name):
    value = getattr(args, name, None)
    if value is None:
        raise InputError("The {} command needs --{}".format(args.command, name))
    return value


def _complex_arg(args, name, default=None):
    value = getattr(args, name, None)
    if value is None:
        if default is None:
            raise InputError("The {} command needs --{}".format(args.command, name))
        return default
    return parse_complex(value)


def _evaluate_point(command, ev, args, s):
    """
    Evaluates one of the batch commands at s: an Estimate, or a PoleInfo for eval
    """
    if command == "eval":
        return ev.omega(_required(args, "k"), s, full_output=True)
    if command == "incomplete":
        return ev.incomplete(s, _complex_arg(args, "z"), full_output=True)
    if command == "ml":
        return ev.mittag_leffler(_required(args, "k"), s, N=args.n, full_output=True)
    return ev.omega_diff(_required(args, "k"), _required(args, "l"), s, full_output=True)


def point_command(command, ev, args):
    """
    eval, incomplete, ml and diff at the single point --s
    """
    result = _evaluate_point(command, ev, args, _complex_arg(args, "s"))
    if isinstance(result, PoleInfo):
        return _response(command, poles=[_pole_json(result.n, result.residue)], status="pole"), EXIT_POLE
    return _response(command, [result.value], result.error), EXIT_OK


def residues(ev, args):
    n = _required(args, "n")
    if n < 0:
        raise InputError("--n must be non negative, got {}".format(n))
    return _response("residues", [ev.residue(j) for j in range(n + 1)], 0.0), EXIT_OK


def determinant(ev, args):
    report = delta(ev, _complex_arg(args, "s0"))
    data = None
    if report.closed_form_monomial is not None:
        data = {
            "closed_form_monomial": _complex_to_json(report.closed_form_monomial),
            "printed_formula_value": _complex_to_json(report.printed_formula_value),
        }
    return _response("det", [report.value], warnings=report.warnings, data=data), EXIT_OK


def solve(ev, args, scale):
    spec = solve_samples(ev, _complex_arg(args, "s0", 0j), parse_complex_list(_required(args, "v")), scale)
    warnings = []
    if spec.condition > 1e8:
        warnings.append("ill conditioned system, condition {:.3g}".format(spec.condition))
    data = {"scale": _complex_to_json(spec.scale), "residual": spec.residual, "condition": spec.condition}
    values = list(spec.c)
    if args.s is not None:
        data["value"] = _complex_to_json(eval_solution(spec, ev, parse_complex(args.s)))
    return _response("solve", values, spec.residual, warnings=warnings, data=data), EXIT_OK


def reduce_command(ev, args):
    Q = parse_q(_required(args, "q"))
    reductions = reduce_mixed(ev.potential, Q)
    values = []
    error = None
    if args.s is not None and args.z is not None:
        s, z = parse_complex(args.s), parse_complex(args.z)
        total = Estimate(0j, 0.0)
        for red in reductions:
            total = total + eval_reduction(red, ev, s, z, full_output=True)
        values = [total.value]
        error = total.error
    return _response("reduce", values, error, data=[red.to_json() for red in reductions]), EXIT_OK


def selftest(args, cfg):
    report = run_selftest(args.n if args.n is not None else 5, cfg=cfg)
    passed = bool(report["passed"].all())
    status = "ok" if passed else "failed"
    return _response("selftest", data=report.to_dict(orient="records"), status=status), \
        EXIT_OK if passed else EXIT_FAILED


def batch(command, ev, args, workers):
    """
    Evaluates a command at every s of the batch file, in parallel, keeping the file order
    """
    if command not in BATCH_COMMANDS:
        raise InputError("--batch works with {}, not {}".format(", ".join(BATCH_COMMANDS), command))
    if command == "incomplete":
        _complex_arg(args, "z")
    else:
        _required(args, "k")
    if command == "diff":
        _required(args, "l")
    samples = read_samples(args.batch)

    def row(s):
        record = {"s_re": s.real, "s_im": s.imag, "pole": False}
        try:
            result = _evaluate_point(command, ev, args, s)
        except PoleProximityError as e:
            result = PoleInfo(e.n, ev.residue(e.n))
        except OmegaError as e:
            record["error"] = "{}: {}".format(type(e).__name__, e)
            return record
        if isinstance(result, PoleInfo):
            record.update(pole=True, residue_re=result.residue.real, residue_im=result.residue.imag)
        else:
            record.update(re=result.value.real, im=result.value.imag, achieved_error=result.error)
        return record

    with ThreadPoolExecutor(max_workers=workers) as executor:
        rows = list(executor.map(row, samples))
    failed = sum(1 for r in rows if "error" in r)
    logger.info("batch {}: {} rows, {} failed".format(command, len(rows), failed))
    code = EXIT_OK if not rows or failed < len(rows) else EXIT_TOLERANCE
    return pd.DataFrame(rows, columns=BATCH_COLUMNS), code


def _quad_config(args, config):
    settings = dict(config["quadrature"])
    if args.tol is not None:
        settings["tol"] = args.tol
    return QuadConfig.from_dict(settings)


def _potential(args, config):
    text = args.pot if args.pot is not None else config["potential"]
    if text is None:
        raise InputError("The {} command needs --pot".format(args.command))
    return Potential.parse(text)


def run(args):
    """
    Runs a parsed command line

    :return: the pair (payload, exit code); the payload is a response dict or, for batches, a DataFrame
    """
    ev = None
    try:
        config = read_config(args.config)
        cfg = _quad_config(args, config)
        if args.command == "selftest":
            return selftest(args, cfg)
        scale = 1
        if args.command == "solve" and args.alpha is not None:
            normalized = normalize_dfe(parse_complex_list(args.alpha))
            potential, scale = normalized.potential, normalized.scale
        else:
            potential = _potential(args, config)
        ev = OmegaEvaluator(potential, cfg)
        logger.info("{} with {}".format(args.command, potential))
        if args.batch is not None:
            workers = args.workers or config["workers"] or DEFAULT_WORKERS
            return batch(args.command, ev, args, workers)
        if args.command in BATCH_COMMANDS:
            return point_command(args.command, ev, args)
        if args.command == "residues":
            return residues(ev, args)
        if args.command == "det":
            return determinant(ev, args)
        if args.command == "solve":
            return solve(ev, args, scale)
        return reduce_command(ev, args)
    except InputError as e:
        logger.error(str(e))
        return _response(args.command, warnings=[str(e)], status="error"), EXIT_INPUT
    except ToleranceNotMet as e:
        logger.error(str(e))
        values = [e.estimate.value] if e.estimate is not None else []
        error = e.estimate.error if e.estimate is not None else None
        return _response(args.command, values, error, warnings=[str(e)], status="tolerance"), EXIT_TOLERANCE
    except PoleProximityError as e:
        logger.error(str(e))
        pole = _pole_json(e.n, ev.residue(e.n), e.column)
        return _response(args.command, poles=[pole], warnings=[str(e)], status="pole"), EXIT_POLE


def _write(payload, fmt, stream):
    if isinstance(payload, pd.DataFrame):
        if payload.empty:
            return
        if fmt == "json":
            records = [{k: v for k, v in r.items() if not pd.isna(v)} for r in payload.to_dict(orient="records")]
            stream.write(json.dumps(records) + "\n")
        else:
            payload.to_csv(stream, index=False)
        return
    if fmt == "csv":
        if payload["data"] is not None and payload["command"] == "selftest":
            pd.DataFrame(payload["data"]).to_csv(stream, index=False)
            return
        values = pd.DataFrame(payload["values"], columns=["re", "im"])
        values.insert(0, "status", payload["status"])
        values.to_csv(stream, index=False)
        return
    stream.write(json.dumps(payload) + "\n")


def build_parser():
    ap = argparse.ArgumentParser(prog="omega", description="Omega functions and exponential periods")
    subprogram = ap.add_subparsers(help="The computation to run", dest="command", required=True)
    commands = {
        "eval": "Omega_k(s) on the whole plane",
        "incomplete": "incomplete Omega function W(s, z)",
        "residues": "residues lambda_0..lambda_n",
        "ml": "Mittag-Leffler evaluation of Omega_k(s)",
        "diff": "entire difference Omega_k(s) - Omega_l(s)",
        "det": "determinant of the Omega matrix at s0",
        "solve": "solution of the difference equation from d samples",
        "reduce": "reduction of int t^s Q(t, t^s) exp(P0) dt",
        "selftest": "run the invariant suite",
    }
    for name, help_text in commands.items():
        sub = subprogram.add_parser(name, help=help_text)
        sub.add_argument("--pot", help="The potential, e.g. 'd=3;a1=0.5;a2=1-0.25i'")
        sub.add_argument("--k", type=int, help="The ray index")
        sub.add_argument("--l", type=int, help="The second ray index (diff)")
        sub.add_argument("--s", help="The complex point s")
        sub.add_argument("--s0", help="The base point of the Omega matrix")
        sub.add_argument("--z", help="The end point of the incomplete function")
        sub.add_argument("--n", type=int, help="Series order, residue count or selftest samples")
        sub.add_argument("--q", help="The polynomial Q(t, T), T standing for t^s")
        sub.add_argument("--v", help="Comma separated samples f(s0+1)..f(s0+d)")
        sub.add_argument("--alpha", help="Comma separated coefficients alpha_1..alpha_d of s f(s) = sum alpha_k f(s+k)")
        sub.add_argument("--tol", type=float, help="Target relative error")
        sub.add_argument("--format", choices=["json", "csv"], default="json", help="The output format")
        sub.add_argument("--batch", help="File with one s per line, 're[,im]'")
        sub.add_argument("--workers", type=int, help="Worker threads of a batch")
        sub.add_argument("-c", "--config", help="The configuration file path")
        sub.add_argument("--verbose", action="store_true", help="Debug logging")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    payload, code = run(args)
    _write(payload, args.format, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
