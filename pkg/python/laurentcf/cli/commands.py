"""Subcommands of the ``laurentcf`` command line."""

import argparse
import contextlib
import logging
from fractions import Fraction
from typing import Iterator, Tuple, Union

from laurentcf import config
from laurentcf.algebra import (
    FieldSpec,
    LaurentSeries,
    Poly,
    convergents,
    expand,
    split,
)
from laurentcf.dirichlet import (
    ApproxFunction,
    dirichlet_witness,
    dist_to_lattice,
    is_improvable,
    minimal_distance_check,
)
from laurentcf.errors import ConfigError, LaurentCFError, ParseError
from laurentcf.metric import (
    CantorParams,
    GrowthFunction,
    check_holder,
    check_index_conditions,
    check_mass_conservation,
    check_membership,
    count_cylinders,
    count_cylinders_brute,
    dim_F,
    dim_G,
    gamma_split,
    local_dimension_profile,
    measure_degree_sum,
    measure_sweep,
    solve_s_kM,
    tail_measure,
)
from laurentcf.stochastic import (
    SamplerConfig,
    degree_distribution,
    independence_check,
    measure_dichotomy_series,
    tail_event_frequency,
)

from . import CommandOutput, RunConfig, register_command

logger = logging.getLogger(__name__)


@contextlib.contextmanager
def flag(name: str) -> Iterator[None]:
    """Report bad flag values as :class:`ConfigError` naming the flag."""
    try:
        yield
    except ParseError as exc:
        raise ConfigError(str(exc), name) from exc
    except LaurentCFError:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(str(exc), name) from exc


def parse_range(text: str) -> Tuple[int, int]:
    """``a..b`` (inclusive) or a single integer.

    >>> parse_range("3..12")
    (3, 12)
    >>> parse_range("5")
    (5, 5)
    """
    lo, sep, hi = text.partition("..")
    lo, hi = int(lo), int(hi) if sep else int(lo)
    if hi < lo:
        raise ValueError(f"empty range {text!r}")
    return lo, hi


def parse_number(field_: FieldSpec, text: str) -> Union[LaurentSeries, Tuple[Poly, Poly]]:
    """A series ``int=...; frac=...`` or a rational ``P/Q`` (``Q`` defaults to 1)."""
    if "int=" in text or "frac=" in text:
        return LaurentSeries.parse(field_, text)
    num, sep, den = text.partition("/")
    P = Poly.parse(field_, num)
    Q = Poly.parse(field_, den) if sep else Poly.one(field_)
    if Q.is_zero():
        raise ParseError(f"zero denominator in {text!r}")
    return P, Q


def _add_q(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--q", type=int, help="field size, a prime (default 2)")


def _add_k(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k", type=int, help="number of consecutive partial quotients (default 1)")


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _exact(value: Fraction) -> str:
    """``1/4 (0.25)``: the exact rational and its decimal value."""
    return f"{value} ({_fmt(float(value))})"


def _split_fraction(name: str, value: Fraction) -> dict:
    return {f"{name}_num": str(value.numerator), f"{name}_den": str(value.denominator)}


@register_command("expand")
class ExpandCommand:
    help = "continued-fraction expansion of a series or rational"

    @staticmethod
    def add_arguments(parser):
        _add_q(parser)
        parser.add_argument("--x", required=True, help="'int=<poly>; frac=c1,...' or 'P/Q'")
        parser.add_argument("--n-max", type=int, help="stop after this many quotients")

    @staticmethod
    def run(args, run: RunConfig) -> CommandOutput:
        field_ = FieldSpec(run.q)
        with flag("--x"):
            x = parse_number(field_, args.x)
        if args.n_max is not None and args.n_max < 1:
            raise ConfigError(f"must be >= 1, got {args.n_max}", "--n-max")
        if isinstance(x, LaurentSeries):
            int_part, frac = split(x)
        else:
            int_part, rem = divmod(x[0], x[1])
            frac = (rem, x[1])
        cf = expand(frac, args.n_max)
        convs = convergents(cf)[: cf.certified]
        rows = [
            {"i": i, "quotient": str(a), "degree": a.degree, "certified": i <= cf.certified}
            for i, a in enumerate(cf.quotients, start=1)
        ]
        payload = {
            "q": run.q,
            "x": args.x,
            "int_part": int_part,
            "quotients": [str(a) for a in cf.quotients],
            "degrees": list(cf.degrees),
            "certified": cf.certified,
            "terminated": cf.terminated,
            "convergents": [{"n": c.n, "P": c.P, "Q": c.Q} for c in convs],
        }
        lines = [f"[{int_part}; " + ", ".join(payload["quotients"]) + "]"]
        lines.append(f"certified {cf.certified} of {len(cf)}" + (" (terminated)" if cf.terminated else ""))
        lines += [f"P_{c.n}/Q_{c.n} = ({c.P})/({c.Q})" for c in convs]
        return CommandOutput(payload, "\n".join(lines), rows)


@register_command("measure")
class MeasureCommand:
    help = "Haar measure of a degree sum or of its tail"

    @staticmethod
    def add_arguments(parser):
        _add_q(parser)
        _add_k(parser)
        target = parser.add_mutually_exclusive_group(required=True)
        target.add_argument("--m", type=int, help="degree sum equal to M")
        target.add_argument("--tail-from", type=int, metavar="M", help="degree sum at least M")
        target.add_argument("--sweep", help="range of degree sums a..b")

    @staticmethod
    def run(args, run: RunConfig) -> CommandOutput:
        q, k = run.q, run.k
        if args.sweep:
            with flag("--sweep"):
                lo, hi = parse_range(args.sweep)
            rows = measure_sweep(q, k, range(lo, hi + 1))
            payload = {"q": q, "k": k, "rows": rows}
            text = "\n".join(f"m={r.m} count={r.count} measure={_exact(r.measure)}" for r in rows)
            return CommandOutput(payload, text, rows)
        if args.tail_from is not None:
            m, name = args.tail_from, "--tail-from"
        else:
            m, name = args.m, "--m"
        if m < 1:
            raise ConfigError(f"must be >= 1, got {m}", name)
        tail = tail_measure(q, m, k)
        if args.tail_from is not None:
            payload = {"q": q, "k": k, "m": m, "event": "tail", **_split_fraction("measure", tail)}
            return CommandOutput(payload, f"tail(m>={m})={_exact(tail)}")
        count = count_cylinders(q, m, k)
        measure = measure_degree_sum(q, m, k)
        payload = {
            "q": q,
            "k": k,
            "m": m,
            "event": "equal",
            "count": count,
            **_split_fraction("measure", measure),
            **_split_fraction("tail", tail),
        }
        return CommandOutput(payload, f"count={count} measure={_exact(measure)} tail={_exact(tail)}")


@register_command("count")
class CountCommand:
    help = "number of quotient tuples with a given degree sum"

    @staticmethod
    def add_arguments(parser):
        _add_q(parser)
        _add_k(parser)
        parser.add_argument("--m", type=int, required=True, help="degree sum")
        parser.add_argument("--brute", action="store_true", help="also count by exhaustive enumeration")

    @staticmethod
    def run(args, run: RunConfig) -> CommandOutput:
        count = count_cylinders(run.q, args.m, run.k)
        payload = {"q": run.q, "k": run.k, "m": args.m, "count": count}
        text = f"count={count}"
        if args.brute:
            estimate = count
            if estimate > run.budget:
                raise ConfigError(f"{estimate} tuples exceed the budget {run.budget}", "--brute")
            brute = count_cylinders_brute(run.q, args.m, run.k)
            payload.update(brute=brute, agree=brute == count)
            text += f" brute={brute} agree={brute == count}"
        return CommandOutput(payload, text)


@register_command("dimension")
class DimensionCommand:
    help = "Hausdorff dimension of the large-degree-sum sets"

    @staticmethod
    def add_arguments(parser):
        _add_q(parser)
        _add_k(parser)
        parser.add_argument("--phi", required=True, help="growth function, e.g. linear:1, exp:2, table:path.csv")
        parser.add_argument("--set", choices=("F", "G"), default="F", help="infinitely often (F) or for every n (G)")
        parser.add_argument("--M", type=int, help="also solve the equation truncated at degree M")
        parser.add_argument("--gamma", action="store_true", help="report the splitting parameter for Phi(n) = Bn")

    @staticmethod
    def run(args, run: RunConfig) -> CommandOutput:
        with flag("--phi"):
            phi = GrowthFunction.parse(args.phi)
        result = dim_F(run.q, run.k, phi) if args.set == "F" else dim_G(run.q, run.k, phi)
        payload = {
            "q": run.q,
            "k": run.k,
            "phi": str(phi),
            "set": args.set,
            "value": result.value,
            "case": result.case,
            "estimate": result.estimate,
            "invariants": result.invariants,
            "solver": result.solver,
        }
        value = "undetermined" if result.value is None else _fmt(result.value)
        lines = [f"dim {args.set}_{run.k}(Phi={phi}) = {value}  [{result.case}]"]
        if result.estimate:
            lines.append("invariants estimated from a finite table")
        B = result.invariants.B if result.invariants else None
        finite_B = isinstance(B, (int, float, Fraction)) and 0 < B < float("inf")
        if args.M is not None:
            if not finite_B:
                raise ConfigError("needs Phi with 0 < B < inf", "--M")
            with flag("--M"):
                s_M = solve_s_kM(run.q, run.k, float(B), args.M)
            payload["s_kM"] = s_M
            lines.append(f"s_{{k,M}}(B) = {s_M:.12g} (M={args.M})")
        if args.gamma:
            if not finite_B:
                raise ConfigError("needs Phi with 0 < B < inf", "--gamma")
            split_ = gamma_split(run.q, run.k, float(B))
            payload["gamma"] = split_
            lines.append(f"gamma = {split_.gamma:.12g} at s = {split_.s_tilde:.12g}")
        return CommandOutput(payload, "\n".join(lines))


@register_command("cantor")
class CantorCommand:
    help = "Cantor-set construction: Hölder, mass and index checks"

    CHECKS = ("holder", "mass", "membership", "index", "profile")

    @staticmethod
    def add_arguments(parser):
        _add_q(parser)
        _add_k(parser)
        parser.add_argument("--B", type=float, required=True, help="linear growth rate")
        parser.add_argument("--M", type=int, required=True, help="degree cap at free positions")
        parser.add_argument("--eps", type=float, required=True, help="slack in (0, s - 1/2)")
        parser.add_argument("--depth", type=int, required=True, help="deepest order to check")
        parser.add_argument("--relaxed", help="comma-separated index sequence n_1,n_2,...")
        parser.add_argument("--check", choices=CantorCommand.CHECKS, default="holder")
        parser.add_argument("--method", choices=("classes", "enumerate"), default="classes")
        parser.add_argument("--start", type=int, help="first order of the Hölder check (default n_1)")

    @staticmethod
    def run(args, run: RunConfig) -> CommandOutput:
        relaxed = None
        if args.relaxed:
            with flag("--relaxed"):
                relaxed = [int(t) for t in args.relaxed.split(",") if t.strip()]
        if args.depth < 1:
            raise ConfigError(f"must be >= 1, got {args.depth}", "--depth")
        if args.M < 1:
            raise ConfigError(f"must be >= 1, got {args.M}", "--M")
        with flag("--eps"):
            params = CantorParams.build(run.q, run.k, args.B, args.M, args.eps, relaxed)
        config.set("laurentcf.budget", run.budget)
        payload = {
            "q": run.q,
            "k": run.k,
            "B": args.B,
            "M": args.M,
            "eps": args.eps,
            "s": params.s,
            "alphas": list(params.alphas),
            "strict": params.strict,
            "n_seq": params.n_seq.up_to(args.depth),
            "check": args.check,
        }
        head = f"s_{{k,M}}(B) = {params.s:.12g}, n_j = {payload['n_seq']}"
        if args.check == "holder":
            with flag("--depth"):
                report = check_holder(params, args.depth, args.start, args.method)
            payload.update(ok=report.ok, bound=report.bound, violations=report.violations, rows=report.rows)
            text = f"{head}\nHölder {'holds' if report.ok else 'violated'} (bound {report.bound:.12g})"
            return CommandOutput(payload, text, report.rows)
        if args.check == "mass":
            worst = check_mass_conservation(params, args.depth, budget=run.budget)
            payload["worst_deviation"] = worst
            return CommandOutput(payload, f"{head}\nmass conserved, worst relative deviation {worst:.3g}")
        if args.check == "membership":
            rows = check_membership(params, args.depth)
            payload["rows"] = rows
            return CommandOutput(payload, f"{head}\nmembership {'holds' if all(r.ok for r in rows) else 'fails'}", rows)
        if args.check == "index":
            rows = check_index_conditions(params, args.depth)
            payload["rows"] = rows
            ok = all(r.window_ok and r.gap_ok is not False for r in rows)
            return CommandOutput(payload, f"{head}\nindex conditions {'hold' if ok else 'fail'}", rows)
        frame = local_dimension_profile(params, args.depth)
        payload["rows"] = frame
        records = frame.to_dict(orient="records")
        return CommandOutput(payload, f"{head}\n{frame.to_string(index=False)}", records)


@register_command("mc")
class MonteCarloCommand:
    help = "Monte Carlo checks of the degree laws under Haar measure"

    @staticmethod
    def add_arguments(parser):
        _add_q(parser)
        _add_k(parser)
        parser.add_argument("--n-samples", type=int, required=True)
        parser.add_argument("--seed", type=int)
        parser.add_argument("--precision", type=int, help="coefficients per sample (default derived)")
        parser.add_argument("--chunk-size", type=int)
        parser.add_argument("--stat", choices=("degree", "indep", "tail"), required=True)
        parser.add_argument("--position", type=int, default=1, help="degree position (degree)")
        parser.add_argument("--max-degree", type=int, help="histogram bins (degree)")
        parser.add_argument("--positions", default="1,2", help="pair i,j (indep)")
        parser.add_argument("--cutoff", type=int, help="tail bin for the chi-square test (indep)")
        parser.add_argument("--phi", help="growth function (tail)")
        parser.add_argument("--n-range", help="a..b (tail)")

    @staticmethod
    def run(args, run: RunConfig) -> CommandOutput:
        with flag("--n-samples"):
            cfg = SamplerConfig(run.q, args.n_samples, run.seed, run.precision, args.chunk_size)
        if args.stat == "degree":
            with flag("--position"):
                report = degree_distribution(cfg, args.position, args.max_degree)
            payload = {
                "q": run.q, "seed": run.seed, "position": report.position,
                "precision": report.precision, "total": report.total, "used": report.used,
                "discarded": report.discarded, "rows": report.rows,
            }
            text = report.frame().to_string(index=False)
            text += f"\nused {report.used} of {report.total}, max |z| = {report.max_abs_z:.3g}"
            return CommandOutput(payload, text, report.rows)
        if args.stat == "indep":
            with flag("--positions"):
                i, j = (int(t) for t in args.positions.split(","))
                report = independence_check(cfg, (i, j), args.cutoff)
            payload = {
                "q": run.q, "seed": run.seed, "positions": [i, j], "cutoff": report.cutoff,
                "statistic": report.statistic, "dof": report.dof, "p_value": report.p_value,
                "total": report.total, "used": report.used, "discarded": report.discarded,
                "rows": report.rows,
            }
            text = (
                f"chi2 = {report.statistic:.6g}, dof = {report.dof}, p = {report.p_value:.4g}"
                f" ({report.used} used, {report.discarded} discarded)"
            )
            return CommandOutput(payload, text, report.rows)
        if not args.phi or not args.n_range:
            raise ConfigError("--stat tail needs --phi and --n-range", "--phi" if not args.phi else "--n-range")
        with flag("--phi"):
            phi = GrowthFunction.parse(args.phi)
        with flag("--n-range"):
            n_range = parse_range(args.n_range)
        report = tail_event_frequency(cfg, run.k, phi, n_range)
        series = measure_dichotomy_series(run.q, run.k, phi, n_range[1], max(n_range[0], 1))
        payload = {
            "q": run.q, "k": run.k, "seed": run.seed, "phi": str(phi),
            "n_range": list(n_range), "truncated_at": report.truncated_at,
            "rows": report.rows, "hit_trend": report.trend, "dichotomy": series,
        }
        text = report.frame().to_string(index=False)
        text += "\nmean hits over growing ranges (finite-range proxy):\n"
        text += report.trend_frame().to_string(index=False)
        return CommandOutput(payload, text, report.rows)


@register_command("dirichlet")
class DirichletCommand:
    help = "Dirichlet witnesses and the finite-range improvability criterion"

    @staticmethod
    def add_arguments(parser):
        _add_q(parser)
        parser.add_argument("--x", required=True, help="'int=<poly>; frac=c1,...' or 'P/Q'")
        parser.add_argument("--phi", help="reciprocal, scaled:c, power:tau or table:path.csv")
        parser.add_argument("--n-range", default="1..10", help="a..b for the criterion")
        parser.add_argument("--t", help="find a witness for this t > 1 (rational)")
        parser.add_argument("--distance", type=int, metavar="N", help="check ||Q_(n-1) x|| = 1/|Q_n| for n <= N")

    @staticmethod
    def run(args, run: RunConfig) -> CommandOutput:
        if not (args.phi or args.t or args.distance):
            raise ConfigError("one of --phi, --t, --distance is required", "--phi")
        field_ = FieldSpec(run.q)
        with flag("--x"):
            x = parse_number(field_, args.x)
        payload = {"q": run.q, "x": args.x, "distance_to_lattice": dist_to_lattice(x)}
        lines = [f"||x|| = {payload['distance_to_lattice']}"]
        rows = None
        if args.t:
            with flag("--t"):
                t = Fraction(args.t)
                if t <= 1:
                    raise ValueError(f"t must be > 1, got {t}")
            w = dirichlet_witness(x, t)
            payload["witness"] = {"P": w.P, "Q": w.Q, "n": w.n, "error": w.error, "q_norm": w.q_norm}
            lines.append(f"witness n={w.n}: P={w.P}, Q={w.Q}, |Qx-P|={w.error}, |Q|={w.q_norm}")
        if args.distance:
            checked = minimal_distance_check(x, args.distance)
            payload["distance_check"] = checked
            lines.append(f"||Q_(n-1) x|| = 1/|Q_n| for n = 1..{args.distance}")
        if args.phi:
            with flag("--phi"):
                phi = ApproxFunction.parse(args.phi)
            with flag("--n-range"):
                n_range = parse_range(args.n_range)
            verdict = is_improvable(x, phi, n_range)
            payload.update(
                phi=str(phi),
                n_range=list(n_range),
                holds=verdict.holds,
                first_failure=verdict.first_failure,
                failures=verdict.failures,
                finite_range=verdict.finite_range,
                rows=verdict.rows,
            )
            lines.append(f"criterion {verdict} (finite-range verdict)")
            rows = verdict.rows
        return CommandOutput(payload, "\n".join(lines), rows)
