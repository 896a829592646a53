"""Command-line interface.

Exit codes: 0 success / verified, 1 verification failure, 2 input error,
3 budget exceeded.  Every global flag can also be set through the
environment variable named in its help text.
"""

from __future__ import annotations

import functools
import logging
import sys
from pathlib import Path

import click

from . import documents
from .cache import PeriodCache
from .certify import (
    DEFAULT_BOUND,
    certify_divisibility,
    certify_pisot_floor,
    certify_prime_free_interval,
    delta_estimate,
)
from .errors import (
    BudgetExceeded,
    CertificateFormatError,
    HTooLarge,
    IndexBelowTowerStart,
    NoFactorFound,
    NonMonotoneEvidence,
    NotPisotOrSalem,
    PrecisionInsufficient,
    PrimefreeError,
    SequenceFileError,
)
from .modular import find_period
from .primes import theta
from .tower import chain_period, eval_chain_mod
from .trace import classify
from .verify import verify_certificate

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3

_HINTS = {
    NoFactorFound: "raise --bound or pick another -m",
    HTooLarge: "pick a larger -m or a smaller -H",
    IndexBelowTowerStart: "pick a larger -m",
    NonMonotoneEvidence: "the growth window does not support the hypothesis; check the chain",
    PrecisionInsufficient: "raise --precision",
}


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except BudgetExceeded as exc:
            _fail(f"budget exceeded: {exc}", EXIT_BUDGET)
        except KeyError as exc:
            _fail(str(exc.args[0]) if exc.args else str(exc), EXIT_INPUT)
        except (SequenceFileError, CertificateFormatError) as exc:
            _fail(str(exc), EXIT_INPUT)
        except PrimefreeError as exc:
            hint = next((h for cls, h in _HINTS.items() if isinstance(exc, cls)), None)
            _fail(f"{exc}" + (f"\nhint: {hint}" if hint else ""), EXIT_INPUT)

    return wrapper


class Context:
    def __init__(self, sequences, cache):
        self.sequences_path = sequences
        self.cache = PeriodCache(cache) if cache else PeriodCache()
        self._seq = None

    @property
    def seq(self):
        if self._seq is None:
            from .seqfile import load_sequence_file

            self._seq = load_sequence_file(self.sequences_path)
        return self._seq


pass_ctx = click.make_pass_decorator(Context)

bound_option = click.option("--bound", "-B", type=int, default=DEFAULT_BOUND, show_default=True,
                            envvar="PRIMEFREE_BOUND",
                            help="Largest prime tried as a factor. [env PRIMEFREE_BOUND]")
precision_option = click.option("--precision", type=int, default=256, show_default=True,
                                envvar="PRIMEFREE_PRECISION",
                                help="Root-finding precision in bits. [env PRIMEFREE_PRECISION]")


@click.group()
@click.option("--sequences", type=click.Path(dir_okay=False), envvar="PRIMEFREE_SEQUENCES",
              help="Sequence-definition file (default: bundled standard definitions). "
                   "[env PRIMEFREE_SEQUENCES]")
@click.option("--cache", type=click.Path(dir_okay=False), envvar="PRIMEFREE_CACHE",
              help="Persistent period cache file. [env PRIMEFREE_CACHE]")
@click.option("-v", "--verbose", is_flag=True)
@click.version_option(package_name="artifact")
@click.pass_context
def main(ctx, sequences, cache, verbose):
    """Periods of composed recurrences mod q and compositeness certificates."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    ctx.obj = Context(sequences, cache)


@main.command()
@click.argument("name")
@click.argument("q", type=int)
@pass_ctx
@handle_errors
def period(ctx, name, q):
    """Print the preperiod s and period L of sequence NAME modulo Q."""
    if q < 2:
        _fail("q must be >= 2", EXIT_INPUT)
    spec = ctx.seq.sequence(name)
    info = find_period(spec, q, cache=ctx.cache)
    click.echo(f"s={info.s} L={info.L}")
    if info.bound_check:
        click.echo(f"bound: s, L <= q^d = {q ** spec.order} confirmed")
    else:
        click.echo("bound: q^d too large to check")


@main.command("eval-mod")
@click.argument("chain")
@click.argument("n", type=int)
@click.argument("q", type=int)
@pass_ctx
@handle_errors
def eval_mod_cmd(ctx, chain, n, q):
    """Print f(N) mod Q for chain (or sequence) CHAIN."""
    if q < 2 or n < 1:
        _fail("need n >= 1 and q >= 2", EXIT_INPUT)
    click.echo(eval_chain_mod(ctx.seq.chain(chain), n, q, cache=ctx.cache))


@main.command()
@click.argument("chain")
@click.argument("q", type=int)
@pass_ctx
@handle_errors
def tower(ctx, chain, q):
    """Print the period tower of CHAIN modulo Q."""
    t = chain_period(ctx.seq.chain(chain), q, cache=ctx.cache)
    click.echo(f"m={t.m} L_total={t.L_total}")
    for lv in t.levels:
        click.echo(f"  level {lv.index}: modulus {lv.modulus}  s={lv.period.s} L={lv.period.L}")


@main.command()
@click.argument("variant", type=click.Choice(["divisibility", "interval", "pisot-floor"]))
@click.option("--chain", "chain_name", help="Chain or sequence name (divisibility, interval).")
@click.option("--poly", "poly_name", help="Polynomial name (pisot-floor).")
@click.option("--inner", "inner_name", help="Inner chain name (pisot-floor).")
@click.option("-H", "H", type=int, default=0, show_default=True,
              help="Offset range |h| <= H (H' for pisot-floor).")
@click.option("-m", "m", type=int, required=True, help="Start index of the progression.")
@bound_option
@precision_option
@click.option("--strict-paper", is_flag=True, envvar="PRIMEFREE_STRICT_PAPER",
              help="Combine periods by product instead of lcm. [env PRIMEFREE_STRICT_PAPER]")
@click.option("-o", "--output", type=click.Path(dir_okay=False), required=True)
@pass_ctx
@handle_errors
def certify(ctx, variant, chain_name, poly_name, inner_name, H, m, bound, precision,
            strict_paper, output):
    """Build a certificate and write it as JSON to OUTPUT."""
    meta = {"bound": str(bound), "strict_paper": strict_paper, "precision": precision,
            "sequences": ctx.sequences_path or "<standard>"}
    if variant in ("divisibility", "interval"):
        if not chain_name:
            _fail(f"{variant} needs --chain", EXIT_INPUT)
        chain = ctx.seq.chain(chain_name)
        if variant == "divisibility":
            cert = certify_divisibility(chain, H, m, bound, ctx.cache, strict_paper)
        else:
            cert = certify_prime_free_interval(chain, m, bound, ctx.cache, strict_paper)
    else:
        if not poly_name or not inner_name:
            _fail("pisot-floor needs --poly and --inner", EXIT_INPUT)
        cert = certify_pisot_floor(ctx.seq.poly(poly_name), ctx.seq.chain(inner_name), H, m,
                                   bound, ctx.cache, strict_paper, precision)
    doc = documents.to_document(cert, meta)
    Path(output).write_text(documents.dumps(doc))
    click.echo(f"{cert.kind}: L={cert.L} m={cert.m}")
    click.echo(f"claim: {cert.claim}")
    click.echo(f"written to {output}")


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--checks", "-n", type=int, default=3, show_default=True, envvar="PRIMEFREE_CHECKS",
              help="Progression terms to re-check. [env PRIMEFREE_CHECKS]")
@click.option("--stamp", is_flag=True, help="Append a verification stamp to the document.")
@click.option("-q", "--quiet", is_flag=True, help="Only print failures and the summary.")
@handle_errors
def verify(path, checks, stamp, quiet):
    """Independently re-check the certificate at PATH."""
    doc = documents.loads(Path(path).read_text())
    cert = documents.certificate_from_document(doc)
    report = verify_certificate(cert, checks)
    for line, claim in zip(report.lines(), report.claims):
        if not quiet or claim.status == "fail":
            click.echo(line)
    click.echo(f"{'OK' if report.ok else 'FAILED'}: {len(report.claims)} claims, "
               f"{len(report.failures)} failed")
    if stamp:
        Path(path).write_text(documents.dumps(documents.stamp(doc, report)))
    sys.exit(EXIT_OK if report.ok else EXIT_VERIFY_FAILED)


@main.command()
@click.argument("n", type=float)
@click.option("--D", "D", type=int, help="Product of the orders d0...dM.")
@click.option("--chain", "chain_name", help="Take D from this chain instead.")
@click.option("--epsilon", type=str, default="0.0001", show_default=True,
              envvar="PRIMEFREE_EPSILON", help="Slack in c = 1/(2D) - epsilon. [env PRIMEFREE_EPSILON]")
@pass_ctx
@handle_errors
def delta(ctx, n, D, chain_name, epsilon):
    """Main term (log N)/(2D) of the prime-free half-width and the constant c."""
    if D is None:
        if not chain_name:
            _fail("give --D or --chain", EXIT_INPUT)
        D = ctx.seq.chain(chain_name).order_product
    est = delta_estimate(n, D, epsilon)
    click.echo(f"D={est.D} main_term={est.main_term!r} c={est.c:.4f} ({est.formula} = {est.c_exact})")
    click.echo("error term not computed (main term only)")


@main.command("theta")
@click.argument("x", type=float)
@handle_errors
def theta_cmd(x):
    """Chebyshev theta(X): the sum of log p over primes p <= X."""
    if x < 2:
        _fail("X must be >= 2", EXIT_INPUT)
    value = theta(x)
    click.echo(f"theta({x:g}) = {value!r}  ratio {value / x:.6f}")


@main.command("classify")
@click.argument("poly")
@precision_option
@pass_ctx
@handle_errors
def classify_cmd(ctx, poly, precision):
    """Classify polynomial POLY as Pisot, Salem or Neither."""
    import mpmath

    cls = classify(ctx.seq.poly(poly), precision)
    click.echo(cls.kind)
    if cls.dominant_root is not None:
        click.echo(f"dominant root {mpmath.nstr(cls.dominant_root, 20)}")
    click.echo("conjugate moduli " + " ".join(mpmath.nstr(r, 12) for r in cls.conjugate_moduli))


if __name__ == "__main__":
    main()
