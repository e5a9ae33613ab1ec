import argparse
import logging
import sys
from typing import Any

from fundgroup.domain.errors import FundGroupError
from fundgroup.domain.models import OutputFormat, SearchBounds, SessionConfig
from fundgroup.kernel.caching.logic import calculate_config_hash
from fundgroup.kernel.system.config import DEFAULT_SESSION_CONFIG
from fundgroup.kernel.system.logging import setup_logging
from fundgroup.kernel.system.version import get_app_version
from fundgroup.services.cli.commands import EXIT_FAILED, dispatch
from fundgroup.services.export.templates import JsonRenderer, TextRenderer

EXIT_USAGE = 2


def _common_options() -> argparse.ArgumentParser:
    """
    Session flags accepted before or after the subcommand; unset flags keep the defaults.
    """
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--bound-units", type=int, help="largest unit exponent searched (default 8)")
    common.add_argument("--bound-primes", type=int, help="largest prime exponent searched (default 16)")
    common.add_argument("--precision", type=int, help="sign refinement depth (default 64)")
    common.add_argument("--max-n", type=int, help="largest supported trace count (default 6)")
    common.add_argument("--stages", type=int, help="Bratteli stages examined (default 8)")
    common.add_argument("--tolerance", type=float, help="trace compatibility tolerance (default 1e-9)")
    common.add_argument("--format", choices=[f.value for f in OutputFormat], help="output format (default text)")
    common.add_argument("--seed", type=int, help="self-test seed")
    common.add_argument("--cases", type=int, help="self-test property cases (default 1000)")
    common.add_argument("--equivariance-cases", type=int, help="self-test conjugation cases (default 60)")
    common.add_argument("--atoms", help=".alg file whose declared symbols literals may use")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    return common


def _parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="fg",
        description="Fundamental groups of C*-algebras with finitely many extremal traces, from K0-trace pairing data.",
        parents=[common],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {get_app_version()}")
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return commands.add_parser(name, help=help_text, parents=[common])

    sub = add("envelope", "envelope bounds and status of an algebra in a .alg file")
    sub.add_argument("file")
    sub.add_argument("--algebra", default=None, help="algebra name (default: the main one)")

    sub = add("decompose", "split a monomial matrix into permutation and diagonal")
    sub.add_argument("matrix", help="'[[0,3/2],[2/3,0]]' or '[0,3/2;2/3,0]'")

    sub = add("stab", "multiplicative stabilizer of a lattice or pairing module")
    sub.add_argument("module", help="'[v1;v2] <profile>' components joined by ' + '")

    sub = add("transporter", "some lam > 0 with lam*E1 = E2")
    sub.add_argument("source")
    sub.add_argument("target")

    sub = add("conjugate", "P^-1 G P")
    sub.add_argument("group", help="'I<n>', 'S<n>' or ';'-separated generators")
    sub.add_argument("matrix")

    sub = add("kron", "Kronecker product of two groups")
    sub.add_argument("first")
    sub.add_argument("second")

    sub = add("detgroup", "group of absolute determinants")
    sub.add_argument("group")

    sub = add("weightediso", "P with P^-1 G1 P = G2, or why none exists")
    sub.add_argument("first")
    sub.add_argument("second")

    sub = add("dual", "dual system of a finite-dimensional algebra")
    sub.add_argument("file")
    sub.add_argument("--algebra", default=None)

    bratteli = add("bratteli", "Bratteli diagram utilities")
    actions = bratteli.add_subparsers(dest="action", required=True, metavar="action")
    for action, help_text in (
        ("dims", "block sizes per stage"),
        ("simple", "positivity of windowed step products"),
        ("traces", "extreme trace enclosures at a stage"),
        ("check", "compatibility of the closed-form traces"),
        ("samples", "pairing vectors of minimal projections"),
    ):
        sub = actions.add_parser(action, help=help_text, parents=[common])
        sub.add_argument("file")
        if action == "simple":
            sub.add_argument("--window", type=int, default=1)
        if action in ("traces", "samples"):
            sub.add_argument("--stage", type=int, default=0)
        if action == "traces":
            sub.add_argument("--horizon", type=int, default=None)
        if action == "samples":
            sub.add_argument("--vector", default=None, help="test membership of this pairing vector")

    add("selftest", "golden examples and seeded property suites")
    return parser.parse_args(argv)


def session_config(args: argparse.Namespace) -> SessionConfig:
    """SessionConfig from the defaults overridden by any flags given."""
    base = DEFAULT_SESSION_CONFIG

    def flag(name: str, default: Any) -> Any:
        return getattr(args, name, default)

    bounds = SearchBounds(
        units=flag("bound_units", base.bounds.units),
        primes=flag("bound_primes", base.bounds.primes),
        depth=flag("precision", base.bounds.depth),
        max_n=flag("max_n", base.bounds.max_n),
    )
    return SessionConfig(
        bounds=bounds,
        output_format=OutputFormat(flag("format", base.output_format)),
        stages=flag("stages", base.stages),
        trace_tolerance=flag("tolerance", base.trace_tolerance),
        seed=flag("seed", base.seed),
        cases=flag("cases", base.cases),
        equivariance_cases=flag("equivariance_cases", base.equivariance_cases),
        verbose=flag("verbose", False),
    )


def main(argv: list[str] | None = None) -> int:
    args = _parse_args(argv)
    logger = setup_logging(logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING)
    try:
        config = session_config(args)
        result = dispatch(args, config)
        if config.output_format == OutputFormat.JSON:
            text = JsonRenderer(calculate_config_hash(config)).render(result.kind, result.payload)
        else:
            text = TextRenderer().render(result.kind, result.payload)
    except FundGroupError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return exc.exit_code
    except ValueError as exc:
        logger.error("invalid input: %s", exc)
        return EXIT_USAGE
    except Exception:
        logger.exception("internal error")
        return EXIT_FAILED

    sys.stdout.write(text)
    return result.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
