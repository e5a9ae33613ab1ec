"""
Subcommand implementations. Each takes the parsed arguments and the session config and
returns the payload to render plus the exit code; errors propagate to main().
"""

from argparse import Namespace
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from fundgroup.domain.errors import DimensionTooLarge, InvariantViolation, UnsupportedDomain
from fundgroup.domain.models import ResultStatus, SessionConfig
from fundgroup.features.algebras.logic import build, model_dual_system
from fundgroup.features.algebras.models import AlgebraModel
from fundgroup.features.bratteli.logic import (
    dims,
    membership_oracle,
    pairing_samples,
    simplicity_check,
    trace_compatibility_check,
    trace_weights,
)
from fundgroup.features.bratteli.models import BratteliDiagram
from fundgroup.features.envelope.processor import k_envelope
from fundgroup.features.monomial.logic import conjugate, decompose, det_group, kron, weighted_iso_solver
from fundgroup.features.pairing.logic import module_stabilizer, module_text, module_transporter
from fundgroup.features.scalars.parsing import AtomRegistry
from fundgroup.infrastructure.loaders.factory import loader_factory
from fundgroup.infrastructure.loaders.literals import parse_group, parse_matrix, parse_module, parse_monomial, parse_vector
from fundgroup.kernel.system.logging import get_logger
from fundgroup.services.export.payloads import (
    Payload,
    enclosure_payload,
    envelope_payload,
    fraction_text,
    group_payload,
    matrix_payload,
    multiplicative_payload,
    scalar_text,
    transporter_payload,
    weighted_iso_payload,
)
from fundgroup.services.selftest.runner import SelfTestRunner

logger = get_logger("cli")

EXIT_OK = 0
EXIT_UNKNOWN = 4
EXIT_FAILED = 5


@dataclass(frozen=True)
class CommandResult:
    kind: str
    payload: Payload
    exit_code: int = EXIT_OK


Command = Callable[[Namespace, SessionConfig], CommandResult]


def _registry(args: Namespace) -> AtomRegistry:
    """Symbols declared in the --atoms model file, if any."""
    path = getattr(args, "atoms", None)
    return loader_factory.load_model(path).registry if path else AtomRegistry()


def _model(args: Namespace) -> AlgebraModel:
    model_file = loader_factory.load_model(args.file)
    return model_file.get(args.algebra) if args.algebra else model_file.main()


def envelope(args: Namespace, config: SessionConfig) -> CommandResult:
    model = _model(args)
    if model.trace_count > config.bounds.max_n:
        raise DimensionTooLarge(f"{model.trace_count} traces exceed the configured maximum of {config.bounds.max_n}")
    built = build(model)
    logger.debug("%s", module_text(built.module))
    report = k_envelope(built.module, config.bounds, built.realized)
    for note in report.notes.as_tuple():
        logger.info("%s: %s", model.name, note)
    code = EXIT_OK if report.exact is not None and not report.has_unknowns else EXIT_UNKNOWN
    return CommandResult("envelope", envelope_payload(model, built, report), code)


def decompose_command(args: Namespace, config: SessionConfig) -> CommandResult:
    m = decompose(parse_matrix(args.matrix, _registry(args)), config.bounds.depth)
    return CommandResult("decompose", matrix_payload(m))


def stab(args: Namespace, config: SessionConfig) -> CommandResult:
    module = parse_module(args.module, _registry(args))
    return CommandResult("stabilizer", {"stabilizer": multiplicative_payload(module_stabilizer(module, config.bounds.units))})


def transporter(args: Namespace, config: SessionConfig) -> CommandResult:
    registry = _registry(args)
    result = module_transporter(
        parse_module(args.source, registry), parse_module(args.target, registry), config.bounds.units, config.bounds.depth
    )
    code = EXIT_UNKNOWN if result.status == ResultStatus.UNKNOWN else EXIT_OK
    return CommandResult("transporter", transporter_payload(result), code)


def conjugate_command(args: Namespace, config: SessionConfig) -> CommandResult:
    registry = _registry(args)
    group = conjugate(parse_group(args.group, registry), parse_monomial(args.matrix, registry))
    return CommandResult("group", {"group": group_payload(group)})


def kron_command(args: Namespace, config: SessionConfig) -> CommandResult:
    registry = _registry(args)
    group = kron(parse_group(args.first, registry), parse_group(args.second, registry))
    return CommandResult("group", {"group": group_payload(group)})


def detgroup(args: Namespace, config: SessionConfig) -> CommandResult:
    group = parse_group(args.group, _registry(args))
    return CommandResult("detgroup", {"det_group": multiplicative_payload(det_group(group))})


def weightediso(args: Namespace, config: SessionConfig) -> CommandResult:
    registry = _registry(args)
    result = weighted_iso_solver(parse_group(args.first, registry), parse_group(args.second, registry))
    code = EXIT_UNKNOWN if result.status == ResultStatus.UNKNOWN else EXIT_OK
    return CommandResult("weightediso", weighted_iso_payload(result), code)


def dual(args: Namespace, config: SessionConfig) -> CommandResult:
    model = _model(args)
    rows = [[fraction_text(c) for c in row] for row in model_dual_system(model)]
    return CommandResult("dual", {"model": model.name, "rows": rows})


def _diagram(args: Namespace) -> BratteliDiagram:
    return loader_factory.load_diagram(args.file)


def bratteli_dims(args: Namespace, config: SessionConfig) -> CommandResult:
    diagram = _diagram(args)
    limit = diagram.stage_limit(config.stages)
    rows = [{"stage": k, "dims": list(dims(diagram, k))} for k in range(limit + 1)]
    return CommandResult("bratteli_dims", {"diagram": diagram.name, "stages": rows})


def bratteli_simple(args: Namespace, config: SessionConfig) -> CommandResult:
    diagram = _diagram(args)
    simple = simplicity_check(diagram, args.window, config.stages)
    payload = {"diagram": diagram.name, "window": args.window, "stages": diagram.stage_limit(config.stages), "simple": simple}
    return CommandResult("bratteli_simple", payload)


def bratteli_traces(args: Namespace, config: SessionConfig) -> CommandResult:
    diagram = _diagram(args)
    horizon = args.horizon if args.horizon is not None else diagram.stage_limit(args.stage + config.stages)
    enclosure = trace_weights(diagram, args.stage, horizon)
    closed = diagram.closed_form(args.stage) if diagram.closed_form is not None else None
    return CommandResult("bratteli_traces", enclosure_payload(diagram, enclosure, closed))


def _closed_form_registry(diagram: BratteliDiagram, stage: int) -> AtomRegistry:
    registry = AtomRegistry()
    if diagram.closed_form is not None:
        for row in diagram.closed_form(stage):
            for x in row:
                for atom in x.atoms:
                    registry.declare(atom)
    return registry


def bratteli_check(args: Namespace, config: SessionConfig) -> CommandResult:
    diagram = _diagram(args)
    if diagram.closed_form is None:
        raise UnsupportedDomain(f"diagram '{diagram.name}' declares no closed-form traces to check")
    stages = diagram.stage_limit(config.stages) - 1 if not diagram.is_infinite else config.stages
    compatible = trace_compatibility_check(diagram, diagram.closed_form, stages, config.trace_tolerance)
    payload = {"diagram": diagram.name, "stages": stages, "tolerance": f"{config.trace_tolerance:g}", "compatible": compatible}
    return CommandResult("bratteli_check", payload, EXIT_OK if compatible else EXIT_FAILED)


def bratteli_samples(args: Namespace, config: SessionConfig) -> CommandResult:
    diagram = _diagram(args)
    samples = pairing_samples(diagram, args.stage)
    membership: Optional[str] = None
    if args.vector:
        vector = parse_vector(args.vector, _closed_form_registry(diagram, args.stage))
        membership = str(membership_oracle(diagram, vector, args.stage))
    payload = {
        "diagram": diagram.name,
        "stage": args.stage,
        "samples": [[scalar_text(x) for x in s] for s in samples],
        "membership": membership,
    }
    return CommandResult("bratteli_samples", payload)


def selftest(args: Namespace, config: SessionConfig) -> CommandResult:
    results = SelfTestRunner(config).run()
    checks: List[Payload] = [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results]
    passed = sum(1 for r in results if r.passed)
    code = EXIT_OK if passed == len(results) else EXIT_FAILED
    return CommandResult("selftest", {"checks": checks, "passed": passed, "total": len(results)}, code)


COMMANDS: Dict[str, Command] = {
    "envelope": envelope,
    "decompose": decompose_command,
    "stab": stab,
    "transporter": transporter,
    "conjugate": conjugate_command,
    "kron": kron_command,
    "detgroup": detgroup,
    "weightediso": weightediso,
    "dual": dual,
    "selftest": selftest,
}

BRATTELI_COMMANDS: Dict[str, Command] = {
    "dims": bratteli_dims,
    "simple": bratteli_simple,
    "traces": bratteli_traces,
    "check": bratteli_check,
    "samples": bratteli_samples,
}


def dispatch(args: Namespace, config: SessionConfig) -> CommandResult:
    if args.command == "bratteli":
        return BRATTELI_COMMANDS[args.action](args, config)
    if args.command not in COMMANDS:
        raise InvariantViolation(f"unknown command '{args.command}'")
    return COMMANDS[args.command](args, config)
