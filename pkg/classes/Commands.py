"""
Command bodies of the `sgrp` CLI.

Every command takes a validated RunConfig and returns a CommandResult:
the JSON report, the exit code of the contract (0 holds, 1 fails, 2 budget,
3 input error) and a short verdict for the run ledger.
"""
import json
import logging
import threading
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Literal, Optional, Tuple

from colorama import Fore, Style
from pydantic import BaseModel, ConfigDict, Field, model_validator
from tabulate import tabulate

from .Analysis import (
    check_almost_equidivisibility, check_generating_map_independence, check_identity_adjunction_preserves_cover,
    check_lifting_through_identity, is_V_morphism, is_equidivisible, is_kr_cover, is_letter_super_cancellative,
)
from .CayleyGraph import DotOptions, build
from .Errors import BudgetExceeded, ParseError, SearchCancelled, StepBudget
from .FreeProduct import parse_form, separate, truncated_free_product
from .KrExpansion import check_oracle, kr_expand, kr_tower
from .OmegaTerms import XYZ_EQ_XZ, parse_identity, satisfies_identity
from .PerformanceMonitor import performance_monitor
from .Semigroup import (
    FiniteSemigroup, GeneratingMap, greens, identity_generating_map, idempotents, irredundant_generating_map,
    is_aperiodic, is_band, is_completely_simple, is_group, is_monoid, is_union_of_groups, minimal_ideal,
)
from .SemigroupIO import (
    content_hash, dumps, expansion_to_dict, load_semigroup, product_to_dict, write_text,
)
from .TowerAnalysis import check_absorption, check_tower_lsc
from .globals import (
    DEFAULT_BUDGET, DEFAULT_CAP, DEFAULT_MAX_LENGTH, DEFAULT_TOWER_DEPTH, EXIT_BUDGET, EXIT_FAILS, EXIT_HOLDS,
)

logger = logging.getLogger('Commands')

CHECK_PROPERTIES = ("equidiv", "almostequidiv", "krcover", "lsc", "identity", "independence", "adjunction",
                    "lifting")


class RunConfig(BaseModel):
    """Validated invocation of one CLI command."""
    model_config = ConfigDict(frozen=True, extra='ignore')

    command: Literal["info", "kr", "check", "tower", "freeprod", "dot"]
    inputs: List[str] = Field(min_length=1)
    output_format: Literal["json", "text"] = "json"
    output: Optional[str] = None
    no_meta: bool = False
    budget: int = Field(DEFAULT_BUDGET, gt=0)
    max_length: int = Field(DEFAULT_MAX_LENGTH, ge=1)
    depth: int = Field(DEFAULT_TOWER_DEPTH, ge=0)
    cap: int = Field(DEFAULT_CAP, ge=1)
    gens: Optional[str] = None
    dot: Optional[str] = None
    oracle: Optional[int] = Field(None, ge=1)
    check_property: Optional[Literal["equidiv", "almostequidiv", "krcover", "lsc", "identity", "independence",
                               "adjunction", "lifting"]] = None
    equation: Optional[str] = None
    absorb: Optional[str] = None
    lsc_probe: bool = False
    separate: Optional[Tuple[str, str]] = None
    only_reachable: bool = False

    @model_validator(mode='after')
    def _check_command_arguments(self):
        if self.command != "freeprod" and len(self.inputs) != 1:
            raise ValueError(f"'{self.command}' takes exactly one input")
        if self.command == "check":
            if self.check_property is None:
                raise ValueError("'check' needs a property")
            if self.check_property == "identity" and not self.equation:
                raise ValueError("'check identity' needs an equation such as xyx=x")
        return self

    @classmethod
    def from_namespace(cls, args) -> "RunConfig":
        values = {k: v for k, v in vars(args).items() if v is not None}
        return cls.model_validate(values)


@dataclass
class CommandResult:
    command: str
    report: Dict[str, Any]
    exit_code: int
    verdict: str
    input_hash: str
    raw: Optional[str] = None


# helpers

def _names(S: FiniteSemigroup, elements) -> List[str]:
    return [S.name(int(x)) for x in elements]


def _classes(S: FiniteSemigroup, classes: List[List[int]]) -> List[List[str]]:
    return [_names(S, cls) for cls in classes]


def parse_generator_spec(S: FiniteSemigroup, text: str) -> GeneratingMap:
    """`a=x,b=y` or a JSON object; targets are element names or indices."""
    text = text.strip()
    if text.startswith("{"):
        try:
            mapping = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"bad generator map {text!r}: {e}") from None
        if not isinstance(mapping, dict):
            raise ParseError("generator map must be a JSON object")
    else:
        mapping = {}
        for item in text.split(","):
            letter, sep, target = item.partition("=")
            letter, target = letter.strip(), target.strip()
            if not sep or not letter or not target:
                raise ParseError(f"generator entries are letter=element, got {item!r}")
            if letter in mapping:
                raise ParseError(f"letter {letter!r} given twice")
            mapping[letter] = target if target in S.names or not target.isdigit() else int(target)
    if not mapping:
        raise ParseError("empty generator map")
    return GeneratingMap.from_dict(S, mapping)


def _generators(S: FiniteSemigroup, stored: Optional[GeneratingMap], config: RunConfig,
                required: bool = True) -> Optional[GeneratingMap]:
    if config.gens:
        return parse_generator_spec(S, config.gens)
    if stored is not None:
        return stored
    if required:
        raise ParseError("no generators: pass --gens or add 'generators' to the input")
    return None


def _exit_for(verdict: bool) -> int:
    return EXIT_HOLDS if verdict else EXIT_FAILS


# info

def cmd_info(config: RunConfig, S: FiniteSemigroup, stored: Optional[GeneratingMap],
             budget: StepBudget) -> Tuple[Dict[str, Any], int, str]:
    g = greens(S)
    report = {
        "order": S.order,
        "names": list(S.names),
        "generators": stored.to_dict() if stored is not None else None,
        "idempotents": _names(S, idempotents(S)),
        "greens": {
            "r_classes": _classes(S, g.r_classes),
            "l_classes": _classes(S, g.l_classes),
            "h_classes": _classes(S, g.h_classes),
            "j_classes": _classes(S, g.j_classes),
            "regular_j_classes": g.regular,
        },
        "minimal_ideal": _names(S, minimal_ideal(S)),
        "completely_simple": is_completely_simple(S),
        "monoid": is_monoid(S),
        "group": is_group(S),
        "band": is_band(S),
        "aperiodic": is_aperiodic(S),
        "union_of_groups": is_union_of_groups(S),
    }
    logger.info(f"Order {S.order}: {len(g.j_classes)} J-classes, {len(report['idempotents'])} idempotents")
    return report, EXIT_HOLDS, "ok"


# kr

def cmd_kr(config: RunConfig, S: FiniteSemigroup, stored: Optional[GeneratingMap],
           budget: StepBudget) -> Tuple[Dict[str, Any], int, str]:
    gmap = _generators(S, stored, config)
    graph = build(S, gmap)
    expansion = kr_expand(S, gmap, budget, graph)
    v_check = is_V_morphism(expansion.projection, [XYZ_EQ_XZ])
    report: Dict[str, Any] = {
        "base_order": S.order,
        "generators": gmap.to_dict(),
        "order": expansion.order,
        "graph": graph.condensation_order(),
        "projection_onto": expansion.projection.is_surjective(),
        "v_morphism": {
            "identity": str(XYZ_EQ_XZ),
            "verdict": v_check.verdict,
            "idempotent": expansion.base.name(v_check.idempotent) if v_check.idempotent is not None else None,
            "assignment": ({v: expansion.result.name(x) for v, x in v_check.assignment.items()}
                           if v_check.assignment else None),
        },
        "expansion": expansion_to_dict(expansion),
    }
    holds = v_check.verdict and report["projection_onto"]
    if config.dot:
        write_text(config.dot, graph.export_dot())
        report["dot"] = config.dot
    if config.oracle is not None:
        oracle = check_oracle(expansion, config.oracle)
        report["oracle"] = {
            "max_length": oracle.max_length,
            "match": oracle.match,
            "words_checked": oracle.words_checked,
            "oracle_classes": oracle.oracle_classes,
            "witness": [gmap.format_word(w) for w in oracle.witness] if oracle.witness else None,
        }
        holds = holds and oracle.match
        if not oracle.match:
            logger.error(f"Expansion disagrees with the word oracle at L={config.oracle}")
    return report, _exit_for(holds), "holds" if holds else "fails"


# check

def _check_equidiv(config, S, stored, budget):
    result = is_equidivisible(S)
    witness = dict(zip("uvxy", _names(S, result.witness))) if result.witness else None
    return {"verdict": result.verdict, "witness": witness}, result.verdict


def _check_almostequidiv(config, S, stored, budget):
    expansion = kr_expand(S, _generators(S, stored, config), budget)
    result = check_almost_equidivisibility(expansion)
    T = expansion.result
    witness = dict(zip("uvxy", _names(T, result.witness))) if result.witness else None
    return {"verdict": result.verdict, "expansion_order": expansion.order,
            "checked_pairs": result.checked_pairs, "witness": witness}, result.verdict


def _check_krcover(config, S, stored, budget):
    gmap = parse_generator_spec(S, config.gens) if config.gens else None
    result = is_kr_cover(S, budget, gmap)
    theta = None
    if result.theta is not None:
        T = result.theta.target
        theta = {S.name(s): T.name(result.theta(s)) for s in range(S.order)}
    return {"verdict": result.verdict, "generating_map": result.generating_map.to_dict(),
            "expansion_order": result.expansion_order, "search_nodes": result.search_nodes,
            "theta": theta}, result.verdict


def _violation(S, violation) -> Optional[Dict[str, str]]:
    if violation is None:
        return None
    return {"side": violation.side, "u": S.name(violation.u), "a": S.name(violation.a),
            "v": S.name(violation.v), "b": S.name(violation.b), "equation": violation.describe(S)}


def _check_lsc(config, S, stored, budget):
    result = is_letter_super_cancellative(S, _generators(S, stored, config))
    return {"verdict": result.verdict, "witness": _violation(S, result.witness),
            "epigroup_witness": _violation(S, result.epigroup)}, result.verdict


def _check_identity(config, S, stored, budget):
    identity = parse_identity(config.equation)
    result = satisfies_identity(S, identity)
    return {"identity": str(identity), "verdict": result.holds, "witness": result.describe(S)}, result.holds


def _check_independence(config, S, stored, budget):
    maps = {"identity": identity_generating_map(S), "irredundant": irredundant_generating_map(S)}
    given = _generators(S, stored, config, required=False)
    if given is not None:
        maps["given"] = given
    result = check_generating_map_independence(S, maps, budget)
    return {"verdict": result.agree, "verdicts": result.verdicts}, result.agree


def _check_adjunction(config, S, stored, budget):
    verdict = check_identity_adjunction_preserves_cover(S, budget)
    return {"verdict": verdict}, verdict


def _check_lifting(config, S, stored, budget):
    result = check_lifting_through_identity(S, _generators(S, stored, config, required=False), budget)
    return {"verdict": result.verdict, "letter": result.letter, "exponent": result.exponent,
            "image_size": result.image_size, "witness": result.witness}, result.verdict


CHECKS: Dict[str, Callable] = {
    "equidiv": _check_equidiv,
    "almostequidiv": _check_almostequidiv,
    "krcover": _check_krcover,
    "lsc": _check_lsc,
    "identity": _check_identity,
    "independence": _check_independence,
    "adjunction": _check_adjunction,
    "lifting": _check_lifting,
}


def cmd_check(config: RunConfig, S: FiniteSemigroup, stored: Optional[GeneratingMap],
              budget: StepBudget) -> Tuple[Dict[str, Any], int, str]:
    body, verdict = CHECKS[config.check_property](config, S, stored, budget)
    report = {"property": config.check_property}
    report.update(body)
    logger.info(f"check {config.check_property}: {'holds' if verdict else 'fails'}")
    return report, _exit_for(verdict), "holds" if verdict else "fails"


# tower

def cmd_tower(config: RunConfig, S: FiniteSemigroup, stored: Optional[GeneratingMap],
              budget: StepBudget) -> Tuple[Dict[str, Any], int, str]:
    gmap = _generators(S, stored, config)
    tower = kr_tower(S, gmap, config.depth, budget)
    levels = []
    for n in range(tower.depth + 1):
        level = {"level": n, "order": tower.semigroup(n).order}
        if n > 0:
            level["rho_onto"] = tower.connecting[n - 1].is_surjective()
        levels.append(level)
    coherent = tower.is_coherent()
    report: Dict[str, Any] = {
        "generators": gmap.to_dict(),
        "requested_depth": config.depth,
        "built_depth": tower.depth,
        "complete": tower.complete,
        "exhausted_at": tower.exhausted_at,
        "orders": tower.orders(),
        "coherent": coherent,
        "levels": levels,
    }
    passed = coherent
    if config.absorb:
        absorption = check_absorption(tower, config.absorb, config.max_length)
        report["absorption"] = {
            "letter": absorption.letter,
            "max_length": absorption.max_length,
            "passed": absorption.passed,
            "levels": [{
                "level": lv.level,
                "idempotent": tower.semigroup(lv.level).name(lv.idempotent),
                "words_checked": lv.words_checked,
                "absorbs": lv.absorbs,
                "in_minimal_ideal": lv.in_minimal_ideal,
                "witness": gmap.format_word(lv.witness) if lv.witness is not None else None,
            } for lv in absorption.levels],
        }
        passed = passed and absorption.passed
    if config.lsc_probe:
        probe = check_tower_lsc(tower, config.max_length)
        report["cancellation_probe"] = {
            "max_length": probe.max_length,
            "approximate": probe.approximate,
            "counts": probe.counts(),
            "levels": [{"level": lv.level, "order": lv.order, "right": lv.right_violations,
                        "left": lv.left_violations} for lv in probe.levels],
        }
    if not tower.complete:
        return report, EXIT_BUDGET, "budget"
    return report, _exit_for(passed), "holds" if passed else "fails"


# freeprod

def cmd_freeprod(config: RunConfig, factors: List[FiniteSemigroup],
                 budget: StepBudget) -> Tuple[Dict[str, Any], int, str]:
    if config.separate:
        u = parse_form(config.separate[0], factors)
        v = parse_form(config.separate[1], factors)
        result = separate(u, v, factors)
        report: Dict[str, Any] = {"forms": {"u": u.to_json(), "v": v.to_json()}}
        if result.equal:
            report["verdict"] = "equal"
            return report, EXIT_HOLDS, "equal"
        P = result.product.result
        report.update({
            "verdict": "separated" if result.separated else "not separated",
            "cap": result.product.cap,
            "order": P.order,
            "image_u": P.name(result.image_u),
            "image_v": P.name(result.image_v),
        })
        return report, _exit_for(result.separated), report["verdict"]
    product = truncated_free_product(factors, config.cap)
    report = product_to_dict(product)
    report["factor_orders"] = [S.order for S in factors]
    report["embeddings_injective"] = all(e.is_injective() for e in product.embeddings)
    return report, EXIT_HOLDS, "built"


# dot

def cmd_dot(config: RunConfig, S: FiniteSemigroup, stored: Optional[GeneratingMap],
            budget: StepBudget) -> Tuple[Dict[str, Any], int, str]:
    gmap = _generators(S, stored, config)
    graph = build(S, gmap)
    text = graph.export_dot(DotOptions(only_reachable=config.only_reachable))
    report: Dict[str, Any] = {"generators": gmap.to_dict()}
    report.update(graph.condensation_order())
    report["dot"] = text
    return report, EXIT_HOLDS, "ok"


SINGLE_INPUT_COMMANDS: Dict[str, Callable] = {
    "info": cmd_info,
    "kr": cmd_kr,
    "check": cmd_check,
    "tower": cmd_tower,
    "dot": cmd_dot,
}


def run_command(config: RunConfig, cancel_event: Optional[threading.Event] = None) -> CommandResult:
    """Load the inputs, run the command and assemble the report."""
    budget = StepBudget(config.budget, cancel_event)
    performance_monitor.reset()
    loaded = [load_semigroup(source) for source in config.inputs]
    if len(loaded) == 1:
        input_hash = loaded[0][2]
    else:
        input_hash = content_hash("".join(h for _, _, h in loaded).encode())
    report: Dict[str, Any] = {"command": config.command, "inputs": list(config.inputs), "input_hash": input_hash}
    raw = None
    try:
        if config.command == "freeprod":
            body, exit_code, verdict = cmd_freeprod(config, [S for S, _, _ in loaded], budget)
        else:
            S, stored, _ = loaded[0]
            body, exit_code, verdict = SINGLE_INPUT_COMMANDS[config.command](config, S, stored, budget)
        report.update(body)
    except BudgetExceeded as e:
        cancelled = isinstance(e, SearchCancelled)
        logger.warning(f"{config.command}: {e}")
        report.update({"verdict": "cancelled" if cancelled else "budget", "budget": config.budget,
                       "steps_used": budget.used})
        exit_code, verdict = EXIT_BUDGET, report["verdict"]
    if config.command == "dot" and "dot" in report:
        raw = report.pop("dot")
        if config.output:
            write_text(config.output, raw)
            report["output"] = config.output
            raw = None
    if not config.no_meta:
        report["timing"] = performance_monitor.get_latency_stats()
    return CommandResult(config.command, report, exit_code, verdict, input_hash, raw)


# output

_VERDICT_KEYS = ("verdict", "match", "passed", "coherent", "complete", "projection_onto")


def _cell(value: Any) -> str:
    if isinstance(value, (dict, list)):
        return json.dumps(value, ensure_ascii=False)
    return str(value)


def _colour(key: str, value: Any) -> str:
    if key in _VERDICT_KEYS:
        good = value is True or value in ("holds", "equal", "separated")
        bad = value is False or value in ("fails", "budget", "cancelled", "not separated")
        if good:
            return f"{Fore.GREEN}{value}{Style.RESET_ALL}"
        if bad:
            return f"{Fore.RED}{value}{Style.RESET_ALL}"
    return _cell(value)


def render_text(report: Dict[str, Any]) -> str:
    """Scalar fields as a key/value table, lists of records as tables, the rest as compact JSON."""
    rows = [(key, _colour(key, value)) for key, value in report.items() if not isinstance(value, (dict, list))]
    sections = [tabulate(rows, tablefmt="simple")]
    for key, value in report.items():
        if isinstance(value, list) and value and all(isinstance(item, dict) for item in value):
            table = [{k: _colour(k, v) for k, v in item.items()} for item in value]
            sections.append(f"{key}:\n{tabulate(table, headers='keys')}")
        elif isinstance(value, dict) and value and all(not isinstance(v, (dict, list)) for v in value.values()):
            sections.append(f"{key}:\n{tabulate([(k, _colour(k, v)) for k, v in value.items()], tablefmt='simple')}")
        elif isinstance(value, (dict, list)):
            sections.append(f"{key}: {_cell(value)}")
    return "\n\n".join(sections) + "\n"


def format_result(result: CommandResult, output_format: str = "json") -> str:
    if result.raw is not None:
        return result.raw
    if output_format == "text":
        return render_text(result.report)
    return dumps(result.report)


def emit(result: CommandResult, config: RunConfig) -> str:
    """Write the formatted result to -o (except for dot, which used it already) and return it."""
    text = format_result(result, config.output_format)
    if config.output and config.command != "dot":
        write_text(config.output, text)
    return text


def error_report(command: str, error: Exception) -> Dict[str, Any]:
    return {
        "command": command,
        "error": type(error).__name__,
        "message": str(error),
        "witness": getattr(error, "witness", None),
    }
