"""
main.py

Command-line front door:

    python main.py validate --system dataset/client_server/client_server.cba
    python main.py extract  --system ... --coordinator K1 --targets Client1
    python main.py conform  --system ... --msc dataset/client_server/retry.msc
    python main.py enhance  --system ... --msc ... --out output/retry
    python main.py simulate --system output/retry/client_server.cba --fault ... --seed 0
    python main.py export   --system ... --dot closed.dot

stdout carries only `VERDICT:`, `TRACE:` and `METRIC:` lines (and LTS/DOT
text when no output file is given); logs go to stderr.

Exit codes: 0 ok, 1 architecture violation, 2 parse error, 3 conformance
mismatch, 4 deadlock, 5 fault script error.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from algebra import hide
from architecture.closure import close_system, resolve_coordinator
from config import DEFAULT_MAX_STEPS, DEFAULT_SEED, VALIDATION_REPORT_NAME, output_dir
from pipeline import apply_enhancement, enhancement_metrics
from schemas.cba_loader import load_system
from schemas.errors import (
    ArchitectureError,
    ConformanceError,
    DeadlockError,
    GlueError,
    ParseError,
    ScriptError,
)
from schemas.fault_loader import load_fault
from schemas.lts_loader import load_lts
from schemas.msc_loader import load_msc
from sim.simulator import format_trace, simulate, trace_path
from synthesis.conformance import check_conformance
from synthesis.decouple import plan_channel_map
from synthesis.sub_coordinator import extract_sub_coordinator
from tools.dot_export import dot_text
from tools.file_writer import write_outputs
from tools.lts_writer import format_lts
from tools.manifest import RunManifest
from tools.safe_writer import SafeWriter
from validator import emit_json_report, validate_all
from validator.diagnostics import has_errors

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ARCHITECTURE = 1
EXIT_PARSE = 2
EXIT_CONFORMANCE = 3
EXIT_DEADLOCK = 4
EXIT_SCRIPT = 5


def _targets(value: Optional[str]) -> Optional[List[str]]:
    if value is None:
        return None
    return [t.strip() for t in value.split(",") if t.strip()]


def _write_dot(path: str, text: str) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    logger.info(f"[CLI] DOT written to {target}")


def _print_witness(verdict) -> None:
    side = f" ({verdict.side} only)" if verdict.side else ""
    print(f"TRACE: witness{side} {verdict.witness_text}".rstrip())


# ============================================================
# Subcommands
# ============================================================
def cmd_validate(args) -> int:
    system = load_system(args.system)
    issues = validate_all(system)
    for issue in issues:
        print(f"VERDICT: {issue['code']} {issue['severity']} {issue['message']}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        emit_json_report(issues, out / VALIDATION_REPORT_NAME)
    if has_errors(issues):
        print(f"VERDICT: validate failed ({len(issues)} issue(s))")
        return EXIT_ARCHITECTURE
    print("VERDICT: validate ok")
    return EXIT_OK


def cmd_extract(args) -> int:
    system = load_system(args.system)
    targets = _targets(args.targets) or []
    coord = resolve_coordinator(system, args.coordinator)
    kbac = extract_sub_coordinator(coord, targets, system)
    text = format_lts(kbac.behavior)
    if args.out:
        SafeWriter(args.out).write(f"{kbac.behavior.name.lower()}.lts", text)
    else:
        sys.stdout.write(text)
    if args.dot:
        _write_dot(args.dot, dot_text(kbac.behavior))
    print(f"METRIC: coordinator_states {len(coord.behavior.states)}")
    print(f"METRIC: sub_coordinator_states {len(kbac.behavior.states)}")
    print(f"METRIC: sub_coordinator_transitions {len(kbac.behavior.transitions)}")
    return EXIT_OK


def cmd_conform(args) -> int:
    system = load_system(args.system)
    spec = load_msc(args.msc)
    coordinator = args.coordinator or spec.coordinator
    targets = _targets(args.targets) or list(spec.targets)
    coord = resolve_coordinator(system, coordinator)
    kbac = extract_sub_coordinator(coord, targets, system)
    verdict = check_conformance(kbac, spec, plan_channel_map(system, coordinator, targets))
    if verdict:
        print("VERDICT: conformance ok")
        return EXIT_OK
    print("VERDICT: conformance mismatch")
    _print_witness(verdict)
    return EXIT_CONFORMANCE


def cmd_enhance(args) -> int:
    system = load_system(args.system)
    spec = load_msc(args.msc)
    coordinator = args.coordinator or spec.coordinator
    # the pre-enhancement coordinator view, as the next enhancement would see it
    old_view = resolve_coordinator(system, coordinator)

    enhanced, glue = apply_enhancement(system, spec, coordinator=coordinator)

    manifest = RunManifest()
    manifest.add_input(args.system)
    manifest.add_input(args.msc)
    command = f"enhance --system {args.system} --msc {args.msc}"
    if args.coordinator:
        command += f" --coordinator {args.coordinator}"
    manifest.commands.append(command)
    manifest.verdicts.update({
        "architecture": "ok",
        "conformance": "ok",
        "glue_deadlock": "none",
        "enhanced_architecture": "ok",
    })
    manifest.metrics.update(enhancement_metrics(system, enhanced, glue))
    manifest.channel_maps.append({
        "enhancement": spec.name,
        "coordinator": coordinator,
        "glue": glue.name,
        "channels": glue.channel_map.as_dict(),
    })
    manifest.lts["old_coordinator"] = format_lts(old_view.behavior)

    out = Path(args.out) if args.out else output_dir()
    write_outputs(out, enhanced, glue, manifest)

    print(f"VERDICT: enhance ok {enhanced.name} glue {glue.name} = "
          f"{' '.join(m.name for m in glue.members)}")
    for key, value in manifest.metrics.items():
        print(f"METRIC: {key} {value}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    system = load_system(args.system)
    scripts = load_fault(args.fault) if args.fault else ()
    trace = simulate(system, scripts, seed=args.seed, max_steps=args.max_steps)
    for line in format_trace(trace, system):
        print(line)
    print(f"VERDICT: simulate {trace.terminated.value}")
    print(f"METRIC: steps {len(trace.events)}")
    if args.dot:
        _write_dot(args.dot, dot_text(close_system(system), highlight=trace_path(trace)))
    return EXIT_OK


def cmd_export(args) -> int:
    if bool(args.system) == bool(args.lts):
        logger.error("[CLI] export needs exactly one of --system or --lts")
        return EXIT_PARSE
    if args.lts:
        lts = load_lts(args.lts)
    else:
        system = load_system(args.system)
        lts = close_system(system)
        if args.targets:
            lts = hide(lts, system.channels_of(_targets(args.targets)))
    text = dot_text(lts.canonical())
    if args.dot:
        _write_dot(args.dot, text)
    else:
        sys.stdout.write(text)
    print(f"METRIC: states {len(lts.states)}")
    print(f"METRIC: transitions {len(lts.transitions)}")
    return EXIT_OK


# ============================================================
# Argument parsing
# ============================================================
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Glue synthesis for coordinator-based architectures"
    )
    parser.add_argument("--verbose", action="store_true", help="Debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="Check architecture rules and coordinator alternation")
    p.add_argument("--system", required=True, help="Path to the .cba file")
    p.add_argument("--out", default=None, help=f"Directory for {VALIDATION_REPORT_NAME} (default: none)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("extract", help="Print the sub-coordinator toward some components")
    p.add_argument("--system", required=True, help="Path to the .cba file")
    p.add_argument("--coordinator", required=True, help="Coordinator or glue block name")
    p.add_argument("--targets", required=True, help="Comma-separated component names")
    p.add_argument("--out", default=None, help="Directory for the .lts file (default: stdout)")
    p.add_argument("--dot", default=None, help="Also write the sub-coordinator as DOT")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("conform", help="Check an enhancement against the coordinator")
    p.add_argument("--system", required=True, help="Path to the .cba file")
    p.add_argument("--msc", required=True, help="Path to the .msc enhancement")
    p.add_argument("--coordinator", default=None, help="Override the chart's coordinator instance")
    p.add_argument("--targets", default=None, help="Override the chart's targets (comma-separated)")
    p.set_defaults(func=cmd_conform)

    p = sub.add_parser("enhance", help="Apply an enhancement and write the enhanced system")
    p.add_argument("--system", required=True, help="Path to the .cba file")
    p.add_argument("--msc", required=True, help="Path to the .msc enhancement")
    p.add_argument("--coordinator", default=None, help="Override the chart's coordinator instance")
    p.add_argument("--out", default=None,
                   help=f"Output directory (default: ${{CBA_GLUE_OUTPUT_DIR}} or {output_dir()})")
    p.set_defaults(func=cmd_enhance)

    p = sub.add_parser("simulate", help="Run the closed system under fault scripts")
    p.add_argument("--system", required=True, help="Path to the .cba file")
    p.add_argument("--fault", default=None, help="Path to a .fault script (default: none)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"Random seed (default: {DEFAULT_SEED})")
    p.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS,
                   help=f"Step limit (default: {DEFAULT_MAX_STEPS})")
    p.add_argument("--dot", default=None, help="Write the closed system with the run highlighted")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("export", help="DOT of a closed system or of one .lts file")
    p.add_argument("--system", default=None, help="Path to the .cba file")
    p.add_argument("--lts", default=None, help="Path to a .lts file")
    p.add_argument("--targets", default=None, help="Keep only these components' channels")
    p.add_argument("--dot", default=None, help="Output file (default: stdout)")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except ParseError as e:
        logger.error(f"[CLI] {e}")
        return EXIT_PARSE
    except ArchitectureError as e:
        logger.error(f"[CLI] {e}")
        for issue in e.issues:
            print(f"VERDICT: {issue['code']} {issue['severity']} {issue['message']}")
        return EXIT_ARCHITECTURE
    except ConformanceError as e:
        logger.error(f"[CLI] {e}")
        print("VERDICT: conformance mismatch")
        _print_witness(e.verdict)
        return EXIT_CONFORMANCE
    except DeadlockError as e:
        logger.error(f"[CLI] {e}")
        print("VERDICT: deadlock")
        print(f"TRACE: witness {' '.join(str(l) for l in e.trace)}".rstrip())
        return EXIT_DEADLOCK
    except ScriptError as e:
        logger.error(f"[CLI] {e}")
        return EXIT_SCRIPT
    except GlueError as e:
        # model errors outside the listed classes (unknown component, open system, ...)
        logger.error(f"[CLI] {e}")
        return EXIT_ARCHITECTURE


if __name__ == "__main__":
    sys.exit(main())
