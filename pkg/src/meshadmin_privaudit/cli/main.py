#!/usr/bin/env python3
"""
MeshAdminPrivAudit CLI - Command-line interface for architecture privacy audits.

Exit status: 0 when every check passes, 1 when a valid input fails a check,
2 on usage or input errors. Results go to standard output, diagnostics and
logs to standard error.
"""

import sys
import argparse
import logging
import yaml
from copy import deepcopy
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..errors import PolicyViolationError, PrivAuditError
from ..firewall.address import HostAddr
from ..firewall.auditor import FirewallAuditor, load_assertions
from ..firewall.generator import FirewallGenerator
from ..firewall.ruleset import RulesetParser, serialize_ruleset
from ..report.analysis import ReportBuilder
from ..report.dot import DotExporter
from ..spec.model import ArchitectureSpec
from ..spec.parser import ArchSpecParser

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


class PrivAuditCLI:
    """Command-line interface for MeshAdminPrivAudit."""

    def __init__(self):
        """Initialize CLI."""
        self.config_path: Optional[str] = None
        self.config: Dict[str, Any] = self._get_default_config()
        self.format = 'text'
        self.logger = logging.getLogger(__name__)

    def _get_default_config(self) -> Dict[str, Any]:
        """Return default configuration."""
        return {
            'global': {
                'log_level': 'WARNING',
                'log_file': None
            },
            'analysis': {
                'closure_self_check': False,
                'theorem_self_check': True,
                'lint_self_loops': True,
                'lint_unlabeled_nodes': True
            },
            'report': {
                'format': 'text',
                'violation_color': 'red'
            },
            'firewall': {
                'default_policy': 'DROP',
                'state_match': 'ESTABLISHED',
                'dedupe_rules': True
            }
        }

    def load_config(self) -> Dict[str, Any]:
        """Load the configuration file and merge it over the defaults."""
        config = self._get_default_config()
        if not self.config_path:
            return config
        try:
            with open(self.config_path, 'r') as f:
                loaded = yaml.safe_load(f) or {}
        except FileNotFoundError:
            print(f"Configuration file not found: {self.config_path}; using defaults",
                  file=sys.stderr)
            return config

        if not isinstance(loaded, dict):
            raise yaml.YAMLError(f"{self.config_path}: top level must be a mapping")
        for section, values in loaded.items():
            if isinstance(values, dict) and isinstance(config.get(section), dict):
                config[section].update(values)
            else:
                config[section] = deepcopy(values)
        return config

    def setup_logging(self, verbose: bool = False) -> None:
        """Setup logging on standard error, plus an optional log file."""
        global_config = self.config.get('global', {})
        level_name = 'DEBUG' if verbose else str(global_config.get('log_level', 'WARNING'))
        handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
        if global_config.get('log_file'):
            handlers.append(logging.FileHandler(global_config['log_file']))

        logging.basicConfig(
            level=getattr(logging, level_name.upper(), logging.WARNING),
            format=LOG_FORMAT,
            handlers=handlers,
            force=True
        )

    def section(self, name: str) -> Dict[str, Any]:
        return self.config.get(name) or {}

    def load_spec(self, path: str) -> ArchitectureSpec:
        return ArchSpecParser(self.section('analysis')).load(path)

    def report_builder(self) -> ReportBuilder:
        return ReportBuilder(self.section('analysis'))

    def emit(self, text: str) -> None:
        sys.stdout.write(text)

    def cmd_check(self, args) -> int:
        """Run the tainting, boundary and equivalence checks and list findings."""
        spec = self.load_spec(args.file)
        builder = self.report_builder()
        findings = builder.findings(spec)
        self.emit(builder.render_findings(findings, self.format))
        return 1 if any(f.is_violation for f in findings) else 0

    def cmd_flows(self, args) -> int:
        """List the maximal set of flows the labels and boundaries permit."""
        spec = self.load_spec(args.file)
        builder = self.report_builder()
        expanded, labels = builder.prepare(spec)
        layout = expanded.layout if expanded.layout else None
        policy = builder.taint_checker.synthesize_max_policy(expanded.graph.nodes, labels, layout)

        separator = "\t" if self.format == 'tsv' else " -> "
        self.emit("".join(f"{src}{separator}{dst}\n" for src, dst in policy.edges))
        return 0

    def cmd_repair(self, args) -> int:
        """Remove offending flows and emit the repaired document."""
        spec = self.load_spec(args.file)
        builder = self.report_builder()
        expanded, labels = builder.prepare(spec)
        checker = builder.taint_checker

        offending = checker.offending_flows(expanded.graph, labels)
        repaired = spec.with_graph(checker.repair(expanded.graph, labels))
        document = ArchSpecParser().serialize(repaired)

        if self.format == 'tsv':
            self.emit("".join(f"offending\t{src}\t{dst}\n" for src, dst in offending))
        else:
            self.emit("".join(f"offending: {src} -> {dst}\n" for src, dst in offending))
            self.emit(f"{len(offending)} offending flows removed\n")

        if args.out:
            Path(args.out).write_text(document, encoding='utf-8')
            self.logger.info(f"Wrote repaired document to {args.out}")
        else:
            self.emit("\n" + document)
        return 0

    def cmd_view(self, args) -> int:
        """Show what the architecture does with one data subject's label."""
        spec = self.load_spec(args.file)
        builder = self.report_builder()
        view = builder.user_view(spec, args.label)

        if args.dot:
            self.emit(DotExporter(self.section('report')).export_view(view))
            return 0

        expanded, labels = builder.prepare(spec)
        verdicts = builder.blp_bridge.per_label_verdicts(expanded.graph, labels)
        self.emit(builder.render_view(view, verdicts.get(args.label)))
        return 0

    def cmd_metrics(self, args) -> int:
        """Print criticality and minimization metrics."""
        spec = self.load_spec(args.file)
        builder = self.report_builder()
        self.emit(builder.render_metrics(builder.criticality_metrics(spec), self.format))

        if args.group:
            group = [label.strip() for label in args.group.split(',') if label.strip()]
            clearances = builder.group_clearances(spec, group)
            self.emit(f"group {{{','.join(sorted(group))}}}:\n")
            self.emit("".join(f"  {node}: {clearance}\n" for node, clearance in clearances.items()))
        return 0

    def cmd_dot(self, args) -> int:
        """Emit the architecture as a DOT digraph."""
        spec = self.load_spec(args.file)
        findings = self.report_builder().findings(spec) if args.findings else []
        self.emit(DotExporter(self.section('report')).export(spec, findings))
        return 0

    def cmd_fw_gen(self, args) -> int:
        """Generate the stateful ruleset of one host."""
        spec = self.load_spec(args.file)
        generator = FirewallGenerator(self.section('firewall'))
        try:
            ruleset = generator.generate_ruleset(spec, args.host)
        except PolicyViolationError as e:
            print(f"Error: {e}", file=sys.stderr)
            for finding in e.findings:
                print(f"  {finding.describe()}", file=sys.stderr)
            return 1
        self.emit(serialize_ruleset(ruleset))
        return 0

    def cmd_fw_audit(self, args) -> int:
        """Audit reachability assertions against a ruleset."""
        ruleset = RulesetParser(self.section('firewall')).load(args.rules)
        ruleset = ruleset.installed(HostAddr.parse(args.on))

        auditor = FirewallAuditor(self.section('firewall'))
        if args.model:
            spec = self.load_spec(args.model)
            assertions = auditor.synthesize_assertions(spec, args.host or args.on)
        else:
            assertions = load_assertions(args.assertions)

        report = auditor.audit(ruleset, assertions)
        self.emit(report.render_tsv() if self.format == 'tsv' else report.render_text())
        return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    """Argument parser for all subcommands."""
    parser = argparse.ArgumentParser(
        prog='meshadmin-privaudit',
        description="MeshAdminPrivAudit - Static privacy analysis of software architectures"
    )

    parser.add_argument(
        '--config',
        help='Configuration file path'
    )
    parser.add_argument(
        '--verbose', '-v',
        action='store_true',
        help='Enable debug logging on standard error'
    )
    parser.add_argument(
        '--format',
        choices=['text', 'tsv'],
        help='Output format (default from configuration)'
    )

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    check_parser = subparsers.add_parser('check', help='Check all privacy invariants')
    check_parser.add_argument('file', help='Architecture document')

    flows_parser = subparsers.add_parser('flows', help='List all permitted flows')
    flows_parser.add_argument('file', help='Architecture document')

    repair_parser = subparsers.add_parser('repair', help='Remove offending flows')
    repair_parser.add_argument('file', help='Architecture document')
    repair_parser.add_argument('--out', help='Write the repaired document to this file')

    view_parser = subparsers.add_parser('view', help='Per-data-subject view')
    view_parser.add_argument('file', help='Architecture document')
    view_parser.add_argument('--label', required=True, help='Label of the data subject')
    view_parser.add_argument('--dot', action='store_true', help='Emit the view as DOT')

    metrics_parser = subparsers.add_parser('metrics', help='Criticality metrics')
    metrics_parser.add_argument('file', help='Architecture document')
    metrics_parser.add_argument('--group', help='Comma-separated labels rated together')

    dot_parser = subparsers.add_parser('dot', help='Export as DOT')
    dot_parser.add_argument('file', help='Architecture document')
    dot_parser.add_argument('--findings', action='store_true', help='Highlight violations')

    gen_parser = subparsers.add_parser('fw-gen', help='Generate a host firewall')
    gen_parser.add_argument('file', help='Architecture document')
    gen_parser.add_argument('--host', required=True, help='Node, system or address of the host')

    audit_parser = subparsers.add_parser('fw-audit', help='Audit a host firewall')
    audit_parser.add_argument('rules', help='iptables-save document')
    audit_parser.add_argument('--on', required=True, help='Address the rules are installed on')
    source = audit_parser.add_mutually_exclusive_group(required=True)
    source.add_argument('--assert', dest='assertions', help='Assertion file')
    source.add_argument('--model', help='Derive assertions from an architecture document')
    audit_parser.add_argument('--host', help='Host in the model (default: the --on address)')

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for CLI."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    if not args.command:
        parser.print_help(sys.stderr)
        return 2

    cli = PrivAuditCLI()
    cli.config_path = args.config

    # Route to appropriate command handler
    command_handlers = {
        'check': cli.cmd_check,
        'flows': cli.cmd_flows,
        'repair': cli.cmd_repair,
        'view': cli.cmd_view,
        'metrics': cli.cmd_metrics,
        'dot': cli.cmd_dot,
        'fw-gen': cli.cmd_fw_gen,
        'fw-audit': cli.cmd_fw_audit
    }

    try:
        cli.config = cli.load_config()
        cli.setup_logging(args.verbose)
        cli.format = args.format or cli.section('report').get('format', 'text')
        return command_handlers[args.command](args)
    except (PrivAuditError, OSError, UnicodeDecodeError, yaml.YAMLError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())
