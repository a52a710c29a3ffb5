#!/usr/bin/env python3
"""
Trap Integrability Audit Pipeline

Command-line surface of the auditor: single-parameter audits, batch grids,
inspection of local series, residues and monodromy traces, and flow
simulations with Poincaré sections.

Exit codes: 0 on any verdict, 2 on a parse error, 3 on a computation error.
"""

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

# Add parent directory to path for module imports
sys.path.insert(0, str(Path(__file__).parent))

import pandas as pd
from dotenv import load_dotenv

from classifier import classify
from exactnum import QuadExt, parse_rational, to_complex
from fuchsian import INFINITY, frobenius_expand, indicial_exponents, trace_data
from numerics import (
    IntegratorConfig,
    contour_components,
    integrate_flow,
    lame_contour_residue,
    poincare_section,
    write_section_csv,
)
from reporters import (
    AuditReport,
    JsonLinesWriter,
    error_payload,
    summary_frame,
    write_json,
    write_summary_csv,
    write_summary_xlsx,
)
from utils.config_loader import (
    DEFAULT_CONFIG,
    get_contour_settings,
    get_log_level,
    get_log_to_file,
    get_max_truncation_order,
    get_output_directory,
    get_truncation_order,
    load_config,
    validate_config,
)
from utils.errors import AuditError, ParseError, PreconditionViolation
from utils.logger import get_default_log_file, get_logger, setup_logger
from ve import (
    PARAMETER_NAMES,
    TrapParams,
    build_nve,
    build_tangential_ve,
    lame_residue,
    point_location,
    ve2_residues,
)

EXIT_OK = 0
EXIT_PARSE_ERROR = 2
EXIT_AUDIT_ERROR = 3

logger = get_logger(__name__)


def _complex_pair(value: complex) -> List[float]:
    return [float(value.real), float(value.imag)]


def _agrees(numeric: complex, exact: complex, tolerance: float) -> bool:
    return abs(numeric - exact) <= tolerance * max(1.0, abs(exact))


class AuditPipeline:
    """
    Runs audits and inspections with one configuration.

    Features:
    - Exact classification with a replayable certificate
    - Optional numeric cross-check of every exact residue
    - Order-preserving parallel grids written as JSON lines
    - Flow trajectories and Poincaré sections as CSV
    """

    def __init__(self, config: Optional[Dict[str, Any]] = None, numeric_check: bool = False,
                 seed: Optional[int] = None, stamp: bool = False):
        """
        Initialize the pipeline.

        Args:
            config: Configuration dictionary (defaults when None)
            numeric_check: Attach numeric contour residues to every report
            seed: Seed echoed in the report metadata
            stamp: Add a timestamp to report metadata
        """
        self.config = config if config is not None else DEFAULT_CONFIG
        self.numeric_check = numeric_check
        self.seed = seed
        self.stamp = stamp
        self.order = get_truncation_order(self.config)
        self.max_order = get_max_truncation_order(self.config)
        self.contour = get_contour_settings(self.config)
        self.stats = {
            'audited': 0,
            'errors': 0,
            'verdicts': {},
        }

    # Audits

    def audit(self, params: TrapParams) -> AuditReport:
        verdict, certificate = classify(params)
        numeric = self.numeric_residues(params, certificate.attachments) if self.numeric_check else None
        report = AuditReport(params, verdict, certificate, numeric=numeric, seed=self.seed,
                             stamp=datetime.now().isoformat(timespec="seconds") if self.stamp else None)
        self._count(str(verdict.tag))
        return report

    def _count(self, verdict: str):
        self.stats['audited'] += 1
        self.stats['verdicts'][verdict] = self.stats['verdicts'].get(verdict, 0) + 1

    def numeric_residues(self, params: TrapParams, attachments: Dict[str, Any]) -> Dict[str, Any]:
        """Numeric contour residues beside the exact ones the classifier computed."""
        result: Dict[str, Any] = {}
        try:
            if "ve2" in attachments:
                for point in ("z1", "z2"):
                    result[point] = self.residue(params, point, "both")
            if "lame" in attachments and params.D == 3 * params.C:
                exact = lame_residue(params, max_order=self.max_order)
                numeric = lame_contour_residue(params, nodes=self.contour['contour_nodes'],
                                               precision=self.contour['precision_bits'])
                result["lame"] = {
                    "exact": str(exact),
                    "numeric": _complex_pair(numeric),
                    "agree": _agrees(numeric, complex(exact), self.contour['agreement_tolerance']),
                }
        except AuditError as error:
            logger.warning("numeric check failed: %s", error)
            result["error"] = error.to_dict()
        return result

    # Inspection

    def residue(self, params: TrapParams, point: str, method: str = "exact",
                component: Optional[int] = None) -> Dict[str, Any]:
        """
        Residues of the four components of X⁻¹f₂ at z₁ or z₂.

        Args:
            params: Trap coefficients
            point: "z1" or "z2"
            method: "exact", "numeric" or "both"
            component: 1-4, or None for all four
        """
        if component is not None and component not in (1, 2, 3, 4):
            raise PreconditionViolation(f"component must be 1-4, got {component}")
        pick = (lambda values: values[component - 1]) if component else (lambda values: list(values))
        payload: Dict[str, Any] = {"point": point, "method": method}
        exact_values: Optional[Tuple[QuadExt, ...]] = None
        if method in ("exact", "both"):
            residues = ve2_residues(params, point, self.order, self.max_order)
            exact_values = residues.components
            payload["exact"] = pick([str(v) for v in exact_values])
            payload["closed_form"] = str(residues.closed_form)
            payload["displayed_product"] = str(residues.displayed_product)
        if method in ("numeric", "both"):
            numeric = contour_components(params, point, nodes=self.contour['contour_nodes'],
                                         precision=self.contour['precision_bits'],
                                         rtol=self.contour['rtol'], atol=self.contour['atol'],
                                         radius_fraction=self.contour['contour_radius_fraction'])
            payload["numeric"] = pick([_complex_pair(v) for v in numeric])
            if exact_values is not None:
                tolerance = self.contour['agreement_tolerance']
                checks = [_agrees(n, complex(to_complex(e)), tolerance) for n, e in zip(numeric, exact_values)]
                payload["agree"] = checks[component - 1] if component else all(checks)
        return payload

    def series(self, params: TrapParams, point: str, exponent_index: int, order: int,
               equation: str = "normal") -> Dict[str, Any]:
        """Frobenius series of the chosen local exponent at 0, z₁, z₂ or ∞."""
        ode = build_nve(params) if equation == "normal" else build_tangential_ve(params)
        if point == "inf":
            location = INFINITY
        elif point == "0":
            location = QuadExt(0)
        else:
            location = point_location(params, point)
        exponents = indicial_exponents(ode, location).exponents
        if not exponents[exponent_index].is_rational:
            raise PreconditionViolation(f"the local exponents at {point} are not rational")
        series = frobenius_expand(ode, location, exponents[exponent_index].to_rational(), order)
        payload = series.to_dict()
        payload["equation"] = equation
        payload["exponents"] = [str(e) for e in exponents]
        return payload

    def trace(self, params: TrapParams) -> Dict[str, Any]:
        data = trace_data(build_nve(params))
        payload = data.to_dict()
        payload["t"] = {entry["point"]: entry["t"] for entry in payload["points"]}
        return payload

    # Simulation

    def integrator(self, **overrides) -> IntegratorConfig:
        return IntegratorConfig.from_config(self.config, **overrides)

    def simulate(self, params: TrapParams, initial_state: Sequence[float], t_max: float,
                 out: Optional[str] = None, **overrides):
        trajectory = integrate_flow(params, initial_state, t_max, self.integrator(**overrides))
        if out:
            Path(out).parent.mkdir(parents=True, exist_ok=True)
            trajectory.write_csv(out)
        else:
            trajectory.write_csv(sys.stdout)
        logger.info("energy drift %.3e over t = %g", trajectory.energy_drift, t_max)
        return trajectory

    def section(self, params: TrapParams, energy: float, n_crossings: int,
                start: Tuple[float, float] = (0.0, 0.0), out: Optional[str] = None, **overrides):
        points = poincare_section(params, energy, n_crossings, self.integrator(**overrides), start)
        if out:
            Path(out).parent.mkdir(parents=True, exist_ok=True)
        write_section_csv(points, out or sys.stdout)
        return points

    # Grids

    def grid(self, file: str, out: Optional[str] = None, parallel: int = 1,
             xlsx: Optional[str] = None, summary_csv: Optional[str] = None) -> int:
        """
        Audit every row of a parameter CSV and stream one JSON line per row.

        Rows are written in input order whatever the degree of parallelism.
        A row that fails to parse becomes an error line.

        Returns:
            Number of lines written
        """
        frame = pd.read_csv(file, dtype=str, keep_default_na=False)
        rows = [(index, row) for index, row in enumerate(frame.to_dict(orient="records"))]
        tasks = [(index, row, self.config, self.numeric_check, self.seed) for index, row in rows]

        summary: List[Dict[str, Any]] = []
        with JsonLinesWriter(out) as writer:
            if parallel > 1:
                with ProcessPoolExecutor(max_workers=parallel) as executor:
                    self._stream_rows(writer, rows, executor.map(_grid_worker, tasks), summary)
            else:
                self._stream_rows(writer, rows, map(_grid_worker, tasks), summary)

        if xlsx or summary_csv:
            table = summary_frame(summary)
            if xlsx:
                write_summary_xlsx(table, xlsx)
            if summary_csv:
                write_summary_csv(table, summary_csv)
        return writer.lines_written

    def _stream_rows(self, writer: JsonLinesWriter, rows, results: Iterable[Dict[str, Any]],
                     summary: List[Dict[str, Any]]):
        # results arrive in input order; each line is on disk before the next row finishes
        for (index, row), payload in zip(rows, results):
            writer.write(payload)
            summary.append(self._summary_row(index, row, payload))

    def _summary_row(self, index: int, row: Dict[str, str], payload: Dict[str, Any]) -> Dict[str, Any]:
        if "error" in payload:
            self.stats['errors'] += 1
            entry = {name: row.get(name, "") for name in (*PARAMETER_NAMES, "h")}
            entry.update({"Row": index, "Verdict": "", "Rule Trail": 0, "Warnings": 0, "Error": payload["error"]})
            return entry
        report = AuditReport.from_dict(payload)
        self._count(str(report.verdict.tag))
        return report.summary_row(index)

    def print_summary(self, stream=sys.stderr):
        print("=" * 70, file=stream)
        print("📊 AUDIT SUMMARY", file=stream)
        print("=" * 70, file=stream)
        print(f"   Parameter sets audited: {self.stats['audited']}", file=stream)
        print(f"   Rows with errors:       {self.stats['errors']}", file=stream)
        for verdict, count in sorted(self.stats['verdicts'].items()):
            print(f"   • {verdict}: {count}", file=stream)
        print("=" * 70, file=stream)


def _grid_worker(task) -> Dict[str, Any]:
    index, row, config, numeric_check, seed = task
    try:
        params = TrapParams.from_strings(row)
        report = AuditPipeline(config, numeric_check=numeric_check, seed=seed).audit(params)
        return report.to_dict()
    except AuditError as error:
        return error_payload(error, row=index)


def _parse_floats(text: str, count: int, flag: str) -> Tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(","))
    except ValueError:
        raise ParseError(f"{flag} expects {count} comma-separated numbers, got {text!r}", flag=flag)
    if len(values) != count:
        raise ParseError(f"{flag} expects {count} comma-separated numbers, got {text!r}", flag=flag)
    return values


def _params_from_args(args) -> TrapParams:
    values = {name: getattr(args, name) for name in PARAMETER_NAMES}
    values["h"] = args.h
    return TrapParams.from_strings(values)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Exact integrability audit of the trapped-ion Hamiltonian",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python run_audit.py audit --A 1 --B 1 --C 1 --D 3 --E 1 --F 6 --G 0
  python run_audit.py audit --A 2 --B 2 --C 3 --D 1 --E 1 --F 2 --G 0 --numeric-check
  python run_audit.py grid --file params.csv --out results.jsonl --parallel 4 --xlsx summary.xlsx
  python run_audit.py residue --A 2 --B 2 --C 3 --D 1 --E 1 --F 2 --G 0 --point z1 --method both
  python run_audit.py trace --A 1 --B 1 --C 1 --D 3 --E 1 --F 6 --G 0
  python run_audit.py simulate --A 1/2 --B 1 --C 0 --D 0 --E 0 --F 0 --G 0 --init 1,0,0,0 --tmax 100
  python run_audit.py section --A 1 --B 1 --C 1 --D 3 --E 1 --F 6 --G 0 --energy 1/10 --n 200
        """
    )
    parser.add_argument('--config', default="config/config.json", help='Configuration file')
    parser.add_argument('--log-file', help='Also write logs to this file')

    params_parser = argparse.ArgumentParser(add_help=False)
    for name in PARAMETER_NAMES:
        params_parser.add_argument(f'--{name}', help=f'Coefficient {name} (rational, e.g. 3/4)')
    params_parser.add_argument('--h', default=None, help='Energy constant h (default 0)')

    subparsers = parser.add_subparsers(dest='command', required=True)

    audit = subparsers.add_parser('audit', parents=[params_parser], help='Classify one parameter set')
    audit.add_argument('--numeric-check', action='store_true', help='Attach numeric contour residues')
    audit.add_argument('--json', dest='json_path', help='Write the report here instead of stdout')
    audit.add_argument('--seed', type=int, default=None, help='Seed echoed in the report metadata')
    audit.add_argument('--stamp', action='store_true', help='Add a timestamp to the report')

    grid = subparsers.add_parser('grid', help='Classify every row of a parameter CSV')
    grid.add_argument('--file', required=True, help='CSV with columns A,B,C,D,E,F,G[,h]')
    grid.add_argument('--out', help='JSON-lines output (stdout when omitted)')
    grid.add_argument('--parallel', type=int, default=1, help='Worker processes')
    grid.add_argument('--numeric-check', action='store_true', help='Attach numeric contour residues')
    grid.add_argument('--xlsx', help='Excel summary of the run')
    grid.add_argument('--summary-csv', help='CSV summary of the run')
    grid.add_argument('--seed', type=int, default=None, help='Seed echoed in the report metadata')

    series = subparsers.add_parser('series', parents=[params_parser], help='Local Frobenius series')
    series.add_argument('--point', choices=['0', 'z1', 'z2', 'inf'], required=True)
    series.add_argument('--exponent-index', type=int, choices=[0, 1], default=0)
    series.add_argument('--order', type=int, default=None)
    series.add_argument('--equation', choices=['normal', 'tangential'], default='normal')

    residue = subparsers.add_parser('residue', parents=[params_parser], help='Second-order residues')
    residue.add_argument('--point', choices=['z1', 'z2'], required=True)
    residue.add_argument('--method', choices=['exact', 'numeric', 'both'], default='exact')
    residue.add_argument('--component', type=int, choices=[1, 2, 3, 4], default=None)

    subparsers.add_parser('trace', parents=[params_parser], help='Monodromy trace data')

    simulate = subparsers.add_parser('simulate', parents=[params_parser], help='Integrate the flow')
    simulate.add_argument('--init', required=True, help='r,p_r,z,p_z')
    simulate.add_argument('--tmax', type=float, required=True)
    simulate.add_argument('--out', help='CSV output (stdout when omitted)')
    simulate.add_argument('--method', choices=['symplectic', 'adaptive'], default=None)
    simulate.add_argument('--step', type=float, default=None)

    section = subparsers.add_parser('section', parents=[params_parser], help='Poincaré section z = 0, p_z > 0')
    section.add_argument('--energy', required=True, help='Energy level (rational)')
    section.add_argument('--n', type=int, required=True, help='Number of crossings')
    section.add_argument('--start', default="0,0", help='r,p_r on the section')
    section.add_argument('--out', help='CSV output (stdout when omitted)')
    section.add_argument('--method', choices=['symplectic', 'adaptive'], default=None)
    section.add_argument('--step', type=float, default=None)
    return parser


def _output_path(path: Optional[str], config: Dict[str, Any], kind: str = 'reports') -> Optional[str]:
    """Relative output paths land in the configured output directory."""
    if path is None:
        return None
    return str(Path(get_output_directory(config, kind)) / path)


def _run(args, pipeline: AuditPipeline) -> int:
    config = pipeline.config
    if args.command == 'grid':
        lines = pipeline.grid(args.file, _output_path(args.out, config), args.parallel,
                              _output_path(args.xlsx, config), _output_path(args.summary_csv, config))
        logger.info("wrote %d report lines", lines)
        pipeline.print_summary()
        return EXIT_OK

    params = _params_from_args(args)
    if args.command == 'audit':
        report = pipeline.audit(params)
        write_json(report.to_dict(), _output_path(args.json_path, config))
    elif args.command == 'series':
        order = args.order or pipeline.order
        write_json(pipeline.series(params, args.point, args.exponent_index, order, args.equation))
    elif args.command == 'residue':
        write_json(pipeline.residue(params, args.point, args.method, args.component))
    elif args.command == 'trace':
        write_json(pipeline.trace(params))
    elif args.command == 'simulate':
        initial = _parse_floats(args.init, 4, "init")
        out = _output_path(args.out, config, 'trajectories')
        pipeline.simulate(params, initial, args.tmax, out, method=args.method, step=args.step)
    elif args.command == 'section':
        energy = float(parse_rational(args.energy, flag="energy"))
        start = _parse_floats(args.start, 2, "start")
        out = _output_path(args.out, config, 'sections')
        pipeline.section(params, energy, args.n, start, out, method=args.method, step=args.step)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main execution function."""
    parser = build_parser()
    args = parser.parse_args(argv)

    # Load environment variables
    load_dotenv()

    try:
        config = load_config(args.config)
        validate_config(config)
    except FileNotFoundError as e:
        print(f"⚠️  {e}; using built-in defaults", file=sys.stderr)
        config = DEFAULT_CONFIG
    except ValueError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_PARSE_ERROR

    log_file = args.log_file
    if log_file is None and get_log_to_file(config):
        log_file = get_default_log_file("audit_pipeline")
    setup_logger(log_level=get_log_level(config), log_file=log_file)

    pipeline = AuditPipeline(
        config,
        numeric_check=getattr(args, 'numeric_check', False),
        seed=getattr(args, 'seed', None),
        stamp=getattr(args, 'stamp', False),
    )
    try:
        return _run(args, pipeline)
    except ParseError as error:
        write_json(error_payload(error))
        return EXIT_PARSE_ERROR
    except AuditError as error:
        write_json(error_payload(error))
        return EXIT_AUDIT_ERROR
    except KeyboardInterrupt:
        print("\n⚠️  Audit interrupted by user", file=sys.stderr)
        return EXIT_AUDIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
