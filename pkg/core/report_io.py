"""
CSV formats for observed families and JSON / markdown rendering of reports.
"""
from pathlib import Path
from typing import Iterable, List, Literal, Optional, Tuple, Union
import csv
import logging

from core.errors import FormatError, GateError, RecordError
from core.rsf import EmpiricalRSF, build_empirical_rsf, build_exact_rsf
from core.synth import emit_frequency_rows, emit_records
from core.utils import format_float
from models.report_models import AxiomReport, ConvexityReport, ReportDocument, RecoveryResult

logger = logging.getLogger(__name__)

COUNT_HEADER = ["temperature", "menu_id", "state", "count"]
FREQUENCY_HEADER = ["temperature", "menu_id", "state", "frequency"]

PathLike = Union[str, Path]


def _first_undecodable_line(path: Path) -> Optional[int]:
    for number, raw in enumerate(path.read_bytes().split(b"\n"), start=1):
        try:
            raw.decode("utf-8")
        except UnicodeDecodeError:
            return number
    return None


def ingest_csv(path: PathLike, exact: bool = False, smoothing=None) -> EmpiricalRSF:
    """Read a count file (or, with ``exact``, a frequency file) into an EmpiricalRSF.

    Errors name the 1-based line of the file.
    """
    header = FREQUENCY_HEADER if exact else COUNT_HEADER
    path = Path(path)
    try:
        handle = path.open(newline="", encoding="utf-8")
    except OSError as e:
        raise FormatError(f"cannot read '{path}': {e.strerror}")
    rows: List[Tuple[str, str, str, str]] = []
    lines: List[int] = []
    try:
        with handle:
            reader = csv.reader(handle)
            try:
                first = next(reader)
            except StopIteration:
                raise FormatError("empty file", 1)
            if [h.strip() for h in first] != header:
                raise FormatError(f"header must be exactly {','.join(header)}, got {','.join(first)}", 1)
            for row in reader:
                if not row or all(not cell.strip() for cell in row):
                    continue
                if len(row) != 4:
                    raise FormatError(f"expected 4 fields, got {len(row)}", reader.line_num)
                rows.append(tuple(cell.strip() for cell in row))
                lines.append(reader.line_num)
    except UnicodeDecodeError:
        raise FormatError("file is not valid UTF-8", _first_undecodable_line(path))
    try:
        if exact:
            rsf = build_exact_rsf(rows)
        else:
            rsf = build_empirical_rsf(rows, smoothing=smoothing)
    except RecordError as e:
        line = lines[e.row] if e.row is not None and e.row < len(lines) else None
        detail = e.detail.split(": ", 1)[1] if e.row is not None else e.detail
        raise FormatError(detail, line)
    except GateError as e:
        raise FormatError(e.detail)
    logger.info(f"✅ Loaded {len(rows)} rows from {path.name}: {len(rsf.tokens)} temperatures, {len(rsf.menus)} menus")
    return rsf


def _write(path: PathLike, header: List[str], rows: Iterable[tuple]) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_count_csv(rsf: EmpiricalRSF, path: PathLike) -> None:
    _write(path, COUNT_HEADER, emit_records(rsf))


def write_frequency_csv(rsf: EmpiricalRSF, path: PathLike) -> None:
    _write(path, FREQUENCY_HEADER, ((t, m, s, repr(f)) for t, m, s, f in emit_frequency_rows(rsf)))


def write_family_csv(rsf: EmpiricalRSF, path: PathLike) -> None:
    """Counts for sampled families, frequencies for exact ones."""
    if rsf.exact:
        write_frequency_csv(rsf, path)
    else:
        write_count_csv(rsf, path)


# -- reports ---------------------------------------------------------------
def _axioms_markdown(report: AxiomReport) -> List[str]:
    lines = ["## Axioms", "", "| axiom | name | verdict | statistic | threshold | tests | note |",
             "|---|---|---|---|---|---|---|"]
    for tag, v in report.verdicts.items():
        lines.append(f"| {tag} | {v.name} | {v.verdict} | {format_float(v.statistic)} | "
                     f"{format_float(v.threshold)} | {v.tests} | {v.note or ''} |")
    lines.append("")
    for tag, v in report.verdicts.items():
        if v.witness:
            lines.append(f"- {tag} witness: `{v.witness}`")
    rescued = [tag for tag, v in report.gate.items() if v != report.verdicts[tag].verdict]
    lines += ["", f"- Gate level: alpha = {format_float(report.gate_alpha)} per axiom"
              + (f" (changes {', '.join(rescued)})" if rescued else ""),
              f"- Boltzmannian (A1–A6): **{report.boltzmannian}**",
              f"- Softmax representable (A1–A5, A7): **{report.softmax_representable}**",
              f"- A4 ∧ A7 = {report.a4_and_a7}, A8 ∧ A9 = {report.a8_and_a9}", ""]
    if report.freezing_estimates:
        lines += ["### Freezing limits", "", "| a | b | p0 | class |", "|---|---|---|---|"]
        lines += [f"| {e.a} | {e.b} | {format_float(e.p0)} | {e.curve_class} |" for e in report.freezing_estimates]
        lines.append("")
    return lines


def _recovery_markdown(result: RecoveryResult) -> List[str]:
    lines = ["## Recovery", ""]
    if result.uniform:
        return lines + ["E is constant; κ is undetermined.", ""]
    p = result.pivot
    lines += [f"Pivot: v̄ = {format_float(p.temperature)}, c̄ = {p.c}, d̄ = {p.d}", "",
              "| state | Ẽ |", "|---|---|"]
    lines += [f"| {s} | {format_float(e)} |" for s, e in result.energy.energies.items()]
    lines += ["", "| t | κ̃ | isotonic |", "|---|---|---|"]
    lines += [f"| {format_float(t)} | {format_float(k)} | {format_float(i)} |"
              for t, k, i in zip(result.kappa.temperatures, result.kappa.values, result.kappa.projected)]
    if result.energy.unrecoverable:
        lines.append(f"\nUnrecoverable states: {', '.join(result.energy.unrecoverable)}")
    lines += [""] + [f"- {note}" for note in result.notes]
    return lines + [""]


def _convexity_markdown(report: ConvexityReport) -> List[str]:
    lines = ["## Convexity", "",
             f"- convex: **{report.convex}** (midpoint oracle: {report.oracle_convex}, agrees: {report.agrees_with_oracle})",
             f"- pair checks: {report.pair_checks}, menu checks: {report.menu_checks}",
             f"- menu-shrink failures: {report.menu_shrink_failures}, argmin-shrink failures: {report.argmin_shrink_failures}",
             f"- second temperature consistent: {report.second_temperature_consistent}"]
    if report.witness:
        lines.append(f"- witness: `{report.witness}`")
    return lines + [""]


def render_markdown(doc: ReportDocument) -> str:
    cfg = doc.config
    lines = [f"# boltzmann-gate report ({doc.command})", "",
             f"format `{doc.format_version}` · alpha {format_float(cfg.alpha)} · "
             f"min_samples {cfg.min_samples} · smoothing {cfg.smoothing or 'none'} · exact {cfg.exact_input}", ""]
    if doc.overall is not None:
        lines += [f"**Overall: {'pass' if doc.overall else 'fail'}**", ""]
    if doc.axioms is not None:
        lines += _axioms_markdown(doc.axioms)
    if doc.recovery is not None:
        lines += _recovery_markdown(doc.recovery)
    if doc.convexity is not None:
        lines += _convexity_markdown(doc.convexity)
    return "\n".join(lines).rstrip() + "\n"


def emit_report(doc: ReportDocument, fmt: Literal["json", "markdown"] = "json") -> str:
    if fmt == "json":
        return doc.model_dump_json(indent=2) + "\n"
    if fmt == "markdown":
        return render_markdown(doc)
    raise FormatError(f"unknown report format '{fmt}'")


def write_report(doc: ReportDocument, path: PathLike, fmt: Literal["json", "markdown"] = "json") -> None:
    Path(path).write_text(emit_report(doc, fmt), encoding="utf-8")


def load_report(path: PathLike) -> ReportDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise FormatError(f"cannot read '{path}': {e.strerror}")
    try:
        return ReportDocument.model_validate_json(text)
    except ValueError as e:
        raise FormatError(f"not a boltzmann-gate report: {e}")
