"""Report documents for the command line and their Word export."""

import logging
from typing import Iterable, Optional

from docx import Document
from docx.enum.text import WD_ALIGN_PARAGRAPH

from config.settings import APP_SETTINGS, EXIT_CODES, RunConfig
from .errors import InputOutputError, WignerLiftError
from .lift import LiftResult, phase_agreement

logger = logging.getLogger(__name__)

# W is written out in the Word export only up to this dimension
MAX_EXPORT_MATRIX_DIM = 8

OUTCOMES = {code: name for name, code in EXIT_CODES.items()}


def _header(command: str, config: Optional[RunConfig]) -> dict:
    return {
        "format_version": APP_SETTINGS["format_version"],
        "app": APP_SETTINGS["app_name"],
        "version": APP_SETTINGS["version"],
        "prng": APP_SETTINGS["prng"],
        "command": command,
        "config": config.as_dict() if config is not None else None,
    }


def agreement_block(results: Iterable[LiftResult]) -> dict:
    """Global-phase comparison of the first two lifts."""
    first, second = list(results)[:2]
    deviation, alpha = phase_agreement(first.W, second.W)
    return {
        "methods": [first.method, second.method],
        "same_kind": first.kind == second.kind,
        "max_deviation": deviation,
        "alpha": alpha,
    }


def build_reconstruct_report(results: Iterable[LiftResult], config: RunConfig, oracle_info: dict,
                             agreement: Optional[dict] = None,
                             wall_time_ms: Optional[float] = None) -> dict:
    report = _header("reconstruct", config)
    report["oracle"] = oracle_info
    report["outcome"] = "ok"
    report["results"] = [result.to_dict() for result in results]
    if agreement is not None:
        report["agreement"] = agreement
    if wall_time_ms is not None:
        report["wall_time_ms"] = wall_time_ms
    return report


def build_check_report(check, config: RunConfig, oracle_info: dict,
                       wall_time_ms: Optional[float] = None) -> dict:
    report = _header("check", config)
    report["oracle"] = oracle_info
    report["outcome"] = "ok" if check.passed else "rejected"
    report["check"] = check.to_dict()
    if wall_time_ms is not None:
        report["wall_time_ms"] = wall_time_ms
    return report


def build_error_report(command: str, error: WignerLiftError,
                       config: Optional[RunConfig] = None) -> dict:
    report = _header(command, config)
    report["outcome"] = OUTCOMES.get(error.exit_code, "usage")
    report.update(error.to_dict())
    return report


def _format_complex(value) -> str:
    re, im = value
    return f"{re:.6f}{im:+.6f}i"


def _add_key_value_table(doc, rows):
    table = doc.add_table(rows=0, cols=2)
    table.style = "Table Grid"
    for key, value in rows:
        cells = table.add_row().cells
        cells[0].text = str(key)
        cells[1].text = str(value)
    return table


def _add_lift_section(doc, lift: dict):
    doc.add_heading(f"Method: {lift['method']}", level=2)
    _add_key_value_table(doc, [
        ("Kind", lift["kind"]),
        ("Residual", f"{lift['residual']:.3e}"),
        ("Oracle calls", lift.get("oracle_calls")),
    ])

    if lift.get("phi_table"):
        doc.add_paragraph("Circle parameters per basis pair:")
        table = doc.add_table(rows=1, cols=3)
        table.style = "Table Grid"
        header = table.rows[0].cells
        header[0].text, header[1].text, header[2].text = "Pair", "phi", "eps"
        for pair, phi in lift["phi_table"].items():
            cells = table.add_row().cells
            cells[0].text = pair
            cells[1].text = f"{phi:.9f}"
            cells[2].text = str(lift["eps_table"].get(pair, ""))

    if "base_det" in lift:
        doc.add_paragraph(f"Qubit base case determinant: {lift['base_det']:+d}")
        if lift.get("extension_phases"):
            p = doc.add_paragraph("Extension phases: ")
            p.add_run(", ".join(f"{v:.9f}" for v in lift["extension_phases"]))

    W = lift["W"]
    if len(W) <= MAX_EXPORT_MATRIX_DIM:
        doc.add_paragraph("Lift operator W:")
        table = doc.add_table(rows=len(W), cols=len(W))
        table.style = "Table Grid"
        for i, row in enumerate(W):
            for j, value in enumerate(row):
                table.cell(i, j).text = _format_complex(value)
    else:
        doc.add_paragraph(f"Lift operator W omitted (dimension {len(W)}).")


def export_to_docx(report: dict, filepath: str) -> None:
    """Render a reconstruct or check report as a Word document."""
    try:
        doc = Document()

        command = report.get("command", "report")
        title_text = f"{APP_SETTINGS['app_name']}: {command} report"
        doc.core_properties.title = title_text
        doc.core_properties.subject = "Wigner symmetry lift"

        title = doc.add_heading(title_text, 0)
        title.alignment = WD_ALIGN_PARAGRAPH.CENTER

        meta = doc.add_paragraph()
        meta.add_run(f"Format version: {report.get('format_version')}\n")
        oracle = report.get("oracle") or {}
        meta.add_run(f"Oracle: {oracle.get('name', oracle.get('kind', 'unknown'))} "
                     f"(dim {oracle.get('dim', '?')})\n")
        if oracle.get("coset"):
            meta.add_run(f"Expected lift: {oracle['coset']}\n")
        outcome_run = meta.add_run(f"Outcome: {report.get('outcome')}")
        outcome_run.bold = True

        if report.get("config"):
            doc.add_heading("Run configuration", level=1)
            config = dict(report["config"])
            tolerances = config.pop("tolerances", {})
            _add_key_value_table(doc, list(config.items()) + [
                (f"tolerance {k}", v) for k, v in tolerances.items()])

        if "error" in report:
            doc.add_heading("Rejection", level=1)
            p = doc.add_paragraph()
            p.add_run(f"{report['error']}: ").bold = True
            p.add_run(report.get("message", ""))
            if report.get("witness") is not None:
                quote = doc.add_paragraph(style="Quote")
                quote.add_run(f"Witness: {report['witness']}")

        if "check" in report:
            check = report["check"]
            doc.add_heading("Symmetry condition", level=1)
            _add_key_value_table(doc, [
                ("Verdict", check["verdict"]),
                ("Pairs tested", check["pairs_tested"]),
                ("Max violation", f"{check['max_sc_violation']:.3e}"),
                ("Max purity violation", f"{check['max_purity_violation']:.3e}"),
            ])

        if report.get("results"):
            doc.add_heading("Lifts", level=1)
            for lift in report["results"]:
                _add_lift_section(doc, lift)

        if "agreement" in report:
            agreement = report["agreement"]
            doc.add_heading("Cross-method agreement", level=1)
            _add_key_value_table(doc, [
                ("Same kind", agreement["same_kind"]),
                ("Max deviation", f"{agreement['max_deviation']:.3e}"),
                ("Global phase", f"{agreement['alpha']:.9f}"),
            ])

        doc.save(filepath)
    except (OSError, KeyError, TypeError, ValueError) as e:
        logger.error("export failed: %s", e)
        raise InputOutputError(f"cannot export report to {filepath}: {e}",
                               witness={"path": str(filepath)})
