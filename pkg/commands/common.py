import argparse
from pathlib import Path
from typing import Optional
import json
import sys

from core import config
from core.errors import FormatError
from core.report_io import emit_report
from models.report_models import ReportConfig, ReportDocument, ToleranceConfig


def add_tolerance_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=float, default=config.DEFAULT_ALPHA, help="Significance level per axiom")
    parser.add_argument("--min-samples", type=int, default=config.DEFAULT_MIN_SAMPLES,
                        help="Minimum usable temperatures per pair")
    parser.add_argument("--smoothing", choices=["jeffreys"], default=None,
                        help="Add half a count to every cell of a group")
    parser.add_argument("--exact", action="store_true",
                        help="Input uses the frequency header (noise-free family)")


def add_output_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--report", default=None, help="Report path (stdout when omitted)")
    parser.add_argument("--format", choices=["json", "markdown"], default="json")


def tolerance_from_args(args) -> ToleranceConfig:
    return ToleranceConfig(alpha=args.alpha, min_samples=args.min_samples, smoothing=args.smoothing)


def report_config(cfg: ToleranceConfig, exact: bool = False, seed: Optional[int] = None) -> ReportConfig:
    return ReportConfig(alpha=cfg.alpha, sum_tol=cfg.sum_tol, min_samples=cfg.min_samples,
                        smoothing=cfg.smoothing, exact_input=exact, seed=seed)


def publish(doc: ReportDocument, args) -> None:
    text = emit_report(doc, args.format)
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def read_json(path: str):
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as e:
        raise FormatError(f"cannot read '{path}': {e.strerror}")
    except json.JSONDecodeError as e:
        raise FormatError(f"'{path}' is not valid JSON: {e.msg}", e.lineno)
