import logging

from commands.common import add_output_arguments, add_tolerance_arguments, publish, report_config, tolerance_from_args
from core.axioms import run_suite
from core.report_io import ingest_csv
from models.report_models import ReportDocument

logger = logging.getLogger(__name__)


def run(args) -> int:
    cfg = tolerance_from_args(args)
    rsf = ingest_csv(args.input, exact=args.exact, smoothing=cfg.smoothing)
    report = run_suite(rsf, cfg)
    doc = ReportDocument(command="check", config=report_config(cfg, exact=args.exact),
                         overall=report.boltzmannian, axioms=report)
    publish(doc, args)
    return 0 if report.boltzmannian else 1


def register(subparsers) -> None:
    parser = subparsers.add_parser("check", help="Run the axiom suite on observed frequencies")
    parser.add_argument("--in", dest="input", required=True, help="CSV file")
    add_tolerance_arguments(parser)
    add_output_arguments(parser)
    parser.set_defaults(func=run)
