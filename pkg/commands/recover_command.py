from commands.common import add_output_arguments, add_tolerance_arguments, publish, report_config, tolerance_from_args
from core.recovery import recover
from core.report_io import ingest_csv
from models.report_models import ReportDocument


def run(args) -> int:
    cfg = tolerance_from_args(args)
    rsf = ingest_csv(args.input, exact=args.exact, smoothing=cfg.smoothing)
    result = recover(rsf, cfg)
    publish(ReportDocument(command="recover", config=report_config(cfg, exact=args.exact), recovery=result), args)
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("recover", help="Recover energies, κ and the concatenation")
    parser.add_argument("--in", dest="input", required=True, help="CSV file")
    add_tolerance_arguments(parser)
    add_output_arguments(parser)
    parser.set_defaults(func=run)
