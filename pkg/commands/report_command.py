import sys

from core.report_io import load_report, render_markdown


def run(args) -> int:
    sys.stdout.write(render_markdown(load_report(args.input)))
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("report", help="Pretty-print a saved JSON report as markdown")
    parser.add_argument("--in", dest="input", required=True, help="JSON report")
    parser.set_defaults(func=run)
