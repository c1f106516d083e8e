import argparse
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv
load_dotenv()

from pydantic import ValidationError

from core import config
from core.errors import GateError
from commands import check_command, convexity_command, generate_command, recover_command, report_command

logger = logging.getLogger("boltzmann_gate")

COMMANDS = [generate_command, check_command, recover_command, convexity_command, report_command]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boltzmann-gate",
        description="Test temperature-indexed choice frequencies for a Boltzmann or softmax representation",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def cli(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand. 0 = success or pass, 1 = check failed, 2 = usage or data error."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    try:
        return args.func(args)
    except GateError as e:
        logger.error(f"❌ {e.detail}")
        return e.status_code
    except ValidationError as e:
        logger.error(f"❌ Invalid input: {e}")
        return 2
    except Exception as e:
        logger.error(f"❌ Unexpected error in '{args.command}': {e}", exc_info=True)
        return 2


if __name__ == "__main__":
    logging.basicConfig(level=getattr(logging, config.LOG_LEVEL.upper(), logging.INFO),
                        format="%(levelname)s %(name)s: %(message)s")
    sys.exit(cli())
