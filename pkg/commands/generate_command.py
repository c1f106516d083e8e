from typing import List
import logging

from commands.common import read_json
from core.errors import PreconditionError
from core.report_io import write_family_csv
from core.synth import generate
from models.family_models import FamilySpec
from models.state_models import Menu, TemperatureGrid

logger = logging.getLogger(__name__)

KINDS = ["boltzmann", "softmax", "uniform", "probit-binary", "crossing-logodds",
         "scaled-conditioning-breaker", "flat-binary"]


def parse_grid(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise PreconditionError(f"--grid must be a comma separated list of numbers, got '{text}'")


def load_menus(path: str) -> List[Menu]:
    data = read_json(path)
    if not isinstance(data, list):
        raise PreconditionError("menus file must hold a JSON list of {id, members}")
    return [Menu(**m) for m in data]


def run(args) -> int:
    params = read_json(args.params) if args.params else {}
    spec = FamilySpec(
        kind=args.kind,
        grid=TemperatureGrid(values=parse_grid(args.grid)),
        menus=load_menus(args.menus),
        n=args.n,
        seed=args.seed,
        **params,
    )
    rsf = generate(spec)
    write_family_csv(rsf, args.out)
    logger.info(f"✅ Wrote {spec.kind} family to {args.out}")
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("generate", help="Write an exact or sampled synthetic family as CSV")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--grid", required=True, help="Comma separated temperatures, e.g. 0.25,0.5,1,2,4")
    parser.add_argument("--menus", required=True, help="JSON file with a list of {id, members}")
    parser.add_argument("--n", type=int, default=0, help="Draws per cell; 0 writes exact frequencies")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--params", default=None,
                        help="JSON file with energies, k, noise, c0, c1 as the kind needs")
    parser.add_argument("--out", required=True)
    parser.set_defaults(func=run)
