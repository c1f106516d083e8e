import numpy as np

from commands.common import add_output_arguments, publish, read_json, report_config
from core.convexity import ExactMixtureFamily, convexity_verdict
from models.family_models import QuadraticEnergySpec
from models.report_models import ReportDocument, ToleranceConfig


def quadratic_family(spec: QuadraticEnergySpec) -> ExactMixtureFamily:
    Q = np.asarray(spec.matrix, dtype=float)
    c = np.zeros(len(Q)) if spec.linear is None else np.asarray(spec.linear, dtype=float)

    def energy(x: np.ndarray) -> float:
        return float(x @ Q @ x + c @ x + spec.constant)

    return ExactMixtureFamily(energy, k=spec.k, bounds=(spec.low, spec.high))


def run(args) -> int:
    spec = QuadraticEnergySpec(**read_json(args.model))
    report = convexity_verdict(quadratic_family(spec), trials=spec.trials,
                               menu_trials=spec.menu_trials, seed=spec.seed)
    doc = ReportDocument(command="convexity", config=report_config(ToleranceConfig(), seed=spec.seed),
                         convexity=report)
    publish(doc, args)
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("convexity", help="Test convexity of a quadratic energy through the odds")
    parser.add_argument("--model", required=True, help="JSON file describing the quadratic energy")
    add_output_arguments(parser)
    parser.set_defaults(func=run)
