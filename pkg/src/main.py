import argparse
import json
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from .models.config import RunConfig
from .services.orchestrator import EXIT_FAILED, EXIT_INPUT, Orchestrator, RunResult
from .utils.settings import log_level

logger = logging.getLogger(__name__)

SUBCOMMANDS = [
    ("report", "cohomology report (n_o, m_o, k_o, witnesses) as JSON"),
    ("average", "Birkhoff and Cesaro averages over a schedule as CSV"),
    ("diagnose", "unique-ergodicity diagnostic table as CSV"),
    ("factorize", "scalar or parametric Fejer-Riesz factorization as JSON"),
    ("expect", "one conditional expectation of an observable as JSON"),
    ("verify-ce", "conditional-expectation axiom suite"),
    ("dominate", "domination margin m_o E_can - E_A on positive observables"),
    ("absorb", "absorption residual of E_can after E_{m_o}"),
    ("example-zinf", "golden suite of the Z_inf flip example"),
]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anzai",
        description="Skew products on X x T, their cohomology and invariant conditional expectations",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, help_text in SUBCOMMANDS:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--system", help="SkewSystem JSON file")
        p.add_argument("--observable", help="TorusObservable JSON file")
        p.add_argument("--matrix", help="ExpectationMatrix JSON file (random when omitted)")
        p.add_argument("--poly", help="LaurentPoly or ParametricTrigPoly JSON file")
        p.add_argument("--out", help="write the artifact here instead of stdout")
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--grid", type=int, default=64)
        p.add_argument("--schedule", type=lambda s: [int(n) for n in s.split(",")],
                       default=[100, 200, 400, 800], help="comma-separated increasing N values")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--n-max", dest="n_max", type=int, default=8)
        p.add_argument("--samples", type=int, default=50)
        p.add_argument("--family", choices=["canonical", "matrix", "periodic"], default="canonical")
        p.add_argument("--level", type=int, default=1, help="period n of E_n for --family periodic")
    return parser


def _report_error(error: dict) -> None:
    sys.stderr.write(json.dumps(error, sort_keys=True) + "\n")


def run(config: RunConfig) -> RunResult:
    """Execute one configured run and write its artifact."""
    try:
        result = Orchestrator(config).run()
    except Exception as e:
        logger.error(f"Unexpected failure in {config.subcommand}: {e}", exc_info=True)
        result = RunResult(exit_code=EXIT_FAILED, error={"error": type(e).__name__, "tag": "INTERNAL", "message": str(e)})

    if result.error is not None:
        _report_error(result.error)
    if result.artifact:
        if config.out:
            with open(config.out, "w") as f:
                f.write(result.artifact)
            logger.info(f"Wrote {config.subcommand} artifact to {config.out}")
        else:
            sys.stdout.write(result.artifact)
    return result


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    logging.basicConfig(level=log_level(), stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(**vars(args))
    except ValidationError as e:
        first = e.errors()[0]
        _report_error({
            "error": "ValidationError",
            "tag": "INPUT",
            "message": f"{'.'.join(str(p) for p in first['loc'])}: {first['msg']}",
        })
        return EXIT_INPUT
    return run(config).exit_code


if __name__ == "__main__":
    sys.exit(main())
