"""
Sucht zufällige korrelierte Zustände mit L(A,B) > L(A) + L(B).

Subadditivität ist nur für Zustände bewiesen, die in einer Produktbasis
diagonal sind; dieses Skript protokolliert, ob generische Zustände sie
verletzen. Ein Fund wird sofort aus seinem Seed nachgerechnet.

Ausfuehren:
  python scripts/search_subadditivity.py --trials 5000 --dims 2x2,2x3 --seed 42
"""
import argparse
import json
import logging
import os
import sys

# Pfad zum app-Modul ergaenzen
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app.cli import parse_dims
from app.config import settings
from app.services.theorems import (
    CheckConfig,
    SampleFamily,
    replay_subadditivity_instance,
    search_subadditivity_violation,
)

logging.basicConfig(level=settings.log_level, format="%(levelname)s: %(message)s")
logger = logging.getLogger(__name__)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=settings.check_seed)
    parser.add_argument("--dims", default="2x2,2x3,3x3")
    parser.add_argument("--tol", type=float, default=settings.check_tolerance)
    parser.add_argument("--family", choices=[f.value for f in SampleFamily], default=SampleFamily.CORRELATED.value)
    args = parser.parse_args()

    config = CheckConfig(dims=parse_dims(args.dims), trials=args.trials, seed=args.seed, tolerance=args.tol)
    instance = search_subadditivity_violation(config, SampleFamily(args.family))
    if instance is None:
        print(json.dumps({"found": False, "family": args.family, "trials": args.trials, "seed": args.seed}))
        return 0

    replayed = replay_subadditivity_instance(instance)
    if abs(replayed - instance.excess) > config.tolerance:
        logger.error(f"Instanz nicht reproduzierbar: {replayed} != {instance.excess}")
        return 1
    print(json.dumps({"found": True, "instance": instance.model_dump(mode="json")}, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
