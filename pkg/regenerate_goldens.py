#!/usr/bin/env python3
"""Regenerate CLI golden outputs.

Runs every tests/integration_tests/goldens/<command>.input.json through the
matching subcommand and writes <command>.output.json next to it.
"""

import argparse
import logging
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent / "src"))

from jordan_subdiff import cli  # noqa: E402
from jordan_subdiff.config import get_config  # noqa: E402

logger = logging.getLogger("regenerate_goldens")

GOLDENS = Path(__file__).parent / "tests" / "integration_tests" / "goldens"


def golden_inputs(directory: Path, only: list[str] | None) -> dict[str, Path]:
    """Map command name to its input file, optionally restricted to ``only``."""
    inputs = {p.name.removesuffix(".input.json"): p for p in sorted(directory.glob("*.input.json"))}
    if only:
        inputs = {name: path for name, path in inputs.items() if name in only}
    return inputs


def main() -> int:
    """Regenerate the selected goldens and return a process exit code."""
    parser = argparse.ArgumentParser(description="Regenerate CLI golden outputs")
    parser.add_argument("--dir", "-d", type=Path, default=GOLDENS, help=f"Golden directory (default: {GOLDENS})")
    parser.add_argument("--commands", "-c", nargs="*", help="Commands to regenerate. If not specified, runs all.")
    args = parser.parse_args()

    config = get_config()
    logging.basicConfig(level=config.log_level(), format="%(levelname)s %(name)s: %(message)s")

    inputs = golden_inputs(args.dir, args.commands)
    unknown = sorted(set(inputs) - set(cli.COMMANDS))
    if unknown:
        logger.error("No subcommand for golden inputs: %s", ", ".join(unknown))
        return 2

    failed = []
    for name, path in inputs.items():
        out = path.with_name(f"{name}.output.json")
        code = cli.main([name, "--input", str(path), "--output", str(out)])
        if code:
            logger.error("%s exited with %d", name, code)
            failed.append(name)
        else:
            logger.info("%s -> %s", name, out)

    logger.info("Regenerated %d of %d goldens", len(inputs) - len(failed), len(inputs))
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
