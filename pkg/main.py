#!/usr/bin/env python3
"""
Wigner Lift
Reconstructs the unitary or antiunitary operator behind a ray-space symmetry.

The map is treated as a black box: only its action on pure-state projectors
is queried, and the result is reported as JSON.
"""

import logging
import os
import sys

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from cli import build_parser, dispatch


def setup_logging(verbose: bool = False):
    """Send library logs to stderr; reports own stdout."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def main(argv=None) -> int:
    """Main entry point."""
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    return dispatch(args)


if __name__ == "__main__":
    sys.exit(main())
