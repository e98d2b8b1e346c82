r"""
Command line surface: `python -m cbounds.cli <command>`
"""
import logging

from .args import (add_global_args, add_eval_bound_args, add_certify_args,
                   add_reproduce_args, add_price_bounds_args,
                   add_check_properties_args, build_parser)
from .commands import COMMANDS, run


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    return run(args)
