r"""
Argument groups of the command line tools
"""
import argparse

from ..payoffs import IntegrationConfig


def add_global_args(parser):
    defaults = IntegrationConfig()
    group = parser.add_argument_group(title="global")

    group.add_argument("--seed", type=int, default=0)
    group.add_argument("--tol-abs", type=float, default=defaults.epsabs)
    group.add_argument("--tol-rel", type=float, default=defaults.epsrel)
    group.add_argument("--out", type=str, default=None,
                       help="output file, or stem when writing csv and svg")
    group.add_argument("--format", choices=("csv", "svg", "both"), default="csv")
    group.add_argument("--verbose", action="store_true")

    return parser


def add_eval_bound_args(parser):
    group = parser.add_argument_group(title="eval-bound")

    group.add_argument("--prescription", type=str, required=True)
    group.add_argument("--point", type=str, action="append", default=[],
                       help="comma separated coordinates, repeatable")

    return parser


def add_certify_args(parser):
    group = parser.add_argument_group(title="certify")

    group.add_argument("--s", type=str, required=True)
    group.add_argument("--eps", type=str, required=True)
    group.add_argument("--indices", type=str, default="0,1,2")
    group.add_argument("--dim", type=int, default=3)
    group.add_argument("--prescription", type=str, default=None)
    group.add_argument("--copula", choices=("independence", "comonotone"),
                       default="independence")
    group.add_argument("--which", choices=("lower", "upper"), default="lower")

    return parser


def add_strike_grid_args(parser):
    group = parser.add_argument_group(title="strike grid")

    group.add_argument("--strikes", type=int, default=21)
    group.add_argument("--q-min", type=float, default=0.01)
    group.add_argument("--q-max", type=float, default=0.99)

    return parser


def add_reproduce_args(parser):
    group = parser.add_argument_group(title="reproduce-fig")

    group.add_argument("figure", choices=("fig1", "fig2"))
    group.add_argument("--scenario", type=str, default=None,
                       help="common correlation, three pairwise correlations "
                            "rho_12,rho_13,rho_23, or 'mixed'")
    group.add_argument("--spot", type=float, default=10.)
    group.add_argument("--paths", type=int, default=10 ** 6)
    group.add_argument("--quote-quantiles", type=str, default="0.25,0.75")

    return add_strike_grid_args(parser)


def add_price_bounds_args(parser):
    group = parser.add_argument_group(title="price-bounds")

    group.add_argument("--model", type=str, required=True)
    group.add_argument("--quotes", type=str, required=True)
    group.add_argument("--payoff", type=str, required=True, help="kind[:K]")
    group.add_argument("--strike-list", type=str, default=None,
                       help="comma separated strikes, overriding K")
    group.add_argument("--benchmark-paths", type=int, default=0)
    group.add_argument("--repair", action="store_true")
    group.add_argument("--compare-lp", action="store_true")

    return add_strike_grid_args(parser)


def add_check_properties_args(parser):
    group = parser.add_argument_group(title="check-properties")

    group.add_argument("--suite", type=str, default="all")
    group.add_argument("--d", type=int, default=3)
    group.add_argument("--n", type=int, default=8)
    group.add_argument("--trials", type=int, default=50)
    group.add_argument("--grid", type=str, default=None,
                       help="check a stored grid function instead of running suites")

    return parser


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cbounds", description="Improved Frechet-Hoeffding bounds and "
        "model-free price bounds under dependence uncertainty")
    commands = parser.add_subparsers(dest="command", required=True)
    for name, add in (("eval-bound", add_eval_bound_args),
                      ("certify", add_certify_args),
                      ("reproduce-fig", add_reproduce_args),
                      ("price-bounds", add_price_bounds_args),
                      ("check-properties", add_check_properties_args)):
        add_global_args(add(commands.add_parser(name)))
    return parser
