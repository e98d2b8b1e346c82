r"""
Implementations of the command line tools. Every command returns its exit
code; errors are mapped to codes by `run`.
"""
import contextlib
import logging
import sys

import torch

from .. import io
from ..bounds import (GapBoxSet, lower_bound_subset, upper_bound_subset,
                      survival_bound_subset, certify_proper_quasi_copula)
from ..dependence import Independence, UpperFrechet
from ..errors import (CopulaBoundsError, ParseError, InvalidPrescriptionError,
                      InconsistentQuotesError, IllConditionedError,
                      IntegrabilityError, ContractViolationError)
from ..grid import check_quasi_copula, check_d_increasing
from ..market import (BSModel, CorrelationMatrix, generate_pairwise_digital_quotes,
                      generate_min_digital_quotes)
from ..payoffs import (IntegrationConfig, diagonal_payoff, strike_grid, DIAGONAL_KINDS)
from ..pricing import (PricingPipeline, pairwise_prescription,
                       min_digital_prescription)
from ..utils import DTYPE
from .properties import SUITES, run_suites
from .svg import line_chart, write_svg


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_PARSE = 2
EXIT_ENVELOPE = 3
EXIT_NUMERIC = 4

SCENARIOS = {
    'fig1': '0.3',
    'fig2': '0.5',
}
MIXED = (0.5, -0.5, 0.)


def _floats(text, what):
    try:
        return [float(c) for c in text.split(',') if c.strip()]
    except ValueError:
        raise ParseError('bad {}: {!r}'.format(what, text))


def _config(args):
    return IntegrationConfig(epsabs=args.tol_abs, epsrel=args.tol_rel)


@contextlib.contextmanager
def _output(args, suffix='.csv'):
    if args.out is None:
        yield sys.stdout
        return
    path = args.out
    if args.format == 'both' and not path.endswith(suffix):
        path += suffix
    with open(path, 'w', newline='') as f:
        yield f


def cmd_eval_bound(args):
    prescription = io.read_prescription(args.prescription)
    if prescription.side == 'survival-scale':
        lower = survival_bound_subset(prescription, 'lower')
        upper = survival_bound_subset(prescription, 'upper')
    else:
        lower = lower_bound_subset(prescription)
        upper = upper_bound_subset(prescription)
    with _output(args) as out:
        for text in args.point:
            u = _floats(text, 'point')
            if len(u) != prescription.dim or any(not 0. <= c <= 1. for c in u):
                raise ParseError('point {!r} is not in [0, 1]^{}'.format(
                    text, prescription.dim))
            out.write('{:.12g},{:.12g}\n'.format(lower.evaluate(u), upper.evaluate(u)))
    return EXIT_OK


def cmd_certify(args):
    s, eps = _floats(args.s, 's'), _floats(args.eps, 'eps')
    indices = [int(c) for c in _floats(args.indices, 'indices')]
    if args.prescription is not None:
        base = io.read_prescription(args.prescription)
        if base.side != 'copula-scale':
            raise ParseError('certification embeds copula-scale prescriptions')
        args.dim = base.dim
    elif args.copula == 'comonotone':
        base = UpperFrechet(args.dim)
    else:
        base = Independence(args.dim)
    gaps = GapBoxSet(tuple(s), tuple(eps), tuple(indices), args.dim)
    cert = certify_proper_quasi_copula(gaps, base, args.which)
    with _output(args) as out:
        if cert is None:
            out.write('none\n')
        else:
            io.write_certificate(out, cert)
    return EXIT_OK


def parse_scenario(text):
    r"""
    Correlations (rho_12, rho_13, rho_23) of a three-asset scenario.
    """
    if text == 'mixed':
        return MIXED
    values = _floats(text, 'scenario')
    if len(values) == 1:
        return tuple(values * 3)
    if len(values) != 3:
        raise ParseError('a scenario gives one or three correlations')
    return tuple(values)


def _write_figure(args, bounds, title, x_label):
    if args.format in ('csv', 'both'):
        with _output(args, '.csv') as out:
            io.write_bounds(out, bounds)
    if args.format in ('svg', 'both'):
        if args.out is None:
            raise ParseError('svg output needs --out')
        path = args.out if args.format == 'svg' or args.out.endswith('.svg') \
            else args.out + '.svg'
        strikes = [b.strike for b in bounds]
        series = {
            'standard lower': list(zip(strikes, [b.std_lower for b in bounds])),
            'improved lower': list(zip(strikes, [b.imp_lower for b in bounds])),
            'improved upper': list(zip(strikes, [b.imp_upper for b in bounds])),
            'standard upper': list(zip(strikes, [b.std_upper for b in bounds])),
            'benchmark': list(zip(strikes, [b.benchmark for b in bounds])),
        }
        write_svg(path, line_chart(series, title, x_label, 'price'))


def cmd_reproduce_fig(args):
    if args.format != 'csv' and args.out is None:
        raise ParseError('svg output needs --out')
    rho = parse_scenario(args.scenario or SCENARIOS[args.figure])
    model = BSModel((args.spot,) * 3, CorrelationMatrix.from_upper(3, rho))
    marginals = model.marginals()
    strikes = strike_grid(marginals[0], args.q_min, args.q_max, args.strikes)
    cfg = _config(args)
    if args.figure == 'fig1':
        quotes = generate_pairwise_digital_quotes(model, strikes)
        pipeline = PricingPipeline(pairwise_prescription(quotes, marginals),
                                   marginals, cfg)
        kind = 'digital-put-on-max'
    else:
        levels = _floats(args.quote_quantiles, 'quote quantiles')
        quote_strikes = [float(marginals[0].quantile(torch.tensor(p, dtype=DTYPE)))
                         for p in levels]
        quotes = generate_min_digital_quotes(model, quote_strikes)
        pipeline = PricingPipeline(min_digital_prescription(quotes, marginals),
                                   marginals, cfg)
        kind = 'call-on-min'
    logger.info('%s: %d quotes, %d strikes, correlations %s', args.figure,
                len(quotes), len(strikes), rho)
    bounds = pipeline.sweep(lambda k: diagonal_payoff(kind, 3, k), strikes,
                            model, args.paths, args.seed)
    _write_figure(args, bounds, '{} bounds, rho = {}'.format(kind, rho), 'strike')
    return EXIT_OK


def cmd_price_bounds(args):
    if args.format != 'csv' and args.out is None:
        raise ParseError('svg output needs --out')
    if args.compare_lp:
        sys.stderr.write('--compare-lp: no LP solver is bundled; improved bounds '
                         'may be weaker than the sharp dependence bounds\n')
    model = io.read_model(args.model)
    quotes = io.read_quotes(args.quotes)
    marginals = model.marginals()
    kinds = {q.kind for q in quotes}
    if len(kinds) > 1:
        raise ParseError('quote file mixes {}'.format(', '.join(sorted(kinds))))
    kind, _, strike = args.payoff.partition(':')
    if kind not in DIAGONAL_KINDS:
        raise ParseError('unknown payoff kind {}'.format(kind))
    if args.strike_list:
        strikes = _floats(args.strike_list, 'strike list')
    elif strike:
        strikes = _floats(strike, 'strike')
    else:
        strikes = strike_grid(marginals[0], args.q_min, args.q_max, args.strikes)
    if kinds == {'basket-digital-min'}:
        prescription = min_digital_prescription(quotes, marginals, args.repair)
    else:
        prescription = pairwise_prescription(quotes, marginals, args.repair)
    pipeline = PricingPipeline(prescription, marginals, _config(args))
    bounds = pipeline.sweep(lambda k: diagonal_payoff(kind, model.dim, k), strikes,
                            model, args.benchmark_paths, args.seed)
    _write_figure(args, bounds, '{} bounds'.format(kind), 'strike')
    return EXIT_OK


def _check_grid(args):
    grid = io.read_grid(args.grid)
    report = check_quasi_copula(grid)
    if grid.dim >= 2:
        report.violations.extend(check_d_increasing(grid).violations)
    with _output(args) as out:
        io.write_report(out, report)
    logger.info('%s: %d violations', args.grid, len(report))
    return EXIT_OK if report.passed else EXIT_PROPERTY


def cmd_check_properties(args):
    if args.grid is not None:
        return _check_grid(args)
    names = list(SUITES) if args.suite == 'all' else args.suite.split(',')
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        raise ParseError('unknown suites {}'.format(', '.join(unknown)))
    results = run_suites(names, args.seed, args.d, args.n, args.trials)
    failed = 0
    for name, failures in results.items():
        print('{}: {}'.format(name, 'pass' if not failures else
                              'FAIL ({})'.format(len(failures))))
        for msg in failures:
            print('  ' + msg)
        failed += bool(failures)
    return EXIT_PROPERTY if failed else EXIT_OK


COMMANDS = {
    'eval-bound': cmd_eval_bound,
    'certify': cmd_certify,
    'reproduce-fig': cmd_reproduce_fig,
    'price-bounds': cmd_price_bounds,
    'check-properties': cmd_check_properties,
}


def exit_code(error):
    if isinstance(error, (InvalidPrescriptionError, InconsistentQuotesError)):
        return EXIT_ENVELOPE
    if isinstance(error, (IllConditionedError, IntegrabilityError,
                          ContractViolationError)):
        return EXIT_NUMERIC
    return EXIT_PARSE


def run(args):
    try:
        return COMMANDS[args.command](args)
    except (CopulaBoundsError, ValueError, OSError) as e:
        code = exit_code(e)
        sys.stderr.write('{}: {}\n'.format(type(e).__name__, e))
        return code
