r"""
Text formats: prescriptions, grid functions, property reports, quotes, price
bounds, certificates (all CSV) and model configurations (JSON).
"""
import csv
import json

from .bounds import Prescription, SIDES
from .errors import ParseError
from .grid import GridFunction
from .market import BSModel, MarketQuote


QUOTE_HEADER = ['kind', 'indices', 'strike', 'price']
BOUNDS_HEADER = ['strike', 'std_lower', 'imp_lower', 'imp_upper', 'std_upper',
                 'benchmark', 'stderr', 'sharp']
REPORT_HEADER = ['check', 'location', 'magnitude']


def _float(text, where):
    try:
        return float(text)
    except ValueError:
        raise ParseError('{}: not a number: {!r}'.format(where, text))


def _rows(path):
    with open(path, newline='') as f:
        return [row for row in csv.reader(f) if row and any(c.strip() for c in row)]


def read_prescription(path):
    r"""
    First line `<d>,<side>`, then one `x_1,...,x_d,value` row per point.
    """
    rows = _rows(path)
    if not rows or len(rows[0]) != 2:
        raise ParseError('{}: expected a `<d>,<side>` header'.format(path))
    try:
        dim = int(rows[0][0])
    except ValueError:
        raise ParseError('{}: bad dimension {!r}'.format(path, rows[0][0]))
    side = rows[0][1].strip()
    if side not in SIDES:
        raise ParseError('{}: unknown side {!r}'.format(path, side))
    points, values = [], []
    for line, row in enumerate(rows[1:], 2):
        if len(row) != dim + 1:
            raise ParseError('{}:{}: expected {} fields, got {}'.format(
                path, line, dim + 1, len(row)))
        nums = [_float(c, '{}:{}'.format(path, line)) for c in row]
        points.append(tuple(nums[:-1]))
        values.append(nums[-1])
    return Prescription(dim, tuple(points), tuple(values), side)


def write_prescription(path, prescription):
    with open(path, 'w', newline='') as f:
        out = csv.writer(f, lineterminator='\n')
        out.writerow([prescription.dim, prescription.side])
        for x, v in zip(prescription.points, prescription.values):
            out.writerow(list(x) + [repr(v)])


def read_grid(path):
    rows = _rows(path)
    if not rows or len(rows[0]) != 2:
        raise ParseError('{}: expected a `<dim>,<n>` header'.format(path))
    try:
        dim, n = int(rows[0][0]), int(rows[0][1])
    except ValueError:
        raise ParseError('{}: bad grid header {}'.format(path, rows[0]))
    values = [_float(row[0], '{}:{}'.format(path, line))
              for line, row in enumerate(rows[1:], 2)]
    return GridFunction(dim, n, values)


def write_grid(path, grid):
    with open(path, 'w', newline='') as f:
        out = csv.writer(f, lineterminator='\n')
        out.writerow([grid.dim, grid.n])
        for v in grid.flat().tolist():
            out.writerow([repr(v)])


def write_report(stream, report):
    out = csv.writer(stream, lineterminator='\n')
    out.writerow(REPORT_HEADER)
    for v in report.violations:
        out.writerow([v.check, v.location, '{:.12g}'.format(v.magnitude)])


def read_quotes(path):
    r"""
    Quotes with the header `kind,indices,strike,price`; indices are 0-based
    and joined with `;`.
    """
    rows = _rows(path)
    if not rows or [c.strip() for c in rows[0]] != QUOTE_HEADER:
        raise ParseError('{}: expected the header {}'.format(path, ','.join(QUOTE_HEADER)))
    quotes = []
    for line, row in enumerate(rows[1:], 2):
        where = '{}:{}'.format(path, line)
        if len(row) != 4:
            raise ParseError('{}: expected 4 fields, got {}'.format(where, len(row)))
        try:
            indices = tuple(int(i) for i in row[1].split(';'))
        except ValueError:
            raise ParseError('{}: bad indices {!r}'.format(where, row[1]))
        quotes.append(MarketQuote(row[0].strip(), indices, _float(row[2], where),
                                  _float(row[3], where)))
    return quotes


def write_quotes(path, quotes):
    with open(path, 'w', newline='') as f:
        out = csv.writer(f, lineterminator='\n')
        out.writerow(QUOTE_HEADER)
        for q in quotes:
            out.writerow([q.kind, ';'.join(str(i) for i in q.indices),
                          repr(q.strike), repr(q.price)])


def write_bounds(stream, bounds):
    out = csv.writer(stream, lineterminator='\n')
    out.writerow(BOUNDS_HEADER)
    for b in bounds:
        out.writerow(['{:.12g}'.format(c) if isinstance(c, float) else c
                      for c in b.to_row()])


def write_certificate(stream, certificate):
    out = csv.writer(stream, lineterminator='\n')
    out.writerow(certificate.header())
    out.writerow(['{:.12g}'.format(c) for c in certificate.to_row()])


def read_model(path):
    r"""
    JSON object with `spots`, `correlations` (strict upper triangle,
    row-major) and optional `vols`.
    """
    try:
        with open(path) as f:
            config = json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError('{}: {}'.format(path, e))
    if not isinstance(config, dict):
        raise ParseError('{}: model config must be a JSON object'.format(path))
    return BSModel.from_dict(config)


def write_model(path, model):
    with open(path, 'w') as f:
        json.dump(model.to_dict(), f, indent=2)
