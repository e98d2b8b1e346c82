r"""
Minimal SVG line charts: axes, one polyline per series and a legend
"""
import math
import xml.etree.ElementTree as ET


COLORS = ('#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b')
DASHES = ('6,3', None, None, '6,3', '2,2', None)


def _ticks(lo, hi, count=5):
    if hi <= lo:
        return [lo]
    step = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(step))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= step), default=step)
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-12 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def line_chart(series, title='', x_label='', y_label='', width=720, height=440):
    r"""
    `series` maps a name to a list of (x, y) pairs; pairs with y None are
    skipped. Returns the root <svg> element.
    """
    margin = {'left': 70, 'right': 180, 'top': 40, 'bottom': 50}
    xs = [x for pts in series.values() for x, y in pts if y is not None]
    ys = [y for pts in series.values() for x, y in pts if y is not None]
    x_lo, x_hi = (min(xs), max(xs)) if xs else (0., 1.)
    y_lo, y_hi = (min(ys), max(ys)) if ys else (0., 1.)
    if y_hi - y_lo < 1e-12:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    if x_hi - x_lo < 1e-12:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    plot_w = width - margin['left'] - margin['right']
    plot_h = height - margin['top'] - margin['bottom']

    def px(x):
        return margin['left'] + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y):
        return margin['top'] + (y_hi - y) / (y_hi - y_lo) * plot_h

    svg = ET.Element('svg', xmlns='http://www.w3.org/2000/svg',
                     width=str(width), height=str(height),
                     viewBox='0 0 {} {}'.format(width, height))
    ET.SubElement(svg, 'rect', width=str(width), height=str(height), fill='white')
    if title:
        ET.SubElement(svg, 'text', x=str(width / 2), y='22',
                      attrib={'text-anchor': 'middle', 'font-size': '15'}).text = title

    axes = ET.SubElement(svg, 'g', attrib={'class': 'axes', 'stroke': 'black'})
    x0, y0 = margin['left'], margin['top'] + plot_h
    ET.SubElement(axes, 'line', x1=str(x0), y1=str(y0), x2=str(x0 + plot_w), y2=str(y0))
    ET.SubElement(axes, 'line', x1=str(x0), y1=str(margin['top']), x2=str(x0), y2=str(y0))
    labels = ET.SubElement(svg, 'g', attrib={'font-size': '11'})
    for t in _ticks(x_lo, x_hi):
        ET.SubElement(axes, 'line', x1='{:.2f}'.format(px(t)), y1=str(y0),
                      x2='{:.2f}'.format(px(t)), y2=str(y0 + 5))
        ET.SubElement(labels, 'text', x='{:.2f}'.format(px(t)), y=str(y0 + 18),
                      attrib={'text-anchor': 'middle'}).text = '{:g}'.format(t)
    for t in _ticks(y_lo, y_hi):
        ET.SubElement(axes, 'line', x1=str(x0 - 5), y1='{:.2f}'.format(py(t)),
                      x2=str(x0), y2='{:.2f}'.format(py(t)))
        ET.SubElement(labels, 'text', x=str(x0 - 8), y='{:.2f}'.format(py(t) + 4),
                      attrib={'text-anchor': 'end'}).text = '{:g}'.format(t)
    if x_label:
        ET.SubElement(labels, 'text', x=str(x0 + plot_w / 2), y=str(height - 12),
                      attrib={'text-anchor': 'middle'}).text = x_label
    if y_label:
        ET.SubElement(labels, 'text', x='16', y=str(margin['top'] + plot_h / 2),
                      transform='rotate(-90 16 {})'.format(margin['top'] + plot_h / 2),
                      attrib={'text-anchor': 'middle'}).text = y_label

    legend = ET.SubElement(svg, 'g', attrib={'class': 'legend', 'font-size': '12'})
    for k, (name, pts) in enumerate(series.items()):
        color = COLORS[k % len(COLORS)]
        coords = ' '.join('{:.2f},{:.2f}'.format(px(x), py(y))
                          for x, y in pts if y is not None)
        attrib = {'class': 'series', 'fill': 'none', 'stroke': color,
                  'stroke-width': '1.6', 'data-name': name, 'points': coords}
        if DASHES[k % len(DASHES)]:
            attrib['stroke-dasharray'] = DASHES[k % len(DASHES)]
        ET.SubElement(svg, 'polyline', attrib=attrib)
        ly = margin['top'] + 16 * k + 8
        lx = width - margin['right'] + 15
        ET.SubElement(legend, 'line', x1=str(lx), y1=str(ly), x2=str(lx + 20),
                      y2=str(ly), stroke=color, attrib={'stroke-width': '2'})
        ET.SubElement(legend, 'text', x=str(lx + 26), y=str(ly + 4)).text = name
    return svg


def write_svg(path, root):
    ET.ElementTree(root).write(path, encoding='utf-8', xml_declaration=True)
