/**
 * One figure per CSV report.
 *
 * A PlotJob names an input CSV, an output SVG and optionally a plot kind
 * and axis scales; everything else is derived from the file itself.  The
 * named kinds are `decay` (sup-norm decay on log-log axes with theory
 * slope guides), `profile` (self-similar ODE profiles), `residual`
 * (supersolution and stationary residual curves against the tolerance
 * line) and `witness` (two solutions from one datum).  Remaining reports
 * render as a generic line chart or as a table.
 */

import {writeFileSync} from 'fs';
import {
  CsvTable,
  SchemaError,
  commentNumber,
  isNumericColumn,
  numericColumn,
  readCsvTable,
  requireColumns,
  textColumn,
} from './csv';
import {PLOT_KINDS, PlotKind, decayGuidesFromComments, decaySlopeGuides, detectKind} from './kinds';
import {Scale, ScaleKind, autoScaleKind, fmt, linearScale, logScale, makeScale, symlogScale} from './scale';
import {Figure, tableFigure} from './svg';

export interface PlotJob {
  input: string;
  output: string;
  kind?: PlotKind;
  xscale?: ScaleKind;
  yscale?: ScaleKind;
}

function stem(label: string): string {
  return label.replace(/\.csv$/, '');
}

function subtitle(table: CsvTable, keys: string[]): string {
  const parts: string[] = [];
  for (const key of keys) {
    const value = table.comments.get(key);
    if (value !== undefined) {
      parts.push(`${key}=${value}`);
    }
  }
  return parts.join('   ');
}

function buildDecay(table: CsvTable, xk: ScaleKind = 'log', yk: ScaleKind = 'log'): string {
  if (!table.columns.includes('sup') && table.columns.includes('slope_measured')) {
    return buildSlopeChart(table);
  }
  requireColumns(table, ['t', 'sup']);
  const ts = numericColumn(table, 't');
  const sups = numericColumn(table, 'sup');
  const guides = decayGuidesFromComments(table);

  // Theory lines share one anchor just above the last measured point, so
  // their spread at early times shows which exponent the data follows.
  const tFirst = ts[0];
  const tLast = ts[ts.length - 1];
  const anchor = sups[sups.length - 1] * 1.5;
  const guideEnds = guides.map((g) => anchor * Math.pow(tFirst / tLast, g.value));

  const fig = new Figure('sup-norm decay', subtitle(table, ['q', 'N', 'R', 'delta']));
  const xScale = makeScale(xk, ts, 'column "t"');
  const yScale = makeScale(yk, [...sups, anchor, ...guideEnds], 'column "sup"');
  fig.axes(xScale, yScale, 't', 'sup u(t)');
  fig.series('measured', ts, sups, xScale, yScale, 0);
  guides.forEach((g, i) => {
    fig.segmentGuide(tFirst, guideEnds[i], tLast, anchor, xScale, yScale, g.label);
  });
  fig.legend();
  return fig.toString();
}

/** Decay kind over a rates summary: measured slope per experiment with recomputed bounds. */
function buildSlopeChart(table: CsvTable): string {
  requireColumns(table, ['experiment', 'q', 'N', 'R', 'slope_measured']);
  const names = textColumn(table, 'experiment');
  const measured = numericColumn(table, 'slope_measured');
  const qs = numericColumn(table, 'q');
  const dims = numericColumn(table, 'N');
  const radii = numericColumn(table, 'R');
  const n = names.length;

  const rowGuides = names.map((_, i) => decaySlopeGuides(qs[i], dims[i], radii[i]));
  const values = [...measured, ...rowGuides.flat().map((g) => g.value)];
  const fig = new Figure('measured decay slopes vs theory');
  const xScale: Scale = {
    kind: 'linear',
    pos: (v) => v / (n + 1),
    ticks: () => names.map((name, i) => ({value: i + 1, label: name})),
  };
  const yScale = linearScale(values, 'slope values');
  fig.axes(xScale, yScale, 'experiment', 'decay exponent');
  rowGuides.forEach((guides, i) => {
    for (const g of guides) {
      fig.segmentGuide(i + 0.7, g.value, i + 1.3, g.value, xScale, yScale, g.label);
    }
  });
  fig.markers('measured slope', names.map((_, i) => i + 1), measured, xScale, yScale, 0);
  fig.legend();
  return fig.toString();
}

function buildProfile(table: CsvTable, xk: ScaleKind = 'linear', yk: ScaleKind = 'linear'): string {
  requireColumns(table, ['eta', 'f']);
  const etas = numericColumn(table, 'eta');
  const fs = numericColumn(table, 'f');
  const hasSlope = table.columns.includes('fp');
  const fps = hasSlope ? numericColumn(table, 'fp') : [];

  const fig = new Figure('self-similar profile', subtitle(table, ['q', 'N', 'f0', 'c_inf', 'class']));
  const xScale = makeScale(xk, etas, 'column "eta"');
  const yScale = makeScale(yk, hasSlope ? [...fs, ...fps] : fs, 'column "f"');
  fig.axes(xScale, yScale, 'eta', 'profile');
  fig.series('f', etas, fs, xScale, yScale, 0);
  if (hasSlope) {
    fig.series("f'", etas, fps, xScale, yScale, 1);
  }
  fig.legend();
  return fig.toString();
}

function buildResidual(table: CsvTable, xk?: ScaleKind, yk?: ScaleKind): string {
  if (table.columns.includes('residual')) {
    requireColumns(table, ['r', 'residual']);
    const rs = numericColumn(table, 'r');
    const res = numericColumn(table, 'residual');
    const tol = commentNumber(table, 'tol_res');
    const fig = new Figure('supersolution residual', subtitle(table, ['q', 'N', 'nu', 'h', 'tol_res']));
    const xScale = makeScale(xk ?? 'linear', rs, 'column "r"');
    const yScale =
      yk === undefined || yk === 'symlog'
        ? symlogScale([...res, -1.5 * tol], tol, 'column "residual"')
        : makeScale(yk, [...res, -1.5 * tol], 'column "residual"');
    fig.axes(xScale, yScale, 'r', 'residual');
    fig.hGuide(-tol, yScale, `-tol_res = ${fmt(-tol)}`);
    fig.series('residual', rs, res, xScale, yScale, 0);
    fig.legend();
    return fig.toString();
  }
  if (table.columns.includes('min_residual')) {
    requireColumns(table, ['t', 'min_residual']);
    const ts = numericColumn(table, 't');
    const res = numericColumn(table, 'min_residual');
    const tol = commentNumber(table, 'tol_res');
    const fig = new Figure(
      'certified minimum residual',
      subtitle(table, ['tol_res', 'min_radius', 'min_time']),
    );
    const xScale = makeScale(xk ?? 'log', ts, 'column "t"');
    const yScale =
      yk === undefined || yk === 'symlog'
        ? symlogScale([...res, -1.5 * tol], tol, 'column "min_residual"')
        : makeScale(yk, [...res, -1.5 * tol], 'column "min_residual"');
    fig.axes(xScale, yScale, 't', 'min residual');
    fig.hGuide(-tol, yScale, `-tol_res = ${fmt(-tol)}`);
    fig.series('min residual', ts, res, xScale, yScale, 0);
    fig.legend();
    return fig.toString();
  }
  requireColumns(table, ['r', 'residual_exact', 'residual_perturbed']);
  const rs = numericColumn(table, 'r');
  const exact = numericColumn(table, 'residual_exact');
  const perturbed = numericColumn(table, 'residual_perturbed');
  const fig = new Figure(
    'stationary profile residual',
    subtitle(table, ['q', 'N', 'ctilde', 'beta']),
  );
  const xScale = makeScale(xk ?? 'linear', rs, 'column "r"');
  const values = [...exact, ...perturbed];
  const yScale =
    yk === undefined || yk === 'symlog'
      ? symlogScale(values, 1e-12, 'residual columns')
      : makeScale(yk, values, 'residual columns');
  fig.axes(xScale, yScale, 'r', 'residual');
  fig.hGuide(0, yScale, '0');
  fig.series('exact coefficient', rs, exact, xScale, yScale, 0);
  fig.series('coefficient * 1.1', rs, perturbed, xScale, yScale, 1);
  fig.legend();
  return fig.toString();
}

function buildWitness(table: CsvTable, xk: ScaleKind = 'linear', yk: ScaleKind = 'linear'): string {
  requireColumns(table, ['t', 'u_nonzero', 'u_zero']);
  const ts = numericColumn(table, 't');
  const nonzero = numericColumn(table, 'u_nonzero');
  const zero = numericColumn(table, 'u_zero');

  const fig = new Figure(
    'nonuniqueness witness u(0, t)',
    subtitle(table, ['q', 'N', 'c_target', 'f0']),
  );
  const xScale = makeScale(xk, ts, 'column "t"');
  const yScale = makeScale(yk, [...nonzero, ...zero], 'witness columns');
  fig.axes(xScale, yScale, 't', 'u(0, t)');
  fig.series('u_nonzero', ts, nonzero, xScale, yScale, 0);
  fig.series('u_zero', ts, zero, xScale, yScale, 1);
  fig.legend();
  return fig.toString();
}

function buildLine(table: CsvTable, xk?: ScaleKind, yk?: ScaleKind): string {
  const xName = table.columns[0];
  const xs = numericColumn(table, xName);
  const seriesNames = table.columns.slice(1).filter((name) => isNumericColumn(table, name));
  if (seriesNames.length === 0) {
    throw new SchemaError(`no numeric series columns in ${table.label}`);
  }
  const allValues = seriesNames.flatMap((name) => numericColumn(table, name));

  const commentKeys = [...table.comments.keys()];
  const fig = new Figure(stem(table.label), subtitle(table, commentKeys));
  const xScale = makeScale(xk ?? autoScaleKind(xs), xs, `column "${xName}"`);
  const yScale = makeScale(yk ?? autoScaleKind(allValues), allValues, 'series columns');
  fig.axes(xScale, yScale, xName, seriesNames.length === 1 ? seriesNames[0] : 'value');
  seriesNames.forEach((name, i) => {
    fig.series(name, xs, numericColumn(table, name), xScale, yScale, i);
  });
  fig.legend();
  return fig.toString();
}

function buildTable(table: CsvTable): string {
  const rows = table.rows.map((row) =>
    table.columns.map((name) => {
      const cell = row[name];
      return cell === null || cell === undefined ? '' : String(cell);
    }),
  );
  return tableFigure(stem(table.label), table.columns, rows);
}

export function renderFigure(
  table: CsvTable,
  kind: PlotKind,
  xscale?: ScaleKind,
  yscale?: ScaleKind,
): string {
  switch (kind) {
    case 'decay':
      return buildDecay(table, xscale ?? 'log', yscale ?? 'log');
    case 'profile':
      return buildProfile(table, xscale ?? 'linear', yscale ?? 'linear');
    case 'residual':
      return buildResidual(table, xscale, yscale);
    case 'witness':
      return buildWitness(table, xscale ?? 'linear', yscale ?? 'linear');
    case 'line':
      return buildLine(table, xscale, yscale);
    case 'table':
      return buildTable(table);
    default:
      throw new SchemaError(`unknown plot kind "${kind}" (kinds: ${PLOT_KINDS.join(', ')})`);
  }
}

/** Read the CSV, render one figure, write the SVG; returns the kind used. */
export function render(job: PlotJob): PlotKind {
  const table = readCsvTable(job.input);
  const kind = job.kind ?? detectKind(table);
  const svg = renderFigure(table, kind, job.xscale, job.yscale);
  writeFileSync(job.output, svg + '\n');
  return kind;
}
