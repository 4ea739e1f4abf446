/**
 * Plot kinds and how a CSV maps onto one.
 *
 * The four named kinds carry the scientific figures (sup-norm decay with
 * slope guides, self-similar profiles, barrier residuals, the
 * nonuniqueness witness).  Everything else the CLI emits falls back to a
 * generic line chart when the columns are numeric, or a rendered table
 * when they are not.
 */

import {CsvTable, commentNumber, isNumericColumn} from './csv';

export type PlotKind = 'decay' | 'profile' | 'residual' | 'witness' | 'line' | 'table';

export const PLOT_KINDS: PlotKind[] = ['decay', 'profile', 'residual', 'witness', 'line', 'table'];

function signature(table: CsvTable): string {
  return table.columns.join(',');
}

/**
 * Pick the kind from the header row.  The emitting CLI owns these column
 * sets, so an exact signature match is reliable; unknown tables degrade
 * to a line chart over their numeric columns, or to a table otherwise.
 */
export function detectKind(table: CsvTable): PlotKind {
  switch (signature(table)) {
    case 't,sup':
      return 'decay';
    case 'eta,f,fp':
      return 'profile';
    case 'r,phi1,Phi,residual':
    case 't,min_residual':
    case 'r,residual_exact,residual_perturbed':
      return 'residual';
    case 't,u_nonzero,u_zero':
      return 'witness';
    default:
      break;
  }
  const numeric = table.columns.filter((name) => isNumericColumn(table, name));
  if (table.rows.length >= 2 && numeric.length >= 2 && numeric.includes(table.columns[0])) {
    return 'line';
  }
  return 'table';
}

export interface GuideSlope {
  /** Axis-ready text, e.g. "-0.600"; tests match these verbatim. */
  label: string;
  value: number;
}

function guide(value: number): GuideSlope {
  return {label: value.toFixed(3), value};
}

/**
 * The three theoretical decay exponents for sup |u(t)| as t grows:
 * conservation of L^R mass alone, the absorption-improved rate, and the
 * large-time self-similar rate -a/2 with a = (2-q)/(q-1).  Recomputed
 * from q, N, R on every render so the figure shows theory against
 * measurement rather than echoing a stored fit.
 */
export function decaySlopeGuides(q: number, dim: number, bigR: number): GuideSlope[] {
  const a = (2 - q) / (q - 1);
  return [
    guide(-dim / (2 * bigR)),
    guide(-dim / (q * bigR + dim * (q - 1))),
    guide(-a / 2),
  ];
}

/** Guides for a decay-series CSV, taken from its `# q= / # N= / # R=` comments. */
export function decayGuidesFromComments(table: CsvTable): GuideSlope[] {
  return decaySlopeGuides(
    commentNumber(table, 'q'),
    commentNumber(table, 'N'),
    commentNumber(table, 'R'),
  );
}
