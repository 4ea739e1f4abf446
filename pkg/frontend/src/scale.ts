/**
 * Axis scales.  A scale maps data values to a normalised [0, 1] position;
 * the figure turns positions into pixels.  Three kinds cover the reports:
 * linear, log for positive decade-spanning data, and symlog (inverse
 * hyperbolic sine) for residuals that span decades yet must show a signed
 * tolerance band around zero.
 */

import {SchemaError} from './csv';

export type ScaleKind = 'linear' | 'log' | 'symlog';

export const SCALE_KINDS: ScaleKind[] = ['linear', 'log', 'symlog'];

export interface Tick {
  value: number;
  label: string;
}

export interface Scale {
  kind: ScaleKind;
  /** Data value to [0, 1]; 0 is the low end of the domain. */
  pos(value: number): number;
  ticks(): Tick[];
}

/** Deterministic short label for tick marks and annotations. */
export function fmt(value: number): string {
  if (value === 0) {
    return '0';
  }
  const magnitude = Math.abs(value);
  if (magnitude >= 1e-3 && magnitude < 1e5) {
    return String(parseFloat(value.toPrecision(6)));
  }
  const text = value.toExponential(2).replace(/\.?0+e/, 'e').replace('e+', 'e');
  return text;
}

function span(values: number[], what: string): [number, number] {
  const finite = values.filter((v) => Number.isFinite(v));
  if (finite.length === 0) {
    throw new SchemaError(`${what}: no finite values to scale`);
  }
  let lo = Math.min(...finite);
  let hi = Math.max(...finite);
  if (lo === hi) {
    // Degenerate span (constant series): open a symmetric window.
    const pad = lo === 0 ? 1 : Math.abs(lo) / 2;
    lo -= pad;
    hi += pad;
  }
  return [lo, hi];
}

/** Evenly spaced "nice" steps: 1, 2 or 5 times a power of ten. */
function niceStep(width: number, target: number): number {
  const raw = width / target;
  const power = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const mult of [1, 2, 5, 10]) {
    if (power * mult >= raw) {
      return power * mult;
    }
  }
  return power * 10;
}

export function linearScale(values: number[], what: string): Scale {
  const [lo, hi] = span(values, what);
  const pad = 0.05 * (hi - lo);
  const d0 = lo - pad;
  const d1 = hi + pad;
  return {
    kind: 'linear',
    pos: (v) => (v - d0) / (d1 - d0),
    ticks: () => {
      const step = niceStep(d1 - d0, 6);
      const first = Math.ceil(d0 / step) * step;
      const ticks: Tick[] = [];
      for (let v = first; v <= d1 + step * 1e-9; v += step) {
        const snapped = Math.abs(v) < step * 1e-9 ? 0 : v;
        ticks.push({value: snapped, label: fmt(snapped)});
      }
      return ticks;
    },
  };
}

export function logScale(values: number[], what: string): Scale {
  const [lo, hi] = span(values, what);
  if (lo <= 0) {
    throw new SchemaError(`${what}: log axis needs positive data (min is ${fmt(lo)})`);
  }
  const t0 = Math.log10(lo) - 0.04 * (Math.log10(hi) - Math.log10(lo));
  const t1 = Math.log10(hi) + 0.04 * (Math.log10(hi) - Math.log10(lo));
  return {
    kind: 'log',
    pos: (v) => (Math.log10(v) - t0) / (t1 - t0),
    ticks: () => {
      const ticks: Tick[] = [];
      const wholeDecades = Math.floor(t1) - Math.ceil(t0) + 1;
      const mantissas = wholeDecades >= 4 ? [1] : wholeDecades >= 2 ? [1, 3] : [1, 2, 5];
      for (let e = Math.floor(t0); e <= Math.ceil(t1); e++) {
        for (const m of mantissas) {
          const v = m * Math.pow(10, e);
          const t = Math.log10(v);
          if (t >= t0 - 1e-9 && t <= t1 + 1e-9) {
            ticks.push({value: v, label: fmt(v)});
          }
        }
      }
      return ticks;
    },
  };
}

/**
 * Signed log-like scale: t(v) = asinh(v / unit).  Linear within roughly
 * one `unit` of zero, logarithmic beyond, so a residual curve that spikes
 * to 1e7 and a tolerance line just below zero stay visible together.
 */
export function symlogScale(values: number[], unit: number, what: string): Scale {
  if (!(unit > 0)) {
    throw new SchemaError(`${what}: symlog axis needs a positive unit, got ${fmt(unit)}`);
  }
  const transform = (v: number) => Math.asinh(v / unit);
  const [lo, hi] = span([...values, 0], what);
  const width = transform(hi) - transform(lo);
  const t0 = transform(lo) - 0.05 * width;
  const t1 = transform(hi) + 0.05 * width;
  return {
    kind: 'symlog',
    pos: (v) => (transform(v) - t0) / (t1 - t0),
    ticks: () => {
      // Decade ticks on both sides of zero, starting at the first decade
      // not below the linear unit, plus zero itself.
      const ticks: Tick[] = [{value: 0, label: '0'}];
      const eLow = Math.ceil(Math.log10(unit));
      for (let e = eLow; e <= eLow + 40; e += 2) {
        for (const sign of [1, -1]) {
          const v = sign * Math.pow(10, e);
          const t = transform(v);
          if (t >= t0 && t <= t1) {
            ticks.push({value: v, label: fmt(v)});
          }
        }
      }
      return ticks.sort((a, b) => a.value - b.value);
    },
  };
}

export function makeScale(kind: ScaleKind, values: number[], what: string, unit = 1): Scale {
  if (kind === 'linear') {
    return linearScale(values, what);
  }
  if (kind === 'log') {
    return logScale(values, what);
  }
  return symlogScale(values, unit, what);
}

/** Pick linear or log for a generic series: log only for positive data spanning decades. */
export function autoScaleKind(values: number[]): ScaleKind {
  const finite = values.filter((v) => Number.isFinite(v));
  if (finite.length === 0) {
    return 'linear';
  }
  const lo = Math.min(...finite);
  const hi = Math.max(...finite);
  return lo > 0 && hi / lo > 50 ? 'log' : 'linear';
}
