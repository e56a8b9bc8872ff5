/**
 * Minimal deterministic SVG assembly: fixed canvas, no randomness, no
 * timestamps, so identical inputs produce byte-identical figures.
 */

export const WIDTH = 960;
export const HEIGHT = 600;
export const MARGIN = { left: 80, right: 30, top: 48, bottom: 58 } as const;

export interface Scale {
  (value: number): number;
  ticks: number[];
  isLog: boolean;
}

function span(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo === Infinity) throw new Error("no values to scale");
  if (lo === hi) {
    // Degenerate extent: widen symmetrically so the line sits mid-plot.
    lo -= Math.abs(lo) * 0.5 + 1;
    hi += Math.abs(hi) * 0.5 + 1;
  }
  return [lo, hi];
}

export function linearScale(values: number[], outLo: number, outHi: number): Scale {
  const [lo, hi] = span(values);
  const f = ((value: number) =>
    outLo + ((value - lo) / (hi - lo)) * (outHi - outLo)) as Scale;
  f.ticks = [0, 1, 2, 3, 4].map((i) => lo + (i / 4) * (hi - lo));
  f.isLog = false;
  return f;
}

/** Log10 scale; only valid for strictly positive data. */
export function logScale(values: number[], outLo: number, outHi: number): Scale {
  const logs = values.map((v) => Math.log10(v));
  const [lo, hi] = span(logs);
  const f = ((value: number) =>
    outLo + ((Math.log10(value) - lo) / (hi - lo)) * (outHi - outLo)) as Scale;
  const first = Math.ceil(lo);
  const last = Math.floor(hi);
  const ticks: number[] = [];
  for (let p = first; p <= last; p++) ticks.push(Math.pow(10, p));
  f.ticks = ticks.length >= 2 ? ticks : [Math.pow(10, lo), Math.pow(10, hi)];
  f.isLog = true;
  return f;
}

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function fmtTick(value: number): string {
  if (value === 0) return "0";
  const abs = Math.abs(value);
  if (abs >= 0.01 && abs < 10000) return String(Number(value.toPrecision(4)));
  return value.toExponential(2);
}

export class SvgBuilder {
  private parts: string[] = [];

  constructor(title: string) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
        `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="monospace">`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
      `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16">` +
        `${escapeXml(title)}</text>`,
    );
  }

  /** Embed the plotted values verbatim so figures are self-describing. */
  metadata(payload: unknown): void {
    this.parts.push(
      `<metadata id="series">${escapeXml(JSON.stringify(payload))}</metadata>`,
    );
  }

  raw(fragment: string): void {
    this.parts.push(fragment);
  }

  axes(xLabel: string, yLabel: string, x: Scale, y: Scale): void {
    const { left, right, top, bottom } = MARGIN;
    const x0 = left;
    const x1 = WIDTH - right;
    const y0 = HEIGHT - bottom;
    const y1 = top;
    this.parts.push(
      `<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="black"/>`,
      `<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="black"/>`,
      `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 12}" text-anchor="middle" ` +
        `font-size="13">${escapeXml(xLabel)}</text>`,
      `<text x="18" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="13" ` +
        `transform="rotate(-90 18 ${(y0 + y1) / 2})">${escapeXml(yLabel)}</text>`,
    );
    for (const t of x.ticks) {
      const px = x(t);
      this.parts.push(
        `<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="black"/>`,
        `<text x="${px}" y="${y0 + 20}" text-anchor="middle" font-size="11">` +
          `${fmtTick(t)}</text>`,
      );
    }
    for (const t of y.ticks) {
      const py = y(t);
      this.parts.push(
        `<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="black"/>`,
        `<text x="${x0 - 8}" y="${py + 4}" text-anchor="end" font-size="11">` +
          `${fmtTick(t)}</text>`,
      );
    }
  }

  polyline(xs: number[], ys: number[], color: string, label?: string): void {
    const points = xs.map((px, i) => `${px},${ys[i]}`).join(" ");
    this.parts.push(
      `<polyline points="${points}" fill="none" stroke="${color}" stroke-width="1.5"/>`,
    );
    if (label !== undefined) {
      const n = this.parts.filter((p) => p.includes("legend-entry")).length;
      const lx = WIDTH - MARGIN.right - 220;
      const ly = MARGIN.top + 16 + 18 * n;
      this.parts.push(
        `<g class="legend-entry">` +
          `<line x1="${lx}" y1="${ly - 4}" x2="${lx + 24}" y2="${ly - 4}" ` +
          `stroke="${color}" stroke-width="1.5"/>` +
          `<text x="${lx + 30}" y="${ly}" font-size="12">${escapeXml(label)}</text></g>`,
      );
    }
  }

  toString(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}
