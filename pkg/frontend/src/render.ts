/**
 * Renderers for the three artifact kinds:
 *
 *   norm-history      norms.csv from a run: weighted and macroscopic L2
 *                     norms per step (log y-axis when positive).
 *   convergence       convergence.csv from a refinement study: log-log
 *                     error vs cell size with observed orders annotated.
 *   stability-region  stability_region.csv: sign(gap) heatmap over
 *                     (xi, beta) with the stable/unstable boundary drawn
 *                     where the per-beta maximal gap changes sign.
 *
 * Data discipline: the figure is assembled from the CSV rows in file
 * order, nothing is re-sorted or re-formatted, and each SVG embeds the
 * plotted column values verbatim in a <metadata> block.
 */

import { writeFileSync } from "fs";

import {
  column,
  CsvSchemaError,
  CsvTable,
  numericColumn,
  readCsvFile,
  requireSchema,
} from "./csv.js";
import {
  HEIGHT,
  linearScale,
  logScale,
  MARGIN,
  Scale,
  SvgBuilder,
  WIDTH,
} from "./svg.js";

export type PlotKind = "norm-history" | "convergence" | "stability-region";

export interface PlotJob {
  inputCsv: string;
  kind: PlotKind;
  outputPath: string;
}

const SCHEMAS: Record<PlotKind, string[]> = {
  "norm-history": ["step", "time", "dt", "weighted_l2", "macro_l2", "constraint_residual"],
  convergence: ["cells", "dx", "dt_used", "l2_error", "observed_order"],
  "stability-region": ["alpha", "beta", "xi", "gap"],
};

const X0 = MARGIN.left;
const X1 = WIDTH - MARGIN.right;
const Y0 = HEIGHT - MARGIN.bottom;
const Y1 = MARGIN.top;

function yScaleFor(values: number[]): Scale {
  // Norm histories decay multiplicatively, so prefer a log axis; fall
  // back to linear when zeros make that impossible (e.g. zero-amplitude
  // runs).
  return values.every((v) => v > 0)
    ? logScale(values, Y0, Y1)
    : linearScale(values, Y0, Y1);
}

function renderNormHistory(table: CsvTable): string {
  const steps = numericColumn(table, "step");
  const weighted = numericColumn(table, "weighted_l2");
  const macro = numericColumn(table, "macro_l2");
  const x = linearScale(steps, X0, X1);
  const y = yScaleFor([...weighted, ...macro]);

  const svg = new SvgBuilder("norm history");
  svg.metadata({
    kind: "norm-history",
    series: {
      step: column(table, "step"),
      weighted_l2: column(table, "weighted_l2"),
      macro_l2: column(table, "macro_l2"),
    },
  });
  svg.axes("step", y.isLog ? "norm (log)" : "norm", x, y);
  svg.polyline(steps.map(x), weighted.map(y), "#2a7ab9", "weighted_l2");
  svg.polyline(steps.map(x), macro.map(y), "#c0392b", "macro_l2");
  return svg.toString();
}

function renderConvergence(table: CsvTable): string {
  const dx = numericColumn(table, "dx");
  const err = numericColumn(table, "l2_error");
  const orders = column(table, "observed_order");
  if (dx.some((v) => v <= 0) || err.some((v) => v <= 0)) {
    throw new CsvSchemaError("convergence data must be positive for log-log axes");
  }
  const x = logScale(dx, X0, X1);
  const y = logScale(err, Y0, Y1);

  const svg = new SvgBuilder("refinement study (log-log)");
  svg.metadata({
    kind: "convergence",
    series: {
      dx: column(table, "dx"),
      l2_error: column(table, "l2_error"),
      observed_order: orders,
    },
  });
  svg.axes("dx", "l2 error", x, y);
  svg.polyline(dx.map(x), err.map(y), "#2a7ab9", "l2_error");
  dx.forEach((v, i) => {
    svg.raw(
      `<circle cx="${x(v)}" cy="${y(err[i]!)}" r="3.5" fill="#2a7ab9"/>`,
    );
    if (orders[i] !== "") {
      svg.raw(
        `<text x="${x(v) + 8}" y="${y(err[i]!) - 8}" font-size="11">` +
          `order ${Number(Number(orders[i]).toPrecision(3))}</text>`,
      );
    }
  });
  return svg.toString();
}

function renderStabilityRegion(table: CsvTable): string {
  const alphas = column(table, "alpha");
  if (!alphas.every((a) => a === alphas[0])) {
    throw new CsvSchemaError("stability-region file mixes several alpha values");
  }
  const betasRaw = column(table, "beta");
  const xis = numericColumn(table, "xi");
  const betas = numericColumn(table, "beta");
  const gaps = numericColumn(table, "gap");

  // Consecutive rows sharing a beta cell form one sweep line.
  interface Group {
    beta: number;
    rows: number[];
  }
  const groups: Group[] = [];
  betasRaw.forEach((cell, i) => {
    const last = groups[groups.length - 1];
    if (last !== undefined && betasRaw[i - 1] === cell) {
      last.rows.push(i);
    } else {
      groups.push({ beta: betas[i]!, rows: [i] });
    }
  });

  const x = linearScale(xis, X0, X1);
  const y = linearScale(
    groups.map((g) => g.beta),
    Y0,
    Y1,
  );
  const cellH = (Y0 - Y1) / Math.max(groups.length, 1);
  const maxRow = Math.max(...groups.map((g) => g.rows.length));
  const cellW = (X1 - X0) / Math.max(maxRow, 1);

  const svg = new SvgBuilder(`stability region, alpha = ${alphas[0]}`);
  svg.metadata({
    kind: "stability-region",
    series: {
      alpha: alphas,
      beta: betasRaw,
      xi: column(table, "xi"),
      gap: column(table, "gap"),
    },
  });
  svg.axes("xi", "beta", x, y);
  for (const g of groups) {
    const cy = y(g.beta);
    for (const i of g.rows) {
      const color = gaps[i]! > 0 ? "#c0392b" : "#2a7ab9";
      svg.raw(
        `<rect x="${x(xis[i]!) - cellW / 2}" y="${cy - cellH / 2}" ` +
          `width="${cellW}" height="${cellH}" fill="${color}"/>`,
      );
    }
  }
  // Boundary: between the largest beta whose worst gap stays <= 0 and
  // the smallest beta that goes unstable (recovered from the data, so it
  // approximates the critical Courant number of the sampled sweep).
  let stableMax = -Infinity;
  let unstableMin = Infinity;
  for (const g of groups) {
    const worst = Math.max(...g.rows.map((i) => gaps[i]!));
    if (worst > 0) unstableMin = Math.min(unstableMin, g.beta);
    else stableMax = Math.max(stableMax, g.beta);
  }
  if (stableMax > -Infinity && unstableMin < Infinity && stableMax < unstableMin) {
    const boundary = 0.5 * (stableMax + unstableMin);
    const py = y(boundary);
    svg.raw(
      `<line x1="${X0}" y1="${py}" x2="${X1}" y2="${py}" stroke="black" ` +
        `stroke-dasharray="6 4" stroke-width="1.5"/>`,
    );
    svg.raw(
      `<text x="${X1 - 8}" y="${py - 6}" text-anchor="end" font-size="12">` +
        `critical beta ~ ${Number(boundary.toPrecision(6))}</text>`,
    );
  }
  return svg.toString();
}

export function renderToString(kind: PlotKind, table: CsvTable): string {
  const schema = SCHEMAS[kind];
  if (schema === undefined) {
    throw new CsvSchemaError(`unknown plot kind ${JSON.stringify(kind)}`);
  }
  requireSchema(table, schema);
  switch (kind) {
    case "norm-history":
      return renderNormHistory(table);
    case "convergence":
      return renderConvergence(table);
    case "stability-region":
      return renderStabilityRegion(table);
  }
}

/** Read, validate and render; the output file is written only when the
 * whole figure assembled successfully. */
export function render(job: PlotJob): void {
  const table = readCsvFile(job.inputCsv);
  const svg = renderToString(job.kind, table);
  writeFileSync(job.outputPath, svg);
}
