/** SVG rendering of a 2-D state-space projection of a trajectory.
 *
 * Conventions: the path is a blue polyline, the start is a green
 * square, the final state a purple square, every pre-jump sample a red
 * circle, and obstacle boxes are filled gray. Figure limits auto-fit
 * the trajectory extent plus a 10% margin.
 */

import { Trajectory, jumpRowIndices } from "./csv.js";

/** One obstacle: [[xmin, xmax], [ymin, ymax]] in plotted coordinates. */
export type Box = [[number, number], [number, number]];

export interface PlotSpec {
  x: number;
  y: number;
  boxes?: Box[];
  width?: number;
  height?: number;
}

interface Extent {
  xmin: number;
  xmax: number;
  ymin: number;
  ymax: number;
}

function fitExtent(points: [number, number][]): Extent {
  let xmin = Infinity;
  let xmax = -Infinity;
  let ymin = Infinity;
  let ymax = -Infinity;
  for (const [x, y] of points) {
    xmin = Math.min(xmin, x);
    xmax = Math.max(xmax, x);
    ymin = Math.min(ymin, y);
    ymax = Math.max(ymax, y);
  }
  const padX = (xmax - xmin) * 0.1 || 1;
  const padY = (ymax - ymin) * 0.1 || 1;
  return {
    xmin: xmin - padX,
    xmax: xmax + padX,
    ymin: ymin - padY,
    ymax: ymax + padY,
  };
}

function fmt(v: number): string {
  return Number(v.toFixed(3)).toString();
}

export function renderSvg(traj: Trajectory, spec: PlotSpec): string {
  if (spec.x >= traj.stateDim || spec.y >= traj.stateDim || spec.x < 0 || spec.y < 0) {
    throw new RangeError(
      `axis indices (${spec.x}, ${spec.y}) out of range for ${traj.stateDim} states`
    );
  }
  const width = spec.width ?? 640;
  const height = spec.height ?? 480;
  const points: [number, number][] = traj.rows.map((r) => [
    r.state[spec.x],
    r.state[spec.y],
  ]);
  const ext = fitExtent(points);
  const sx = (x: number) => ((x - ext.xmin) / (ext.xmax - ext.xmin)) * width;
  const sy = (y: number) => height - ((y - ext.ymin) / (ext.ymax - ext.ymin)) * height;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}">`
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);

  for (const [[bx0, bx1], [by0, by1]] of spec.boxes ?? []) {
    const x = sx(bx0);
    const y = sy(by1);
    const w = sx(bx1) - sx(bx0);
    const h = sy(by0) - sy(by1);
    parts.push(
      `<rect class="obstacle" x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" ` +
        `height="${fmt(h)}" fill="#b0b0b0"/>`
    );
  }

  const poly = points.map(([x, y]) => `${fmt(sx(x))},${fmt(sy(y))}`).join(" ");
  parts.push(
    `<polyline class="path" points="${poly}" fill="none" stroke="#1f4fd8" stroke-width="1.5"/>`
  );

  for (const i of jumpRowIndices(traj)) {
    const [x, y] = points[i - 1];
    parts.push(
      `<circle class="jump" cx="${fmt(sx(x))}" cy="${fmt(sy(y))}" r="4" fill="red"/>`
    );
  }

  const square = (cls: string, [x, y]: [number, number], color: string) =>
    `<rect class="${cls}" x="${fmt(sx(x) - 5)}" y="${fmt(sy(y) - 5)}" ` +
    `width="10" height="10" fill="${color}"/>`;
  parts.push(square("start", points[0], "green"));
  parts.push(square("goal", points[points.length - 1], "purple"));

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
