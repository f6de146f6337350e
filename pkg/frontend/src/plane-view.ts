/**
 * SVG rendering of a served planning plane: heatmap cells, contour lines,
 * one scatter dot per included city, and a base -> scenario arrow.
 *
 * Everything drawn comes from the plane payload. The only client-side math
 * is plotting: linear pixel mapping of served coordinates, the colour ramp,
 * and contouring of the served grid values. No ds, kriging, or correlation
 * is ever computed here.
 */

import { rampColor } from "./color.js";
import type { PlaneResponse, ScenarioOutcome } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export const PLOT = { width: 640, height: 480, margin: 44 };

export interface PlaneView {
  readonly svg: SVGSVGElement;
  /** Draw (or clear, with null) the base/scenario markers and arrow. */
  setScenario(outcome: ScenarioOutcome | null): void;
  /** Payload values at a pixel position, for the hover readout. */
  cellAt(px: number, py: number): { density: number; ds: number; z: number } | null;
}

interface Scales {
  toPxX(xStd: number): number;
  toPxY(yStd: number): number;
}

function makeScales(plane: PlaneResponse): Scales {
  const x0 = plane.x_axis[0];
  const x1 = plane.x_axis[plane.x_axis.length - 1];
  const y0 = plane.y_axis[0];
  const y1 = plane.y_axis[plane.y_axis.length - 1];
  const innerW = PLOT.width - 2 * PLOT.margin;
  const innerH = PLOT.height - 2 * PLOT.margin;
  return {
    toPxX: (x) => PLOT.margin + ((x - x0) / (x1 - x0)) * innerW,
    toPxY: (y) => PLOT.height - PLOT.margin - ((y - y0) / (y1 - y0)) * innerH,
  };
}

function el<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

/** Marching squares over the served grid; purely a drawing aid. */
function contourSegments(
  grid: number[][],
  level: number,
): Array<[[number, number], [number, number]]> {
  const segs: Array<[[number, number], [number, number]]> = [];
  const ny = grid.length;
  const nx = grid[0].length;
  const lerp = (
    va: number,
    vb: number,
    pa: [number, number],
    pb: [number, number],
  ): [number, number] => {
    const f = vb === va ? 0.5 : (level - va) / (vb - va);
    return [pa[0] + (pb[0] - pa[0]) * f, pa[1] + (pb[1] - pa[1]) * f];
  };
  for (let i = 0; i < ny - 1; i++) {
    for (let j = 0; j < nx - 1; j++) {
      const v00 = grid[i][j];
      const v10 = grid[i][j + 1];
      const v01 = grid[i + 1][j];
      const v11 = grid[i + 1][j + 1];
      let idx = 0;
      if (v00 > level) idx |= 1;
      if (v10 > level) idx |= 2;
      if (v11 > level) idx |= 4;
      if (v01 > level) idx |= 8;
      if (idx === 0 || idx === 15) continue;
      const top = lerp(v00, v10, [j, i], [j + 1, i]);
      const bottom = lerp(v01, v11, [j, i + 1], [j + 1, i + 1]);
      const left = lerp(v00, v01, [j, i], [j, i + 1]);
      const right = lerp(v10, v11, [j + 1, i], [j + 1, i + 1]);
      if (idx === 1 || idx === 14) segs.push([left, top]);
      else if (idx === 2 || idx === 13) segs.push([top, right]);
      else if (idx === 3 || idx === 12) segs.push([left, right]);
      else if (idx === 4 || idx === 11) segs.push([right, bottom]);
      else if (idx === 6 || idx === 9) segs.push([top, bottom]);
      else if (idx === 7 || idx === 8) segs.push([left, bottom]);
      else {
        const center = (v00 + v10 + v01 + v11) / 4;
        if ((center > level) === (idx === 5)) {
          segs.push([left, top], [right, bottom]);
        } else {
          segs.push([left, bottom], [top, right]);
        }
      }
    }
  }
  return segs;
}

export function renderPlane(container: HTMLElement, plane: PlaneResponse): PlaneView {
  const scales = makeScales(plane);
  const svg = el("svg", {
    width: PLOT.width,
    height: PLOT.height,
    viewBox: `0 0 ${PLOT.width} ${PLOT.height}`,
    class: "plane-svg",
  });

  let zMin = Infinity;
  let zMax = -Infinity;
  for (const row of plane.grid) {
    for (const v of row) {
      if (v < zMin) zMin = v;
      if (v > zMax) zMax = v;
    }
  }
  const spread = zMax - zMin;

  const cellW = (PLOT.width - 2 * PLOT.margin) / plane.nx;
  const cellH = (PLOT.height - 2 * PLOT.margin) / plane.ny;
  const cells = el("g", { class: "heatmap-cells" });
  for (let iy = 0; iy < plane.ny; iy++) {
    for (let ix = 0; ix < plane.nx; ix++) {
      const t = spread === 0 ? 0 : (plane.grid[iy][ix] - zMin) / spread;
      cells.appendChild(
        el("rect", {
          x: PLOT.margin + ix * cellW,
          y: PLOT.height - PLOT.margin - (iy + 1) * cellH,
          width: cellW + 0.5,
          height: cellH + 0.5,
          fill: rampColor(t),
        }),
      );
    }
  }
  svg.appendChild(cells);

  if (spread > 0) {
    const contours = el("g", { class: "contours" });
    for (let c = 1; c <= 8; c++) {
      const level = zMin + (spread * c) / 9;
      for (const [[xa, ya], [xb, yb]] of contourSegments(plane.grid, level)) {
        contours.appendChild(
          el("line", {
            x1: PLOT.margin + (xa + 0.5) * cellW,
            y1: PLOT.height - PLOT.margin - (ya + 0.5) * cellH,
            x2: PLOT.margin + (xb + 0.5) * cellW,
            y2: PLOT.height - PLOT.margin - (yb + 0.5) * cellH,
            class: "contour-line",
          }),
        );
      }
    }
    svg.appendChild(contours);
  }

  const axes = el("g", { class: "axes" });
  axes.appendChild(
    el("rect", {
      x: PLOT.margin,
      y: PLOT.margin,
      width: PLOT.width - 2 * PLOT.margin,
      height: PLOT.height - 2 * PLOT.margin,
      class: "plot-frame",
      fill: "none",
    }),
  );
  svg.appendChild(axes);

  const scatter = el("g", { class: "city-scatter" });
  for (const city of plane.cities) {
    const dot = el("circle", {
      cx: scales.toPxX(city.x_std),
      cy: scales.toPxY(city.y_std),
      r: 4,
      class: "city-dot",
      "data-city": city.city_id,
      "data-z": String(city.z),
    });
    const tip = document.createElementNS(SVG_NS, "title");
    tip.textContent =
      `${city.city_id}: density ${city.mean_density}, ds ${city.ds}, ` +
      `${plane.dependent} ${city.z}`;
    dot.appendChild(tip);
    scatter.appendChild(dot);
  }
  svg.appendChild(scatter);

  const scenarioLayer = el("g", { class: "scenario-layer" });
  svg.appendChild(scenarioLayer);

  container.replaceChildren(svg);

  // standardized position of a data-unit point, for plotting only
  const toStdX = (density: number) => (density - plane.x_mean) / plane.x_std;
  const toStdY = (ds: number) => (ds - plane.y_mean) / plane.y_std;

  return {
    svg,
    setScenario(outcome: ScenarioOutcome | null): void {
      scenarioLayer.replaceChildren();
      if (!outcome) {
        return;
      }
      const bx = scales.toPxX(toStdX(outcome.base.mean_density));
      const by = scales.toPxY(toStdY(outcome.base.ds));
      const sx = scales.toPxX(toStdX(outcome.scenario.mean_density));
      const sy = scales.toPxY(toStdY(outcome.scenario.ds));
      scenarioLayer.appendChild(
        el("line", { x1: bx, y1: by, x2: sx, y2: sy, class: "scenario-arrow" }),
      );
      scenarioLayer.appendChild(
        el("circle", { cx: bx, cy: by, r: 6, class: "base-point" }),
      );
      scenarioLayer.appendChild(
        el("circle", { cx: sx, cy: sy, r: 6, class: "scenario-point" }),
      );
    },
    cellAt(px: number, py: number) {
      const ix = Math.floor((px - PLOT.margin) / cellW);
      const iyFromBottom = Math.floor((PLOT.height - PLOT.margin - py) / cellH);
      if (ix < 0 || ix >= plane.nx || iyFromBottom < 0 || iyFromBottom >= plane.ny) {
        return null;
      }
      // axis coordinates are served; mapping back to data units is plotting
      const density = plane.x_axis[ix] * plane.x_std + plane.x_mean;
      const ds = plane.y_axis[iyFromBottom] * plane.y_std + plane.y_mean;
      return { density, ds, z: plane.grid[iyFromBottom][ix] };
    },
  };
}
