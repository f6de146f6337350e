/**
 * Fixed color ramp for plane heatmaps, matching the service's documented
 * ramp (dark violet -> blue -> teal -> green -> yellow). The client only
 * colorizes values served in the grid.
 */

const STOPS: Array<[number, [number, number, number]]> = [
  [0.0, [68, 1, 84]],
  [0.25, [59, 82, 139]],
  [0.5, [33, 145, 140]],
  [0.75, [94, 201, 98]],
  [1.0, [253, 231, 37]],
];

export function rampColor(t: number): string {
  const clamped = Math.min(Math.max(t, 0), 1);
  for (let i = 1; i < STOPS.length; i++) {
    const [t1, c1] = STOPS[i];
    if (clamped <= t1) {
      const [t0, c0] = STOPS[i - 1];
      const f = t1 === t0 ? 0 : (clamped - t0) / (t1 - t0);
      const rgb = c0.map((a, k) => Math.round(a + (c1[k] - a) * f));
      return `rgb(${rgb[0]},${rgb[1]},${rgb[2]})`;
    }
  }
  const last = STOPS[STOPS.length - 1][1];
  return `rgb(${last[0]},${last[1]},${last[2]})`;
}
