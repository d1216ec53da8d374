/**
 * Squarified treemap layout plus the count-to-shade scale.
 *
 * Classic greedy squarify: cells are laid out in rows along the shorter
 * side of the remaining rectangle, and a row is closed as soon as adding
 * the next cell would worsen the row's worst aspect ratio. Input order
 * is preserved in the output; callers pass counts largest-first, which
 * is what keeps aspect ratios near 1.
 */

export interface LayoutRect {
  x: number;
  y: number;
  w: number;
  h: number;
}

function worstAspect(rowAreas: number[], side: number): number {
  const total = rowAreas.reduce((a, b) => a + b, 0);
  if (total <= 0 || side <= 0) return Infinity;
  let worst = 0;
  for (const area of rowAreas) {
    if (area <= 0) continue;
    const ratio = Math.max(
      (side * side * area) / (total * total),
      (total * total) / (side * side * area),
    );
    if (ratio > worst) worst = ratio;
  }
  return worst || Infinity;
}

export function squarify(values: number[], width: number, height: number): LayoutRect[] {
  const rects: LayoutRect[] = new Array(values.length);
  const totalValue = values.reduce((a, b) => a + (b > 0 ? b : 0), 0);
  if (!values.length) return [];
  if (totalValue <= 0 || width <= 0 || height <= 0) {
    return values.map(() => ({ x: 0, y: 0, w: 0, h: 0 }));
  }
  const scale = (width * height) / totalValue;
  const areas = values.map((v) => (v > 0 ? v * scale : 0));

  let x = 0;
  let y = 0;
  let w = width;
  let h = height;
  let row: number[] = [];
  let rowStart = 0; // index of the first cell in the open row

  const flushRow = (end: number) => {
    const rowTotal = row.reduce((a, b) => a + b, 0);
    const side = Math.min(w, h);
    const thickness = side > 0 ? rowTotal / side : 0;
    let offset = 0;
    for (let i = 0; i < row.length; i++) {
      const len = thickness > 0 ? (row[i] as number) / thickness : 0;
      rects[rowStart + i] =
        w <= h
          ? { x: x + offset, y, w: len, h: thickness }
          : { x, y: y + offset, w: thickness, h: len };
      offset += len;
    }
    if (w <= h) {
      y += thickness;
      h -= thickness;
    } else {
      x += thickness;
      w -= thickness;
    }
    row = [];
    rowStart = end;
  };

  for (let i = 0; i < areas.length; i++) {
    const area = areas[i] as number;
    const side = Math.min(w, h);
    if (row.length && worstAspect([...row, area], side) > worstAspect(row, side)) {
      flushRow(i);
    }
    row.push(area);
  }
  if (row.length) flushRow(areas.length);
  return rects;
}

// ---- shading ---------------------------------------------------------

const LIGHT = 88; // percent lightness for a count of zero-ish
const DARK = 30; // percent lightness for the largest count

/** Linear lightness ramp; higher counts map to lower (darker) values. */
export function lightnessFor(count: number, maxCount: number): number {
  if (maxCount <= 0) return LIGHT;
  const t = Math.min(Math.max(count / maxCount, 0), 1);
  return LIGHT - t * (LIGHT - DARK);
}

export function shadeFor(count: number, maxCount: number): string {
  return `hsl(140, 45%, ${lightnessFor(count, maxCount).toFixed(1)}%)`;
}

/** Segment colors: a fixed wheel indexed by the server's color_index. */
export function segmentColor(colorIndex: number, paletteSize = 20): string {
  const hue = Math.round((360 / paletteSize) * (colorIndex % paletteSize));
  return `hsl(${hue}, 65%, 55%)`;
}
