/** Minimal dependency-free SVG document builder with a linear data->pixel
 * scale and shared axis/legend helpers. */

export interface Bounds {
  lo: number;
  hi: number;
}

export function boundsOf(values: number[], pad = 0.05): Bounds {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) {
    throw new Error("cannot compute bounds of empty or non-finite data");
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const span = hi - lo;
  return { lo: lo - pad * span, hi: hi + pad * span };
}

export class Scale {
  constructor(
    readonly x: Bounds,
    readonly y: Bounds,
    readonly width: number,
    readonly height: number,
    readonly margin: number
  ) {}

  px(v: number): number {
    const t = (v - this.x.lo) / (this.x.hi - this.x.lo);
    return this.margin + t * (this.width - 2 * this.margin);
  }

  // SVG y grows downward
  py(v: number): number {
    const t = (v - this.y.lo) / (this.y.hi - this.y.lo);
    return this.height - this.margin - t * (this.height - 2 * this.margin);
  }
}

const fmt = (v: number) => Number(v.toFixed(3)).toString();

export class Svg {
  private parts: string[] = [];

  constructor(readonly width = 480, readonly height = 360) {}

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"/>`
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string,
       width = 1): void {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${width}"/>`
    );
  }

  polyline(points: Array<[number, number]>, stroke: string, width = 1.5): void {
    const pts = points.map(([a, b]) => `${fmt(a)},${fmt(b)}`).join(" ");
    this.parts.push(
      `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`
    );
  }

  circle(x: number, y: number, r: number, fill: string): void {
    this.parts.push(
      `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${fmt(r)}" fill="${fill}"/>`
    );
  }

  text(x: number, y: number, s: string, size = 12, anchor = "start"): void {
    const safe = s.replace(/&/g, "&amp;").replace(/</g, "&lt;");
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" font-family="sans-serif" text-anchor="${anchor}">${safe}</text>`
    );
  }

  /** Fixed-length arrow from (x,y) in pixel direction (dx,dy), unit data
   * direction scaled to `len` pixels with a small head. */
  arrow(x: number, y: number, dx: number, dy: number, len: number,
        stroke: string): void {
    const norm = Math.hypot(dx, dy);
    if (norm === 0) return;
    const ux = (dx / norm) * len;
    const uy = (dy / norm) * len;
    const tx = x + ux;
    const ty = y + uy;
    this.line(x, y, tx, ty, stroke, 1);
    const hx = -ux * 0.3;
    const hy = -uy * 0.3;
    this.line(tx, ty, tx + hx - hy * 0.6, ty + hy + hx * 0.6, stroke, 1);
    this.line(tx, ty, tx + hx + hy * 0.6, ty + hy - hx * 0.6, stroke, 1);
  }

  axes(scale: Scale, xLabel: string, yLabel: string, title: string): void {
    const m = scale.margin;
    const w = scale.width;
    const h = scale.height;
    this.line(m, h - m, w - m, h - m, "#333");
    this.line(m, m, m, h - m, "#333");
    this.text(w / 2, h - 6, xLabel, 12, "middle");
    this.parts.push(
      `<text x="12" y="${fmt(h / 2)}" font-size="12" font-family="sans-serif" text-anchor="middle" transform="rotate(-90 12 ${fmt(h / 2)})">${yLabel}</text>`
    );
    this.text(w / 2, 16, title, 13, "middle");
    for (const [lo, hi, at] of [
      [scale.x.lo, scale.x.hi, "x"],
      [scale.y.lo, scale.y.hi, "y"],
    ] as const) {
      if (at === "x") {
        this.text(m, h - m + 14, fmt(lo), 10, "middle");
        this.text(w - m, h - m + 14, fmt(hi), 10, "middle");
      } else {
        this.text(m - 4, h - m, fmt(lo), 10, "end");
        this.text(m - 4, m + 4, fmt(hi), 10, "end");
      }
    }
  }

  toString(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">` +
      `<rect x="0" y="0" width="${this.width}" height="${this.height}" fill="white"/>` +
      this.parts.join("") +
      `</svg>`
    );
  }
}

/** Blue-to-red diverging color for t in [0, 1]. */
export function heatColor(t: number): string {
  const c = Math.max(0, Math.min(1, t));
  const r = Math.round(40 + 215 * c);
  const g = Math.round(60 + 80 * (1 - Math.abs(2 * c - 1)));
  const b = Math.round(255 - 215 * c);
  return `rgb(${r},${g},${b})`;
}
