import type { MapExtractView, MapFeatureView } from "./types";

// Street-map rendering straight from the extract polylines; no tile
// service involved, so the same extract always paints the same picture.

const STYLE: Record<string, { stroke: string; fill: string | null; width: number }> = {
  road: { stroke: "#b8a47e", fill: null, width: 2 },
  water: { stroke: "#4d7ea8", fill: "#9dc3dd", width: 1 },
  building: { stroke: "#8a7f72", fill: "#cfc6ba", width: 1 },
};
const FALLBACK_STYLE = { stroke: "#999999", fill: null, width: 1 };
const GRID_STEP = 24;

export function drawExtract(
  canvas: HTMLCanvasElement,
  extract: MapExtractView | null,
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.fillStyle = "#f2efe9";
  ctx.fillRect(0, 0, canvas.width, canvas.height);

  if (!extract || extract.features.length === 0) {
    drawPlaceholderGrid(ctx, canvas.width, canvas.height);
    return;
  }

  const box = extract.bounding_box;
  const toX = (lon: number) =>
    ((lon - box.min_lon) / (box.max_lon - box.min_lon)) * canvas.width;
  // canvas y grows downward, latitude grows upward
  const toY = (lat: number) =>
    canvas.height - ((lat - box.min_lat) / (box.max_lat - box.min_lat)) * canvas.height;

  for (const feature of extract.features) {
    drawFeature(ctx, feature, toX, toY);
  }
}

function drawFeature(
  ctx: CanvasRenderingContext2D,
  feature: MapFeatureView,
  toX: (lon: number) => number,
  toY: (lat: number) => number,
): void {
  if (feature.points.length < 2) return;
  const style = STYLE[feature.kind] ?? FALLBACK_STYLE;
  ctx.beginPath();
  ctx.moveTo(toX(feature.points[0].lon), toY(feature.points[0].lat));
  for (const point of feature.points.slice(1)) {
    ctx.lineTo(toX(point.lon), toY(point.lat));
  }
  if (style.fill) {
    ctx.closePath();
    ctx.fillStyle = style.fill;
    ctx.fill();
  }
  ctx.strokeStyle = style.stroke;
  ctx.lineWidth = style.width;
  ctx.stroke();
}

/** Featureless places still get a drawing: a plain reference grid. */
function drawPlaceholderGrid(
  ctx: CanvasRenderingContext2D,
  width: number,
  height: number,
): void {
  ctx.strokeStyle = "#ddd6c8";
  ctx.lineWidth = 1;
  for (let x = GRID_STEP; x < width; x += GRID_STEP) {
    ctx.beginPath();
    ctx.moveTo(x, 0);
    ctx.lineTo(x, height);
    ctx.stroke();
  }
  for (let y = GRID_STEP; y < height; y += GRID_STEP) {
    ctx.beginPath();
    ctx.moveTo(0, y);
    ctx.lineTo(width, y);
    ctx.stroke();
  }
}
