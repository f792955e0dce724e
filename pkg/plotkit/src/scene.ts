/**
 * Resolution-independent drawing primitives shared by the SVG and PNG
 * backends.  Coordinates are in pixels with the origin at the top left.
 */

export interface Stroke {
  color: string;
  width: number;
  /** Dash pattern as [on, off] lengths; omit for a solid line. */
  dash?: [number, number];
}

export interface Polyline {
  kind: 'polyline';
  points: [number, number][];
  stroke: Stroke;
}

export interface Circle {
  kind: 'circle';
  x: number;
  y: number;
  r: number;
  fill: string;
}

export interface Rect {
  kind: 'rect';
  x: number;
  y: number;
  w: number;
  h: number;
  fill: string;
}

export type Anchor = 'start' | 'middle' | 'end';

export interface TextItem {
  kind: 'text';
  x: number;
  y: number;
  text: string;
  size: number;
  anchor: Anchor;
  color: string;
  bold?: boolean;
}

export type Prim = Polyline | Circle | Rect | TextItem;

export interface Figure {
  width: number;
  height: number;
  background: string;
  prims: Prim[];
}
