"use strict";
/**
 * Resolution-independent drawing primitives shared by the SVG and PNG
 * backends.  Coordinates are in pixels with the origin at the top left.
 */
Object.defineProperty(exports, "__esModule", { value: true });
