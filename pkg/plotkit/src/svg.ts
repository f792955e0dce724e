import { Figure, Prim } from './scene';

/** Two-decimal coordinates keep the output stable across platforms. */
function fmt(v: number): string {
  const r = Math.round(v * 100) / 100;
  return Object.is(r, -0) ? '0' : String(r);
}

function esc(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}

const FONT = 'Helvetica, Arial, sans-serif';

function prim(p: Prim): string {
  switch (p.kind) {
    case 'polyline': {
      const pts = p.points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(' ');
      const dash = p.stroke.dash ? ` stroke-dasharray="${p.stroke.dash.join(' ')}"` : '';
      return `<polyline fill="none" stroke="${p.stroke.color}" `
        + `stroke-width="${fmt(p.stroke.width)}"${dash} `
        + `stroke-linejoin="round" stroke-linecap="round" points="${pts}"/>`;
    }
    case 'circle':
      return `<circle cx="${fmt(p.x)}" cy="${fmt(p.y)}" r="${fmt(p.r)}" fill="${p.fill}"/>`;
    case 'rect':
      return `<rect x="${fmt(p.x)}" y="${fmt(p.y)}" width="${fmt(p.w)}" `
        + `height="${fmt(p.h)}" fill="${p.fill}"/>`;
    case 'text': {
      const weight = p.bold ? ' font-weight="bold"' : '';
      return `<text x="${fmt(p.x)}" y="${fmt(p.y)}" font-family="${FONT}" `
        + `font-size="${fmt(p.size)}" text-anchor="${p.anchor}" fill="${p.color}"${weight}>`
        + `${esc(p.text)}</text>`;
    }
  }
}

export function figureToSvg(fig: Figure): string {
  const lines = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${fig.width}" `
      + `height="${fig.height}" viewBox="0 0 ${fig.width} ${fig.height}">`,
    `<rect x="0" y="0" width="${fig.width}" height="${fig.height}" fill="${fig.background}"/>`,
    ...fig.prims.map(prim),
    '</svg>',
  ];
  return lines.join('\n') + '\n';
}
