import assert from 'node:assert/strict';
import { test } from 'node:test';
import { spawnSync } from 'node:child_process';
import { mkdtempSync, readFileSync, rmSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

const ROOT = join(__dirname, '..', '..');
const CLI = join(ROOT, 'dist', 'cli.js');
const FIXTURES = join(ROOT, 'fixtures');

interface Run {
  status: number | null;
  stdout: string;
  stderr: string;
}

function run(...args: string[]): Run {
  const p = spawnSync(process.execPath, [CLI, ...args], { encoding: 'utf8' });
  return { status: p.status, stdout: p.stdout, stderr: p.stderr };
}

function withTmp(fn: (dir: string) => void): void {
  const dir = mkdtempSync(join(tmpdir(), 'plotkit-'));
  try {
    fn(dir);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

test('renders every kind to svg and png', () => {
  const jobs: [string, string][] = [
    ['dandelion', 'dandelion-sweep.csv'],
    ['cdn', 'cdn.csv'],
    ['skew-growth', 'random-bipartite-skew.csv'],
  ];
  withTmp((dir) => {
    for (const [kind, csv] of jobs) {
      for (const ext of ['svg', 'png']) {
        const out = join(dir, `${kind}.${ext}`);
        const r = run(kind, '-i', join(FIXTURES, csv), '-o', out);
        assert.equal(r.status, 0, `${kind}/${ext}: ${r.stderr}`);
        const head = readFileSync(out).subarray(0, 4);
        if (ext === 'svg') {
          assert.equal(head.toString('utf8'), '<svg');
        } else {
          assert.deepEqual([...head], [0x89, 0x50, 0x4e, 0x47]);
        }
      }
    }
  });
});

test('repeat runs produce identical bytes', () => {
  withTmp((dir) => {
    const args = ['cdn', '-i', join(FIXTURES, 'cdn.csv')];
    for (const ext of ['svg', 'png']) {
      assert.equal(run(...args, '-o', join(dir, `a.${ext}`)).status, 0);
      assert.equal(run(...args, '-o', join(dir, `b.${ext}`)).status, 0);
      assert.ok(readFileSync(join(dir, `a.${ext}`))
                  .equals(readFileSync(join(dir, `b.${ext}`))),
                `${ext} bytes differ between runs`);
    }
  });
});

test('missing column fails and is named on stderr', () => {
  withTmp((dir) => {
    const r = run('dandelion', '-i', join(FIXTURES, 'dandelion-missing-column.csv'),
                  '-o', join(dir, 'x.svg'));
    assert.notEqual(r.status, 0);
    assert.match(r.stderr, /central_min/);
  });
});

test('empty measurement window fails instead of plotting nothing', () => {
  withTmp((dir) => {
    const r = run('cdn', '-i', join(FIXTURES, 'cdn-empty.csv'),
                  '-o', join(dir, 'x.svg'));
    assert.notEqual(r.status, 0);
    assert.match(r.stderr, /empty measurement window/);
  });
});

test('usage errors are reported, not thrown', () => {
  withTmp((dir) => {
    const bad = [
      ['nope', '-i', join(FIXTURES, 'cdn.csv'), '-o', join(dir, 'x.svg')],
      ['cdn', '-i', join(FIXTURES, 'cdn.csv'), '-o', join(dir, 'x.pdf')],
      ['cdn', '-o', join(dir, 'x.svg')],
      ['cdn', '-i', join(FIXTURES, 'cdn.csv')],
      [],
    ];
    for (const args of bad) {
      const r = run(...args);
      assert.notEqual(r.status, 0, args.join(' '));
      assert.match(r.stderr, /^plotkit: /, args.join(' '));
    }
    assert.match(run('nope', '-i', 'x', '-o', 'x.svg').stderr, /dandelion, cdn, skew-growth/);
    assert.match(run('cdn', '-i', 'x', '-o', 'x.pdf').stderr, /must end in \.svg or \.png/);
  });
});

test('--help prints usage and exits cleanly', () => {
  const r = run('--help');
  assert.equal(r.status, 0);
  assert.match(r.stdout, /usage: plotkit <kind>/);
  assert.match(r.stdout, /skew-growth/);
});

test('--title override lands in the svg text', () => {
  withTmp((dir) => {
    const out = join(dir, 't.svg');
    const r = run('cdn', '-i', join(FIXTURES, 'cdn.csv'), '-o', out,
                  '--title', 'Custom headline');
    assert.equal(r.status, 0, r.stderr);
    assert.match(readFileSync(out, 'utf8'), /Custom headline/);
  });
});
